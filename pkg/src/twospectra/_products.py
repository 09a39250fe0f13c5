"""Rational products over eigenvalue lists, evaluated in log-magnitude/sign form."""

import numpy as np

from ._numeric import kernel, sign
from .errors import PoleEvaluation

POLE_RTOL = 1e-9


def default_rtol(k):
    """Coincidence tolerance: the fixed float64 value, or a precision-scaled one."""
    return k.eps * 1e6 if k.mp else POLE_RTOL


def near(a, b, rtol=None):
    """Scale-aware coincidence test |a - b| <= rtol * max(1, |b|)."""
    if rtol is None:
        rtol = default_rtol(kernel(a, b))
    return abs(a - b) <= rtol * max(1, abs(b))


def check_not_pole(z, poles, rtol=None):
    k = kernel(z, poles)
    if rtol is None:
        rtol = default_rtol(k)
    for pole in np.asarray(poles).reshape(-1):
        if abs(z - pole) <= rtol * max(1, abs(pole)):
            raise PoleEvaluation(f"evaluation point {complex(z)!r} hits eigenvalue {float(pole)!r}")


def signed_log_ratio(num, den):
    """Return (sign, log|prod(num)/prod(den)|) for real factor arrays."""
    k = kernel(num, den)
    s = float(np.prod(sign(num)) * np.prod(sign(den)))
    logabs = np.sum(k.log_abs(num)) - np.sum(k.log_abs(den))
    return s, logabs


def ratio_product(z, zeros, poles):
    """prod_k (z - zeros_k) / prod_k (z - poles_k) for real or complex z.

    Real z goes through the log/sign route so long lists neither overflow nor
    underflow; complex z sums principal logs of the factors.
    """
    k = kernel(z, zeros, poles)
    zeros = np.asarray(zeros)
    poles = np.asarray(poles)
    if isinstance(z, complex) or (np.iscomplexobj(z) and np.imag(z) != 0):
        z = complex(z)
        acc = np.sum(k.clog(z - zeros)) - np.sum(k.clog(z - poles))
        return k.cexp(acc)
    s, logabs = signed_log_ratio(z - zeros, z - poles)
    return s * k.exp(logabs)
