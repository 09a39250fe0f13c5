"""Scalar/array kernels shared by float64 and multiprecision code paths.

Arrays holding ``gmpy2.mpfr`` entries are kept as numpy object arrays and all
arithmetic then happens at the precision of the active gmpy2 context (which
is thread-local). Everything else is plain float64.
"""

from __future__ import annotations

import math

import gmpy2
import numpy as np

MPFR = type(gmpy2.mpfr(0))
MPC = type(gmpy2.mpc(0))


class FloatKernel:
    mp = False
    sqrt = staticmethod(math.sqrt)
    hypot = staticmethod(math.hypot)
    copysign = staticmethod(math.copysign)

    @property
    def eps(self):
        return float(np.finfo(float).eps)

    @staticmethod
    def scalar(x):
        return float(x)

    @staticmethod
    def array(values):
        return np.asarray(values, dtype=float).reshape(-1).copy()

    @staticmethod
    def log_abs(a):
        with np.errstate(divide="ignore"):
            return np.log(np.abs(np.asarray(a, dtype=float)))

    @staticmethod
    def exp(a):
        return np.exp(a)

    @staticmethod
    def clog(a):
        return np.log(np.asarray(a, dtype=complex))

    @staticmethod
    def cexp(x):
        return complex(np.exp(x))

    @staticmethod
    def isfinite(a):
        return bool(np.all(np.isfinite(a)))


class MpKernel:
    mp = True
    sqrt = staticmethod(gmpy2.sqrt)
    hypot = staticmethod(gmpy2.hypot)
    copysign = staticmethod(gmpy2.copy_sign)

    @property
    def eps(self):
        return gmpy2.mpfr(2) ** (1 - gmpy2.get_context().precision)

    @staticmethod
    def scalar(x):
        if isinstance(x, (MPFR, MPC)):
            return x
        return gmpy2.mpfr(x)

    @staticmethod
    def array(values):
        return np.array([MpKernel.scalar(v) for v in np.asarray(values, dtype=object).reshape(-1)],
                        dtype=object)

    @staticmethod
    def log_abs(a):
        return np.array([gmpy2.log(abs(x)) for x in a], dtype=object)

    @staticmethod
    def exp(a):
        if np.ndim(a) == 0:
            return gmpy2.exp(a)
        return np.array([gmpy2.exp(x) for x in a], dtype=object)

    @staticmethod
    def clog(a):
        return np.array([gmpy2.log(gmpy2.mpc(x)) for x in a], dtype=object)

    @staticmethod
    def cexp(x):
        return complex(gmpy2.exp(x))

    @staticmethod
    def isfinite(a):
        return all(gmpy2.is_finite(x) for x in a)


FLOAT = FloatKernel()
MP = MpKernel()


def _has_mp(obj):
    if isinstance(obj, (MPFR, MPC)):
        return True
    if isinstance(obj, np.ndarray):
        return obj.dtype == object and obj.size > 0 and isinstance(obj.flat[0], (MPFR, MPC))
    if isinstance(obj, (list, tuple)):
        return any(_has_mp(x) for x in obj)
    return False


def kernel(*objs):
    """MP if any argument carries mpfr values, else FLOAT."""
    return MP if any(_has_mp(o) for o in objs) else FLOAT


def to_float(x):
    """float / float64 array view of a possibly multiprecision value."""
    if isinstance(x, np.ndarray):
        return x.astype(float)
    return float(x)


def sign(a):
    a = np.asarray(a)
    if a.dtype != object:
        return np.sign(a)
    return np.array([int(x > 0) - int(x < 0) for x in a.reshape(-1)], dtype=float).reshape(a.shape)
