"""The two-parameter first-site perturbation and the quotient of m-functions."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._numeric import kernel
from ._products import check_not_pole, near
from .errors import ThetaOne
from .spectral_core import JacobiMatrix, eigendecompose, weyl_m


def gamma_of(theta: float, h: float) -> float:
    """The exceptional point theta^2 h / (1 - theta^2); undefined at theta = 1."""
    if theta == 1:
        raise ThetaOne("gamma = theta^2 h / (1 - theta^2) is undefined for theta = 1")
    t2 = theta * theta
    return t2 * h / (1 - t2)


@dataclass(frozen=True)
class PerturbationParams:
    """Scaling ``theta`` of the first mass ratio and shift ``h`` of the first spring.

    ``gamma`` is derived, never supplied, and is None when theta == 1.
    """

    theta: float
    h: float
    gamma: float | None = field(init=False, default=None)

    def __post_init__(self):
        k = kernel(self.theta, self.h)
        theta = k.scalar(self.theta)
        h = k.scalar(self.h)
        if not k.isfinite([theta, h]):
            raise ValueError("theta and h must be finite")
        if theta <= 0:
            raise ValueError(f"theta must be strictly positive, got {theta!r}")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "gamma", None if theta == 1 else gamma_of(theta, h))

    def require_gamma(self) -> float:
        if self.gamma is None:
            raise ThetaOne("gamma = theta^2 h / (1 - theta^2) is undefined for theta = 1")
        return self.gamma

    def to_dict(self):
        return {"theta": float(self.theta), "h": float(self.h)}

    @classmethod
    def from_dict(cls, data):
        # a stored gamma is ignored on purpose
        return cls(theta=data["theta"], h=data["h"])


def apply_perturbation(J: JacobiMatrix, p: PerturbationParams) -> JacobiMatrix:
    """Replace q_1 by theta^2 (q_1 + h) and b_1 by theta b_1."""
    q = J.q.copy()
    b = J.b.copy()
    q[0] = p.theta ** 2 * (q[0] + p.h)
    if b.size:
        b[0] = p.theta * b[0]
    return JacobiMatrix(q=q, b=b)


def m_quotient(J: JacobiMatrix, p: PerturbationParams, z):
    """(theta^2 - 1)(z - gamma) m(z) + theta^2, i.e. m(z) / m_perturbed(z).

    When gamma is an eigenvalue of J the pole of m there is cancelled by the
    factor (z - gamma), so z = gamma itself is allowed and gives
    theta^2 - (theta^2 - 1) w_gamma.
    """
    gamma = p.require_gamma()
    t2 = p.theta ** 2
    s = eigendecompose(J)
    lam, w = s.eigenvalues, s.weights
    removable = [j for j in range(lam.size) if near(lam[j], gamma) and near(z, lam[j])]
    if not removable:
        return (t2 - 1) * (z - gamma) * weyl_m(s, z) + t2
    j = removable[0]
    keep = np.arange(lam.size) != j
    check_not_pole(z, lam[keep])
    rest = np.sum(w[keep] / (lam[keep] - z)) if keep.any() else 0
    val = (t2 - 1) * ((z - gamma) * rest - w[j]) + t2
    return complex(val) if isinstance(z, complex) else val


def trace_shift(J: JacobiMatrix, p: PerturbationParams) -> float:
    """Exact finite-size value of sum(mu) - sum(lambda)."""
    return J.q[0] * (p.theta ** 2 - 1) + p.theta ** 2 * p.h


def shift_sum_residual(J: JacobiMatrix, p: PerturbationParams) -> float:
    lam = eigendecompose(J).eigenvalues
    mu = eigendecompose(apply_perturbation(J, p)).eigenvalues
    return abs((np.sum(mu) - np.sum(lam)) - trace_shift(J, p))
