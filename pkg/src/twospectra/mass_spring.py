"""Mass-spring chains (fixed left wall, free right end) and their Jacobi matrices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._numeric import kernel
from .errors import InconsistentFreeEnd, NonPhysical
from .perturbation import PerturbationParams
from .spectral_core import JacobiMatrix

FREE_END_RTOL = 1e-8


@dataclass(frozen=True, eq=False)
class MassSpringSystem:
    """``springs[0]`` ties the first mass to the wall; ``springs[j]`` joins masses j-1 and j."""

    masses: np.ndarray
    springs: np.ndarray

    def __post_init__(self):
        k = kernel(self.masses, self.springs)
        m = k.array(self.masses)
        s = k.array(self.springs)
        if m.size < 1 or m.size != s.size:
            raise ValueError("need N >= 1 masses and exactly N springs")
        if not k.isfinite(m) or not k.isfinite(s) or np.any(m <= 0) or np.any(s <= 0):
            raise ValueError("masses and spring constants must be finite and strictly positive")
        m.setflags(write=False)
        s.setflags(write=False)
        object.__setattr__(self, "masses", m)
        object.__setattr__(self, "springs", s)

    @property
    def n(self):
        return self.masses.size

    def to_dict(self):
        return {"masses": self.masses.astype(float).tolist(),
                "springs": self.springs.astype(float).tolist()}

    @classmethod
    def from_dict(cls, data):
        return cls(masses=data["masses"], springs=data["springs"])


def to_jacobi(s: MassSpringSystem) -> JacobiMatrix:
    """q_j = -(k_j + k_{j+1})/m_j with k_{N+1} = 0, b_j = k_{j+1}/sqrt(m_j m_{j+1})."""
    k = kernel(s.masses)
    m, sp = s.masses, s.springs
    right = np.concatenate((sp[1:], k.array([0])))
    q = -(sp + right) / m
    b = k.array([sp[j + 1] / k.sqrt(m[j] * m[j + 1]) for j in range(s.n - 1)])
    return JacobiMatrix(q=q, b=b)


def from_jacobi(J: JacobiMatrix, m1, k1) -> MassSpringSystem:
    """Invert :func:`to_jacobi` given the first mass and the wall spring."""
    k = kernel(J.q)
    m = [k.scalar(m1)]
    sp = [k.scalar(k1)]
    if not (m[0] > 0 and sp[0] > 0):
        raise NonPhysical("seed mass and spring must be positive")
    for j in range(J.n - 1):
        k_next = -J.q[j] * m[j] - sp[j]
        if not k_next > 0:
            raise NonPhysical(f"spring {j + 2} would be {float(k_next)!r}")
        m_next = k_next ** 2 / (J.b[j] ** 2 * m[j])
        sp.append(k_next)
        m.append(m_next)
    last = -sp[-1] / m[-1]
    if abs(last - J.q[-1]) > FREE_END_RTOL * max(1, abs(J.q[-1])):
        raise InconsistentFreeEnd(
            f"q_N = {float(J.q[-1])!r} but a free end needs -k_N/m_N = {float(last)!r}")
    return MassSpringSystem(masses=k.array(m), springs=k.array(sp))


def physical_delta(p: PerturbationParams, m1):
    """(change of the first mass, change of the wall spring) realizing ``p``."""
    return m1 * (p.theta ** -2 - 1), -p.h * m1
