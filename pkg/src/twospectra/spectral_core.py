"""Finite Jacobi matrices, their spectral data and Weyl m-function."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._numeric import kernel
from ._products import check_not_pole
from .errors import IterationFailure, TooSmall, WeightUnderflow, ZeroM

SWEEPS_PER_EIGENVALUE = 30


def _frozen(values, name):
    k = kernel(values)
    arr = k.array(values)
    if not k.isfinite(arr):
        raise ValueError(f"{name} contains non-finite entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class JacobiMatrix:
    """Symmetric tridiagonal matrix with diagonal ``q`` and positive off-diagonal ``b``."""

    q: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        q = _frozen(self.q, "q")
        b = _frozen(self.b, "b")
        if q.size < 1:
            raise ValueError("a Jacobi matrix needs at least one diagonal entry")
        if b.size != q.size - 1:
            raise ValueError(f"len(b) must be len(q) - 1, got {b.size} and {q.size}")
        if np.any(b <= 0):
            raise ValueError("off-diagonal entries must be strictly positive")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "b", b)

    @property
    def n(self) -> int:
        return self.q.size

    def dense(self) -> np.ndarray:
        return np.diag(self.q) + np.diag(self.b, 1) + np.diag(self.b, -1)

    def to_dict(self):
        return {"q": self.q.astype(float).tolist(), "b": self.b.astype(float).tolist()}

    @classmethod
    def from_dict(cls, data):
        return cls(q=data["q"], b=data["b"])


def _check_measure(points, weights, tol=1e-8):
    if points.size != weights.size or points.size == 0:
        raise ValueError("points and weights must be non-empty and of equal length")
    if np.any(np.diff(points) <= 0):
        raise ValueError("points must be strictly increasing")
    if np.any(weights <= 0):
        raise ValueError("weights must be strictly positive")
    if abs(weights.sum() - 1.0) > tol:
        raise ValueError(f"weights must sum to 1, got {weights.sum()!r}")


@dataclass(frozen=True, eq=False)
class SpectralData:
    """Sorted eigenvalues together with the jumps of the spectral function.

    ``weights[k]`` is the reciprocal of the normalizing constant of
    ``eigenvalues[k]``, i.e. the squared first component of its unit eigenvector.
    """

    eigenvalues: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        lam = _frozen(self.eigenvalues, "eigenvalues")
        w = _frozen(self.weights, "weights")
        _check_measure(lam, w)
        object.__setattr__(self, "eigenvalues", lam)
        object.__setattr__(self, "weights", w)

    @property
    def normalizing_constants(self) -> np.ndarray:
        return 1.0 / self.weights

    def to_dict(self):
        return {"lambda": self.eigenvalues.astype(float).tolist(),
                "weights": self.weights.astype(float).tolist()}

    def to_csv(self) -> str:
        rows = ["lambda,weight"]
        rows += [f"{float(x):.17g},{float(w):.17g}" for x, w in zip(self.eigenvalues, self.weights)]
        return "\n".join(rows) + "\n"

    @classmethod
    def from_dict(cls, data):
        return cls(eigenvalues=data["lambda"], weights=data["weights"])


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    """Probability measure with finitely many atoms; input to reconstruction."""

    atoms: np.ndarray
    masses: np.ndarray

    def __post_init__(self):
        x = _frozen(self.atoms, "atoms")
        w = _frozen(self.masses, "masses")
        _check_measure(x, w)
        object.__setattr__(self, "atoms", x)
        object.__setattr__(self, "masses", w)


def _implicit_ql(d, e, max_iter, k):
    """Implicit-shift QL on a symmetric tridiagonal matrix.

    Only the first row of the accumulated rotation product is tracked, which
    is all the spectral measure needs. Returns (eigenvalues, first_row), unsorted.
    Works on plain lists so the same loop serves float and mpfr scalars.
    """
    n = len(d)
    d = [k.scalar(x) for x in d]
    e = [k.scalar(x) for x in e] + [k.scalar(0)]
    z = [k.scalar(0)] * n
    z[0] = k.scalar(1)
    eps = k.eps
    total = 0
    for l in range(n):
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            total += 1
            if total > max_iter:
                raise IterationFailure(f"QL iteration did not converge within {max_iter} sweeps")
            g = (d[l + 1] - d[l]) / (2 * e[l])
            r = k.hypot(g, 1)
            g = d[m] - d[l] + e[l] / (g + k.copysign(r, g))
            s = c = k.scalar(1)
            p = k.scalar(0)
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = k.hypot(f, g)
                e[i + 1] = r
                if r == 0:
                    d[i + 1] -= p
                    e[m] = k.scalar(0)
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                zi1 = z[i + 1]
                z[i + 1] = s * z[i] + c * zi1
                z[i] = c * z[i] - s * zi1
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = k.scalar(0)
    return d, z


def eigendecompose(J: JacobiMatrix) -> SpectralData:
    """Eigenvalues of ``J`` (ascending) and the weights of its spectral measure."""
    k = kernel(J.q)
    if J.n == 1:
        return SpectralData(eigenvalues=J.q, weights=k.array([1]))
    lam, first = _implicit_ql(J.q, J.b, SWEEPS_PER_EIGENVALUE * J.n, k)
    lam = k.array(lam)
    order = np.argsort(lam, kind="stable")
    w = k.array(first)[order] ** 2
    if np.any(w == 0):
        raise WeightUnderflow("an eigenvector has a first component below the underflow "
                              "threshold; use higher precision")
    # the rotations are orthogonal, so sum(w) == 1 up to rounding
    return SpectralData(eigenvalues=lam[order], weights=w / w.sum())


def eigenvalues(J: JacobiMatrix) -> np.ndarray:
    return eigendecompose(J).eigenvalues


def weyl_m(s: SpectralData, z) -> complex | float:
    """m(z) = sum_k w_k / (lambda_k - z)."""
    check_not_pole(z, s.eigenvalues)
    val = np.sum(s.weights / (s.eigenvalues - z))
    if isinstance(z, complex):
        return complex(val)
    return val


def truncate(J: JacobiMatrix) -> JacobiMatrix:
    """Drop the first row and column."""
    if J.n < 2:
        raise TooSmall("cannot truncate a 1x1 Jacobi matrix")
    return JacobiMatrix(q=J.q[1:], b=J.b[1:])


def charpoly(J: JacobiMatrix, z):
    """Monic characteristic polynomial det(z I - J) by the three-term recurrence."""
    prev, cur = 1, z - J.q[0]
    for j in range(1, J.n):
        prev, cur = cur, (z - J.q[j]) * cur - J.b[j - 1] ** 2 * prev
    return cur


def riccati_residual(J: JacobiMatrix, z, zero_tol=1e-14):
    """b_1^2 m_T(z) - (q_1 - z - 1/m(z)); vanishes for every admissible z."""
    m = weyl_m(eigendecompose(J), z)
    # zeros of m are poles of m_T, so report the zero first
    if abs(m) < zero_tol:
        raise ZeroM(f"m({z!r}) is numerically zero")
    if J.n == 1:
        # J_T is empty: the identity degenerates to 0 = q_1 - z - 1/m(z)
        mt_term = 0.0
    else:
        mt_term = J.b[0] ** 2 * weyl_m(eigendecompose(truncate(J)), z)
    return mt_term - (J.q[0] - z - 1.0 / m)


def moments(s: SpectralData, count=3):
    """Power moments sum_k w_k lambda_k^j for j < count."""
    return np.array([np.sum(s.weights * s.eigenvalues ** j) for j in range(count)])
