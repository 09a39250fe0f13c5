"""Classification of a pair of spectra into the perturbation regimes.

Both sequences are plain sorted arrays indexed from 0. The distinguished gap
``k0`` refers to the open interval (lambdas[k0-1], lambdas[k0]) where a
missing endpoint is read as -inf/+inf, so 0 <= k0 <= N in the disjoint
regimes. In the shared regime ``k0`` is the common index of the coincident
eigenvalue.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._numeric import kernel
from ._products import default_rtol, near
from .errors import Ambiguous, NotInterlaced, WrongRegime

DISJOINT_GT = "disjoint-theta-gt-1"
DISJOINT_LT = "disjoint-theta-lt-1"
SHARED = "shared-gamma"
REGIMES = (DISJOINT_GT, DISJOINT_LT, SHARED)



@dataclass(frozen=True, eq=False)
class TwoSpectraProblem:
    lambdas: np.ndarray
    mus: np.ndarray
    regime: str
    k0: int
    shared_value: float | None = None
    # orientation of the perturbation; None only for the 1x1 shared case
    theta_gt_1: bool | None = None

    def __post_init__(self):
        k = kernel(self.lambdas, self.mus)
        for name in ("lambdas", "mus"):
            arr = k.array(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.regime not in REGIMES:
            raise ValueError(f"unknown regime {self.regime!r}")
        if (self.shared_value is None) != (self.regime != SHARED):
            raise ValueError("shared_value is present iff the regime is shared-gamma")

    @property
    def n(self) -> int:
        return self.lambdas.size

    @property
    def disjoint(self) -> bool:
        return self.regime != SHARED

    def to_dict(self):
        return {
            "lambda": self.lambdas.astype(float).tolist(),
            "mu": self.mus.astype(float).tolist(),
            "regime": self.regime,
            "k0": self.k0,
            "shared_value": None if self.shared_value is None else float(self.shared_value),
        }


def _at(seq, i):
    """seq[i], or -inf/+inf when the index falls off the low/high end."""
    if i < 0:
        return -math.inf
    if i >= len(seq):
        return math.inf
    return seq[i]


def _fits_gt(lam, mu, k0):
    n = len(lam)
    lo, hi = _at(lam, k0 - 1), _at(lam, k0)
    if np.any((mu > lo) & (mu < hi)):
        return False
    for k in range(k0, n):
        if not (lam[k] < mu[k] < _at(lam, k + 1)):
            return False
    for k in range(k0):
        if not (_at(lam, k - 1) < mu[k] < lam[k]):
            return False
    return True


def _fits_lt(lam, mu, k0):
    n = len(lam)
    lo, hi = _at(lam, k0 - 1), _at(lam, k0)
    inside = set(np.flatnonzero((mu > lo) & (mu < hi)).tolist())
    if inside != {k for k in (k0 - 1, k0) if 0 <= k < n}:
        return False
    for k in range(k0, n - 1):
        if not (lam[k] < mu[k + 1] < lam[k + 1]):
            return False
    for k in range(1, k0):
        if not (lam[k - 1] < mu[k - 1] < lam[k]):
            return False
    return True


def _shared_fits(lam, mu, k0, theta_gt_1):
    n = len(lam)
    for k in range(n):
        if k == k0:
            continue
        if theta_gt_1:
            # mu pushed away from gamma on both sides
            ok = (lam[k] < mu[k] < _at(lam, k + 1)) if k > k0 else \
                 (_at(lam, k - 1) < mu[k] < lam[k])
        else:
            # mu pulled toward gamma on both sides
            ok = (mu[k] < lam[k] < _at(mu, k + 1)) if k > k0 else \
                 (_at(mu, k - 1) < lam[k] < mu[k])
        if not ok:
            return False
    return True


def _check_input(lambdas, mus):
    k = kernel(lambdas, mus)
    lam = k.array(lambdas)
    mu = k.array(mus)
    if lam.size != mu.size:
        raise NotInterlaced(f"spectra have different sizes {lam.size} and {mu.size}")
    if lam.size == 0:
        raise NotInterlaced("empty spectra")
    for name, arr in (("lambda", lam), ("mu", mu)):
        if not k.isfinite(arr) or np.any(np.diff(arr) <= 0):
            raise NotInterlaced(f"{name} must be finite and strictly increasing")
    return lam, mu


def candidates(lambdas, mus):
    """Every (regime, k0, shared_value, theta_gt_1) consistent with the pair."""
    lam, mu = _check_input(lambdas, mus)
    n = lam.size
    rtol = default_rtol(kernel(lam))
    pairs = [(i, j) for i in range(n) for j in range(n)
             if near(lam[i], mu[j], rtol)]
    if len(pairs) > 1:
        raise Ambiguous(f"{len(pairs)} coincident eigenvalue pairs; at most one is possible")
    if pairs:
        i, j = pairs[0]
        if i != j:
            return []
        # compare against a copy where the shared entry is exact
        mu_eq = mu.copy()
        mu_eq[i] = lam[i]
        out = []
        for gt in (True, False):
            if _shared_fits(lam, mu_eq, i, gt):
                out.append((SHARED, i, lam[i], gt))
        if len(out) == 2 and n == 1:
            return [(SHARED, 0, lam[0], None)]
        return out
    out = []
    for k0 in range(n + 1):
        if _fits_gt(lam, mu, k0):
            out.append((DISJOINT_GT, k0, None, True))
        if _fits_lt(lam, mu, k0):
            out.append((DISJOINT_LT, k0, None, False))
    return out


def classify(lambdas, mus, theta_gt_1: bool | None = None) -> TwoSpectraProblem:
    """Find the regime and distinguished index of a pair of spectra.

    With finitely many eigenvalues the two completely interlaced patterns
    (every gap holding exactly one eigenvalue of the other sequence) fit both
    orientations, with the gap at opposite ends. Passing ``theta_gt_1``
    (known e.g. from the sign of the mass change) selects one; without it
    such inputs raise :class:`Ambiguous`.
    """
    lam, mu = _check_input(lambdas, mus)
    found = candidates(lam, mu)
    if theta_gt_1 is not None:
        found = [c for c in found if c[3] is None or c[3] == theta_gt_1]
    if not found:
        raise NotInterlaced("the spectra cannot come from a first-site perturbation")
    if len(found) > 1:
        raise Ambiguous(f"{len(found)} classifications fit: "
                        + ", ".join(f"{r} k0={k}" for r, k, _, _ in found), found)
    regime, k0, shared, gt = found[0]
    return TwoSpectraProblem(lambdas=lam, mus=mu, regime=regime, k0=k0,
                             shared_value=shared, theta_gt_1=gt)


def gap_interval(p: TwoSpectraProblem) -> tuple[float, float]:
    """Open interval that contains gamma in the disjoint regimes."""
    if p.regime == DISJOINT_GT:
        seq = p.lambdas
    elif p.regime == DISJOINT_LT:
        seq = p.mus
    else:
        raise WrongRegime("the shared-gamma regime has no distinguished gap")
    return _at(seq, p.k0 - 1), _at(seq, p.k0)
