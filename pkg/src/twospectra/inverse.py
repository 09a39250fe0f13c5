"""Reconstruction of the chain and of (theta, h) from two spectra.

Each solver turns the two spectra plus one free real parameter into the
weights of a spectral measure, rebuilds the Jacobi matrix from that measure
and reads off theta and h:

* disjoint spectra: ``omega`` is gamma itself, any point of the distinguished gap;
* shared gamma, mass parameterization: ``omega`` is theta^2;
* shared gamma, spring parameterization: ``omega`` is h;
* shared gamma, the normalizing constant of the shared eigenvalue.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._numeric import kernel, sign
from ._products import ratio_product, signed_log_ratio
from .errors import (Breakdown, DegenerateProduct, InfeasibleAlpha, NormalizationError,
                     OmegaOutOfGap, OmegaOutOfRange, TooSmall, WrongRegime)
from .interlace import TwoSpectraProblem, gap_interval
from .perturbation import PerturbationParams
from .spectral_core import DiscreteMeasure, JacobiMatrix

SUM_TOL = 1e-8
BREAKDOWN_RTOL = 1e-13
DEGENERATE_TOL = 1e-14


@dataclass(frozen=True, eq=False)
class InverseSolution:
    matrix: JacobiMatrix
    params: PerturbationParams
    weights: np.ndarray
    omega: float | None = None
    # sum(weights) - 1 before renormalization
    weight_sum_deviation: float = 0.0

    def to_dict(self):
        return {
            **self.matrix.to_dict(),
            **self.params.to_dict(),
            "gamma": None if self.params.gamma is None else float(self.params.gamma),
            "weights": np.asarray(self.weights).astype(float).tolist(),
        }


def _shared_arrays(p: TwoSpectraProblem):
    """Copies of both spectra with the common eigenvalue made exactly equal."""
    lam = p.lambdas.copy()
    mu = p.mus.copy()
    mu[p.k0] = lam[p.k0] = p.shared_value
    return lam, mu


def _residues(lam, mu):
    """Sign and log-magnitude of (mu_n - lam_n) prod_{k != n} (lam_n - mu_k)/(lam_n - lam_k)."""
    n = lam.size
    signs = np.empty(n)
    logs = []
    for i in range(n):
        others = np.arange(n) != i
        num = np.concatenate(([mu[i] - lam[i]], lam[i] - mu[others]))
        den = lam[i] - lam[others]
        signs[i], log_i = signed_log_ratio(num, den)
        logs.append(log_i)
    return signs, kernel(lam).array(logs)


def _divide(signs, logs, den):
    """(signs * exp(logs)) / den elementwise, combined in log space."""
    k = kernel(logs, den)
    return signs * sign(den) * k.exp(logs - k.log_abs(den))


def quotient_at(lam, mu, z, drop=None):
    """prod (z - mu_k)/(z - lam_k), optionally skipping index ``drop``."""
    if drop is not None:
        keep = np.arange(len(lam)) != drop
        lam, mu = np.asarray(lam)[keep], np.asarray(mu)[keep]
    return ratio_product(z, mu, lam)


def shared_quotient(p: TwoSpectraProblem) -> float:
    """The quotient at gamma with the common factor removed."""
    _require_shared(p)
    lam, mu = _shared_arrays(p)
    return quotient_at(lam, mu, p.shared_value, drop=p.k0)


def _require_disjoint(p):
    if not p.disjoint:
        raise WrongRegime("this operation needs disjoint spectra")


def _require_shared(p):
    if p.disjoint:
        raise WrongRegime("this operation needs spectra sharing gamma")
    if p.n < 2:
        raise TooSmall("the shared-gamma solvers need at least two eigenvalues")


def _check_in_gap(p, omega):
    lo, hi = gap_interval(p)
    if not (lo < omega < hi):
        raise OmegaOutOfGap(f"omega={omega!r} is not inside the gap ({lo!r}, {hi!r})")


def tau_weights(p: TwoSpectraProblem, omega: float) -> np.ndarray:
    """Spectral weights for disjoint spectra when gamma is taken to be ``omega``."""
    _require_disjoint(p)
    omega = kernel(p.lambdas).scalar(omega)
    _check_in_gap(p, omega)
    lam, mu = p.lambdas, p.mus
    mq = quotient_at(lam, mu, omega)
    if abs(mq - 1.0) <= DEGENERATE_TOL:
        raise DegenerateProduct(f"quotient at omega={omega!r} is 1 to working precision")
    signs, logs = _residues(lam, mu)
    return _divide(signs, logs, (lam - omega) * (mq - 1))


def upsilon_weights(p: TwoSpectraProblem, omega: float) -> np.ndarray:
    """Spectral weights for shared gamma when theta^2 is taken to be ``omega``."""
    _require_shared(p)
    omega = kernel(p.lambdas).scalar(omega)
    mg = shared_quotient(p)
    if omega == 1:
        raise OmegaOutOfRange("omega = 1 is excluded")
    if p.theta_gt_1 and not omega > mg:
        raise OmegaOutOfRange(f"omega={omega!r} must exceed {mg!r}")
    if not p.theta_gt_1 and not omega < mg:
        raise OmegaOutOfRange(f"omega={omega!r} must be below {mg!r}")
    lam, mu = _shared_arrays(p)
    gamma = p.shared_value
    signs, logs = _residues(lam, mu)
    rest = np.arange(p.n) != p.k0
    out = lam.copy()
    out[rest] = _divide(signs[rest], logs[rest], (lam[rest] - gamma) * (omega - 1))
    out[p.k0] = (omega - mg) / (omega - 1)
    return out


def h_bound(p: TwoSpectraProblem) -> float:
    """gamma (prod_{k != k0} (gamma - lam_k)/(gamma - mu_k) - 1), the limit on admissible h."""
    gamma = p.shared_value
    return gamma * (1 / shared_quotient(p) - 1)


def upsilon_tilde_weights(p: TwoSpectraProblem, omega: float) -> np.ndarray:
    """Spectral weights for shared gamma when h is taken to be ``omega``."""
    _require_shared(p)
    omega = kernel(p.lambdas).scalar(omega)
    gamma = p.shared_value
    if gamma == 0:
        raise OmegaOutOfRange("the spring parameterization is vacuous when gamma = 0")
    if omega == 0 or omega == -gamma:
        raise OmegaOutOfRange(f"omega={omega!r} makes the weight formula singular")
    bound = h_bound(p)
    below = (gamma > 0) == bool(p.theta_gt_1)
    if below and not omega < bound:
        raise OmegaOutOfRange(f"omega={omega!r} must be below {bound!r}")
    if not below and not omega > bound:
        raise OmegaOutOfRange(f"omega={omega!r} must exceed {bound!r}")
    # theta'^2 = gamma / (omega + gamma) must be positive as well
    if gamma / (omega + gamma) <= 0:
        raise OmegaOutOfRange(f"omega={omega!r} and gamma={gamma!r} give a negative theta^2")
    mg = shared_quotient(p)
    lam, mu = _shared_arrays(p)
    signs, logs = _residues(lam, mu)
    rest = np.arange(p.n) != p.k0
    out = lam.copy()
    out[rest] = _divide(signs[rest], logs[rest], (gamma - lam[rest]) * omega / (omega + gamma))
    out[p.k0] = (omega + gamma) / omega * mg - gamma / omega
    return out


def reconstruct_jacobi(m: DiscreteMeasure) -> JacobiMatrix:
    """Jacobi matrix whose spectral measure is ``m``.

    Lanczos on diag(atoms) started from sqrt(masses), with two passes of full
    reorthogonalization; equivalent to the discretized Stieltjes procedure.
    """
    k = kernel(m.atoms, m.masses)
    x = m.atoms
    w = m.masses / np.sum(m.masses)
    n = x.size
    scale = max(1, np.max(np.abs(x)))
    basis = []
    q = []
    b = []
    v = k.array([k.sqrt(wi) for wi in w])
    for j in range(n):
        basis.append(v)
        u = x * v
        a = v @ u
        u = u - a * v
        if j > 0:
            u = u - b[-1] * basis[-2]
        for _ in range(2):
            coef = [vi @ u for vi in basis]
            for c, vi in zip(coef, basis):
                u = u - c * vi
            a = a + coef[-1]
        q.append(a)
        if j == n - 1:
            break
        beta = k.sqrt(u @ u)
        if beta < (k.eps * 1e3 if k.mp else BREAKDOWN_RTOL) * scale:
            raise Breakdown(f"recurrence coefficient b_{j + 1}={float(beta)!r} collapsed; "
                            "atoms are numerically confluent")
        b.append(beta)
        v = u / beta
    return JacobiMatrix(q=k.array(q), b=k.array(b))


def _normalized(weights):
    total = np.sum(weights)
    if np.any(weights <= 0):
        raise OmegaOutOfRange("parameter yields non-positive spectral weights")
    if abs(total - 1) > SUM_TOL:
        raise NormalizationError(f"weights sum to {float(total)!r}; expected 1")
    return weights / total, float(total - 1)


def _solution(lambdas, weights, theta, h, omega):
    w, dev = _normalized(weights)
    J = reconstruct_jacobi(DiscreteMeasure(atoms=lambdas, masses=w))
    return InverseSolution(matrix=J, params=PerturbationParams(theta=theta, h=h),
                           weights=w, omega=omega, weight_sum_deviation=dev)


def solve_disjoint(p: TwoSpectraProblem, omega: float) -> InverseSolution:
    """Matrix and (theta, h) for disjoint spectra with gamma = omega."""
    k = kernel(p.lambdas)
    omega = k.scalar(omega)
    w = tau_weights(p, omega)
    t2 = quotient_at(p.lambdas, p.mus, omega)
    if t2 <= 0 or t2 == 1:
        raise OmegaOutOfRange(f"quotient {float(t2)!r} at omega={float(omega)!r} does not give a valid theta")
    theta = k.sqrt(t2)
    h = omega * (1 - t2) / t2
    return _solution(p.lambdas, w, theta, h, omega)


def solve_shared_by_theta(p: TwoSpectraProblem, omega: float) -> InverseSolution:
    """Shared gamma with theta^2 = omega."""
    k = kernel(p.lambdas)
    omega = k.scalar(omega)
    w = upsilon_weights(p, omega)
    if omega <= 0:
        raise OmegaOutOfRange(f"omega={float(omega)!r} is theta^2 and must be positive")
    gamma = p.shared_value
    return _solution(p.lambdas, w, k.sqrt(omega), gamma * (1 / omega - 1), omega)


def solve_shared_by_h(p: TwoSpectraProblem, omega: float) -> InverseSolution:
    """Shared gamma with h = omega."""
    k = kernel(p.lambdas)
    omega = k.scalar(omega)
    w = upsilon_tilde_weights(p, omega)
    gamma = p.shared_value
    return _solution(p.lambdas, w, k.sqrt(gamma / (omega + gamma)), omega, omega)


def theta_squared_from_alpha(p: TwoSpectraProblem, alpha: float) -> float:
    if not alpha > 1:
        raise InfeasibleAlpha(f"normalizing constant must exceed 1, got {alpha!r}")
    alpha = kernel(p.lambdas).scalar(alpha)
    inv = 1 / alpha
    t2 = (shared_quotient(p) - inv) / (1 - inv)
    if t2 <= 0 or t2 == 1 or (t2 > 1) != bool(p.theta_gt_1):
        raise InfeasibleAlpha(f"alpha={float(alpha)!r} gives theta^2={float(t2)!r}, "
                              "inconsistent with the spectra")
    return t2


def solve_shared_by_alpha(p: TwoSpectraProblem, alpha: float) -> InverseSolution:
    """Shared gamma given the normalizing constant of the common eigenvalue."""
    _require_shared(p)
    return solve_shared_by_theta(p, theta_squared_from_alpha(p, alpha))


def weights_at_truth(p: TwoSpectraProblem, params: PerturbationParams) -> np.ndarray:
    """Weight formula evaluated at the true parameter of ``p``'s regime."""
    if p.disjoint:
        return tau_weights(p, params.require_gamma())
    return upsilon_weights(p, params.theta ** 2)


def solve_at_truth(p: TwoSpectraProblem, params: PerturbationParams) -> InverseSolution:
    if p.disjoint:
        return solve_disjoint(p, params.require_gamma())
    return solve_shared_by_theta(p, params.theta ** 2)


SOLVERS = {
    "disjoint": solve_disjoint,
    "shared-theta": solve_shared_by_theta,
    "shared-h": solve_shared_by_h,
    "shared-alpha": solve_shared_by_alpha,
}
