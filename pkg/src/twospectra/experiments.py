"""Random chain instances and the forward/inverse roundtrip used by the benchmarks."""

from __future__ import annotations

from dataclasses import dataclass, field

import gmpy2
import numpy as np

from .errors import SpectralError
from .interlace import (DISJOINT_GT, DISJOINT_LT, SHARED, TwoSpectraProblem, candidates,
                        classify, gap_interval)
from .inverse import solve_at_truth, weights_at_truth
from .mass_spring import MassSpringSystem, to_jacobi
from .perturbation import PerturbationParams, apply_perturbation, shift_sum_residual
from .spectral_core import eigendecompose


@dataclass(frozen=True)
class ChainConfig:
    """Distribution of random chains and perturbations."""

    count: int = 200
    n_range: tuple[int, int] = (2, 20)
    mass_range: tuple[float, float] = (0.1, 10.0)
    spring_range: tuple[float, float] = (0.1, 10.0)
    theta_range: tuple[float, float] = (0.25, 4.0)
    h_range: tuple[float, float] = (-5.0, 5.0)
    # theta this close to 1 is redrawn
    theta_exclusion: float = 1e-3
    seed: int = 0


@dataclass(frozen=True)
class Instance:
    masses: tuple[float, ...]
    springs: tuple[float, ...]
    theta: float
    h: float

    @property
    def n(self):
        return len(self.masses)

    def build(self):
        """(system, J, params) in the scalar type of the active context (mpfr if > 53 bits)."""
        cv = _converter()
        system = MassSpringSystem(masses=[cv(x) for x in self.masses],
                                  springs=[cv(x) for x in self.springs])
        return system, to_jacobi(system), PerturbationParams(theta=cv(self.theta), h=cv(self.h))


def _converter():
    if gmpy2.get_context().precision > 53:
        return gmpy2.mpfr
    return float


def sample_instances(cfg: ChainConfig = ChainConfig()) -> list[Instance]:
    rng = np.random.default_rng(cfg.seed)
    out = []
    for _ in range(cfg.count):
        n = int(rng.integers(cfg.n_range[0], cfg.n_range[1] + 1))
        masses = rng.uniform(*cfg.mass_range, n)
        springs = rng.uniform(*cfg.spring_range, n)
        theta = 1.0
        while abs(theta - 1) < cfg.theta_exclusion:
            theta = float(rng.uniform(*cfg.theta_range))
        h = float(rng.uniform(*cfg.h_range))
        out.append(Instance(tuple(masses.tolist()), tuple(springs.tolist()), theta, h))
    return out


def true_classification(lam, mu, params: PerturbationParams):
    """Regime and k0 read off from the known gamma rather than from the interlacing pattern."""
    gamma = params.require_gamma()
    scale = max(1, abs(gamma))
    tol = 1e-9 * scale if not isinstance(gamma, type(gmpy2.mpfr(0))) else \
        gmpy2.mpfr(2) ** (20 - gmpy2.get_context().precision) * scale
    hits = [i for i, x in enumerate(lam) if abs(x - gamma) <= tol]
    if hits:
        return SHARED, hits[0]
    if params.theta > 1:
        return DISJOINT_GT, int(sum(1 for x in lam if x < gamma))
    return DISJOINT_LT, int(sum(1 for x in mu if x < gamma))


def _rel(got, want):
    got, want = np.atleast_1d(got), np.atleast_1d(want)
    return max(abs(float((g - w) / w)) for g, w in zip(got, want))


@dataclass
class RoundtripResult:
    instance: Instance
    truth: tuple[str, int] | None = None
    problem: TwoSpectraProblem | None = None
    unhinted: list = field(default_factory=list)
    recovery_error: float = float("inf")
    weight_error: float = float("inf")
    trace_residual: float = float("inf")
    gamma_in_gap: bool = False
    error: str | None = None

    @property
    def ambiguous(self):
        return len(self.unhinted) > 1

    @property
    def classified(self):
        """Hinted classification agrees with the truth."""
        return self.problem is not None and (self.problem.regime, self.problem.k0) == self.truth

    @property
    def classified_unhinted(self):
        """The spectra alone single out the true classification."""
        return len(self.unhinted) == 1 and self.unhinted[0][:2] == self.truth

    @property
    def truth_among_candidates(self):
        return any(c[:2] == self.truth for c in self.unhinted)


def roundtrip(inst: Instance) -> RoundtripResult:
    """forward -> classify -> solve at the true parameter, at the active gmpy2 precision."""
    res = RoundtripResult(instance=inst)
    try:
        _, J, params = inst.build()
        sd = eigendecompose(J)
        lam = sd.eigenvalues
        mu = eigendecompose(apply_perturbation(J, params)).eigenvalues
        res.trace_residual = float(shift_sum_residual(J, params))
        res.truth = true_classification(lam, mu, params)
        try:
            res.unhinted = candidates(lam, mu)
        except SpectralError:
            res.unhinted = []
        p = classify(lam, mu, theta_gt_1=bool(params.theta > 1))
        res.problem = p
        if p.disjoint:
            lo, hi = gap_interval(p)
            res.gamma_in_gap = bool(lo < params.gamma < hi)
        else:
            tol = 1e-9 * max(1, abs(float(params.gamma)))
            res.gamma_in_gap = abs(float(p.shared_value - params.gamma)) <= tol
        sol = solve_at_truth(p, params)
        res.recovery_error = max(_rel(sol.matrix.q, J.q), _rel(sol.matrix.b, J.b),
                                 _rel(sol.params.theta, params.theta), _rel(sol.params.h, params.h))
        res.weight_error = _rel(weights_at_truth(p, params), sd.weights)
    except SpectralError as exc:
        res.error = f"{type(exc).__name__}: {exc}"
    return res


def run_roundtrips(cfg: ChainConfig = ChainConfig(), bits: int = 512) -> list[RoundtripResult]:
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        return [roundtrip(inst) for inst in sample_instances(cfg)]
