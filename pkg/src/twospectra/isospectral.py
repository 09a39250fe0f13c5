"""The one-parameter family of chains sharing two given spectra."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._numeric import kernel
from ._products import check_not_pole
from .errors import NoSolution, SpectralError, UnboundedGap, WrongRegime
from .interlace import TwoSpectraProblem, gap_interval
from .inverse import (InverseSolution, _shared_arrays, quotient_at, shared_quotient,
                      solve_disjoint, solve_shared_by_theta)

COLLAPSE_RTOL = 1e-8
BISECTION_STEPS = 80


def quotient_from_spectra(p: TwoSpectraProblem, z):
    """prod (z - mu_k)/(z - lambda_k); the common factor is dropped for shared gamma."""
    if p.disjoint:
        check_not_pole(z, p.lambdas)
        return quotient_at(p.lambdas, p.mus, z)
    lam, mu = _shared_arrays(p)
    keep = np.arange(p.n) != p.k0
    check_not_pole(z, lam[keep])
    return quotient_at(lam, mu, z, drop=p.k0)


def _log_derivative(p, s):
    """d/ds log|quotient| = sum 1/(s - mu_k) - 1/(s - lambda_k)."""
    return np.sum(1 / (s - p.mus)) - np.sum(1 / (s - p.lambdas))


def _steps(k):
    if not k.mp:
        return BISECTION_STEPS
    import gmpy2
    return max(BISECTION_STEPS, gmpy2.get_context().precision + 20)


def _bisect(f, a, b, k):
    """Root of f on (a, b), with f > 0 near a and f < 0 near b (endpoints never evaluated)."""
    for _ in range(_steps(k)):
        mid = (a + b) / 2
        if mid == a or mid == b:
            break
        val = f(mid)
        if val == 0:
            return mid
        if val > 0:
            a = mid
        else:
            b = mid
    return (a + b) / 2


def _require_bounded(p):
    if not p.disjoint:
        raise WrongRegime("the gap extremum exists only for disjoint spectra")
    lo, hi = gap_interval(p)
    if not (np.isfinite(float(lo)) and np.isfinite(float(hi))):
        raise UnboundedGap("the distinguished gap is a half-line; supply a bracket instead")
    return lo, hi


def gap_extremum(p: TwoSpectraProblem, rtol=1e-12):
    """Unique interior extremum (abscissa, value) of the quotient on the gap.

    A minimum above 1 when theta > 1, a maximum below 1 when theta < 1.
    Golden-section search locates it; the abscissa is then polished by
    bisection on the logarithmic derivative.
    """
    lo, hi = _require_bounded(p)
    k = kernel(p.lambdas)
    sign = 1 if p.theta_gt_1 else -1
    f = lambda s: sign * quotient_from_spectra(p, s)  # noqa: E731
    invphi = (k.sqrt(5) - 1) / 2
    a, b = lo, hi
    width = hi - lo
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > rtol * width:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = (a + b) / 2
    # flatness near the extremum limits golden section to ~sqrt(eps); the
    # log-derivative has a simple zero there and is resolved to full precision
    step = max(rtol * width, k.eps * max(1, abs(x)))
    while True:
        left, right = max(lo + (x - lo) / 2, x - step), min(hi - (hi - x) / 2, x + step)
        if sign * _log_derivative(p, left) < 0 < sign * _log_derivative(p, right):
            break
        if right - left >= (hi - lo) / 2:
            left, right = lo + (x - lo) / 2, hi - (hi - x) / 2
            break
        step *= 4
    x = _bisect(lambda s: -sign * _log_derivative(p, s), left, right, k)
    return x, quotient_from_spectra(p, x)


def _root_on_branch(p, t2, a, b, k, descending):
    """Solve quotient(s) = t2 on (a, b), where the quotient is monotone."""
    g = (lambda s: quotient_from_spectra(p, s) - t2) if descending else \
        (lambda s: t2 - quotient_from_spectra(p, s))
    return _bisect(g, a, b, k)


def _half_line_bracket(p, t2, lo, hi, k):
    """Finite bracket (a, b) for the single root on an unbounded gap."""
    finite = hi if np.isinf(float(lo)) else lo
    direction = -1 if np.isinf(float(lo)) else 1
    step = max(1, abs(finite))
    # quotient tends to 1 at infinity and to +inf (theta > 1) or 0 (theta < 1) at the finite end
    for _ in range(2000):
        far = finite + direction * step
        if (quotient_from_spectra(p, far) - t2) * (1 if p.theta_gt_1 else -1) < 0:
            break
        step *= 2
    else:
        raise NoSolution("could not bracket the root on the half-line gap")
    return (far, finite) if direction < 0 else (finite, far)


def solve_with_known_theta(p: TwoSpectraProblem, theta) -> list[InverseSolution]:
    """All chains with the given spectra and the prescribed mass ratio theta.

    Two solutions in general (gamma and the zero of m inside the gap), one
    when theta^2 equals the gap extremum, and one on a half-line gap.
    """
    if not p.disjoint:
        raise WrongRegime("theta determines the solution uniquely for shared gamma; "
                          "use solve_shared_by_theta")
    k = kernel(p.lambdas)
    theta = k.scalar(theta)
    t2 = theta * theta
    if (t2 > 1) != bool(p.theta_gt_1) or t2 == 1:
        raise NoSolution(f"theta={float(theta)!r} contradicts the orientation of the spectra")
    lo, hi = gap_interval(p)
    if np.isinf(float(lo)) or np.isinf(float(hi)):
        if not p.theta_gt_1 and t2 <= 0:
            raise NoSolution("theta must be positive")
        a, b = _half_line_bracket(p, t2, lo, hi, k)
        # theta > 1: quotient falls away from a finite left end, rises toward a finite right end
        descending = (p.theta_gt_1 and np.isinf(float(hi))) or \
                     (not p.theta_gt_1 and np.isinf(float(lo)))
        root = _root_on_branch(p, t2, a, b, k, descending)
        return [solve_disjoint(p, root)]
    x_star, v = gap_extremum(p)
    if abs(t2 - v) <= COLLAPSE_RTOL * t2:
        return [solve_disjoint(p, x_star)]
    if (p.theta_gt_1 and t2 < v) or (not p.theta_gt_1 and t2 > v):
        raise NoSolution(f"theta^2={float(t2)!r} is beyond the gap extremum {float(v)!r}")
    # theta > 1: quotient descends to the minimum, then ascends; theta < 1 the reverse
    left = _root_on_branch(p, t2, lo, x_star, k, descending=p.theta_gt_1)
    right = _root_on_branch(p, t2, x_star, hi, k, descending=not p.theta_gt_1)
    return [solve_disjoint(p, left), solve_disjoint(p, right)]


@dataclass(frozen=True, eq=False)
class FamilyMember:
    omega: float
    solution: InverseSolution | None
    error: SpectralError | None = None

    @property
    def ok(self):
        return self.solution is not None

    def to_dict(self):
        if self.solution is None:
            return {"omega": float(self.omega), "error": str(self.error)}
        return {"omega": float(self.omega), **self.solution.to_dict()}


def family(p: TwoSpectraProblem, omegas) -> list[FamilyMember]:
    """One reconstruction per omega (gamma for disjoint spectra, theta^2 for shared)."""
    solve = solve_disjoint if p.disjoint else solve_shared_by_theta
    out = []
    for omega in omegas:
        try:
            out.append(FamilyMember(omega=omega, solution=solve(p, omega)))
        except SpectralError as exc:
            out.append(FamilyMember(omega=omega, solution=None, error=exc))
    return out


def admissible_omegas(p: TwoSpectraProblem, count: int):
    """``count`` evenly spread admissible parameters for :func:`family`."""
    k = kernel(p.lambdas)
    fractions = [k.scalar(i) / (count + 1) for i in range(1, count + 1)]
    if p.disjoint:
        lo, hi = gap_interval(p)
        if np.isinf(float(lo)) and np.isinf(float(hi)):
            raise UnboundedGap("gap has no finite endpoint")
        if np.isinf(float(lo)):
            return [hi - max(1, abs(hi)) * 4 * f for f in fractions]
        if np.isinf(float(hi)):
            return [lo + max(1, abs(lo)) * 4 * f for f in fractions]
        return [lo + (hi - lo) * f for f in fractions]
    mg = shared_quotient(p)
    if p.theta_gt_1:
        return [mg * (1 + 4 * f) for f in fractions]
    return [mg * f for f in fractions]
