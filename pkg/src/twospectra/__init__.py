"""Jacobi matrices of mass-spring chains and their recovery from two spectra.

Everything works in float64 by default. Passing ``gmpy2.mpfr`` inputs runs
the same code at the precision of the active gmpy2 context.
"""

from . import errors
from .interlace import (DISJOINT_GT, DISJOINT_LT, SHARED, TwoSpectraProblem, candidates,
                        classify, gap_interval)
from .inverse import (SOLVERS, InverseSolution, reconstruct_jacobi, shared_quotient,
                      solve_at_truth, solve_disjoint, solve_shared_by_alpha, solve_shared_by_h,
                      solve_shared_by_theta, tau_weights, upsilon_tilde_weights, upsilon_weights,
                      weights_at_truth)
from .isospectral import (FamilyMember, admissible_omegas, family, gap_extremum,
                          quotient_from_spectra, solve_with_known_theta)
from .mass_spring import MassSpringSystem, from_jacobi, physical_delta, to_jacobi
from .perturbation import (PerturbationParams, apply_perturbation, gamma_of, m_quotient,
                           shift_sum_residual, trace_shift)
from .spectral_core import (DiscreteMeasure, JacobiMatrix, SpectralData, charpoly,
                            eigendecompose, eigenvalues, moments, riccati_residual, truncate,
                            weyl_m)

__all__ = [
    "errors", "DISJOINT_GT", "DISJOINT_LT", "SHARED", "TwoSpectraProblem", "candidates",
    "classify", "gap_interval", "SOLVERS", "InverseSolution", "reconstruct_jacobi",
    "shared_quotient", "solve_at_truth", "solve_disjoint", "solve_shared_by_alpha",
    "solve_shared_by_h", "solve_shared_by_theta", "tau_weights", "upsilon_tilde_weights",
    "upsilon_weights", "weights_at_truth", "FamilyMember", "admissible_omegas", "family",
    "gap_extremum", "quotient_from_spectra", "solve_with_known_theta", "MassSpringSystem",
    "from_jacobi", "physical_delta", "to_jacobi", "PerturbationParams", "apply_perturbation",
    "gamma_of", "m_quotient", "shift_sum_residual", "trace_shift", "DiscreteMeasure",
    "JacobiMatrix", "SpectralData", "charpoly", "eigendecompose", "eigenvalues", "moments",
    "riccati_residual", "truncate", "weyl_m",
]
