"""Sample the isospectral family of one random chain and the fixed-theta pair.

    python3 scripts/family_demo.py --n 6 --theta 1.7 --h 0.3 --seed 4
"""

import argparse

import gmpy2
import numpy as np

from twospectra import (MassSpringSystem, PerturbationParams, apply_perturbation, classify,
                        eigenvalues, family, gap_extremum, gap_interval, solve_with_known_theta,
                        to_jacobi)
from twospectra.isospectral import admissible_omegas


def spectra_error(sol, lam, mu):
    got_l = eigenvalues(sol.matrix)
    got_m = eigenvalues(apply_perturbation(sol.matrix, sol.params))
    return max(float(np.max(np.abs(got_l - lam))), float(np.max(np.abs(got_m - mu))))


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--n", type=int, default=6)
    ap.add_argument("--theta", type=float, default=1.7)
    ap.add_argument("--h", type=float, default=0.3)
    ap.add_argument("--seed", type=int, default=4)
    ap.add_argument("--count", type=int, default=7)
    ap.add_argument("--bits", type=int, default=256)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    with gmpy2.context(gmpy2.get_context(), precision=args.bits):
        mp = gmpy2.mpfr
        system = MassSpringSystem([mp(float(x)) for x in rng.uniform(0.5, 2, args.n)],
                                  [mp(float(x)) for x in rng.uniform(0.5, 2, args.n)])
        J = to_jacobi(system)
        p = PerturbationParams(mp(args.theta), mp(args.h))
        lam, mu = eigenvalues(J), eigenvalues(apply_perturbation(J, p))
        prob = classify(lam, mu, theta_gt_1=args.theta > 1)
        print(f"regime {prob.regime}, k0 {prob.k0}, true gamma {float(p.gamma):+.6f}")
        if prob.disjoint:
            lo, hi = gap_interval(prob)
            print(f"gap ({float(lo):+.6f}, {float(hi):+.6f})")

        print(f"\n{'omega':>12} {'theta':>10} {'h':>10} {'q_1':>10} {'b_1':>10} {'spectra err':>12}")
        for m in family(prob, admissible_omegas(prob, args.count)):
            if not m.ok:
                print(f"{float(m.omega):>12.6f}  {m.error}")
                continue
            s = m.solution
            print(f"{float(m.omega):>12.6f} {float(s.params.theta):>10.5f} {float(s.params.h):>10.5f}"
                  f" {float(s.matrix.q[0]):>10.5f} {float(s.matrix.b[0]) if args.n > 1 else 0:>10.5f}"
                  f" {spectra_error(s, lam, mu):>12.1e}")

        if prob.disjoint and all(np.isfinite([float(x) for x in gap_interval(prob)])):
            x, v = gap_extremum(prob)
            print(f"\ngap extremum at {float(x):+.6f}, value {float(v):.6f}")
            sols = solve_with_known_theta(prob, p.theta)
            print(f"theta = {args.theta} admits {len(sols)} chain(s):")
            for s in sols:
                print(f"  gamma {float(s.params.gamma):+.6f}  h {float(s.params.h):+.6f}  "
                      f"q {np.round(s.matrix.q.astype(float), 4).tolist()}")


if __name__ == "__main__":
    main()
