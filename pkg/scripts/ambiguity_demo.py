"""Show a pair of spectra realized by chains with theta > 1 and with theta < 1.

A fully interlaced pattern fits both orientations. Both reconstructions are
genuine Jacobi matrices reproducing the two spectra.

    python3 scripts/ambiguity_demo.py --seed 0
"""

import argparse

import gmpy2
import numpy as np

from twospectra import apply_perturbation, candidates, classify, eigenvalues
from twospectra.errors import Ambiguous, SpectralError
from twospectra.experiments import ChainConfig, sample_instances
from twospectra.isospectral import admissible_omegas, family


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--bits", type=int, default=512)
    ap.add_argument("--max-n", type=int, default=6)
    args = ap.parse_args()

    cfg = ChainConfig(count=50, seed=args.seed, n_range=(2, args.max_n))
    with gmpy2.context(gmpy2.get_context(), precision=args.bits):
        for inst in sample_instances(cfg):
            _, J, p = inst.build()
            lam, mu = eigenvalues(J), eigenvalues(apply_perturbation(J, p))
            try:
                classify(lam, mu)
                continue
            except Ambiguous:
                pass
            print(f"true theta {inst.theta:.4f}, h {inst.h:.4f}, N = {inst.n}")
            print(f"lambda {np.round(lam.astype(float), 5).tolist()}")
            print(f"mu     {np.round(mu.astype(float), 5).tolist()}")
            for regime, k0, _, gt in candidates(lam, mu):
                prob = classify(lam, mu, theta_gt_1=gt)
                try:
                    m = family(prob, admissible_omegas(prob, 1))[0]
                except SpectralError as exc:
                    print(f"  {regime} k0={k0}: {exc}")
                    continue
                if not m.ok:
                    print(f"  {regime} k0={k0}: {m.error}")
                    continue
                s = m.solution
                got_l = eigenvalues(s.matrix)
                got_m = eigenvalues(apply_perturbation(s.matrix, s.params))
                err = max(float(np.max(np.abs(got_l - lam))), float(np.max(np.abs(got_m - mu))))
                print(f"  {regime} k0={k0}: theta {float(s.params.theta):.4f}, "
                      f"min b {float(np.min(s.matrix.b)):.3e}, spectra error {err:.1e}")
            return
    print("no ambiguous instance in this sample")


if __name__ == "__main__":
    main()
