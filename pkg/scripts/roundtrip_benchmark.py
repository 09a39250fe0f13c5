"""Forward -> classify -> reconstruct on random chains at several precisions.

    python3 scripts/roundtrip_benchmark.py --count 200 --bits 53 512
"""

import argparse
import time
from collections import Counter

from twospectra.experiments import ChainConfig, run_roundtrips


def summarize(results, bits, seconds):
    n = len(results)
    ok = [r for r in results if not r.error]
    kinds = Counter(r.error.split(":")[0] for r in results if r.error)
    print(f"--- {bits} bits, {n} chains, {seconds:.1f} s")
    print(f"  reconstruction errors   {n - len(ok)}  {dict(kinds)}")
    if ok:
        print(f"  worst recovery (rel)    {max(r.recovery_error for r in ok):.2e}")
        print(f"  worst weight (rel)      {max(r.weight_error for r in ok):.2e}")
        print(f"  worst trace residual    {max(r.trace_residual for r in ok):.2e}")
    print(f"  hinted classification   {sum(r.classified for r in results)}/{n}")
    print(f"  spectra-only classified {sum(r.classified_unhinted for r in results)}/{n}")
    print(f"  fit both orientations   {sum(r.ambiguous for r in results)}/{n}")
    print(f"  truth among candidates  {sum(r.truth_among_candidates for r in results)}/{n}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-n", type=int, default=20)
    ap.add_argument("--bits", type=int, nargs="+", default=[53, 512])
    args = ap.parse_args()
    cfg = ChainConfig(count=args.count, seed=args.seed, n_range=(2, args.max_n))
    for bits in args.bits:
        start = time.perf_counter()
        results = run_roundtrips(cfg, bits=bits)
        summarize(results, bits, time.perf_counter() - start)


if __name__ == "__main__":
    main()
