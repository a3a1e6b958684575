"""Synthesize and verify the single-box KS strategy under basis reorderings.

    python scripts/ks_permutation_sweep.py --stride 97
    python scripts/ks_permutation_sweep.py --set my_set.json --random 500 --seed 1
"""
import argparse
import collections
import itertools
import time

import numpy as np

from pseudotelepathy import kscolour, ksgame


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--set", help="KS-set JSON (default: bundled 18-vector set)")
    ap.add_argument("--stride", type=int, default=1, help="take every k-th permutation in lexicographic order")
    ap.add_argument("--random", type=int, default=0, help="sample this many random orders instead")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    ks = kscolour.load_ks_set(args.set) if args.set else kscolour.builtin_cabello18()
    if args.random:
        rng = np.random.default_rng(args.seed)
        orders = (tuple(int(v) for v in rng.permutation(ks.r)) for _ in range(args.random))
    else:
        orders = itertools.islice(itertools.permutations(range(ks.r)), 0, None, args.stride)

    shapes = collections.Counter()
    failures = []
    worst = 0.0
    t0 = time.perf_counter()
    for count, order in enumerate(orders, 1):
        t = time.perf_counter()
        permuted = ks.permuted(order)
        rep = ksgame.check_sufficient_condition(permuted)
        if not rep.satisfied:
            failures.append((order, rep.clause))
            continue
        quad = ksgame.synthesize_quad(permuted)
        if not ksgame.verify_quad(quad).all_won:
            failures.append((order, "verify"))
        shapes[(rep.p, rep.k, rep.m)] += 1
        worst = max(worst, time.perf_counter() - t)

    print(f"orders tested: {count}  total {time.perf_counter() - t0:.1f}s  slowest {worst * 1000:.1f}ms")
    for (p, k, m), c in sorted(shapes.items()):
        print(f"  p={p} k={k} |M|={m}: {c}")
    print(f"failures: {len(failures)}")
    for order, why in failures[:10]:
        print(f"  {order}: {why}")


if __name__ == "__main__":
    main()
