"""Census of sufficient-condition verdicts on random incidence structures.

Draws random families of d-element bases over a small id pool (coordinates
are ignored, so most draws are not geometrically realizable) and tallies
which clause the checker reports.

    python scripts/clause_census.py --d 3 --trials 20000
"""
import argparse
import collections
import random
from types import SimpleNamespace

from pseudotelepathy.ksgame import check_sufficient_condition


def random_instance(rng, d):
    pool = rng.randint(d + 2, 3 * d)
    r = rng.randint(3, 8)
    bases = [tuple(rng.sample(range(pool), d)) for _ in range(r)]
    ids = {v: i for i, v in enumerate(sorted({v for b in bases for v in b}))}
    bases = tuple(tuple(ids[v] for v in b) for b in bases)
    if len({frozenset(b) for b in bases}) < r:
        return None
    return SimpleNamespace(bases=bases, n=len(ids), r=r, vectors=[(i,) for i in range(len(ids))])


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--d", type=int, default=3)
    ap.add_argument("--trials", type=int, default=20000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    tally = collections.Counter()
    examples = {}
    for _ in range(args.trials):
        ks = random_instance(rng, args.d)
        if ks is None:
            continue
        rep = check_sufficient_condition(ks)
        key = "colourable" if rep.degenerate else ("satisfied" if rep.satisfied else f"clause {rep.clause}")
        tally[key] += 1
        examples.setdefault(key, ks.bases)
    for key, c in tally.most_common():
        print(f"{key:12s} {c:7d}   e.g. {examples[key]}")


if __name__ == "__main__":
    main()
