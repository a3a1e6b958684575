"""Verify the box and quantum magic-square strategies over a range of odd sizes.

    python scripts/magic_sweep.py --max-n 201
"""
import argparse
import itertools
import time

from pseudotelepathy import magicsquare as ms, quantumstrat as qs


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-n", type=int, default=101)
    ap.add_argument("--quantum-max-n", type=int, default=21)
    args = ap.parse_args()

    t = time.perf_counter()
    bad = [n for n in range(3, args.max_n + 1, 2) if not ms.magic_verify_nlbox(n).all_won]
    print(f"nlbox: odd n in 3..{args.max_n}, {len(bad)} failing sizes, {time.perf_counter() - t:.2f}s")

    proof = ms.classical_impossibility(3)
    print(f"classical n=3: {proof.matrices_valid}/{proof.matrices_checked} matrices, "
          f"best deterministic {proof.best_deterministic_wins}/{proof.input_pairs}")

    print("quantum:")
    print(f"  n=3 {'all-win' if qs.quantum_verify_n3().all_won else 'FAILURES'}")
    for n in range(5, args.quantum_max_n + 1, 2):
        t = time.perf_counter()
        verdicts = {qs.quantum_verify_odd(n, a, b).all_won for a, b in itertools.product((1, 2, 3), repeat=2)}
        status = "all-win for every low-input unitary" if verdicts == {True} else "FAILURES"
        print(f"  n={n:3d} {status} ({time.perf_counter() - t:.2f}s)")


if __name__ == "__main__":
    main()
