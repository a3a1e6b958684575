"""Sign-flip sensitivity of the 3x3 quantum strategy.

Flips the sign of each nonzero entry of each of the six local unitaries in
turn and counts losing (input pair, outcome) cases.
"""
import collections

from pseudotelepathy import quantumstrat as qs


def main():
    per_matrix = collections.defaultdict(list)
    for party, idx, r, c, a_ops, b_ops in qs.single_sign_mutations():
        rep = qs.quantum_verify_n3(a_ops, b_ops)
        per_matrix[(party, idx)].append(len(rep.failures))
    print("matrix     mutations  min-fail  max-fail")
    for (party, idx), counts in sorted(per_matrix.items()):
        name = ("U" if party == "alice" else "V") + str(idx)
        print(f"{name:10s} {len(counts):9d} {min(counts):9d} {max(counts):9d}")
    baseline = qs.quantum_verify_n3()
    print(f"unmutated: {baseline.cases_won}/{baseline.cases_total}")


if __name__ == "__main__":
    main()
