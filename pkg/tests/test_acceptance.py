"""End-to-end acceptance checks, one test per criterion, each under its time budget.

Run alone with ``pytest tests/test_acceptance.py``; the terminal summary
prints one PASS/FAIL line per criterion.
"""
import dataclasses
import itertools
import time
from contextlib import contextmanager

import numpy as np
import pytest

from pseudotelepathy import kscolour, ksgame, magicsquare as ms, nlbox, quantumstrat as qs

pytestmark = pytest.mark.acceptance

CTX = (0, 1, -1, 0)


@contextmanager
def budget(seconds):
    t = time.perf_counter()
    yield
    elapsed = time.perf_counter() - t
    assert elapsed < seconds, f"took {elapsed:.2f}s, budget {seconds}s"


def test_criterion_01_ks_impossibility():
    with budget(1.0):
        ks = kscolour.builtin_cabello18()
        assert kscolour.count_valid_colourings(ks, "exhaustive") == 0
        assert kscolour.parity_witness(ks)


def test_criterion_02_contextual_vector():
    with budget(10.0):
        ks = kscolour.builtin_cabello18()
        repair = kscolour.contextual_repair_search(ks)
        assert repair
        assert ks.index_of(CTX) in repair


def test_criterion_03_ks_box_strategy():
    with budget(1.0):
        builtin = ksgame.verify_quad(ksgame.builtin_quad_4d())
        synth = ksgame.verify_quad(ksgame.synthesize_quad(kscolour.builtin_cabello18()))
        for rep in (builtin, synth):
            assert (rep.cases_total, rep.cases_won) == (72, 72)


def permutations_to_test():
    rng = np.random.default_rng(2024)
    fixed = [tuple(range(9)), tuple(range(8, -1, -1))]
    fixed += [tuple((i + s) % 9 for i in range(9)) for s in range(1, 9)]
    return fixed + [tuple(int(v) for v in rng.permutation(9)) for _ in range(100)]


def test_criterion_04_sufficient_condition_synthesis():
    ks = kscolour.builtin_cabello18()
    rep = ksgame.check_sufficient_condition(ks)
    assert (rep.p, rep.k, rep.m) == (8, 1, 1)
    assert [ks.vectors[v] for v in rep.flip] == [CTX]
    for order in permutations_to_test():
        with budget(30.0):
            quad = ksgame.synthesize_quad(ks.permuted(order))
            assert ksgame.verify_quad(quad).all_won, order


def test_criterion_05_magic_impossibility():
    with budget(5.0):
        proof = ms.classical_impossibility(3)
        assert (proof.matrices_checked, proof.matrices_valid) == (512, 0)
        assert proof.strategy_pairs_checked == 4096
        assert proof.best_deterministic_wins < 9
        assert all(ms.classical_impossibility(n).parity_verdict for n in range(3, 100, 2))


def test_criterion_06_magic_box_strategy():
    with budget(10.0):
        for n in range(3, 202, 2):
            rep = ms.magic_verify_nlbox(n)
            assert rep.all_won and rep.cases_total == 2 * n * n, n


def test_criterion_07_quantum_n3():
    with budget(1.0):
        for party, idx in itertools.product(("alice", "bob"), (1, 2, 3)):
            u = qs.strategy_unitary(party, idx)
            assert np.abs(u.conj().T @ u - np.eye(4)).max() <= 1e-12
        for xa, xb in itertools.product((1, 2, 3), repeat=2):
            total = qs._probabilities(qs.strategy_unitary("alice", xa), qs.strategy_unitary("bob", xb)).sum()
            assert abs(total - 1) <= 1e-9
        assert qs.quantum_verify_n3().all_won


def test_criterion_08_quantum_odd():
    with budget(5.0):
        for n in (5, 7, 9, 11):
            for low_a, low_b in itertools.product((1, 2, 3), repeat=2):
                assert qs.quantum_verify_odd(n, low_a, low_b).all_won, (n, low_a, low_b)


def test_criterion_09_box_diagnostics():
    with budget(1.0):
        assert nlbox.chsh_value(nlbox.pr_box()) == 4
        assert max(nlbox.chsh_value(b) for b in nlbox.local_deterministic_boxes()) == 2
        assert nlbox.no_signalling_check(nlbox.pr_box())


def test_criterion_10_negative_controls():
    u2_mutations = [m for m in qs.single_sign_mutations() if m[:2] == ("alice", 2)]
    assert len(u2_mutations) == 16
    for *_, a_ops, b_ops in u2_mutations:
        assert len(qs.quantum_verify_n3(a_ops, b_ops).failures) >= 1
    quad = ksgame.builtin_quad_4d()
    swapped = ksgame.verify_quad(dataclasses.replace(quad, b0=quad.b1, b1=quad.b0))
    assert [9, list(CTX)] in [f["inputs"] for f in swapped.failures]
