import dataclasses
import itertools
import math
from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from pseudotelepathy import core, ksgame
from pseudotelepathy.kscolour import KSSet, builtin_cabello18
from pseudotelepathy.ksgame import KSGameInput
from pseudotelepathy.nlbox import PRBoxBranch

from oracles import choice_mismatches

CTX = (0, 1, -1, 0)


def abstract_set(bases):
    """Incidence-only instance: the condition checker never looks at coordinates."""
    n = 1 + max(v for b in bases for v in b)
    return SimpleNamespace(bases=tuple(map(tuple, bases)), n=n, r=len(bases), vectors=[(i,) for i in range(n)])


def colourable_set():
    return KSSet(4, [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (1, 1, 0, 0), (1, -1, 0, 0)],
                 [[0, 1, 2, 3], [4, 5, 2, 3]])


def test_builtin_table_lookups(quad):
    ks = quad.ks
    assert quad.a0.rows[6] == (0, 0, 0, 1)
    assert quad.b1.values[ks.index_of(CTX)] == 0
    assert quad.b0.values[ks.index_of((1, 0, 0, 1))] == 1


def test_builtin_wiring(quad):
    assert [k for k in range(1, 10) if quad.alice_box_input(k)] == [9]
    assert [v for v in range(18) if quad.bob_box_input(v)] == [quad.ks.index_of(CTX)]


def test_builtin_bob_tables_consistent(quad):
    # each vector appears twice in Bob's printed tables; both entries agree
    for table, values in ((ksgame.B0_TABLE, ksgame.B0_VALUES), (ksgame.B1_TABLE, ksgame.B1_VALUES)):
        seen = {}
        for basis, row in zip(quad.ks.bases, table):
            for v, bit in zip(basis, row):
                assert seen.setdefault(v, bit) == bit
        assert tuple(seen[v] for v in range(18)) == values


def play(quad, k, vector, a, b):
    ks = quad.ks
    vid = ks.index_of(vector)
    basis = ks.bases[k - 1]
    inp = KSGameInput(k, (k, basis.index(vid) + 1))
    x, y = quad.alice_box_input(k), quad.bob_box_input(vid)
    return ksgame.ks_play_round(quad, inp, PRBoxBranch(x, y, a, b))


def test_round_s9_contextual(quad):
    row, bit = play(quad, 9, CTX, 0, 1)
    assert row == (0, 0, 1, 0) and bit == 0
    assert row[3] == bit


def test_round_s1(quad):
    row, bit = play(quad, 1, (0, 0, 0, 1), 0, 0)
    assert row == (1, 0, 0, 0) and bit == 1


def test_round_s9_pair_11(quad):
    row, bit = play(quad, 9, (1, 0, 0, 1), 1, 1)
    assert row == (0, 0, 0, 1) and bit == 0
    assert row[2] == bit


def test_round_with_bob_vector_from_other_basis(quad):
    # Bob's (l, m) may name the vector through a different basis than Alice's
    ks = quad.ks
    inp = KSGameInput(6, (9, 4))
    assert inp.vector(ks) == CTX
    row, bit = ksgame.ks_play_round(quad, inp, PRBoxBranch(0, 1, 1, 1))
    assert row[ks.bases[5].index(ks.index_of(CTX))] == bit


def test_round_promise_violation(quad):
    with pytest.raises(ksgame.PromiseError):
        ksgame.ks_play_round(quad, KSGameInput(1, (2, 2)), PRBoxBranch(0, 0, 0, 0))


def test_round_wiring_mismatch(quad):
    with pytest.raises(ksgame.WiringError):
        ksgame.ks_play_round(quad, KSGameInput(1, (1, 1)), PRBoxBranch(1, 0, 0, 0))
    with pytest.raises(ksgame.WiringError):
        ksgame.ks_play_round(quad, KSGameInput(1, (1, 1)), PRBoxBranch(0, 0, 0, 1))


def test_game_spec_tags(cabello):
    game = ksgame.ks_game_spec(cabello)
    assert "exactly-one" in game.judge(1, (0, 0, 0, 1), (1, 1, 0, 0), 1)
    assert game.judge(1, (0, 0, 0, 1), (1, 0, 0, 0), 0) == ("value-mismatch",)
    assert len(game.promise_pairs()) == 36


def test_builtin_quad_all_win(quad):
    rep = ksgame.verify_quad(quad)
    assert (rep.cases_total, rep.cases_won) == (72, 72)


def test_builtin_quad_independent_recheck(quad):
    ks = quad.ks
    won = 0
    for k, basis in enumerate(ks.bases, 1):
        for pos, vid in enumerate(basis):
            x, y = int(k == 9), int(ks.vectors[vid] == CTX)
            for a in (0, 1):
                b = a ^ (x & y)
                row = (ksgame.A1_TABLE if a else ksgame.A0_TABLE)[k - 1]
                bit = (ksgame.B1_VALUES if b else ksgame.B0_VALUES)[vid]
                won += sum(row) == 1 and row[pos] == bit
    assert won == 72


def test_bob_sees_only_his_vector(quad):
    ks = quad.ks
    strat = ksgame.quad_strategy(quad)
    for vid, occ in enumerate(ks.occurrences):
        for b in (0, 1):
            outs = {strat.bob(ks.vectors[vid], b) for _ in occ}
            assert len(outs) == 1


def test_adopted_pairs_follow_box_relation(quad):
    res = ksgame.quad_resource(quad)
    for k, basis in enumerate(quad.ks.bases, 1):
        for vid in basis:
            for br in res(k, quad.ks.vectors[vid]):
                both = quad.alice_box_input(k) & quad.bob_box_input(vid)
                assert (br.alice_view ^ br.bob_view) == both


def test_no_unconditional_classical_pair(cabello):
    # every choice of one value-1 member per basis leaves some vector contextual
    mm = choice_mismatches(cabello.bases, cabello.n)
    assert len(mm) == 4 ** 9
    assert not np.any(~mm.any(axis=1))


def test_sufficient_condition_builtin(cabello):
    rep = ksgame.check_sufficient_condition(cabello)
    assert rep.satisfied
    assert (rep.p, rep.k, rep.m) == (8, 1, 1)
    assert [cabello.vectors[v] for v in rep.flip] == [CTX]


def test_sufficient_condition_colourable_degenerate():
    rep = ksgame.check_sufficient_condition(colourable_set())
    assert rep.satisfied and rep.degenerate
    assert (rep.k, rep.flip) == (0, ())


# Hypergraph found by random search: every working flip set puts two members
# into one residual basis.
CROWDED = ((10, 2, 3, 8), (3, 8, 1, 5), (5, 1, 4, 2), (0, 10, 9, 5),
           (3, 8, 9, 4), (6, 4, 7, 3), (3, 1, 9, 6), (8, 5, 4, 10))


def test_clause_a_diagnosis():
    ks = abstract_set(CROWDED)
    rep = ksgame.check_sufficient_condition(ks)
    assert not rep.satisfied
    assert rep.clause == "a"
    assert (rep.p, rep.k) == (4, 4)
    assert any(len(set(rep.flip) & set(b)) > 1 for b in ks.bases[rep.p:])


def test_clause_a_has_no_valid_uncrowded_flip_set():
    ks = abstract_set(CROWDED)
    p, k = 4, 4
    prefix = {v for b in ks.bases[:p] for v in b}
    cands = sorted({v for b in ks.bases[p:] for v in b} & prefix)
    from pseudotelepathy.kscolour import colour_prefix_maximal
    _, witness = colour_prefix_maximal(ks)
    for size in range(1, k + 1):
        for flip in itertools.combinations(cands, size):
            if not ksgame._crowded(ks, p, flip):
                assert ksgame._try_flip_set(ks, p, flip, witness) is None


def test_clause_c_diagnosis():
    # all four triples on four ids: no flip set survives
    rep = ksgame.check_sufficient_condition(abstract_set(((1, 3, 0), (2, 1, 0), (1, 2, 3), (3, 0, 2))))
    assert not rep.satisfied
    assert rep.clause == "c"
    assert (rep.p, rep.k) == (3, 1)


def test_synthesis_refuses_when_condition_fails():
    ks = abstract_set(CROWDED)
    with pytest.raises(ksgame.SynthesisError, match=r"\(a\)"):
        ksgame.synthesize_quad(ks)


def test_synthesized_matches_builtin_tables(cabello, quad):
    syn = ksgame.synthesize_quad(cabello)
    assert syn.a0 == quad.a0 and syn.a1 == quad.a1
    assert syn.b0 == quad.b0 and syn.b1 == quad.b1
    assert syn.residual == quad.residual and syn.flip == quad.flip


def test_synthesized_quad_all_win(cabello):
    rep = ksgame.verify_quad(ksgame.synthesize_quad(cabello))
    assert (rep.cases_total, rep.cases_won) == (72, 72)


def test_residual_first_permutation(cabello):
    ks = cabello.permuted([8, 0, 1, 2, 3, 4, 5, 6, 7])
    quad = ksgame.synthesize_quad(ks)
    assert ksgame.verify_quad(quad).all_won


@settings(max_examples=25, deadline=None)
@given(st.permutations(range(9)))
def test_synthesis_under_any_permutation(order):
    ks = builtin_cabello18().permuted(order)
    quad = ksgame.synthesize_quad(ks)
    rep = ksgame.verify_quad(quad)
    assert rep.cases_won == rep.cases_total == 72


def test_degenerate_quad_never_uses_box():
    ks = colourable_set()
    quad = ksgame.synthesize_quad(ks)
    assert quad.a0 == quad.a1 and quad.b0 == quad.b1
    assert not any(quad.alice_box_input(k) for k in range(1, ks.r + 1))
    assert ksgame.verify_quad(quad).all_won


def test_swapped_bob_wiring_fails_at_contextual_pair(quad):
    swapped = dataclasses.replace(quad, b0=quad.b1, b1=quad.b0)
    rep = ksgame.verify_quad(swapped)
    assert not rep.all_won
    assert [9, list(CTX)] in [f["inputs"] for f in rep.failures]


def test_simulation_rate_one(quad):
    game = ksgame.ks_game_spec(quad.ks)
    stats = core.simulate(game, ksgame.quad_strategy(quad), ksgame.quad_resource(quad), 10_000, seed=11)
    assert math.isclose(stats.win_rate, 1.0)


def test_alice_strategy_rejects_bad_rows():
    with pytest.raises(ValueError):
        ksgame.AliceKSStrategy({1: (1, 1, 0, 0)})
