import itertools
from fractions import Fraction

import pytest
from hypothesis import given
import hypothesis.strategies as st

from pseudotelepathy import nlbox
from pseudotelepathy.nlbox import CorrelationBox


def test_pr_branches_00():
    assert {(b.a, b.b) for b in nlbox.pr_branches(0, 0)} == {(0, 0), (1, 1)}


def test_pr_branches_11():
    assert {(b.a, b.b) for b in nlbox.pr_branches(1, 1)} == {(0, 1), (1, 0)}


@pytest.mark.parametrize("x,y", list(itertools.product((0, 1), (0, 1))))
def test_pr_branch_weights_and_relation(x, y):
    brs = nlbox.pr_branches(x, y)
    assert sum(b.weight for b in brs) == 1
    assert all(b.weight == Fraction(1, 2) and b.a ^ b.b == x & y for b in brs)


def test_alice_marginal_uniform():
    for x in (0, 1):
        for y in (0, 1):
            marg = {a: sum(b.weight for b in nlbox.pr_branches(x, y) if b.a == a) for a in (0, 1)}
            assert marg == {0: Fraction(1, 2), 1: Fraction(1, 2)}


def test_pr_branches_rejects_non_bits():
    with pytest.raises(ValueError):
        nlbox.pr_branches(2, 0)


def test_chsh_pr_is_four():
    assert nlbox.chsh_value(nlbox.pr_box()) == 4


def test_chsh_local_deterministic_max_two():
    values = [nlbox.chsh_value(b) for b in nlbox.local_deterministic_boxes()]
    assert len(values) == 16
    assert max(values) == 2
    assert all(v in (0, 2) for v in values)  # brute-force: each deterministic box gives exactly +-2


def test_chsh_uniform_zero():
    assert nlbox.chsh_value(nlbox.uniform_box()) == 0


def test_tsirelson_constant_sits_between():
    assert nlbox.LOCAL_BOUND < nlbox.TSIRELSON_BOUND < nlbox.PR_BOX_CHSH


def test_no_signalling_pr_box():
    assert nlbox.no_signalling_check(nlbox.pr_box())


def test_signalling_box_blames_alice():
    box = CorrelationBox({(x, y): {(y, 0): Fraction(1)} for x in (0, 1) for y in (0, 1)})
    res = nlbox.no_signalling_check(box)
    assert not res
    assert res.party == "alice"
    assert res.marginals[0] != res.marginals[1]


def test_malformed_box_distinct_error():
    box = CorrelationBox({(x, y): {(0, 0): Fraction(1, 2)} for x in (0, 1) for y in (0, 1)})
    with pytest.raises(nlbox.MalformedBoxError):
        nlbox.no_signalling_check(box)
    with pytest.raises(nlbox.MalformedBoxError):
        nlbox.chsh_value(box)


def test_local_deterministic_boxes_no_signalling():
    assert all(nlbox.no_signalling_check(b) for b in nlbox.local_deterministic_boxes())


weights = st.lists(st.integers(0, 20), min_size=3, max_size=3).filter(lambda w: sum(w) > 0)


@given(weights, st.integers(0, 15))
def test_mixtures_stay_no_signalling(w, idx):
    boxes = [nlbox.pr_box(), nlbox.uniform_box(), nlbox.local_deterministic_boxes()[idx]]
    total = sum(w)
    mix = nlbox.mixture(boxes, [Fraction(v, total) for v in w])
    assert nlbox.no_signalling_check(mix)
    assert nlbox.chsh_value(mix) <= 4


@given(st.integers(0, 15), st.integers(0, 15), st.fractions(0, 1))
def test_local_mixtures_respect_bound(i, j, t):
    local = nlbox.local_deterministic_boxes()
    mix = nlbox.mixture([local[i], local[j]], [t, 1 - t])
    assert nlbox.chsh_value(mix) <= nlbox.LOCAL_BOUND


def test_nlbox_resource_wiring():
    res = nlbox.nlbox_resource(lambda x: int(x == "hi"), lambda y: int(y > 2))
    brs = res("hi", 5)
    assert [(b.alice_view, b.bob_view) for b in brs] == [(0, 1), (1, 0)]
    assert [b.label for b in brs] == [0, 1]
