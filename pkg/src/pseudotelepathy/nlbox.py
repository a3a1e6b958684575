"""Popescu-Rohrlich box and correlation-box diagnostics (no-signalling, CHSH).

Probabilities are exact ``Fraction`` values throughout.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .core import ResourceBranch

HALF = Fraction(1, 2)
BITS = (0, 1)

# Largest CHSH value reachable with quantum correlations. Documented only.
TSIRELSON_BOUND = 2 * math.sqrt(2)
LOCAL_BOUND = 2
PR_BOX_CHSH = 4


@dataclass(frozen=True)
class PRBoxBranch:
    x: int
    y: int
    a: int
    b: int
    weight: Fraction = HALF


def pr_branches(x: int, y: int) -> list[PRBoxBranch]:
    """The two equally likely output pairs of the PR box on inputs (x, y)."""
    if x not in BITS or y not in BITS:
        raise ValueError(f"box inputs must be bits, got {(x, y)}")
    return [PRBoxBranch(x, y, a, a ^ (x & y)) for a in BITS]


def nlbox_resource(alice_wire: Callable, bob_wire: Callable):
    """Resource for a single shared PR box.

    Each party turns its game input into a box input with its own wiring
    function; the branch views are the box outputs. Branch label = Alice's
    output bit.
    """

    def branches(x, y):
        return [
            ResourceBranch(label=br.a, weight=br.weight, alice_view=br.a, bob_view=br.b)
            for br in pr_branches(alice_wire(x), bob_wire(y))
        ]

    return branches


class MalformedBoxError(ValueError):
    """A conditional distribution that is negative or does not sum to one."""


@dataclass(frozen=True)
class CorrelationBox:
    """P(a, b | x, y) for bit inputs and bit outputs.

    ``table[(x, y)][(a, b)]``; missing output pairs have probability 0.
    """

    table: dict

    def p(self, a, b, x, y) -> Fraction:
        return Fraction(self.table[(x, y)].get((a, b), 0))

    def validate(self) -> None:
        for x, y in itertools.product(BITS, BITS):
            if (x, y) not in self.table:
                raise MalformedBoxError(f"no distribution for inputs {(x, y)}")
            dist = self.table[(x, y)]
            if any(Fraction(v) < 0 for v in dist.values()):
                raise MalformedBoxError(f"negative probability for inputs {(x, y)}")
            total = sum(Fraction(v) for v in dist.values())
            if total != 1:
                raise MalformedBoxError(f"distribution for inputs {(x, y)} sums to {total}")


def pr_box() -> CorrelationBox:
    return CorrelationBox({
        (x, y): {(br.a, br.b): br.weight for br in pr_branches(x, y)} for x, y in itertools.product(BITS, BITS)
    })


def deterministic_box(f: Callable[[int], int], g: Callable[[int], int]) -> CorrelationBox:
    """Local deterministic box a = f(x), b = g(y)."""
    return CorrelationBox({(x, y): {(f(x), g(y)): Fraction(1)} for x, y in itertools.product(BITS, BITS)})


def local_deterministic_boxes() -> list[CorrelationBox]:
    """All 16 boxes a = f(x), b = g(y) with f, g: {0,1} -> {0,1}."""
    funcs = [lambda x, t=t: t[x] for t in itertools.product(BITS, BITS)]
    return [deterministic_box(f, g) for f in funcs for g in funcs]


def uniform_box() -> CorrelationBox:
    q = Fraction(1, 4)
    return CorrelationBox({
        xy: {ab: q for ab in itertools.product(BITS, BITS)} for xy in itertools.product(BITS, BITS)
    })


def mixture(boxes, weights) -> CorrelationBox:
    weights = [Fraction(w) for w in weights]
    if sum(weights) != 1 or any(w < 0 for w in weights):
        raise ValueError("mixture weights must be a probability vector")
    table = {}
    for xy in itertools.product(BITS, BITS):
        table[xy] = {
            ab: sum(w * bx.p(*ab, *xy) for bx, w in zip(boxes, weights)) for ab in itertools.product(BITS, BITS)
        }
    return CorrelationBox(table)


@dataclass(frozen=True)
class NoSignallingResult:
    ok: bool
    # on failure: which party's marginal moves with the other's input
    party: str | None = None
    own_input: int | None = None
    marginals: tuple | None = None

    def __bool__(self):
        return self.ok


def _marginal(box, party, own, other):
    if party == "alice":
        return tuple(sum(box.p(a, b, own, other) for b in BITS) for a in BITS)
    return tuple(sum(box.p(a, b, other, own) for a in BITS) for b in BITS)


def no_signalling_check(box: CorrelationBox) -> NoSignallingResult:
    box.validate()
    for party in ("alice", "bob"):
        for own in BITS:
            m0, m1 = _marginal(box, party, own, 0), _marginal(box, party, own, 1)
            if m0 != m1:
                return NoSignallingResult(False, party, own, (m0, m1))
    return NoSignallingResult(True)


def correlator(box: CorrelationBox, x: int, y: int) -> Fraction:
    """E(x, y) with outputs encoded as (-1)^a, (-1)^b."""
    return sum((-1) ** (a ^ b) * box.p(a, b, x, y) for a, b in itertools.product(BITS, BITS))


def chsh_value(box: CorrelationBox) -> Fraction:
    box.validate()
    return Fraction(abs(correlator(box, 0, 0) + correlator(box, 0, 1) + correlator(box, 1, 0) - correlator(box, 1, 1)))
