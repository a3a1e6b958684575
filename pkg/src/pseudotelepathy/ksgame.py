"""Impossible-colouring game and its single-NL-box strategies.

Alice gets a basis S^k (numbered from 1) and answers with one bit per member;
Bob gets one vector of S^k and answers with one bit. They win when Alice's row
has exactly one 1 and agrees with Bob on his vector.

With one PR box, Alice feeds 1 into the box iff her basis is *residual* (it
lies beyond the longest colourable prefix), Bob feeds 1 iff his vector is in
the *flip set*. Each then plays the strategy indexed by the box output:
A0/A1 for Alice, B0/B1 for Bob.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import core
from .kscolour import KSSet, _first_solution, builtin_cabello18, colour_prefix_maximal
from .nlbox import PRBoxBranch, nlbox_resource

# Box-strategy tables for the 18-vector set, one row per basis S1..S9.
A0_TABLE = ((1, 0, 0, 0),) * 4 + ((0, 0, 1, 0), (0, 0, 0, 1), (1, 0, 0, 0), (1, 0, 0, 0), (0, 0, 1, 0))
A1_TABLE = ((1, 0, 0, 0),) * 4 + ((0, 0, 0, 1), (0, 0, 1, 0), (1, 0, 0, 0), (1, 0, 0, 0), (0, 0, 0, 1))
B0_TABLE = ((1, 0, 0, 0),) * 4 + ((0, 0, 1, 0), (0, 0, 0, 1), (1, 0, 0, 0), (1, 0, 0, 0), (0, 0, 1, 1))
B1_TABLE = ((1, 0, 0, 0),) * 4 + ((0, 0, 0, 1), (0, 0, 1, 0), (1, 0, 0, 0), (1, 0, 0, 0), (0, 0, 0, 0))
# Bob's values listed per vector, in first-appearance order of the set.
B0_VALUES = (1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 1, 1, 0, 0)
B1_VALUES = (1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0)
CONTEXTUAL_VECTOR_4D = (0, 1, -1, 0)

# cap on flip-set size when probing whether a failure is due to crowding
MAX_RELAXED_FLIP = 6


class PromiseError(ValueError):
    pass


class WiringError(ValueError):
    """Box branch inconsistent with the inputs the parties would feed the box."""


class SynthesisError(ValueError):
    pass


@dataclass(frozen=True)
class KSGameInput:
    alice: int  # basis number k, 1-based
    bob: tuple  # (l, m), both 1-based: Bob holds u_m^l

    def vector(self, ks: KSSet) -> tuple:
        l, m = self.bob
        return ks.vectors[ks.bases[l - 1][m - 1]]


@dataclass(frozen=True)
class AliceKSStrategy:
    rows: dict  # basis number (1-based) -> bit tuple

    def __post_init__(self):
        for k, row in self.rows.items():
            if sum(row) != 1 or any(bit not in (0, 1) for bit in row):
                raise ValueError(f"row for S{k} must contain exactly one 1, got {row}")


@dataclass(frozen=True)
class BobKSStrategy:
    values: dict  # vector id -> bit


@dataclass(frozen=True)
class StrategyQuad:
    ks: KSSet
    a0: AliceKSStrategy
    a1: AliceKSStrategy
    b0: BobKSStrategy
    b1: BobKSStrategy
    residual: frozenset = field(default_factory=frozenset)  # basis numbers, 1-based
    flip: frozenset = field(default_factory=frozenset)  # vector ids

    def __post_init__(self):
        for strat in (self.a0, self.a1):
            if sorted(strat.rows) != list(range(1, self.ks.r + 1)):
                raise ValueError("Alice strategy must give a row for every basis")
        for strat in (self.b0, self.b1):
            if sorted(strat.values) != list(range(self.ks.n)):
                raise ValueError("Bob strategy must give a value for every vector")

    def alice_box_input(self, k: int) -> int:
        return int(k in self.residual)

    def bob_box_input(self, vid: int) -> int:
        return int(vid in self.flip)

    def alice(self, box_output: int) -> AliceKSStrategy:
        return self.a1 if box_output else self.a0

    def bob(self, box_output: int) -> BobKSStrategy:
        return self.b1 if box_output else self.b0


def _bob_from_table(ks: KSSet, table) -> BobKSStrategy:
    values = {}
    for j, row in enumerate(table):
        for vid, bit in zip(ks.bases[j], row):
            if values.setdefault(vid, bit) != bit:
                raise ValueError(f"table gives vector {ks.vectors[vid]} two values")
    return BobKSStrategy(values)


def builtin_quad_4d() -> StrategyQuad:
    ks = builtin_cabello18()
    return StrategyQuad(
        ks=ks,
        a0=AliceKSStrategy({k + 1: row for k, row in enumerate(A0_TABLE)}),
        a1=AliceKSStrategy({k + 1: row for k, row in enumerate(A1_TABLE)}),
        b0=_bob_from_table(ks, B0_TABLE),
        b1=_bob_from_table(ks, B1_TABLE),
        residual=frozenset({9}),
        flip=frozenset({ks.index_of(CONTEXTUAL_VECTOR_4D)}),
    )


# ---------------------------------------------------------------------------
# game, strategy, resource
# ---------------------------------------------------------------------------


def ks_game_spec(ks: KSSet, name: str = "impossible-colouring") -> core.GameSpec:
    bases = [set(b) for b in ks.bases]

    def promise(k, vector):
        return ks.index_of(vector) in bases[k - 1]

    def judge(k, vector, row, bit):
        violated = []
        if len(row) != ks.dimension or sum(row) != 1:
            violated.append("exactly-one")
        pos = ks.bases[k - 1].index(ks.index_of(vector))
        if pos >= len(row) or row[pos] != bit:
            violated.append("value-mismatch")
        return tuple(violated)

    return core.GameSpec(
        name=name,
        alice_inputs=tuple(range(1, ks.r + 1)),
        bob_inputs=ks.vectors,
        promise=promise,
        judge=judge,
    )


def quad_strategy(quad: StrategyQuad) -> core.Strategy:
    ks = quad.ks
    return core.Strategy(
        alice=lambda k, a: quad.alice(a).rows[k],
        bob=lambda vector, b: quad.bob(b).values[ks.index_of(vector)],
    )


def quad_resource(quad: StrategyQuad):
    return nlbox_resource(quad.alice_box_input, lambda vector: quad.bob_box_input(quad.ks.index_of(vector)))


def verify_quad(quad: StrategyQuad) -> core.VerificationReport:
    ks = quad.ks
    params = {
        "dimension": ks.dimension,
        "vectors": ks.n,
        "bases": ks.r,
        "residual_bases": sorted(quad.residual),
        "flip_set": [ks.vectors[v] for v in sorted(quad.flip)],
    }
    return core.verify_exhaustive(ks_game_spec(ks), quad_strategy(quad), quad_resource(quad), params)


def ks_play_round(quad: StrategyQuad, inp: KSGameInput, branch: PRBoxBranch):
    """One round: returns (Alice's row, Bob's bit)."""
    ks = quad.ks
    vid = ks.index_of(inp.vector(ks))
    if vid not in ks.bases[inp.alice - 1]:
        raise PromiseError(f"vector {ks.vectors[vid]} is not a member of S{inp.alice}")
    wired = (quad.alice_box_input(inp.alice), quad.bob_box_input(vid))
    if (branch.x, branch.y) != wired:
        raise WiringError(f"branch has box inputs {(branch.x, branch.y)}, wiring gives {wired}")
    if branch.a ^ branch.b != branch.x & branch.y:
        raise WiringError(f"branch outputs {(branch.a, branch.b)} violate a xor b = x.y")
    return quad.alice(branch.a).rows[inp.alice], quad.bob(branch.b).values[vid]


# ---------------------------------------------------------------------------
# sufficient condition and synthesis
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SufficiencyReport:
    satisfied: bool
    p: int
    k: int
    flip: tuple = ()  # vector ids
    clause: str | None = None  # failed clause when not satisfied: "a", "b" or "c"
    message: str = ""
    # (A0 assignment, A1 assignment, variable layout); internal to synthesis
    construction: tuple | None = field(default=None, repr=False, compare=False)

    @property
    def m(self) -> int:
        return len(self.flip)

    @property
    def degenerate(self) -> bool:
        """k = 0: the set is colourable and the game has a classical strategy."""
        return self.satisfied and self.k == 0


def _flip_layout(ks: KSSet, p: int, flip):
    """Variable layout where each flip vector has a prefix and a residual variable."""
    res_var = {v: ks.n + i for i, v in enumerate(flip)}
    bases = [
        tuple(res_var.get(v, v) if j >= p else v for v in basis) for j, basis in enumerate(ks.bases)
    ]
    return bases, ks.n + len(flip), res_var


def _try_flip_set(ks: KSSet, p: int, flip, witness):
    bases, nvars, res_var = _flip_layout(ks, p, flip)

    def fixings(c):
        fixed0, fixed1 = {}, {}
        for v, bit in zip(flip, c):
            fixed0[v], fixed0[res_var[v]] = bit, 1 - bit
            fixed1[v], fixed1[res_var[v]] = 1 - bit, bit
        return fixed0, fixed1

    # first choice: A0 keeps the prefix witness and flips M in residual context
    anchored = tuple(witness[v] for v in flip)
    fixed0, fixed1 = fixings(anchored)
    sol0 = _first_solution(bases, nvars, {**witness, **fixed0})
    if sol0 is not None:
        sol1 = _first_solution(bases, nvars, fixed1)
        if sol1 is not None:
            return sol0, sol1, (bases, res_var)
    # otherwise re-solve freely, witness values of M first
    for c in itertools.product((0, 1), repeat=len(flip)):
        c = tuple(bit ^ w for bit, w in zip(c, anchored))
        fixed0, fixed1 = fixings(c)
        sol0 = _first_solution(bases, nvars, fixed0)
        if sol0 is None:
            continue
        sol1 = _first_solution(bases, nvars, fixed1)
        if sol1 is not None:
            return sol0, sol1, (bases, res_var)
    return None


def _witness_conflicts(ks: KSSet, p: int, witness) -> list:
    """Residual vectors at which the prefix witness first breaks, in scan order.

    Scanning each residual basis by position, a second value-1 member is a
    conflict; a basis left with no 1 and no free vector blames its first member.
    """
    conflicts = []
    for basis in ks.bases[p:]:
        seen_one = False
        for v in basis:
            if witness.get(v) == 1:
                if seen_one and v not in conflicts:
                    conflicts.append(v)
                seen_one = True
        if not seen_one and all(v in witness for v in basis) and basis[0] not in conflicts:
            conflicts.append(basis[0])
    return conflicts


def _flip_candidates(ks: KSSet, p: int, witness):
    """Residual vectors that also occur in the prefix, witness conflicts first."""
    conflicts = _witness_conflicts(ks, p, witness)
    first_residual = {}
    for j in range(p, ks.r):
        for pos, v in enumerate(ks.bases[j]):
            first_residual.setdefault(v, (j, pos))
    cands = [v for v in first_residual if v in witness]
    return sorted(cands, key=lambda v: (0, conflicts.index(v)) if v in conflicts else (1, *first_residual[v]))


def _crowded(ks: KSSet, p: int, flip) -> bool:
    members = set(flip)
    return any(len(members.intersection(basis)) > 1 for basis in ks.bases[p:])


def check_sufficient_condition(ks: KSSet) -> SufficiencyReport:
    """Look for a flip set that makes the single-box construction work.

    The flip set M must (a) put at most one member in each residual basis,
    (b) use only vectors that also occur in the colourable prefix, and (c)
    admit the two strategies A0, A1: A0 gives each M-vector opposite values
    in prefix and residual context, A1 swaps those two values, and both are
    otherwise valid non-contextual assignments. Flip sets are tried by size,
    then in candidate order (vectors that break the prefix witness first, then
    by basis index and position).
    """
    p, witness = colour_prefix_maximal(ks)
    k = ks.r - p
    if k == 0:
        sol = tuple(witness[v] for v in range(ks.n))
        return SufficiencyReport(True, p, 0, (), None, "set is colourable; classical strategy exists",
                                 (sol, sol, (ks.bases, {})))
    candidates = _flip_candidates(ks, p, witness)
    if not candidates:
        return SufficiencyReport(False, p, k, (), "b", "no residual vector also occurs in the prefix")
    for size in range(1, min(k, len(candidates)) + 1):
        for flip in itertools.combinations(candidates, size):
            if _crowded(ks, p, flip):
                continue
            found = _try_flip_set(ks, p, flip, witness)
            if found is not None:
                return SufficiencyReport(True, p, k, flip, None, "sufficient condition holds", found)
    for size in range(2, min(len(candidates), 2 * k, MAX_RELAXED_FLIP) + 1):
        for flip in itertools.combinations(candidates, size):
            if _crowded(ks, p, flip) and _try_flip_set(ks, p, flip, witness) is not None:
                vecs = [ks.vectors[v] for v in flip]
                return SufficiencyReport(
                    False, p, k, flip, "a", f"only flip sets with two members in one residual basis work, e.g. {vecs}"
                )
    return SufficiencyReport(False, p, k, (), "c", "no flip set admits the A0/A1 construction")


def synthesize_quad(ks: KSSet) -> StrategyQuad:
    """Build A0, A1, B0, B1 and the box wiring, and verify them exhaustively."""
    report = check_sufficient_condition(ks)
    if not report.satisfied:
        raise SynthesisError(f"clause ({report.clause}) fails: {report.message}")
    sol0, sol1, (bases, res_var) = report.construction

    def rows(sol):
        return AliceKSStrategy({j + 1: tuple(sol[v] for v in basis) for j, basis in enumerate(bases)})

    b0 = {v: sol0[v] for v in range(ks.n)}
    b1 = {v: sol1[v] for v in range(ks.n)}
    for v, var in res_var.items():
        b0[v], b1[v] = sol1[var], sol0[var]
    quad = StrategyQuad(
        ks=ks,
        a0=rows(sol0),
        a1=rows(sol1),
        b0=BobKSStrategy(b0),
        b1=BobKSStrategy(b1),
        residual=frozenset(range(report.p + 1, ks.r + 1)),
        flip=frozenset(report.flip),
    )
    check = verify_quad(quad)
    if not check.all_won:
        raise RuntimeError(f"synthesized strategy lost {len(check.failures)} cases; refusing to return it")
    return quad
