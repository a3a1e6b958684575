"""Odd-size magic-square game: rules, classical impossibility, single-box strategy.

Indices are 1-based everywhere in the public API: Alice receives a row number
``x_a`` in 1..n and answers with a row, Bob receives a column number ``x_b``
and answers with a column (listed top to bottom). They win when the row has
even parity, the column has odd parity, and both agree on cell (x_a, x_b).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import core
from .nlbox import PRBoxBranch, nlbox_resource

TAGS = ("A0", "A1", "B0", "B1")


class MagicSizeError(ValueError):
    pass


def check_size(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or n < 3 or n % 2 == 0:
        if isinstance(n, (int, np.integer)) and n % 2 == 0:
            raise MagicSizeError(
                f"n={n} is even; even-size magic squares have a classical solution and are not a pseudo-telepathy game"
            )
        raise MagicSizeError(f"n must be an odd integer >= 3, got {n!r}")


def _check_index(n, i, what="index"):
    if not 1 <= i <= n:
        raise ValueError(f"{what} {i} out of range 1..{n}")


@dataclass(frozen=True)
class MagicInput:
    n: int
    x_a: int
    x_b: int

    def __post_init__(self):
        check_size(self.n)
        _check_index(self.n, self.x_a, "x_a")
        _check_index(self.n, self.x_b, "x_b")


@dataclass(frozen=True)
class MagicAnswer:
    row: tuple
    col: tuple


def parity(bits) -> int:
    return sum(bits) & 1


def magic_game_spec(n: int) -> core.GameSpec:
    check_size(n)

    def judge(x_a, x_b, row, col):
        violated = []
        if len(row) != n or parity(row) != 0:
            violated.append("row-parity")
        if len(col) != n or parity(col) != 1:
            violated.append("column-parity")
        if row[x_b - 1] != col[x_a - 1]:
            violated.append("intersection")
        return tuple(violated)

    inputs = tuple(range(1, n + 1))
    return core.GameSpec(f"magic-square-{n}", inputs, inputs, lambda x, y: True, judge)


@dataclass(frozen=True)
class StrategyVectorFamily:
    n: int
    es: tuple  # e_1..e_n
    f1: tuple
    f2: tuple
    gs: tuple  # g_1..g_{n-1}
    h1: tuple

    def e(self, i: int) -> tuple:
        _check_index(self.n, i)
        return self.es[i - 1]

    def g(self, i: int) -> tuple:
        _check_index(self.n - 1, i)
        return self.gs[i - 1]


@lru_cache(maxsize=None)
def strategy_vectors(n: int) -> StrategyVectorFamily:
    check_size(n)
    es = tuple(tuple(0 if j == i else 1 for j in range(n)) for i in range(n))
    gs = tuple(e[:-1] + (0,) for e in es[:-1])
    return StrategyVectorFamily(
        n=n,
        es=es,
        f1=(0,) * n,
        f2=(0,) * (n - 2) + (1, 1),
        gs=gs,
        h1=(1,) * n,
    )


@lru_cache(maxsize=None)
def _strategy_table(tag: str, n: int) -> tuple:
    fam = strategy_vectors(n)
    if tag == "A0":
        return fam.es[: n - 1] + (fam.f1,)
    if tag == "A1":
        return fam.es[: n - 2] + (fam.es[n - 1], fam.f2)
    if tag == "B0":
        return fam.gs + (fam.h1,)
    if tag == "B1":
        return fam.gs[: n - 2] + (fam.h1, fam.gs[n - 2])
    raise ValueError(f"unknown strategy tag {tag!r}; expected one of {TAGS}")


def magic_strategy(tag: str, n: int, index: int) -> tuple:
    """Row (A-tags) or column (B-tags) that strategy ``tag`` plays on input ``index``."""
    check_size(n)
    _check_index(n, index)
    return _strategy_table(tag, n)[index - 1]


def box_input(n: int, index: int) -> int:
    """Each party feeds 1 into the box exactly when its input is n."""
    return int(index == n)


def nlbox_strategy(n: int) -> core.Strategy:
    return core.Strategy(
        alice=lambda x_a, a: magic_strategy(f"A{a}", n, x_a),
        bob=lambda x_b, b: magic_strategy(f"B{b}", n, x_b),
    )


def nlbox_magic_resource(n: int):
    return nlbox_resource(lambda x: box_input(n, x), lambda y: box_input(n, y))


def magic_nlbox_round(n: int, x_a: int, x_b: int, branch: PRBoxBranch) -> MagicAnswer:
    MagicInput(n, x_a, x_b)
    wired = (box_input(n, x_a), box_input(n, x_b))
    if (branch.x, branch.y) != wired or branch.a ^ branch.b != branch.x & branch.y:
        raise ValueError(f"branch {branch} does not match box inputs {wired}")
    return MagicAnswer(magic_strategy(f"A{branch.a}", n, x_a), magic_strategy(f"B{branch.b}", n, x_b))


def _verify_generic(n: int) -> core.VerificationReport:
    return core.verify_exhaustive(
        magic_game_spec(n), nlbox_strategy(n), nlbox_magic_resource(n), {"n": n, "strategy": "nlbox"}
    )


def _verify_vectorized(n: int) -> core.VerificationReport:
    A = np.array([_strategy_table("A0", n), _strategy_table("A1", n)], dtype=np.int8)  # [a, x_a, col]
    B = np.array([_strategy_table("B0", n), _strategy_table("B1", n)], dtype=np.int8)  # [b, x_b, row]
    wire = (np.arange(1, n + 1) == n).astype(np.int8)
    both = wire[:, None] & wire[None, :]  # [x_a, x_b]
    row_par = A.sum(axis=2) % 2  # [a, x_a]
    col_par = B.sum(axis=2) % 2  # [b, x_b]
    BT = B.transpose(0, 2, 1)  # [b, x_a, x_b]

    report = core.VerificationReport(game=f"magic-square-{n}", parameters={"n": n, "strategy": "nlbox"})
    outcome = {}
    for a in (0, 1):
        b = a ^ both
        bad_row = np.broadcast_to(row_par[a][:, None] != 0, (n, n))
        bad_col = np.where(b == 0, col_par[0][None, :], col_par[1][None, :]) != 1
        bad_cell = A[a] != np.where(b == 0, BT[0], BT[1])
        outcome[a] = (b, bad_row, bad_col, bad_cell)
    report.cases_total = 2 * n * n
    lost = sum(int(np.count_nonzero(o[1] | o[2] | o[3])) for o in outcome.values())
    report.cases_won = report.cases_total - lost
    if lost:
        for xa, xb in itertools.product(range(n), range(n)):
            for a in (0, 1):
                b, bad_row, bad_col, bad_cell = outcome[a]
                tags = [t for t, bad in zip(("row-parity", "column-parity", "intersection"),
                                            (bad_row, bad_col, bad_cell)) if bad[xa, xb]]
                if tags:
                    bb = int(b[xa, xb])
                    report.add_failure([xa + 1, xb + 1], {"label": a, "alice": a, "bob": bb},
                                       [A[a, xa].tolist(), B[bb, xb].tolist()], tags)
    return report


def magic_verify_nlbox(n: int, engine: str = "vectorized") -> core.VerificationReport:
    """All n^2 input pairs times both box branches.

    ``engine="generic"`` routes through the shared case-by-case verifier;
    the default evaluates the same cases with array operations.
    """
    check_size(n)
    if engine == "generic":
        return _verify_generic(n)
    if engine == "vectorized":
        return _verify_vectorized(n)
    raise ValueError(f"unknown engine {engine!r}")


@dataclass(frozen=True)
class ImpossibilityProof:
    n: int
    # every row even => total even; every column odd and n odd => total odd
    row_total_parity: int
    column_total_parity: int
    matrices_checked: int | None = None
    matrices_valid: int | None = None
    strategy_pairs_checked: int | None = None
    best_deterministic_wins: int | None = None  # computed by brute force
    input_pairs: int | None = None

    @property
    def parity_verdict(self) -> bool:
        return self.row_total_parity != self.column_total_parity

    @property
    def exhaustive_verdict(self) -> bool | None:
        if self.matrices_valid is None:
            return None
        return self.matrices_valid == 0 and self.best_deterministic_wins < self.input_pairs

    def to_document(self) -> dict:
        return {
            "n": self.n,
            "parity_verdict": self.parity_verdict,
            "row_total_parity": self.row_total_parity,
            "column_total_parity": self.column_total_parity,
            "matrices_checked": self.matrices_checked,
            "matrices_valid": self.matrices_valid,
            "strategy_pairs_checked": self.strategy_pairs_checked,
            "best_deterministic_wins": self.best_deterministic_wins,
            "input_pairs": self.input_pairs,
            "exhaustive_verdict": self.exhaustive_verdict,
        }


def _all_bit_vectors(n):
    return np.array(list(itertools.product((0, 1), repeat=n)), dtype=np.int8)


def count_magic_matrices(n: int) -> int:
    """Brute force: n x n bit matrices with even rows and odd columns (n <= 4)."""
    if n > 4:
        raise ValueError("brute force limited to n <= 4")
    m = _all_bit_vectors(n * n).reshape(-1, n, n)
    ok = np.all(m.sum(axis=2) % 2 == 0, axis=1) & np.all(m.sum(axis=1) % 2 == 1, axis=1)
    return int(np.count_nonzero(ok))


def _deterministic_table(n):
    vecs = _all_bit_vectors(n)
    even = vecs[vecs.sum(axis=1) % 2 == 0]
    odd = vecs[vecs.sum(axis=1) % 2 == 1]
    alice = even[np.array(list(itertools.product(range(len(even)), repeat=n)))]  # [s, x_a, col]
    bob = odd[np.array(list(itertools.product(range(len(odd)), repeat=n)))]  # [s, x_b, row]
    agree = alice[:, None, :, :] == bob[None, :, :, :].transpose(0, 1, 3, 2)
    return alice, bob, agree.sum(axis=(2, 3))


def best_deterministic_wins(n: int = 3) -> tuple[int, int]:
    """Max input pairs won by a deterministic pair of parity-respecting strategies.

    Returns ``(best, pairs_checked)``. Answers with the wrong parity lose
    outright, so restricting to even rows and odd columns loses nothing.
    """
    _, _, wins = _deterministic_table(n)
    return int(wins.max()), int(wins.size)


def best_deterministic_strategy(n: int = 3) -> tuple[tuple, tuple]:
    """First (Alice rows, Bob columns) pair reaching the deterministic maximum."""
    alice, bob, wins = _deterministic_table(n)
    sa, sb = np.unravel_index(int(np.argmax(wins)), wins.shape)
    return (tuple(tuple(int(v) for v in r) for r in alice[sa]),
            tuple(tuple(int(v) for v in c) for c in bob[sb]))


def classical_impossibility(n: int) -> ImpossibilityProof:
    check_size(n)
    if n != 3:
        return ImpossibilityProof(n=n, row_total_parity=0, column_total_parity=n % 2)
    best, pairs = best_deterministic_wins(3)
    return ImpossibilityProof(
        n=3,
        row_total_parity=0,
        column_total_parity=1,
        matrices_checked=2 ** 9,
        matrices_valid=count_magic_matrices(3),
        strategy_pairs_checked=pairs,
        best_deterministic_wins=best,
        input_pairs=9,
    )
