"""Two-ebit quantum strategy for the 3x3 magic square and its odd-n extension.

The shared state lives on four qubits ordered (a, c, b, d): Alice holds a and
c, Bob holds b and d, and ``a`` is the most significant bit of the basis
index. Alice applies U_x to her pair, Bob applies V_y to his, then both
measure in the computational basis. Outcome index k encodes
(a1, a2, b1, b2) = bits of k from most to least significant.
"""
from __future__ import annotations

import itertools

import numpy as np

from . import core
from .magicsquare import MagicAnswer, MagicInput, check_size, magic_game_spec

SUPPORT_THRESHOLD = 1e-9

_R2 = np.sqrt(2)
_I = 1j

_U = {
    1: np.array([[_I, 0, 0, 1], [0, -_I, 1, 0], [0, _I, 1, 0], [1, 0, 0, _I]]) / _R2,
    2: np.array([[_I, 1, 1, _I], [-_I, 1, -1, _I], [_I, 1, -1, -_I], [-_I, 1, 1, -_I]]) / 2,
    3: np.array([[-1, -1, -1, 1], [1, 1, -1, 1], [1, -1, 1, 1], [1, -1, -1, -1]]) / 2,
}
_V = {
    1: np.array([[_I, -_I, 1, 1], [-_I, -_I, 1, -1], [1, 1, -_I, _I], [-_I, _I, 1, 1]]) / 2,
    2: np.array([[-1, _I, 1, _I], [1, _I, 1, -_I], [1, -_I, 1, _I], [-1, -_I, 1, -_I]]) / 2,
    3: np.array([[1, 0, 0, 1], [-1, 0, 0, 1], [0, 1, 1, 0], [0, 1, -1, 0]]) / _R2,
}


def strategy_unitary(party: str, index: int) -> np.ndarray:
    """Copy of U_index (party 'alice') or V_index (party 'bob'), index in 1..3."""
    table = {"alice": _U, "bob": _V}.get(party)
    if table is None:
        raise ValueError(f"party must be 'alice' or 'bob', got {party!r}")
    if index not in table:
        raise ValueError(f"unitary index must be 1..3, got {index!r}")
    return table[index].astype(complex).copy()


def default_unitaries() -> tuple[dict, dict]:
    return ({k: strategy_unitary("alice", k) for k in _U}, {k: strategy_unitary("bob", k) for k in _V})


def is_unitary(m: np.ndarray, tol: float = 1e-12) -> bool:
    m = np.asarray(m)
    return m.shape == (4, 4) and bool(np.abs(m.conj().T @ m - np.eye(4)).max() <= tol)


def basis_index(a: int, c: int, b: int, d: int) -> int:
    return (a << 3) | (c << 2) | (b << 1) | d


def outcome_bits(k: int) -> tuple[int, int, int, int]:
    return ((k >> 3) & 1, (k >> 2) & 1, (k >> 1) & 1, k & 1)


def initial_state() -> np.ndarray:
    """One singlet on (a, b) and one on (c, d)."""
    psi = np.zeros(16, dtype=complex)
    psi[basis_index(0, 0, 1, 1)] = 0.5
    psi[basis_index(0, 1, 1, 0)] = -0.5
    psi[basis_index(1, 0, 0, 1)] = -0.5
    psi[basis_index(1, 1, 0, 0)] = 0.5
    return psi


def amplitude(state: np.ndarray, a: int, c: int, b: int, d: int) -> complex:
    return complex(state[basis_index(a, c, b, d)])


def _probabilities(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return np.abs(np.kron(u, v) @ initial_state()) ** 2


def joint_distribution(u_index: int, v_index: int, alice_ops=None, bob_ops=None) -> dict:
    """Outcome distribution {(a1, a2, b1, b2): p} after U_{u_index} (x) V_{v_index}.

    ``alice_ops`` / ``bob_ops`` override the built-in matrices (dict 1..3 -> 4x4).
    Entries below the support threshold are dropped. No renormalization.
    """
    alice_ops = alice_ops or _U
    bob_ops = bob_ops or _V
    probs = _probabilities(np.asarray(alice_ops[u_index]), np.asarray(bob_ops[v_index]))
    return {outcome_bits(k): float(p) for k, p in enumerate(probs) if p > SUPPORT_THRESHOLD}


def outcome_to_answers_n3(a1: int, a2: int, b1: int, b2: int) -> MagicAnswer:
    return MagicAnswer(row=(a1, a2, a1 ^ a2), col=(b1, b2, b1 ^ b2 ^ 1))


def _quantum_resource(alice_index, bob_index, alice_ops, bob_ops):
    def branches(x, y):
        dist = joint_distribution(alice_index(x), bob_index(y), alice_ops, bob_ops)
        return [
            core.ResourceBranch(label=basis_index(*o), weight=p, alice_view=o[:2], bob_view=o[2:])
            for o, p in dist.items()
        ]

    return branches


def quantum_verify_n3(alice_ops=None, bob_ops=None) -> core.VerificationReport:
    """Every supported outcome of every input pair of the 3x3 game."""
    game = magic_game_spec(3)
    strategy = core.Strategy(
        alice=lambda x, view: outcome_to_answers_n3(view[0], view[1], 0, 0).row,
        bob=lambda y, view: outcome_to_answers_n3(0, 0, view[0], view[1]).col,
    )
    resource = _quantum_resource(lambda x: x, lambda y: y, alice_ops, bob_ops)
    params = {"n": 3, "strategy": "quantum", "support_threshold": SUPPORT_THRESHOLD}
    if alice_ops is not None or bob_ops is not None:
        params["custom_unitaries"] = True
    return core.verify_exhaustive(game, strategy, resource, params)


def unitary_index(n: int, x: int, low: int = 1) -> int:
    """Which of the three unitaries a party applies on input x in an n x n game.

    Inputs above n-3 map onto 1..3; all lower inputs share ``low``, whose
    outcome is ignored.
    """
    if low not in (1, 2, 3):
        raise ValueError(f"low-input unitary must be 1..3, got {low}")
    return x - n + 3 if x > n - 3 else low


def alice_answer_odd(n: int, x_a: int, a1: int, a2: int) -> tuple:
    if x_a <= n - 3:
        return (1,) * (n - 3) + (0, 0, 0) if x_a == 1 else (0,) * n
    return (0,) * (n - 3) + (a1, a2, a1 ^ a2)


def bob_answer_odd(n: int, x_b: int, b1: int, b2: int) -> tuple:
    if x_b <= n - 3:
        return (1,) + (0,) * (n - 1)
    return (0,) * (n - 3) + (b1, b2, b1 ^ b2 ^ 1)


def quantum_round_odd(n: int, x_a: int, x_b: int, outcome) -> MagicAnswer:
    """Answers for one round given the measured outcome (a1, a2, b1, b2)."""
    MagicInput(n, x_a, x_b)
    a1, a2, b1, b2 = outcome
    return MagicAnswer(alice_answer_odd(n, x_a, a1, a2), bob_answer_odd(n, x_b, b1, b2))


def quantum_strategy_odd(n: int) -> core.Strategy:
    return core.Strategy(
        alice=lambda x, view: alice_answer_odd(n, x, *view),
        bob=lambda y, view: bob_answer_odd(n, y, *view),
    )


def quantum_resource_odd(n: int, low_alice: int = 1, low_bob: int = 1, alice_ops=None, bob_ops=None):
    return _quantum_resource(
        lambda x: unitary_index(n, x, low_alice), lambda y: unitary_index(n, y, low_bob), alice_ops, bob_ops
    )


def quantum_verify_odd(n: int, low_alice: int = 1, low_bob: int = 1, alice_ops=None, bob_ops=None
                       ) -> core.VerificationReport:
    check_size(n)
    if n < 5:
        raise ValueError("quantum_verify_odd needs n >= 5; use quantum_verify_n3 for n = 3")
    params = {"n": n, "strategy": "quantum", "support_threshold": SUPPORT_THRESHOLD,
              "low_alice": low_alice, "low_bob": low_bob}
    return core.verify_exhaustive(
        magic_game_spec(n), quantum_strategy_odd(n),
        quantum_resource_odd(n, low_alice, low_bob, alice_ops, bob_ops), params,
    )


def single_sign_mutations():
    """Yield (party, index, row, col, alice_ops, bob_ops) for every one-entry sign flip."""
    for party, table in (("alice", _U), ("bob", _V)):
        for idx in sorted(table):
            for r, c in itertools.product(range(4), range(4)):
                if table[idx][r, c] == 0:
                    continue
                a_ops, b_ops = default_unitaries()
                target = a_ops if party == "alice" else b_ops
                target[idx][r, c] *= -1
                yield party, idx, r, c, a_ops, b_ops
