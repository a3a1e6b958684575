"""Two-party game framework shared by every game in the package.

A game is a promise over input pairs plus a judge that names the winning
conditions a given answer pair violates. A strategy is a pair of local
functions, each seeing only its own input and its own view of a shared
resource (an NL-box output, a measurement outcome, ...). The resource is
described by a branch enumerator: for an input pair it lists every branch
that can occur, with its probability.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

import numpy as np

from . import __version__

# tolerance on the total weight of float-valued (quantum) resources
FLOAT_WEIGHT_TOL = 1e-9


class ResourceError(ValueError):
    """A resource whose branch weights are not a probability distribution."""


@dataclass(frozen=True)
class GameSpec:
    name: str
    alice_inputs: tuple
    bob_inputs: tuple
    promise: Callable[[Any, Any], bool]
    # returns the violated-condition tags; an empty tuple means the round is won
    judge: Callable[[Any, Any, Any, Any], tuple]

    def win(self, x, y, a, b) -> bool:
        return not self.judge(x, y, a, b)

    def promise_pairs(self) -> list[tuple]:
        return [(x, y) for x in self.alice_inputs for y in self.bob_inputs if self.promise(x, y)]


@dataclass(frozen=True)
class ResourceBranch:
    label: int
    weight: Fraction | float
    alice_view: Any
    bob_view: Any


@dataclass(frozen=True)
class Strategy:
    """Local answer functions: ``alice(x, alice_view)`` and ``bob(y, bob_view)``."""

    alice: Callable[[Any, Any], Any]
    bob: Callable[[Any, Any], Any]


Resource = Callable[[Any, Any], Sequence[ResourceBranch]]


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Fraction):
        return str(value)
    return value


@dataclass
class VerificationReport:
    game: str
    parameters: dict = field(default_factory=dict)
    cases_total: int = 0
    cases_won: int = 0
    failures: list = field(default_factory=list)

    def __post_init__(self):
        self.parameters = _jsonable(self.parameters)
        self.failures = [_jsonable(f) for f in self.failures]

    @property
    def all_won(self) -> bool:
        return self.cases_won == self.cases_total

    def add_failure(self, inputs, branch, outputs, violated):
        self.failures.append(
            _jsonable({"inputs": inputs, "branch": branch, "outputs": outputs, "violated": list(violated)})
        )

    def to_document(self) -> dict:
        return {
            "game": self.game,
            "parameters": self.parameters,
            "cases_total": self.cases_total,
            "cases_won": self.cases_won,
            "failures": self.failures,
            "tool_version": __version__,
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_document(), indent=indent)

    @classmethod
    def from_document(cls, doc: dict) -> "VerificationReport":
        report = cls(
            game=doc["game"],
            parameters=doc.get("parameters", {}),
            cases_total=int(doc["cases_total"]),
            cases_won=int(doc["cases_won"]),
            failures=list(doc.get("failures", [])),
        )
        if len(report.failures) != report.cases_total - report.cases_won:
            raise ValueError("failures list does not match cases_total - cases_won")
        return report

    @classmethod
    def from_json(cls, text: str) -> "VerificationReport":
        return cls.from_document(json.loads(text))


def check_weights(branches: Sequence[ResourceBranch], where=None) -> None:
    total = sum(b.weight for b in branches)
    if all(isinstance(b.weight, (int, Fraction)) for b in branches):
        ok = total == 1
    else:
        ok = abs(float(total) - 1.0) <= FLOAT_WEIGHT_TOL
    if not ok:
        raise ResourceError(f"branch weights sum to {total} (expected 1) for inputs {where!r}")


def verify_exhaustive(game: GameSpec, strategy: Strategy, resource: Resource,
                      parameters: dict | None = None) -> VerificationReport:
    """Play every promise pair against every branch of the resource.

    Cases are visited in input order, then by branch label, so the report is
    byte-stable across runs.
    """
    report = VerificationReport(game=game.name, parameters=parameters or {})
    for x, y in game.promise_pairs():
        branches = sorted(resource(x, y), key=lambda br: br.label)
        check_weights(branches, where=(x, y))
        for br in branches:
            a = strategy.alice(x, br.alice_view)
            b = strategy.bob(y, br.bob_view)
            report.cases_total += 1
            violated = game.judge(x, y, a, b)
            if violated:
                report.add_failure(
                    [x, y], {"label": br.label, "alice": br.alice_view, "bob": br.bob_view}, [a, b], violated
                )
            else:
                report.cases_won += 1
    return report


@dataclass(frozen=True)
class SimulationStats:
    rounds: int
    wins: int

    @property
    def win_rate(self) -> float:
        return self.wins / self.rounds

    def to_document(self) -> dict:
        return {"rounds": self.rounds, "wins": self.wins, "win_rate": self.win_rate}


def simulate(game: GameSpec, strategy: Strategy, resource: Resource, rounds: int, seed: int) -> SimulationStats:
    """Play ``rounds`` random rounds: inputs uniform over the promise, branches by weight."""
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    rng = np.random.default_rng(seed)
    pairs = game.promise_pairs()
    picks = rng.integers(len(pairs), size=rounds)
    draws = rng.random(rounds)
    cache: dict = {}
    wins = 0
    for i, u in zip(picks, draws):
        x, y = pairs[i]
        if i not in cache:
            branches = sorted(resource(x, y), key=lambda br: br.label)
            check_weights(branches, where=(x, y))
            cumulative = np.cumsum([float(b.weight) for b in branches])
            cache[i] = (branches, cumulative / cumulative[-1])
        branches, cumulative = cache[i]
        br = branches[min(int(np.searchsorted(cumulative, u, side="right")), len(branches) - 1)]
        if game.win(x, y, strategy.alice(x, br.alice_view), strategy.bob(y, br.bob_view)):
            wins += 1
    return SimulationStats(rounds=rounds, wins=wins)
