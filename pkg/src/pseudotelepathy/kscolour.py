"""Kochen-Specker instances: integer vectors grouped into orthogonal bases.

A colouring gives each vector one bit; it is valid when every basis has
exactly one member set to 1. All arithmetic is exact integer arithmetic, and
vectors are identified by exact component equality (v and -v are distinct).
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from importlib import resources
from pathlib import Path

import numpy as np

EXHAUSTIVE_LIMIT = 30

# The nine bases of the 18-vector set in R^4, one row per equation, in printed order.
CABELLO18_BASES = (
    ((0, 0, 0, 1), (0, 0, 1, 0), (1, 1, 0, 0), (1, -1, 0, 0)),
    ((0, 0, 0, 1), (0, 1, 0, 0), (1, 0, 1, 0), (1, 0, -1, 0)),
    ((1, -1, 1, -1), (1, -1, -1, 1), (1, 1, 0, 0), (0, 0, 1, 1)),
    ((1, -1, 1, -1), (1, 1, 1, 1), (1, 0, -1, 0), (0, 1, 0, -1)),
    ((0, 0, 1, 0), (0, 1, 0, 0), (1, 0, 0, 1), (1, 0, 0, -1)),
    ((1, -1, -1, 1), (1, 1, 1, 1), (1, 0, 0, -1), (0, 1, -1, 0)),
    ((1, 1, -1, 1), (1, 1, 1, -1), (1, -1, 0, 0), (0, 0, 1, 1)),
    ((1, 1, -1, 1), (-1, 1, 1, 1), (1, 0, 1, 0), (0, 1, 0, -1)),
    ((1, 1, 1, -1), (-1, 1, 1, 1), (1, 0, 0, 1), (0, 1, -1, 0)),
)


class KSSetError(ValueError):
    """Invalid KS-set data. ``kind`` tells the failure classes apart."""

    def __init__(self, kind: str, message: str):
        super().__init__(f"{kind}: {message}")
        self.kind = kind


def dot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


@dataclass(frozen=True)
class KSSet:
    dimension: int
    vectors: tuple
    bases: tuple

    def __post_init__(self):
        object.__setattr__(self, "vectors", tuple(tuple(v) for v in self.vectors))
        object.__setattr__(self, "bases", tuple(tuple(b) for b in self.bases))
        self._validate()

    def _validate(self):
        d = self.dimension
        if not isinstance(d, int) or isinstance(d, bool) or d < 3:
            raise KSSetError("dimension", f"dimension must be an integer >= 3, got {d!r}")
        seen = {}
        for i, v in enumerate(self.vectors):
            if not all(isinstance(c, int) and not isinstance(c, bool) for c in v):
                raise KSSetError("format", f"vectors[{i}] has non-integer components {v!r}")
            if len(v) != d:
                raise KSSetError("dimension", f"vectors[{i}] has {len(v)} components, dimension is {d}")
            if not any(v):
                raise KSSetError("zero-vector", f"vectors[{i}] is the zero vector")
            if v in seen:
                raise KSSetError("duplicate", f"vectors[{i}] duplicates vectors[{seen[v]}] {v}")
            seen[v] = i
        used = set()
        for j, basis in enumerate(self.bases):
            where = f"bases[{j}] (S{j + 1})"
            if len(basis) != d:
                raise KSSetError("arity", f"{where} lists {len(basis)} vectors, dimension is {d}")
            for idx in basis:
                if not isinstance(idx, int) or isinstance(idx, bool) or not 0 <= idx < len(self.vectors):
                    raise KSSetError("dangling", f"{where} refers to missing vector index {idx!r}")
            if len(set(basis)) != len(basis):
                raise KSSetError("repeated-member", f"{where} repeats a vector")
            for p, q in itertools.combinations(basis, 2):
                if dot(self.vectors[p], self.vectors[q]) != 0:
                    raise KSSetError(
                        "orthogonality",
                        f"{where} is not orthogonal: {self.vectors[p]} . {self.vectors[q]} != 0",
                    )
            used.update(basis)
        unused = sorted(set(range(len(self.vectors))) - used)
        if unused:
            raise KSSetError("unreferenced", f"vectors {unused} belong to no basis")

    @property
    def n(self) -> int:
        return len(self.vectors)

    @property
    def r(self) -> int:
        return len(self.bases)

    @cached_property
    def _index(self) -> dict:
        return {v: i for i, v in enumerate(self.vectors)}

    def index_of(self, vector) -> int:
        try:
            return self._index[tuple(vector)]
        except KeyError:
            raise KeyError(f"vector {tuple(vector)} is not in the set") from None

    @cached_property
    def occurrences(self) -> tuple:
        """For each vector id, its (basis index, position) occurrences, both 0-based."""
        occ = [[] for _ in self.vectors]
        for j, basis in enumerate(self.bases):
            for pos, idx in enumerate(basis):
                occ[idx].append((j, pos))
        return tuple(tuple(o) for o in occ)

    def permuted(self, order) -> "KSSet":
        """Same vectors with the bases listed in ``order`` (0-based basis indices)."""
        order = list(order)
        if sorted(order) != list(range(self.r)):
            raise KSSetError("permutation", f"{order} is not a permutation of 0..{self.r - 1}")
        return KSSet(self.dimension, self.vectors, [self.bases[j] for j in order])

    def to_document(self) -> dict:
        return {
            "dimension": self.dimension,
            "vectors": [list(v) for v in self.vectors],
            "bases": [list(b) for b in self.bases],
        }

    @classmethod
    def from_vector_bases(cls, dimension, bases) -> "KSSet":
        """Build from bases written out as vectors; ids follow first appearance."""
        vectors, index, ids = [], {}, []
        for basis in bases:
            row = []
            for v in basis:
                v = tuple(v)
                if v not in index:
                    index[v] = len(vectors)
                    vectors.append(v)
                row.append(index[v])
            ids.append(row)
        return cls(dimension, vectors, ids)


def builtin_cabello18() -> KSSet:
    return KSSet.from_vector_bases(4, CABELLO18_BASES)


def load_ks_set(document) -> KSSet:
    """Validate a KS-set document: ``{"dimension", "vectors", "bases"}``.

    ``document`` may be a mapping, a JSON string, or a path to a JSON file.
    """
    if isinstance(document, Path) or (isinstance(document, str) and not document.lstrip().startswith("{")):
        document = Path(document).read_text(encoding="utf-8")
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise KSSetError("format", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(document, dict):
        raise KSSetError("format", "document must be a JSON object")
    missing = [k for k in ("dimension", "vectors", "bases") if k not in document]
    if missing:
        raise KSSetError("format", f"missing keys {missing}")
    for key in ("vectors", "bases"):
        if not isinstance(document[key], list) or not all(isinstance(item, list) for item in document[key]):
            raise KSSetError("format", f"'{key}' must be a list of lists")
    return KSSet(document["dimension"], document["vectors"], document["bases"])


def bundled_set_path(name: str = "cabello18.json") -> Path:
    return Path(str(resources.files("pseudotelepathy") / "data" / name))


# ---------------------------------------------------------------------------
# exact-one-per-basis search over abstract variables
# ---------------------------------------------------------------------------


def _solutions(bases, nvars, fixed=None):
    """Yield every 0/1 assignment with exactly one 1 per basis.

    Bases are visited in order; within a basis the value-1 member is tried in
    position order, so the first solution yielded is the lexicographically
    first witness. Variables outside every basis stay at -1.
    """
    values = [-1] * nvars
    for var, bit in (fixed or {}).items():
        values[var] = bit
    touching = [[] for _ in range(nvars)]
    for j, basis in enumerate(bases):
        for var in basis:
            touching[var].append(j)

    def consistent(changed):
        for var in changed:
            for j in touching[var]:
                ones = free = 0
                for w in bases[j]:
                    if values[w] == 1:
                        ones += 1
                    elif values[w] == -1:
                        free += 1
                if ones > 1 or (ones == 0 and free == 0):
                    return False
        return True

    if fixed and not consistent(list(fixed)):
        return

    def rec(i):
        if i == len(bases):
            yield tuple(values)
            return
        basis = bases[i]
        free = [w for w in basis if values[w] == -1]
        if any(values[w] == 1 for w in basis):
            choices = [None]
        else:
            choices = free
        for choice in choices:
            for w in free:
                values[w] = 1 if w == choice else 0
            if consistent(free):
                yield from rec(i + 1)
            for w in free:
                values[w] = -1

    yield from rec(0)


def _first_solution(bases, nvars, fixed=None):
    return next(_solutions(bases, nvars, fixed), None)


def _exhaustive_count(bases, nvars, chunk=1 << 20) -> int:
    if nvars > EXHAUSTIVE_LIMIT:
        raise ValueError(f"{nvars} variables exceed the exhaustive limit of {EXHAUSTIVE_LIMIT}; use backtracking")
    total = 0
    one = np.uint64(1)
    for start in range(0, 1 << nvars, chunk):
        x = np.arange(start, min(start + chunk, 1 << nvars), dtype=np.uint64)
        ok = np.ones(x.shape, dtype=bool)
        for basis in bases:
            s = np.zeros(x.shape, dtype=np.uint64)
            for var in basis:
                s += (x >> np.uint64(var)) & one
            ok &= s == 1
        total += int(np.count_nonzero(ok))
    return total


def _count(bases, nvars, mode):
    if mode == "exhaustive":
        return _exhaustive_count(bases, nvars)
    if mode == "backtrack":
        return sum(1 for _ in _solutions(bases, nvars))
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# colourings
# ---------------------------------------------------------------------------


def is_valid_colouring(ks: KSSet, colouring: dict, basis_indices=None) -> bool:
    """Exactly one value-1 member in each listed basis (0-based; default all)."""
    indices = range(ks.r) if basis_indices is None else basis_indices
    return all(sum(colouring[v] for v in ks.bases[j]) == 1 for j in indices)


def parity_witness(ks: KSSet) -> bool:
    """Odd basis count with every vector used an even number of times.

    Summing the per-basis constraints then gives even = odd, so no valid
    colouring exists.
    """
    return ks.r % 2 == 1 and all(len(occ) % 2 == 0 for occ in ks.occurrences)


def count_valid_colourings(ks: KSSet, mode: str = "exhaustive") -> int:
    """Number of non-contextual colourings; ``mode`` is exhaustive or backtrack."""
    return _count(ks.bases, ks.n, mode)


def iter_valid_colourings(ks: KSSet):
    for sol in _solutions(ks.bases, ks.n):
        yield dict(enumerate(sol))


def _split_variables(ks: KSSet, vid: int):
    """Bases over variables where every occurrence of ``vid`` after the first is a fresh variable."""
    extra = {}
    bases = []
    for j, basis in enumerate(ks.bases):
        row = []
        for pos, idx in enumerate(basis):
            if idx == vid and (j, pos) != ks.occurrences[vid][0]:
                extra[j] = ks.n + len(extra)
                row.append(extra[j])
            else:
                row.append(idx)
        bases.append(row)
    context_var = {ks.occurrences[vid][0][0]: vid, **extra}
    return bases, ks.n + len(extra), context_var


def contextual_witness(ks: KSSet, vid: int):
    """A valid assignment in which only ``vid`` may take a value per context.

    Returns ``(values, context_values)`` where ``values`` covers every other
    vector and ``context_values`` maps each basis containing ``vid`` to its
    value there; ``None`` when no such assignment exists.
    """
    bases, nvars, context_var = _split_variables(ks, vid)
    sol = _first_solution(bases, nvars)
    if sol is None:
        return None
    values = {i: sol[i] for i in range(ks.n) if i != vid}
    return values, {j: sol[var] for j, var in sorted(context_var.items())}


def contextual_repair_search(ks: KSSet, mode: str = "backtrack") -> list[int]:
    """Vector ids that, given one value per context, make the whole set colourable.

    Only vectors occurring in two or more bases are candidates.
    """
    found = []
    for vid, occ in enumerate(ks.occurrences):
        if len(occ) < 2:
            continue
        bases, nvars, _ = _split_variables(ks, vid)
        if mode == "exhaustive":
            ok = _exhaustive_count(bases, nvars) > 0
        elif mode == "backtrack":
            ok = _first_solution(bases, nvars) is not None
        else:
            raise ValueError(f"unknown mode {mode!r}")
        if ok:
            found.append(vid)
    return found


def colour_prefix_maximal(ks: KSSet) -> tuple[int, dict]:
    """Longest colourable prefix of the basis list and a witness colouring for it.

    The witness covers exactly the vectors occurring in the first ``p`` bases.
    """
    p, witness = 0, ()
    while p < ks.r:
        sol = _first_solution(ks.bases[: p + 1], ks.n)
        if sol is None:
            break
        p, witness = p + 1, sol
    return p, {i: bit for i, bit in enumerate(witness) if bit != -1}
