"""Canonical forms under conjugation and breadth-first orbit search.

Tuples are handled as rows of integer arrays and encoded as a single
integer in base ``|G|``; since group indices follow the coefficient order,
the smallest code among all conjugates is the lexicographic minimum.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from ..algebra.groups import FiniteGroup
from ..errors import BudgetExceeded, InputError
from .enumeration import SurfaceTuple, evaluate_batch
from .moves import MCGMove, move_set

Predicate = Callable[[np.ndarray], np.ndarray]  # (k, 2g) tuples -> bool mask


def encode(group: FiniteGroup, tuples: np.ndarray) -> np.ndarray:
    n = group.order
    width = tuples.shape[-1]
    if n ** width >= 2 ** 62:
        raise InputError("tuple too long to encode")
    codes = np.zeros(tuples.shape[:-1], dtype=np.int64)
    for i in range(width):
        codes = codes * n + tuples[..., i]
    return codes


def decode(group: FiniteGroup, codes: np.ndarray, width: int) -> np.ndarray:
    n = group.order
    codes = np.asarray(codes, dtype=np.int64)
    out = np.zeros(codes.shape + (width,), dtype=np.int64)
    for i in range(width - 1, -1, -1):
        out[..., i] = codes % n
        codes = codes // n
    return out


def canonical_codes(group: FiniteGroup, tuples: np.ndarray) -> np.ndarray:
    """Minimal code over all conjugates of each row."""
    tuples = np.atleast_2d(np.asarray(tuples, dtype=np.int64))
    conj = group.conj_table[:, tuples]  # (|G|, k, 2g)
    return encode(group, conj).min(axis=0)


def canonical_form(t: SurfaceTuple) -> SurfaceTuple:
    code = canonical_codes(t.group, np.array([t.elements]))
    return SurfaceTuple(t.group, tuple(int(x) for x in decode(t.group, code, len(t.elements))[0]))


def apply_move_batch(group: FiniteGroup, m: MCGMove, tuples: np.ndarray) -> np.ndarray:
    """Precompose every row with ``m``."""
    cols = [evaluate_batch(group, tuples, m.images[x]) for x in range(1, 2 * m.genus + 1)]
    return np.stack(cols, axis=1)


def apply_move(m: MCGMove, t: SurfaceTuple) -> SurfaceTuple:
    if m.genus != t.genus:
        raise InputError("move and tuple have different genus")
    row = apply_move_batch(t.group, m, np.array([t.elements], dtype=np.int64))[0]
    return SurfaceTuple(t.group, tuple(int(x) for x in row))


def move_table(g: int) -> list[MCGMove]:
    """Forward moves followed by their inverses, in a fixed order."""
    base = list(move_set(g))
    return base + [m.inverse() for m in base]


def replay(group: FiniteGroup, start: Sequence[int], path: Sequence[str], g: int) -> tuple[int, ...]:
    by_name = {m.name: m for m in move_table(g)}
    cur = np.array([start], dtype=np.int64)
    for name in path:
        cur = apply_move_batch(group, by_name[name], cur)
    return tuple(int(x) for x in cur[0])


@dataclass
class OrbitResult:
    orbit_size: int                       # canonical forms in the orbit
    tuple_count: int                      # raw tuples represented
    representative_count: int             # canonical forms satisfying the predicate
    witness: list[str] | None             # shortest move sequence from start
    witness_tuple: tuple[int, ...] | None
    codes: np.ndarray = field(repr=False, default_factory=lambda: np.zeros(0, dtype=np.int64))

    def to_json(self) -> dict:
        return {
            "orbit_size": self.orbit_size,
            "tuple_count": self.tuple_count,
            "representative_count": self.representative_count,
            "witness": self.witness,
            "witness_tuple": list(self.witness_tuple) if self.witness_tuple is not None else None,
        }


def conjugacy_class_sizes(group: FiniteGroup, codes: np.ndarray, width: int) -> np.ndarray:
    """Number of distinct conjugates of each canonical tuple."""
    tuples = decode(group, codes, width)
    conj = encode(group, group.conj_table[:, tuples])  # (|G|, k)
    srt = np.sort(conj, axis=0)
    return 1 + np.count_nonzero(np.diff(srt, axis=0), axis=0)


def orbit_bfs(
    group: FiniteGroup,
    start: Sequence[int],
    moves: Sequence[MCGMove] | None = None,
    predicate: Predicate | None = None,
    budget: int = 2_000_000,
) -> OrbitResult:
    """Explore the orbit of ``start`` under moves and conjugation.

    Raw tuples are propagated so that the reported witness replays exactly
    from ``start``; deduplication is by canonical code.
    """
    width = len(start)
    g = width // 2
    moves = list(moves) if moves is not None else move_table(g)
    root = np.array([start], dtype=np.int64)
    root_code = int(canonical_codes(group, root)[0])
    parent: dict[int, tuple[int, int]] = {root_code: (-1, -1)}
    raw: dict[int, np.ndarray] = {root_code: root[0]}
    frontier_codes = [root_code]
    hits: list[int] = []
    order = [root_code]
    while frontier_codes:
        front = np.stack([raw[c] for c in frontier_codes])
        if predicate is not None:
            mask = predicate(front)
            hits += [c for c, ok in zip(frontier_codes, mask) if ok]
        nxt: list[int] = []
        for mi, m in enumerate(moves):
            imgs = apply_move_batch(group, m, front)
            codes = canonical_codes(group, imgs)
            for k, c in enumerate(codes.tolist()):
                if c not in parent:
                    parent[c] = (frontier_codes[k], mi)
                    raw[c] = imgs[k]
                    nxt.append(c)
                    order.append(c)
                    if len(parent) > budget:
                        raise BudgetExceeded(f"orbit exceeds {budget} canonical forms")
        frontier_codes = nxt
    witness = witness_tuple = None
    if hits:
        target = hits[0]
        path = []
        c = target
        while parent[c][0] != -1:
            p, mi = parent[c]
            path.append(moves[mi].name)
            c = p
        witness = path[::-1]
        witness_tuple = tuple(int(x) for x in raw[target])
    codes = np.array(sorted(order), dtype=np.int64)
    sizes = conjugacy_class_sizes(group, codes, width)
    return OrbitResult(len(order), int(sizes.sum()), len(hits), witness, witness_tuple, codes)


@dataclass
class OrbitPartition:
    orbits: list[np.ndarray]          # canonical codes per orbit, sorted
    sizes: list[int]                  # raw tuples per orbit

    @property
    def count(self) -> int:
        return len(self.orbits)


def orbit_partition(group: FiniteGroup, tuples: np.ndarray, budget: int = 2_000_000) -> OrbitPartition:
    """Split a move-invariant set of tuples into orbits."""
    if len(tuples) == 0:
        return OrbitPartition([], [])
    width = tuples.shape[1]
    codes = np.unique(canonical_codes(group, tuples))
    remaining = set(codes.tolist())
    orbits, sizes = [], []
    while remaining:
        first = min(remaining)
        start = decode(group, np.array(first), width)
        res = orbit_bfs(group, tuple(int(x) for x in start), budget=budget)
        found = set(res.codes.tolist())
        if not found <= remaining:
            raise AssertionError("orbit leaves the given tuple set")
        remaining -= found
        orbits.append(res.codes)
        sizes.append(res.tuple_count)
    return OrbitPartition(orbits, sizes)


@dataclass
class WitnessMap:
    """Shortest move sequences from each canonical class into a target set."""

    distance: dict[int, int]
    step: dict[int, tuple[int, int]]   # code -> (move index, next code)
    raw: dict[int, np.ndarray]
    moves: list[MCGMove]

    def path(self, code: int) -> tuple[tuple[int, ...], list[str]]:
        """Representative tuple for ``code`` and the moves leading into the target."""
        start = tuple(int(x) for x in self.raw[code])
        names = []
        c = code
        while self.distance[c] > 0:
            mi, c = self.step[c]
            names.append(self.moves[mi].name)
        return start, names


def witness_map(group: FiniteGroup, tuples: np.ndarray, predicate: Predicate,
                budget: int = 2_000_000) -> WitnessMap:
    """Multi-source backwards search from the tuples satisfying ``predicate``.

    A class ``u`` is one step from ``v`` when ``m . u_raw = v_raw`` for a
    move ``m``; the stored representatives make every path replay exactly.
    """
    width = tuples.shape[1]
    g = width // 2
    moves = move_table(g)
    nm = len(moves) // 2
    inverse_index = [(i + nm) % len(moves) for i in range(len(moves))]
    mask = predicate(tuples)
    targets = tuples[mask]
    codes = canonical_codes(group, targets) if len(targets) else np.zeros(0, dtype=np.int64)
    distance: dict[int, int] = {}
    raw: dict[int, np.ndarray] = {}
    step: dict[int, tuple[int, int]] = {}
    frontier = []
    for c, row in zip(codes.tolist(), targets):
        if c not in distance:
            distance[c] = 0
            raw[c] = row
            frontier.append(c)
    dist = 0
    while frontier:
        dist += 1
        front = np.stack([raw[c] for c in frontier])
        nxt = []
        for mi, m in enumerate(moves):
            # u = m^-1 . v, so that m . u = v
            imgs = apply_move_batch(group, moves[inverse_index[mi]], front)
            cc = canonical_codes(group, imgs)
            for k, c in enumerate(cc.tolist()):
                if c not in distance:
                    distance[c] = dist
                    raw[c] = imgs[k]
                    step[c] = (mi, frontier[k])
                    nxt.append(c)
                    if len(distance) > budget:
                        raise BudgetExceeded(f"search exceeds {budget} canonical forms")
        frontier = nxt
    return WitnessMap(distance, step, raw, moves)
