"""Representation tuples of surface groups into finite groups.

A tuple ``(A_1, B_1, ..., A_g, B_g)`` of group indices is a homomorphism
exactly when ``[A_1, B_1] ... [A_g, B_g]`` is the identity.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from ..algebra.groups import BinaryCover, FiniteGroup
from ..errors import BudgetExceeded, InputError
from .words import Letters, Word

DEFAULT_BUDGET = 60_000_000


def default_budget() -> int:
    raw = os.environ.get("COMPATPANTS_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        return int(raw)
    except ValueError:
        raise InputError("COMPATPANTS_BUDGET must be an integer") from None


@dataclass(frozen=True, eq=False)
class SurfaceTuple:
    group: FiniteGroup
    elements: tuple[int, ...]

    def __post_init__(self) -> None:
        els = tuple(int(x) for x in self.elements)
        object.__setattr__(self, "elements", els)
        if len(els) < 2 or len(els) % 2:
            raise InputError("a surface tuple has an even, positive number of entries")
        if any(not 0 <= x < self.group.order for x in els):
            raise InputError("tuple entry outside the group")
        if relator_value(self.group, els) != self.group.identity:
            raise InputError("tuple does not satisfy the surface relator")

    @property
    def genus(self) -> int:
        return len(self.elements) // 2

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SurfaceTuple) and other.group is self.group and other.elements == self.elements

    def __hash__(self) -> int:
        return hash(self.elements)

    def names(self) -> list[str]:
        return [self.group.name_of(x) for x in self.elements]

    def to_json(self) -> dict:
        return {
            "schema": "compatpants.rep/1",
            "genus": self.genus,
            "group": {"kind": self.group.kind, "n": self.group.n},
            "elements": list(self.elements),
            "names": self.names(),
        }


def relator_value(group: FiniteGroup, elems: Sequence[int]) -> int:
    acc = group.identity
    for i in range(0, len(elems), 2):
        acc = group.mul(acc, group.commutator(elems[i], elems[i + 1]))
    return acc


def evaluate_letters(group: FiniteGroup, elems: Sequence[int], w: Letters) -> int:
    t, inv = group.table, group.inverse
    acc = group.identity
    for x in w:
        v = elems[abs(x) - 1]
        acc = int(t[acc, v if x > 0 else inv[v]])
    return acc


def evaluate_word(t: SurfaceTuple, w: Word | Letters) -> int:
    letters = w.letters if isinstance(w, Word) else tuple(w)
    if any(abs(x) > len(t.elements) for x in letters):
        raise InputError("word uses a generator beyond the genus")
    return evaluate_letters(t.group, t.elements, letters)


def evaluate_batch(group: FiniteGroup, tuples: np.ndarray, w: Letters) -> np.ndarray:
    """Evaluate ``w`` on every row of an ``(k, 2g)`` array of tuples."""
    t, inv = group.table, group.inverse
    acc = np.full(tuples.shape[0], group.identity, dtype=np.int64)
    for x in w:
        col = tuples[:, abs(x) - 1]
        acc = t[acc, col if x > 0 else inv[col]]
    return acc


# enumeration -------------------------------------------------------------------

def commutator_buckets(group: FiniteGroup) -> list[np.ndarray]:
    """For each element ``z``, the pairs ``(x, y)`` with ``[x, y] = z``, sorted."""
    key = "comm_buckets"
    if key not in group._cache:
        k = group.comm_table
        xs, ys = np.meshgrid(np.arange(group.order), np.arange(group.order), indexing="ij")
        flat = k.ravel()
        order = np.argsort(flat, kind="stable")
        pairs = np.stack([xs.ravel()[order], ys.ravel()[order]], axis=1)
        cuts = np.searchsorted(flat[order], np.arange(group.order + 1))
        group._cache[key] = [pairs[cuts[z]:cuts[z + 1]] for z in range(group.order)]
    return group._cache[key]


def count_homs(group: FiniteGroup, g: int) -> int:
    """Number of homomorphisms via a convolution over commutator values."""
    if g < 1:
        raise InputError("genus must be positive")
    n = np.array([len(p) for p in commutator_buckets(group)], dtype=object)
    vec = [0] * group.order
    vec[group.identity] = 1
    t = group.table
    for _ in range(g):
        nxt = [0] * group.order
        for h, c in enumerate(vec):
            if c:
                for z in range(group.order):
                    if n[z]:
                        nxt[int(t[h, z])] += c * n[z]
        vec = nxt
    return int(vec[group.identity])


def check_budget(group: FiniteGroup, g: int, budget: int | None) -> None:
    cap = default_budget() if budget is None else budget
    raw = group.order ** (2 * g)
    if raw > cap:
        raise BudgetExceeded(f"|G|^(2g) = {raw} exceeds the budget {cap}")


def iter_hom_blocks(group: FiniteGroup, g: int, budget: int | None = None) -> Iterator[np.ndarray]:
    """Yield arrays of homomorphism tuples; together they list each exactly once.

    Handles ``1..g-1`` range over all pairs in lexicographic order, the last
    handle is read from the commutator bucket of the inverse prefix.
    """
    if g < 1:
        raise InputError("genus must be positive")
    check_budget(group, g, budget)
    buckets = commutator_buckets(group)
    t, inv, k = group.table, group.inverse, group.comm_table
    n = group.order
    if g == 1:
        yield buckets[group.identity].copy()
        return
    # prefixes of g-1 handles, grouped by their relator value
    prefixes = np.zeros((1, 0), dtype=np.int64)
    values = np.array([group.identity], dtype=np.int64)
    pair_x = np.repeat(np.arange(n), n)
    pair_y = np.tile(np.arange(n), n)
    pair_c = k[pair_x, pair_y]
    for _ in range(g - 1):
        rows = np.repeat(prefixes, n * n, axis=0)
        new = np.stack([np.tile(pair_x, len(prefixes)), np.tile(pair_y, len(prefixes))], axis=1)
        values = t[np.repeat(values, n * n), np.tile(pair_c, len(prefixes))]
        prefixes = np.concatenate([rows, new], axis=1)
    for z in range(n):
        sel = prefixes[values == z]
        last = buckets[int(inv[z])]
        if len(sel) == 0 or len(last) == 0:
            continue
        block = np.concatenate([np.repeat(sel, len(last), axis=0), np.tile(last, (len(sel), 1))], axis=1)
        yield block


def enumerate_homs(group: FiniteGroup, g: int, budget: int | None = None) -> np.ndarray:
    """All homomorphism tuples as a lexicographically sorted ``(count, 2g)`` array."""
    blocks = list(iter_hom_blocks(group, g, budget))
    arr = np.concatenate(blocks, axis=0) if blocks else np.zeros((0, 2 * g), dtype=np.int64)
    order = np.lexsort(arr.T[::-1])
    return arr[order]


def subgroup_generated(group: FiniteGroup, elems: Iterable[int]) -> frozenset[int]:
    """Closure with a join cache keyed by (subgroup, element)."""
    cache = group._cache.setdefault("joins", {})
    current = frozenset([group.identity])
    for x in elems:
        x = int(x)
        if x in current:
            continue
        key = (current, x)
        hit = cache.get(key)
        if hit is None:
            hit = group.closure(list(current) + [x])
            cache[key] = hit
        current = hit
    return current


def is_epi(t: SurfaceTuple | Sequence[int], group: FiniteGroup | None = None) -> bool:
    if isinstance(t, SurfaceTuple):
        group, elems = t.group, t.elements
    else:
        if group is None:
            raise InputError("a group is required for a bare tuple")
        elems = tuple(int(x) for x in t)
    return len(subgroup_generated(group, elems)) == group.order


def enumerate_epis(group: FiniteGroup, g: int, budget: int | None = None) -> np.ndarray:
    homs = enumerate_homs(group, g, budget)
    mask = np.fromiter((is_epi(row, group) for row in homs), dtype=bool, count=len(homs))
    return homs[mask]


# lifting -------------------------------------------------------------------------

def relator_lift_sign(t: SurfaceTuple | Sequence[int], cover: BinaryCover) -> int:
    """Sign of the relator evaluated on arbitrary lifts of the entries."""
    elems = t.elements if isinstance(t, SurfaceTuple) else tuple(int(x) for x in t)
    if isinstance(t, SurfaceTuple) and t.group is not cover.base:
        raise InputError("tuple does not take values in the base of the cover")
    lifted = [int(cover.lift[x]) for x in elems]
    return cover.sign(relator_value(cover.cover, lifted))


def relator_lift_signs(tuples: np.ndarray, cover: BinaryCover) -> np.ndarray:
    """Vectorized ``relator_lift_sign`` over the rows of ``tuples``."""
    h = cover.cover
    lifted = cover.lift[tuples]
    t, k = h.table, h.comm_table
    acc = np.full(len(tuples), h.identity, dtype=np.int64)
    for i in range(0, tuples.shape[1], 2):
        acc = t[acc, k[lifted[:, i], lifted[:, i + 1]]]
    out = np.where(acc == h.identity, 1, np.where(acc == cover.z, -1, 0))
    if np.any(out == 0):
        raise AssertionError("lifted relator is not central")
    return out
