"""Finite subgroups of SU(2) and SO(3) realized by exact quaternions.

Groups are built by closing a generating set under right multiplication.
Only ``|G| * |gens|`` exact products are needed: the full multiplication
table is then filled in by composing along the spanning tree of the Cayley
graph.  All later work happens on integer element indices.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from ..errors import InputError, UnsupportedGroup
from .cyclotomic import CyclotomicNumber, group_field_order
from .quaternion import Quaternion, RotationElement

BASE_KINDS = ("D", "A4", "S4", "A5", "Q8")
EXPECTED_ORDER = {"A4": 12, "S4": 24, "A5": 60, "Q8": 8}


@dataclass(eq=False)
class FiniteGroup:
    """A finite group with elements indexed ``0..order-1``.

    ``elements`` holds ``RotationElement`` values for SO(3) realizations and
    ``Quaternion`` values for SU(2) ones; indices follow the lexicographic
    order of the element coefficients.
    """

    kind: str
    n: int | None
    elements: tuple
    table: np.ndarray
    inverse: np.ndarray
    identity: int
    in_su2: bool
    names: dict[str, int] = field(default_factory=dict)
    permutations: dict[int, tuple[int, ...]] | None = None
    _index: dict = field(default_factory=dict, repr=False)
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        self._index = {e: i for i, e in enumerate(self.elements)}

    # basics ------------------------------------------------------------------
    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def label(self) -> str:
        return f"{self.kind}{self.n}" if self.kind in ("D", "2D") else self.kind

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"FiniteGroup({self.label}, order={self.order})"

    def mul(self, x: int, y: int) -> int:
        return int(self.table[x, y])

    def inv(self, x: int) -> int:
        return int(self.inverse[x])

    def product(self, xs: Iterable[int]) -> int:
        acc = self.identity
        for x in xs:
            acc = int(self.table[acc, x])
        return acc

    def power(self, x: int, k: int) -> int:
        if k < 0:
            x, k = self.inv(x), -k
        acc = self.identity
        for _ in range(k):
            acc = int(self.table[acc, x])
        return acc

    def commutator(self, x: int, y: int) -> int:
        """``[x, y] = x y x^-1 y^-1``."""
        t = self.table
        return int(t[t[t[x, y], self.inverse[x]], self.inverse[y]])

    def conjugate(self, h: int, x: int) -> int:
        """``h x h^-1``."""
        return int(self.table[self.table[h, x], self.inverse[h]])

    def element_order(self, x: int) -> int:
        k, acc = 1, x
        while acc != self.identity:
            acc = int(self.table[acc, x])
            k += 1
        return k

    def index_of(self, element) -> int:
        try:
            return self._index[element]
        except KeyError:
            raise InputError("element does not belong to the group") from None

    # derived tables ----------------------------------------------------------
    @property
    def conj_table(self) -> np.ndarray:
        """``C[h, x] = h x h^-1`` as an integer array."""
        if "conj" not in self._cache:
            t = self.table
            self._cache["conj"] = t[t, self.inverse[:, None]]
        return self._cache["conj"]

    @property
    def comm_table(self) -> np.ndarray:
        """``K[x, y] = [x, y]``."""
        if "comm" not in self._cache:
            t, inv = self.table, self.inverse
            xy = t
            self._cache["comm"] = t[t[xy, inv[:, None]], inv[None, :]]
        return self._cache["comm"]

    # subgroup utilities --------------------------------------------------------
    def closure(self, gens: Iterable[int]) -> frozenset[int]:
        gens = [int(g) for g in gens]
        seen = {self.identity}
        queue = deque([self.identity])
        while queue:
            x = queue.popleft()
            for s in gens:
                y = int(self.table[x, s])
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return frozenset(seen)

    def generates(self, gens: Iterable[int]) -> bool:
        return len(self.closure(gens)) == self.order

    def is_central(self, x: int) -> bool:
        return bool(np.all(self.table[x, :] == self.table[:, x]))

    def center(self) -> frozenset[int]:
        return frozenset(x for x in range(self.order) if self.is_central(x))

    def is_abelian(self, gens: Iterable[int] | None = None) -> bool:
        """Whether the subgroup generated by ``gens`` (default: all) is abelian."""
        gs = list(range(self.order)) if gens is None else [int(g) for g in gens]
        return all(self.table[x, y] == self.table[y, x] for i, x in enumerate(gs) for y in gs[i + 1:])

    def conjugacy_classes(self) -> list[frozenset[int]]:
        if "classes" not in self._cache:
            seen: set[int] = set()
            classes = []
            ct = self.conj_table
            for x in range(self.order):
                if x not in seen:
                    cl = frozenset(int(v) for v in ct[:, x])
                    seen |= cl
                    classes.append(cl)
            self._cache["classes"] = classes
        return self._cache["classes"]

    # names -------------------------------------------------------------------
    def element(self, name: str) -> int:
        """Look up an element by label: ``r``, ``sr^2``, ``-I``, ``(12)(34)`` ..."""
        key = name.replace(" ", "").replace("{", "").replace("}", "")
        key = key.replace("−", "-")
        if key in self.names:
            return self.names[key]
        if self.permutations is not None and key.startswith("("):
            perm = parse_cycles(key, len(next(iter(self.permutations.values()))))
            for idx, p in self.permutations.items():
                if p == perm:
                    return idx
        raise InputError(f"unknown element name {name!r} in {self.label}")

    def name_of(self, x: int) -> str:
        if "rev_names" not in self._cache:
            rev: dict[int, str] = {}
            for k, v in self.names.items():
                if v not in rev or (len(k), k) < (len(rev[v]), rev[v]):
                    rev[v] = k
            self._cache["rev_names"] = rev
        return self._cache["rev_names"].get(x, f"#{x}")

    # serialization -----------------------------------------------------------
    def to_json(self) -> dict:
        reps = [e.rep if isinstance(e, RotationElement) else e for e in self.elements]
        return {
            "schema": "compatpants.group/1",
            "kind": self.kind,
            "n": self.n,
            "order": self.order,
            "realization": "SU2" if self.in_su2 else "SO3",
            "cyclotomic_order": reps[0].order,
            "elements": [q.coefficient_strings() for q in reps],
            "names": {k: self.names[k] for k in sorted(self.names)},
        }


def group_from_json(data: dict) -> tuple[FiniteGroup, list[int]]:
    """Rebuild a group from its JSON form.

    Returns the group and the map from positions in the file's element list
    to group indices.  Every listed element must be an actual member and the
    list must be a bijection onto the group.
    """
    try:
        kind, n = data["kind"], data.get("n")
        elems = data["elements"]
        order = int(data["cyclotomic_order"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed group file: {exc}") from None
    base_kind = kind[1:] if kind.startswith("2") else kind
    grp = make_group(base_kind, n)
    if kind.startswith("2"):
        grp = make_cover(grp).cover
    expected = "SU2" if grp.in_su2 else "SO3"
    if data.get("realization", expected) != expected:
        raise InputError("realization tag does not match the group kind")
    if order != group_field_order(base_kind, n):
        raise InputError("unexpected cyclotomic order in group file")
    mapping = []
    for comp in elems:
        try:
            q = Quaternion.from_coefficient_strings(order, comp)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad element coefficients: {exc}") from None
        e = q if grp.in_su2 else RotationElement(q)
        mapping.append(grp.index_of(e))
    if sorted(mapping) != list(range(grp.order)):
        raise InputError("group file does not list each element exactly once")
    for k, v in (data.get("names") or {}).items():
        if not isinstance(v, int) or not 0 <= v < len(mapping) or grp.names.get(k) != mapping[v]:
            raise InputError(f"name {k!r} disagrees with the group realization")
    return grp, mapping


# closure -----------------------------------------------------------------------

def close_under(gens: Sequence, identity, mul: Callable, max_order: int):
    """Close ``gens`` under right multiplication.

    Returns ``(elements, table)`` with ``elements`` sorted by ``sort_key``.
    """
    elems = [identity]
    index: dict[Hashable, int] = {identity: 0}
    right: list[list[int]] = []
    parent: list[tuple[int, int]] = [(-1, -1)]
    i = 0
    while i < len(elems):
        row = []
        for s_idx, s in enumerate(gens):
            y = mul(elems[i], s)
            j = index.get(y)
            if j is None:
                j = len(elems)
                if j >= max_order:
                    raise UnsupportedGroup(f"closure exceeded {max_order} elements")
                index[y] = j
                elems.append(y)
                parent.append((i, s_idx))
            row.append(j)
        right.append(row)
        i += 1
    n = len(elems)
    rt = np.array(right, dtype=np.int64)
    table = np.empty((n, n), dtype=np.int64)
    table[:, 0] = np.arange(n)
    for h in range(1, n):  # parents precede children
        p, s = parent[h]
        table[:, h] = rt[table[:, p], s]
    order = sorted(range(n), key=lambda k: elems[k].sort_key())
    pos = np.empty(n, dtype=np.int64)
    pos[order] = np.arange(n)
    sorted_table = pos[table[np.ix_(order, order)]]
    return [elems[k] for k in order], sorted_table


def _finish(kind, n, elems, table, in_su2, names=None, permutations=None) -> FiniteGroup:
    k = len(elems)
    ident = None
    for i in range(k):
        if np.array_equal(table[i], np.arange(k)):
            ident = i
            break
    assert ident is not None
    inverse = np.argmax(table == ident, axis=1).astype(np.int64)
    return FiniteGroup(kind, n, tuple(elems), table, inverse, ident, in_su2, names or {}, permutations)


# permutation naming ----------------------------------------------------------------

def cycle_string(perm: Sequence[int]) -> str:
    """Cycle notation on points ``1..n`` (``"1"`` for the identity)."""
    n = len(perm)
    seen = [False] * n
    parts = []
    for start in range(n):
        if seen[start] or perm[start] == start:
            seen[start] = True
            continue
        cyc = [start]
        seen[start] = True
        nxt = perm[start]
        while nxt != start:
            cyc.append(nxt)
            seen[nxt] = True
            nxt = perm[nxt]
        parts.append("(" + "".join(str(c + 1) for c in cyc) + ")")
    return "".join(parts) or "1"


def parse_cycles(text: str, n: int) -> tuple[int, ...]:
    """Parse cycle notation composed right to left into a permutation of ``0..n-1``."""
    text = text.replace(" ", "")
    if text in ("", "1", "()"):
        return tuple(range(n))
    if not re.fullmatch(r"(\(\d+\))+", text):
        raise InputError(f"bad cycle notation {text!r}")
    perm = list(range(n))
    for cyc in reversed(re.findall(r"\((\d+)\)", text)):
        pts = [int(c) - 1 for c in cyc]
        if any(p < 0 or p >= n for p in pts) or len(set(pts)) != len(pts):
            raise InputError(f"bad cycle {cyc!r} for degree {n}")
        step = {pts[i]: pts[(i + 1) % len(pts)] for i in range(len(pts))}
        perm = [step.get(perm[i], perm[i]) for i in range(n)]
    return tuple(perm)


def _permutation_action(grp_elems, table, objects: list[frozenset[int]], inverse) -> dict[int, tuple[int, ...]]:
    objects = sorted(objects, key=lambda o: sorted(o))
    label = {o: i for i, o in enumerate(objects)}
    out = {}
    for g in range(len(grp_elems)):
        img = []
        for o in objects:
            moved = frozenset(int(table[table[g, x], inverse[g]]) for x in o)
            img.append(label[moved])
        out[g] = tuple(img)
    return out


def _polyhedral_objects(kind: str, grp: FiniteGroup) -> list[frozenset[int]]:
    """Order-3 subgroups (A4, S4) or Klein four-subgroups (A5)."""
    objs: set[frozenset[int]] = set()
    if kind in ("A4", "S4"):
        for x in range(grp.order):
            if grp.element_order(x) == 3:
                objs.add(grp.closure([x]))
    else:
        invols = [x for x in range(grp.order) if grp.element_order(x) == 2]
        for u in invols:
            for v in invols:
                if u < v and grp.mul(u, v) == grp.mul(v, u):
                    objs.add(grp.closure([u, v]))
    return list(objs)


# constructions ----------------------------------------------------------------------

def _standard_generators(kind: str, n: int | None, order: int) -> list[Quaternion]:
    Q = Quaternion.from_parts
    half = Fraction(1, 2)
    t = Q(order, half, half, half, half)
    if kind == "D":
        c = CyclotomicNumber.cos_pi(order, 1, n)
        s = CyclotomicNumber.sin_pi(order, 1, n)
        return [Q(order, c, 0, 0, s), Q(order, 0, 1, 0, 0)]
    if kind == "Q8":
        return [Q(order, 0, 1, 0, 0), Q(order, 0, 0, 1, 0)]
    if kind == "A4":
        return [Q(order, 0, 0, 0, 1), t]
    if kind == "S4":
        h = CyclotomicNumber.sqrt(order, 2) * half
        return [Q(order, h, 0, 0, h), t]
    if kind == "A5":
        phi = (CyclotomicNumber.sqrt(order, 5) + 1) * half
        return [t, Q(order, phi * half, phi.inverse() * half, half, 0)]
    raise UnsupportedGroup(kind)


def _check_kind(kind: str, n: int | None) -> None:
    if kind not in BASE_KINDS:
        raise UnsupportedGroup(f"unknown group kind {kind!r}")
    if kind == "D":
        if n is None or int(n) < 3:
            raise UnsupportedGroup("dihedral groups need n >= 3")
    elif n is not None:
        raise UnsupportedGroup(f"{kind} takes no parameter")


def make_group(kind: str, n: int | None = None) -> FiniteGroup:
    """Build ``D`` (with ``n``), ``A4``, ``S4``, ``A5`` in SO(3) or ``Q8`` in SU(2).

    ``make_group("D4")`` and ``make_group("D", 4)`` return the same object.
    """
    if kind.startswith("D") and kind != "D":
        try:
            kind, n = "D", int(kind[1:])
        except ValueError:
            raise UnsupportedGroup(f"unknown group {kind!r}") from None
    _check_kind(kind, n)
    return _make_group(kind, int(n) if n is not None else None)


@lru_cache(maxsize=None)
def _make_group(kind: str, n: int | None) -> FiniteGroup:
    order = group_field_order(kind, n)
    gens = _standard_generators(kind, n, order)
    expected = 2 * n if kind == "D" else EXPECTED_ORDER[kind]
    if kind == "Q8":
        elems, table = close_under(gens, Quaternion.one(order), lambda u, v: u * v, 2 * expected)
        in_su2 = True
    else:
        rgens = [RotationElement(q) for q in gens]
        elems, table = close_under(rgens, RotationElement(Quaternion.one(order)), lambda u, v: u * v, 2 * expected)
        in_su2 = False
    if len(elems) != expected:
        raise UnsupportedGroup(f"closure produced {len(elems)} elements, expected {expected}")
    grp = _finish(kind, n, elems, table, in_su2)
    gen_idx = [grp.index_of(q if in_su2 else RotationElement(q)) for q in gens]
    _attach_names(grp, gen_idx)
    return grp


def _attach_names(grp: FiniteGroup, gen_idx: list[int]) -> None:
    names = {"1": grp.identity}
    if grp.kind == "D":
        r, s = gen_idx
        n = grp.n
        for k in range(n):
            rk = grp.power(r, k)
            names[f"r^{k}"] = rk
            names[f"sr^{k}"] = grp.mul(s, rk)
            names[f"r^{k}s"] = grp.mul(rk, s)
        names["r"], names["s"], names["sr"], names["rs"] = r, s, names["sr^1"], names["r^1s"]
        _check_relations_dihedral(grp, r, s)
    elif grp.kind == "Q8":
        i, j = gen_idx
        k = grp.mul(i, j)
        m1 = grp.mul(i, i)
        names.update({"I": i, "J": j, "K": k, "-1": m1,
                      "-I": grp.mul(m1, i), "-J": grp.mul(m1, j), "-K": grp.mul(m1, k)})
        if not (grp.mul(j, j) == m1 == grp.mul(k, k) and grp.mul(m1, m1) == grp.identity):
            raise AssertionError("quaternion relations failed")
    else:
        objs = _polyhedral_objects(grp.kind, grp)
        perms = _permutation_action(grp.elements, grp.table, objs, grp.inverse)
        if len(set(perms.values())) != grp.order:
            raise AssertionError("permutation action is not faithful")
        grp.permutations = perms
        for idx, p in perms.items():
            names[cycle_string(p)] = idx
        names["()"] = grp.identity
    grp.names = names


def _check_relations_dihedral(grp: FiniteGroup, r: int, s: int) -> None:
    n = grp.n
    ok = (grp.power(r, n) == grp.identity and grp.element_order(r) == n
          and grp.mul(s, s) == grp.identity and grp.mul(grp.mul(s, r), grp.mul(s, r)) == grp.identity)
    if not ok:
        raise AssertionError("dihedral relations failed")


# binary covers ---------------------------------------------------------------------------

@dataclass(eq=False)
class BinaryCover:
    """Preimage in SU(2) of an SO(3) group, with projection and section."""

    base: FiniteGroup
    cover: FiniteGroup
    projection: np.ndarray  # cover index -> base index
    lift: np.ndarray        # base index -> canonical cover index
    z: int                  # index of -1 in the cover

    def sign(self, x: int) -> int:
        """``+1`` or ``-1`` for a cover element lying over the base identity."""
        if x == self.cover.identity:
            return 1
        if x == self.z:
            return -1
        raise ValueError("element is not central of order dividing 2")


@lru_cache(maxsize=None)
def make_cover(base: FiniteGroup) -> BinaryCover:
    if base.in_su2:
        raise UnsupportedGroup("the base of a binary cover must be an SO(3) realization")
    order = base.elements[0].order
    gens = [base.elements[x].rep for x in _small_generating_set(base)]
    one = Quaternion.one(order)
    elems, table = close_under(gens + [-one], one, lambda u, v: u * v, 2 * base.order + 1)
    if len(elems) != 2 * base.order:
        raise UnsupportedGroup("cover closure has the wrong order")
    cover = _finish("2" + base.kind, base.n, elems, table, True)
    proj = np.array([base.index_of(RotationElement(q)) for q in cover.elements], dtype=np.int64)
    lift = np.array([cover.index_of(base.elements[x].rep) for x in range(base.order)], dtype=np.int64)
    z = cover.index_of(-one)
    counts = np.bincount(proj, minlength=base.order)
    if not np.all(counts == 2):
        raise AssertionError("projection is not two-to-one")
    names = {"1": cover.identity, "-1": z}
    for name, idx in base.names.items():
        names["~" + name] = int(lift[idx])
    cover.names = names
    return BinaryCover(base, cover, proj, lift, z)


def _small_generating_set(grp: FiniteGroup) -> list[int]:
    gens: list[int] = []
    current = grp.closure([])
    for x in range(grp.order):
        if x not in current:
            gens.append(x)
            current = grp.closure(gens)
            if len(current) == grp.order:
                break
    return gens


def commutator_of_lifts(x: int, y: int, cover: BinaryCover) -> int:
    """Sign of ``[x~, y~]`` for commuting ``x, y`` in the base."""
    base = cover.base
    if base.mul(x, y) != base.mul(y, x):
        raise ValueError("commutator of lifts is central only for commuting elements")
    c = cover.cover.commutator(int(cover.lift[x]), int(cover.lift[y]))
    return cover.sign(c)


def su2_trace(q: Quaternion) -> CyclotomicNumber:
    return q.trace()
