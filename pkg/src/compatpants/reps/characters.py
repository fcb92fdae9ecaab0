"""Character-theoretic counts used as independent checks on enumeration.

Character degrees come from the class algebra: the class sums act on the
center of the group algebra, and their common eigenvectors are the central
characters ``omega(C) = |C| chi(g_C) / chi(1)``.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import numpy as np

from ..algebra.groups import FiniteGroup


def _class_data(group: FiniteGroup, elements: frozenset[int] | None = None):
    """Classes of the subgroup ``elements`` (default: whole group)."""
    elems = sorted(range(group.order) if elements is None else elements)
    pos = {x: i for i, x in enumerate(elems)}
    t, inv = group.table, group.inverse
    classes: list[list[int]] = []
    cls_of: dict[int, int] = {}
    for x in elems:
        if x in cls_of:
            continue
        cl = sorted({int(t[t[h, x], inv[h]]) for h in elems})
        for y in cl:
            cls_of[y] = len(classes)
        classes.append(cl)
    return elems, pos, classes, cls_of


def character_degrees(group: FiniteGroup, elements: frozenset[int] | None = None) -> list[int]:
    """Degrees of the irreducible characters, sorted."""
    elems, _, classes, cls_of = _class_data(group, elements)
    r = len(classes)
    t = group.table
    # structure constants: (C_i C_j) has coefficient a_ijk on the class sum of C_k
    mats = np.zeros((r, r, r))
    for i, ci in enumerate(classes):
        for j, cj in enumerate(classes):
            counts = np.zeros(r)
            for x in ci:
                for y in cj:
                    counts[cls_of[int(t[x, y])]] += 1
            mats[i, j, :] = counts / np.array([len(c) for c in classes])
    rng = np.random.default_rng(12345)
    combo = np.tensordot(rng.standard_normal(r), mats, axes=1)
    _, vecs = np.linalg.eig(combo)
    ident_cls = cls_of[group.identity]
    sizes = np.array([len(c) for c in classes], dtype=float)
    degrees = []
    for k in range(r):
        w = vecs[:, k] / vecs[ident_cls, k]
        d2 = len(elems) / float(np.sum(np.abs(w) ** 2 / sizes))
        d = int(round(np.sqrt(d2)))
        if abs(d * d - d2) > 1e-6:
            raise AssertionError("class algebra eigenvectors are degenerate")
        degrees.append(d)
    degrees.sort()
    if sum(d * d for d in degrees) != len(elems):
        raise AssertionError("character degrees do not satisfy the sum of squares")
    return degrees


def frobenius_count(order: int, degrees: list[int], g: int) -> int:
    """``|Hom(pi_1 S_g, G)| = |G|^(2g-1) * sum chi(1)^(2-2g)``."""
    total = sum(Fraction(1, d ** (2 * g - 2)) for d in degrees)
    val = Fraction(order) ** (2 * g - 1) * total
    if val.denominator != 1:
        raise AssertionError("Frobenius count is not an integer")
    return int(val)


def hom_count_oracle(group: FiniteGroup, g: int, elements: frozenset[int] | None = None) -> int:
    size = group.order if elements is None else len(elements)
    return frobenius_count(size, character_degrees(group, elements), g)


@lru_cache(maxsize=None)
def _subgroups_cached(group: FiniteGroup) -> tuple[frozenset[int], ...]:
    found = {frozenset([group.identity])}
    frontier = list(found)
    while frontier:
        nxt = []
        for h in frontier:
            for x in range(group.order):
                if x not in h:
                    k = group.closure(list(h) + [x])
                    if k not in found:
                        found.add(k)
                        nxt.append(k)
        frontier = nxt
    return tuple(sorted(found, key=lambda s: (len(s), sorted(s))))


def subgroups(group: FiniteGroup) -> tuple[frozenset[int], ...]:
    """All subgroups, smallest first."""
    return _subgroups_cached(group)


def epi_count_oracle(group: FiniteGroup, g: int) -> int:
    """Surjections by Moebius inversion over the subgroup lattice."""
    subs = subgroups(group)
    full = subs[-1]
    mu: dict[frozenset[int], int] = {full: 1}
    for h in reversed(subs[:-1]):
        mu[h] = -sum(mu[k] for k in subs if len(k) > len(h) and h < k)
    return sum(mu[h] * hom_count_oracle(group, g, h) for h in subs if mu[h])
