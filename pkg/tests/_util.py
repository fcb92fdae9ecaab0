"""Shared helpers for the test suite."""
from __future__ import annotations

import random

from compatpants.algebra.groups import BinaryCover, FiniteGroup


def random_surface_tuple(group: FiniteGroup, g: int, rng: random.Random) -> tuple[int, ...]:
    """Uniform-ish homomorphism: random first 2g-1 entries, last solved when possible."""
    while True:
        t = [rng.randrange(group.order) for _ in range(2 * g - 1)]
        acc = group.identity
        for i in range(g - 1):
            acc = group.mul(acc, group.commutator(t[2 * i], t[2 * i + 1]))
        need = group.inv(acc)
        last = [y for y in range(group.order) if group.commutator(t[-1], y) == need]
        if last:
            return tuple(t + [rng.choice(last)])


def naive_relator_sign(t, cover: BinaryCover) -> int:
    """Product of commutators of lifts, computed directly in the cover."""
    h = cover.cover
    acc = h.identity
    for i in range(0, len(t), 2):
        acc = h.mul(acc, h.commutator(int(cover.lift[t[i]]), int(cover.lift[t[i + 1]])))
    return cover.sign(acc)


# acceptance results collected during a run, printed by the terminal summary hook
ACCEPTANCE: dict[int, tuple[bool, str]] = {}
