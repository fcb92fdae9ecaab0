"""Mapping class group moves acting on surface-group generator tuples.

A move is an automorphism of the free group on ``a_1..b_g`` that fixes the
surface relator up to conjugacy.  Moves act on representation tuples by
precomposition: ``(m . t)(x) = t(m(x))``.

Besides the two twist formulas that can be written by hand (twists along
``a_i`` and ``b_i``), every twist here is obtained as ``psi o t_{a_1} o psi^-1``
for an explicit carrier ``psi`` built from simpler moves; such a conjugate is
again a Dehn twist, along the curve ``psi(a_1)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from .words import (
    Letters,
    a,
    abelianize,
    are_conjugate,
    b,
    commutator_letters,
    cyclic_reduce,
    inverse_letters,
    reduce_letters,
    relator_letters,
    substitute,
)

Images = dict[int, Letters]


def identity_images(g: int) -> Images:
    return {x: (x,) for x in range(1, 2 * g + 1)}


def compose_images(f: Mapping[int, Letters], h: Mapping[int, Letters]) -> Images:
    """Return ``f o h`` (apply ``h`` first)."""
    return {x: substitute(h[x], f) for x in h}


@dataclass(frozen=True, eq=False)
class MCGMove:
    """A named automorphism together with its inverse."""

    name: str
    genus: int
    images: Mapping[int, Letters]
    inverse_images: Mapping[int, Letters] = field(repr=False)
    curve: Letters | None = None

    def image(self, x: int) -> Letters:
        return self.images[x] if x > 0 else inverse_letters(self.images[-x])

    def inverse(self) -> "MCGMove":
        name = self.name[:-3] if self.name.endswith("^-1") else self.name + "^-1"
        return MCGMove(name, self.genus, self.inverse_images, self.images, self.curve)

    def compose(self, other: "MCGMove", name: str | None = None) -> "MCGMove":
        """``self o other``."""
        return MCGMove(
            name or f"{self.name}*{other.name}",
            self.genus,
            compose_images(self.images, other.images),
            compose_images(other.inverse_images, self.inverse_images),
        )

    def homology_matrix(self) -> np.ndarray:
        """Integer matrix ``M`` with column ``x`` the class of ``m(x)``."""
        n = 2 * self.genus
        m = np.zeros((n, n), dtype=np.int64)
        for x in range(1, n + 1):
            m[:, x - 1] = abelianize(self.images[x], self.genus)
        return m

    def relator_image(self) -> Letters:
        return substitute(relator_letters(self.genus), self.images)


def symplectic_form(g: int) -> np.ndarray:
    j = np.zeros((2 * g, 2 * g), dtype=np.int64)
    for i in range(g):
        j[2 * i, 2 * i + 1] = 1
        j[2 * i + 1, 2 * i] = -1
    return j


def check_move(m: MCGMove) -> None:
    """Raise ``ValueError`` unless ``m`` is a relator-preserving automorphism."""
    g = m.genus
    ident = identity_images(g)
    if compose_images(m.images, m.inverse_images) != ident:
        raise ValueError(f"{m.name}: stored inverse is not a right inverse")
    if compose_images(m.inverse_images, m.images) != ident:
        raise ValueError(f"{m.name}: stored inverse is not a left inverse")
    r = relator_letters(g)
    if not are_conjugate(m.relator_image(), r):
        raise ValueError(f"{m.name}: relator not mapped to a conjugate")
    h = m.homology_matrix()
    j = symplectic_form(g)
    if not np.array_equal(h.T @ j @ h, j):
        raise ValueError(f"{m.name}: homology action is not symplectic")


def _move(name: str, g: int, changes: Mapping[int, Letters], inv_changes: Mapping[int, Letters],
          curve: Letters | None = None) -> MCGMove:
    img = identity_images(g)
    img.update({k: reduce_letters(v) for k, v in changes.items()})
    inv = identity_images(g)
    inv.update({k: reduce_letters(v) for k, v in inv_changes.items()})
    return MCGMove(name, g, img, inv, curve)


def twist_a(g: int, i: int) -> MCGMove:
    ai, bi = a(i), b(i)
    return _move(f"twist_a{i}", g, {bi: (bi, ai)}, {bi: (bi, -ai)}, (ai,))


def twist_b(g: int, i: int) -> MCGMove:
    ai, bi = a(i), b(i)
    return _move(f"twist_b{i}", g, {ai: (ai, bi)}, {ai: (ai, -bi)}, (bi,))


def twist_ba(g: int, i: int) -> MCGMove:
    """Twist along ``b_i^-1 a_{i+1}``; ``a_i`` goes to ``a_i b_i^-1 a_{i+1}``."""
    ai, bi, aj, bj = a(i), b(i), a(i + 1), b(i + 1)
    fwd = {ai: (ai, -bi, aj), bi: (-aj, bi, aj), aj: (-aj, bi, aj, -bi, aj), bj: (bj, -bi, aj)}
    bwd = {ai: (ai, -aj, bi), bi: (-bi, aj, bi, -aj, bi), aj: (-bi, aj, bi), bj: (bj, -aj, bi)}
    return _move(f"twist_ba{i}", g, fwd, bwd, (-bi, aj))


def _conjugate_move(name: str, carrier: MCGMove, core: MCGMove) -> MCGMove:
    out = carrier.compose(core).compose(carrier.inverse())
    curve = substitute(core.curve, carrier.images) if core.curve else None
    return MCGMove(name, out.genus, out.images, out.inverse_images,
                   cyclic_reduce(curve) if curve else None)


def twist_c(g: int, i: int) -> MCGMove:
    """Twist along the chain curve ``a_i a_{i+1}``."""
    carrier = twist_ba(g, i).compose(twist_b(g, i))
    return _conjugate_move(f"twist_c{i}", carrier, twist_a(g, i))


def _conjugation_move(name: str, g: int, handles: Sequence[int], conj: Letters) -> MCGMove:
    fwd, bwd = {}, {}
    cinv = inverse_letters(conj)
    for k in handles:
        for x in (a(k), b(k)):
            fwd[x] = conj + (x,) + cinv
            bwd[x] = cinv + (x,) + conj
    return _move(name, g, fwd, bwd, cyclic_reduce(conj))


def gamma_word(g: int, k: int) -> Letters:
    out: Letters = ()
    for i in range(k, g + 1):
        out = reduce_letters(out + commutator_letters((a(i),), (b(i),)))
    return out


def twist_gamma(g: int, k: int) -> MCGMove:
    """Separating twist along ``prod_{i>=k} [a_i, b_i]``."""
    return _conjugation_move(f"twist_gamma{k}", g, range(k, g + 1), gamma_word(g, k))


def twist_d(g: int, k: int) -> MCGMove:
    """Separating twist along ``[a_k, b_k]``."""
    return _conjugation_move(f"twist_d{k}", g, (k,), gamma_word(k, k))


def exchange(g: int, i: int) -> MCGMove:
    """Swap handles ``i`` and ``i+1``; fixes the relator exactly."""
    ai, bi, aj, bj = a(i), b(i), a(i + 1), b(i + 1)
    c = commutator_letters((ai,), (bi,))
    d = commutator_letters((aj,), (bj,))
    ci, di = inverse_letters(c), inverse_letters(d)
    fwd = {ai: c + (aj,) + ci, bi: c + (bj,) + ci, aj: (ai,), bj: (bi,)}
    bwd = {ai: (aj,), bi: (bj,), aj: di + (ai,) + d, bj: di + (bi,) + d}
    return _move(f"exchange{i}", g, fwd, bwd)


def twist_bprod(g: int) -> MCGMove:
    """Twist along the nonseparating curve ``b_1^-1 b_2^-1 ... b_g^-1``."""
    carrier = twist_a(g, g).compose(twist_b(g, g).inverse())
    for i in range(g - 1, 0, -1):
        carrier = carrier.compose(twist_a(g, i)).compose(twist_ba(g, i))
    return _conjugate_move("twist_bprod", carrier, twist_a(g, 1))


@lru_cache(maxsize=None)
def move_set(g: int) -> tuple[MCGMove, ...]:
    """Generating moves for genus ``g``; each one is validated on creation."""
    if g < 1:
        raise ValueError("genus must be positive")
    out: list[MCGMove] = []
    for i in range(1, g + 1):
        out += [twist_a(g, i), twist_b(g, i)]
    for i in range(1, g):
        out += [twist_ba(g, i), twist_c(g, i), exchange(g, i)]
    for k in range(2, g + 1):
        out.append(twist_gamma(g, k))
    for k in range(2, g):
        out.append(twist_d(g, k))
    if g >= 2:
        out.append(twist_bprod(g))
    for m in out:
        check_move(m)
    return tuple(out)


def moves_by_name(g: int) -> dict[str, MCGMove]:
    table = {}
    for m in move_set(g):
        table[m.name] = m
        inv = m.inverse()
        table[inv.name] = inv
    return table


def identity_move(g: int) -> MCGMove:
    ident = identity_images(g)
    return MCGMove("identity", g, ident, dict(ident))
