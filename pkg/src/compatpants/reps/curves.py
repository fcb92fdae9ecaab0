"""Curve and pants words for the two decomposition types in the standard presentation.

Each pants is given as a triple of based boundary words whose product is
trivial in the surface group; each curve occurs (up to inversion and
conjugacy in the surface group) on exactly two pants boundaries.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import InputError
from .words import Letters, a, b, commutator_letters, inverse_letters, is_trivial, reduce_letters


@dataclass(frozen=True)
class PantsWords:
    genus: int
    curves: dict[str, Letters]
    pants: tuple[tuple[Letters, Letters, Letters], ...]
    pants_curves: tuple[tuple[str, str, str], ...]

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "curves": {k: list(v) for k, v in self.curves.items()},
            "pants": [[list(w) for w in tri] for tri in self.pants],
            "pants_curves": [list(p) for p in self.pants_curves],
        }


def _d(k: int) -> Letters:
    return commutator_letters((a(k),), (b(k),))


def gamma_letters(g: int, k: int) -> Letters:
    """``[a_k, b_k] [a_{k+1}, b_{k+1}] ... [a_g, b_g]``."""
    w: Letters = ()
    for i in range(k, g + 1):
        w += _d(i)
    return reduce_letters(w)


def sausage_words(g: int) -> PantsWords:
    if g < 2:
        raise InputError("genus must be at least 2")
    curves: dict[str, Letters] = {}
    for k in range(1, g + 1):
        curves[f"a{k}"] = (a(k),)
    for k in range(2, g + 1):
        curves[f"gamma{k}"] = gamma_letters(g, k)
    for k in range(2, g):
        curves[f"d{k}"] = _d(k)
    pants = []
    names = []
    for k in range(1, g + 1):
        ak, bk = a(k), b(k)
        pants.append(((ak,), (bk, -ak, -bk), inverse_letters(_d(k))))
        side = "gamma2" if k == 1 else f"gamma{k}" if k == g else f"d{k}"
        names.append((f"a{k}", f"a{k}", side))
    for k in range(2, g):
        pants.append((_d(k), gamma_letters(g, k + 1), inverse_letters(gamma_letters(g, k))))
        names.append((f"d{k}", f"gamma{k + 1}", f"gamma{k}"))
    return PantsWords(g, curves, tuple(pants), tuple(names))


def theta_words() -> PantsWords:
    """Genus 2, dual graph the theta graph; curves ``a_1``, ``a_2`` and ``a_1 a_2``."""
    a1, b1, a2, b2 = 1, 2, 3, 4
    curves = {"a1": (a1,), "a2": (a2,), "a1a2": (a1, a2)}
    p = ((a1,), (a2,), (-a2, -a1))
    q = ((b1, -a1, -b1), (a2, b2, -a2, -b2, -a2), (a2, a1))
    names = (("a1", "a2", "a1a2"), ("a1", "a2", "a1a2"))
    return PantsWords(2, curves, (p, q), names)


def validate_pants_words(pw: PantsWords) -> None:
    """Each triple multiplies to the identity in the surface group."""
    for tri in pw.pants:
        if not is_trivial(tri[0] + tri[1] + tri[2], pw.genus):
            raise AssertionError("pants triple does not multiply to the identity")
    uses: dict[str, int] = {}
    for names in pw.pants_curves:
        for n in names:
            uses[n] = uses.get(n, 0) + 1
    if set(uses) != set(pw.curves) or any(v != 2 for v in uses.values()):
        raise AssertionError("every curve must bound exactly two pants sides")
    if len(pw.curves) != 3 * pw.genus - 3 or len(pw.pants) != 2 * pw.genus - 2:
        raise AssertionError("wrong number of curves or pants")
