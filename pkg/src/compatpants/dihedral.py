"""Representations into the infinite dihedral group ``C* x| Z/2`` inside SL2(C).

``D(l)`` is ``diag(l, 1/l)`` and ``F(m)`` is the antidiagonal matrix
``[[0, m], [-1/m, 0]]``.  Scales are Gaussian rationals, so every step of
the normalization below is exact.
"""
from __future__ import annotations

import random
import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import InputError, PreconditionError, SearchExhausted
from .reps.moves import MCGMove, exchange, moves_by_name, twist_a, twist_b, twist_bprod
from .reps.orbits import move_table
from .reps.words import Letters


@dataclass(frozen=True)
class GaussianRational:
    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def parse(cls, text: str | int) -> "GaussianRational":
        """Read ``"p/q"``, ``"r/s*i"``, ``"p/q+r/s*i"``, ``"-i"`` and similar."""
        if isinstance(text, int) and not isinstance(text, bool):
            return cls(Fraction(text))
        if not isinstance(text, str):
            raise InputError(f"cannot parse scale {text!r}")
        s = text.replace(" ", "")
        m = re.fullmatch(r"([+-]?\d+(?:/\d+)?)?(?:([+-])(\d+(?:/\d+)?)?\*?i)?", s)
        m_im = re.fullmatch(r"([+-]?)(\d+(?:/\d+)?)?\*?i", s)
        try:
            if m_im:
                sign = -1 if m_im.group(1) == "-" else 1
                return cls(Fraction(0), sign * Fraction(m_im.group(2) or 1))
            if m and s:
                re_part = Fraction(m.group(1)) if m.group(1) else Fraction(0)
                im_part = Fraction(0)
                if m.group(2):
                    im_part = Fraction(m.group(3) or 1) * (-1 if m.group(2) == "-" else 1)
                return cls(re_part, im_part)
        except (ValueError, ZeroDivisionError):
            pass
        raise InputError(f"cannot parse scale {text!r}")

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}*i"

    def __mul__(self, o: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def modulus_sq(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "GaussianRational":
        n = self.modulus_sq()
        if n == 0:
            raise ZeroDivisionError("zero has no inverse")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, o: "GaussianRational") -> "GaussianRational":
        return self * o.inverse()

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0


ONE = GaussianRational(Fraction(1))


@dataclass(frozen=True)
class DihedralElement:
    scale: GaussianRational
    flip: int = 0

    def __post_init__(self) -> None:
        if self.scale.is_zero():
            raise InputError("scale must be nonzero")
        if self.flip not in (0, 1):
            raise InputError("flip bit must be 0 or 1")

    @classmethod
    def diag(cls, lam) -> "DihedralElement":
        return cls(_g(lam), 0)

    @classmethod
    def anti(cls, mu) -> "DihedralElement":
        return cls(_g(mu), 1)

    def __mul__(self, o: "DihedralElement") -> "DihedralElement":
        if not self.flip and not o.flip:
            return DihedralElement(self.scale * o.scale, 0)
        if not self.flip:
            return DihedralElement(self.scale * o.scale, 1)
        if not o.flip:
            return DihedralElement(self.scale / o.scale, 1)
        return DihedralElement(-(self.scale / o.scale), 0)

    def inverse(self) -> "DihedralElement":
        if self.flip:
            return DihedralElement(-self.scale, 1)
        return DihedralElement(self.scale.inverse(), 0)

    def matrix(self) -> list[list[GaussianRational]]:
        zero = GaussianRational(Fraction(0))
        if self.flip:
            return [[zero, self.scale], [-self.scale.inverse(), zero]]
        return [[self.scale, zero], [zero, self.scale.inverse()]]

    def to_json(self) -> dict:
        return {"flip": self.flip, "scale": str(self.scale)}

    def __str__(self) -> str:
        return f"{'F' if self.flip else 'D'}({self.scale})"


IDENTITY = DihedralElement(ONE, 0)


def _g(v) -> GaussianRational:
    if isinstance(v, GaussianRational):
        return v
    if isinstance(v, str):
        return GaussianRational.parse(v)
    if isinstance(v, complex):
        raise InputError("floating complex scales are not exact")
    return GaussianRational(Fraction(v))


def epsilon_hom(e: DihedralElement) -> int:
    return e.flip


def modulus_sq(e: DihedralElement) -> Fraction:
    return e.scale.modulus_sq()


def is_loxodromic(e: DihedralElement) -> bool:
    return e.flip == 0 and e.scale.modulus_sq() != 1


def commutator(u: DihedralElement, v: DihedralElement) -> DihedralElement:
    return u * v * u.inverse() * v.inverse()


def evaluate(elems: Sequence[DihedralElement], w: Letters) -> DihedralElement:
    acc = IDENTITY
    for x in w:
        v = elems[abs(x) - 1]
        acc = acc * (v if x > 0 else v.inverse())
    return acc


@dataclass(frozen=True)
class DihedralTuple:
    elements: tuple[DihedralElement, ...]

    def __post_init__(self) -> None:
        if len(self.elements) < 4 or len(self.elements) % 2:
            raise InputError("a dihedral tuple has 2g entries with g >= 2")
        if self.relator() != IDENTITY:
            raise InputError("tuple does not satisfy the surface relator")

    @property
    def genus(self) -> int:
        return len(self.elements) // 2

    def relator(self) -> DihedralElement:
        acc = IDENTITY
        for i in range(0, len(self.elements), 2):
            acc = acc * commutator(self.elements[i], self.elements[i + 1])
        return acc

    def tail_product(self, k: int) -> DihedralElement:
        """``prod_{i=k}^{g} [A_i, B_i]``."""
        acc = IDENTITY
        for i in range(k - 1, self.genus):
            acc = acc * commutator(self.elements[2 * i], self.elements[2 * i + 1])
        return acc

    def is_nonabelian(self) -> bool:
        els = self.elements
        return any(u * v != v * u for i, u in enumerate(els) for v in els[i + 1:])

    def is_irreducible(self) -> bool:
        # a non-abelian image contains a flip and a non-scalar diagonal element,
        # so it preserves no line
        return self.is_nonabelian()

    def is_unbounded(self) -> bool:
        """Some diagonal element of the image has modulus different from 1."""
        flips = [e for e in self.elements if e.flip]
        if any(not e.flip and e.scale.modulus_sq() != 1 for e in self.elements):
            return True
        return any(f.scale.modulus_sq() != flips[0].scale.modulus_sq() for f in flips)

    def apply(self, m: MCGMove) -> "DihedralTuple":
        if m.genus != self.genus:
            raise InputError("move and tuple have different genus")
        return DihedralTuple(tuple(evaluate(self.elements, m.images[x]) for x in range(1, 2 * self.genus + 1)))

    def flip_bits(self) -> tuple[int, ...]:
        return tuple(e.flip for e in self.elements)

    def to_json(self) -> dict:
        return {"schema": "compatpants.dihedral/1", "genus": self.genus,
                "elements": [e.to_json() for e in self.elements]}

    @classmethod
    def from_json(cls, data: dict) -> "DihedralTuple":
        try:
            els = tuple(DihedralElement(GaussianRational.parse(e["scale"]), int(e["flip"]))
                        for e in data["elements"])
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed dihedral tuple: {exc}") from None
        out = cls(els)
        if "genus" in data and int(data["genus"]) != out.genus:
            raise InputError("genus does not match the number of elements")
        return out


# conditions -------------------------------------------------------------------

@dataclass
class ConditionReport:
    flips_ok: bool
    first_flip_failure: int | None      # 1-based handle index
    loxodromic_ok: bool
    first_loxodromic_failure: int | None  # k with 1 < k <= g

    @property
    def passed(self) -> bool:
        return self.flips_ok and self.loxodromic_ok

    def to_json(self) -> dict:
        return dict(self.__dict__, passed=self.passed)


def check_conditions(t: DihedralTuple) -> ConditionReport:
    """Flip bit 1 on every ``a_i``, and loxodromic tails for ``1 < k <= g``."""
    bad_a = next((i + 1 for i in range(t.genus) if t.elements[2 * i].flip != 1), None)
    bad_k = next((k for k in range(2, t.genus + 1) if not is_loxodromic(t.tail_product(k))), None)
    return ConditionReport(bad_a is None, bad_a, bad_k is None, bad_k)


# normalization ----------------------------------------------------------------------

@dataclass
class NormalizeResult:
    tuple: DihedralTuple
    log: list[str]
    report: ConditionReport

    def to_json(self) -> dict:
        return {"tuple": self.tuple.to_json(), "log": list(self.log), "conditions": self.report.to_json()}


def _flip_action(m: MCGMove) -> np.ndarray:
    return np.mod(m.homology_matrix(), 2)


def _flip_path(bits: tuple[int, ...], g: int, budget: int) -> list[MCGMove]:
    """Shortest move sequence taking the flip pattern to ``b_1`` alone."""
    target = tuple(1 if i == 1 else 0 for i in range(2 * g))
    moves = move_table(g)
    mats = [_flip_action(m) for m in moves]
    parent: dict[tuple[int, ...], tuple[tuple[int, ...], int] | None] = {bits: None}
    queue = deque([bits])
    while queue:
        s = queue.popleft()
        if s == target:
            path = []
            while parent[s] is not None:
                s, mi = parent[s]
                path.append(moves[mi])
            return path[::-1]
        vec = np.array(s)
        for mi, mat in enumerate(mats):
            nxt = tuple(int(v) for v in (vec @ mat) % 2)
            if nxt not in parent:
                parent[nxt] = (s, mi)
                queue.append(nxt)
                if len(parent) > budget:
                    raise SearchExhausted("flip-pattern search exceeded its budget")
    raise SearchExhausted("flip pattern cannot reach the target")


def _conjugation_signs(g: int) -> list[int]:
    """``s_i`` such that the b-product twist sends ``D(l)`` on ``b_i`` to ``D(l^{s_i})``.

    The image of ``b_i`` is ``w b_i w^-1``; under the flip pattern where only
    ``b_1`` flips, conjugating by ``w`` inverts the scale when ``w`` has an odd
    number of ``b_1`` letters.
    """
    m = twist_bprod(g)
    signs = [1] * (g + 1)
    for i in range(2, g + 1):
        w = m.images[2 * i]
        pos = (len(w) - 1) // 2
        if w[pos] != 2 * i:
            raise AssertionError("b-product twist does not conjugate b_i")
        conj = w[:pos]
        if w[pos + 1:] != tuple(-x for x in reversed(conj)):
            raise AssertionError("b-product twist does not conjugate b_i")
        odd = sum(1 for x in conj if abs(x) == 2) % 2
        signs[i] = -1 if odd else 1
    return signs


def normalize(t: DihedralTuple, budget: int = 100_000) -> NormalizeResult:
    """Move ``t`` by mapping classes into a form meeting both conditions.

    Steps: bring the flip pattern to ``b_1`` alone; move a handle with a
    non-unit scale to the last position; working from the last handle down,
    adjust ``b_k`` by twists along ``a_k`` and ``b_k`` so that every tail of
    the signed scale product has modulus different from 1; finally twist
    along the product of the ``b_i``, which puts a flip on every ``a_i``.
    """
    g = t.genus
    if not t.is_irreducible():
        raise PreconditionError("representation is reducible (abelian image)")
    if not t.is_unbounded():
        raise PreconditionError("image is conjugate into SU(2); use the spherical case")
    log: list[str] = []
    cur = t

    def run(m: MCGMove) -> None:
        nonlocal cur
        cur = cur.apply(m)
        log.append(m.name)

    if check_conditions(cur).passed:
        return NormalizeResult(cur, log, check_conditions(cur))
    for m in _flip_path(cur.flip_bits(), g, budget):
        run(m)
    els = cur.elements
    if els[0].scale.modulus_sq() != 1:
        raise AssertionError("a_1 should be diagonal of modulus 1 after the flip step")

    def unit(i: int) -> bool:
        return els[2 * i - 2].scale.modulus_sq() == 1 and els[2 * i - 1].scale.modulus_sq() == 1

    j = next((i for i in range(2, g + 1) if not unit(i)), None)
    if j is None:
        raise AssertionError("no handle with a non-unit scale")
    for i in range(j, g):
        run(exchange(g, i))
    signs = _conjugation_signs(g)

    def log_mod(i: int) -> Fraction:
        return cur.elements[2 * i - 1].scale.modulus_sq()

    def tail(k: int) -> Fraction:
        acc = Fraction(1)
        for i in range(k, g + 1):
            acc *= log_mod(i) ** signs[i]
        return acc

    for k in range(g, 1, -1):
        if tail(k) != 1:
            continue
        alpha = cur.elements[2 * k - 2].scale.modulus_sq()
        if alpha == 1:
            run(twist_b(g, k))
        run(twist_a(g, k))
        if tail(k) == 1:
            raise AssertionError("twist failed to change the tail modulus")
    run(twist_bprod(g))
    report = check_conditions(cur)
    if not report.passed:
        raise AssertionError(f"normalization finished without meeting the conditions: {report}")
    return NormalizeResult(cur, log, report)


def replay_log(t: DihedralTuple, log: Sequence[str]) -> DihedralTuple:
    table = moves_by_name(t.genus)
    table.setdefault("twist_bprod", twist_bprod(t.genus))
    cur = t
    for name in log:
        if name not in table:
            raise InputError(f"unknown move {name!r}")
        cur = cur.apply(table[name])
    return cur


# random inputs ------------------------------------------------------------------------

def _random_scale(rng: random.Random) -> GaussianRational:
    while True:
        re_ = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        im_ = Fraction(rng.randint(-4, 4), rng.randint(1, 3)) if rng.random() < 0.5 else Fraction(0)
        v = GaussianRational(re_, im_)
        if not v.is_zero():
            return v


def _commutator_root(u: DihedralElement, v: DihedralElement) -> GaussianRational:
    """``r`` with ``[u, v] = D(r^2)``."""
    if not u.flip and not v.flip:
        return ONE
    if u.flip and not v.flip:
        return v.scale.inverse()
    if not u.flip and v.flip:
        return u.scale
    return u.scale / v.scale


def random_tuple(g: int, rng: random.Random) -> DihedralTuple:
    """Random exact input meeting the normalization preconditions."""
    while True:
        els: list[DihedralElement] = []
        root = ONE
        for _ in range(g - 1):
            u = DihedralElement(_random_scale(rng), rng.randint(0, 1))
            v = DihedralElement(_random_scale(rng), rng.randint(0, 1))
            els += [u, v]
            root = root * _commutator_root(u, v)
        # last handle: commutator D(root^-2)
        kind = rng.randint(0, 2 if root != ONE else 3)
        mu = _random_scale(rng)
        if kind == 0:    # [F(mu), D(l)] = D(l^-2)
            last = [DihedralElement(mu, 1), DihedralElement(root, 0)]
        elif kind == 1:  # [D(l), F(mu)] = D(l^2)
            last = [DihedralElement(root.inverse(), 0), DihedralElement(mu, 1)]
        elif kind == 2:  # [F(mu), F(nu)] = D((mu/nu)^2)
            last = [DihedralElement(mu, 1), DihedralElement(mu * root, 1)]
        else:
            last = [DihedralElement(mu, 0), DihedralElement(_random_scale(rng), 0)]
        try:
            cand = DihedralTuple(tuple(els + last))
        except InputError:
            raise AssertionError("random construction violated the relator") from None
        if cand.is_irreducible() and cand.is_unbounded():
            return cand
