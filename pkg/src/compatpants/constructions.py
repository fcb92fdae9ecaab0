"""Compatibility checks and the explicit cocycle constructions.

Two decomposition types are built on the hexagonal complex: the necklace
(square chain) and the caterpillar sausage.  Each construction produces a
cocycle whose holonomy is checked, not assumed, to be surjective and
compatible; the SU(2) lifting sign is computed both from the faces and from
the relator on the standard generators read off the complex.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Any, Sequence

import numpy as np

from .algebra.cyclotomic import CyclotomicNumber
from .algebra.groups import BinaryCover, FiniteGroup, make_cover
from .cocycle import (
    Cocycle,
    curve_holonomy,
    holonomy_image,
    identity_cocycle,
    lifting_obstruction,
    pants_boundary_holonomies,
    standard_tuple,
)
from .errors import InputError, InvalidTriple, SearchExhausted, UnsupportedCombination
from .reps.curves import PantsWords
from .reps.enumeration import SurfaceTuple, evaluate_batch, evaluate_letters, relator_lift_sign
from .topology.cw import build_cw
from .topology.graphs import necklace_graph, sausage_graph

SL2_TOLERANCE = 1e-9


# reports ---------------------------------------------------------------------

@dataclass
class CurveVerdict:
    name: str
    value: str
    nontrivial: bool
    noncentral: bool
    ok: bool

    def to_json(self) -> dict:
        return dict(self.__dict__)


@dataclass
class PantsVerdict:
    index: int
    boundary: tuple[str, ...]
    nonabelian: bool
    witness: tuple[str, str] | None
    ok: bool

    def to_json(self) -> dict:
        out = dict(self.__dict__)
        out["boundary"] = list(self.boundary)
        out["witness"] = list(self.witness) if self.witness else None
        return out


@dataclass
class CompatReport:
    curves: list[Any]
    pants: list[Any]
    compatible: bool | None
    lift_sign: int | None = None
    surjective: bool | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        if self.compatible is None:
            return "indeterminate"
        return "compatible" if self.compatible else "incompatible"

    def first_failure(self) -> str | None:
        for c in self.curves:
            if getattr(c, "ok", True) is False or getattr(c, "verdict", "pass") != "pass":
                return f"curve {c.name}"
        for p in self.pants:
            if getattr(p, "ok", True) is False or getattr(p, "verdict", "pass") != "pass":
                return f"pants {p.index}"
        return None

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "compatible": self.compatible,
            "lift_sign": self.lift_sign,
            "surjective": self.surjective,
            "curves": [c.to_json() for c in self.curves],
            "pants": [p.to_json() for p in self.pants],
            "notes": list(self.notes),
        }


# finite images -------------------------------------------------------------------

def minus_one(group: FiniteGroup) -> int | None:
    """Index of ``-1`` for SU(2) realizations, ``None`` otherwise."""
    if not group.in_su2:
        return None
    return group.index_of(-group.elements[group.identity])


def _curve_ok(group: FiniteGroup, v: int) -> bool:
    if v == group.identity:
        return False
    return v != minus_one(group)


def _pants_verdict(group: FiniteGroup, index: int, hols: Sequence[int]) -> PantsVerdict:
    u, v = hols[0], hols[1]
    nonab = group.mul(u, v) != group.mul(v, u)
    names = tuple(group.name_of(h) for h in hols)
    witness = (names[0], names[1]) if nonab else None
    return PantsVerdict(index, names, nonab, witness, nonab)


def _curve_verdict(group: FiniteGroup, name: str, v: int) -> CurveVerdict:
    ok = _curve_ok(group, v)
    return CurveVerdict(name, group.name_of(v), v != group.identity, not group.is_central(v), ok)


def check_compat_finite(data: Cocycle | SurfaceTuple, cover: BinaryCover | None = None,
                        pants_words: PantsWords | None = None) -> CompatReport:
    """Curve images must avoid the identity (and ``-1`` in SU(2)); pants images must be non-abelian."""
    group = data.group
    if cover is not None and cover.base is not group:
        raise InputError("cover does not match the group")
    if not group.in_su2 and cover is None:
        cover = make_cover(group)
    if isinstance(data, Cocycle):
        graph = data.cw.graph
        curves = [_curve_verdict(group, graph.edge_labels[e], curve_holonomy(data, e))
                  for e in range(graph.num_edges)]
        pants = [_pants_verdict(group, v, pants_boundary_holonomies(data, v))
                 for v in range(graph.num_vertices)]
        surjective = len(holonomy_image(data)) == group.order
        sign = lifting_obstruction(data, cover) if cover is not None else None
    else:
        if pants_words is None:
            raise InputError("a surface tuple needs pants words")
        if pants_words.genus != data.genus:
            raise InputError("pants words and tuple have different genus")
        els = data.elements
        curves = [_curve_verdict(group, name, evaluate_letters(group, els, w))
                  for name, w in pants_words.curves.items()]
        pants = [_pants_verdict(group, i, [evaluate_letters(group, els, w) for w in tri])
                 for i, tri in enumerate(pants_words.pants)]
        surjective = group.generates(els)
        sign = relator_lift_sign(data, cover) if cover is not None else None
    ok = all(c.ok for c in curves) and all(p.ok for p in pants)
    return CompatReport(curves, pants, ok, sign, surjective)


def compat_mask(group: FiniteGroup, tuples: np.ndarray, pants_words: PantsWords) -> np.ndarray:
    """Vectorized compatibility test for rows of representation tuples."""
    mask = np.ones(len(tuples), dtype=bool)
    bad = {group.identity}
    m1 = minus_one(group)
    if m1 is not None:
        bad.add(m1)
    for w in pants_words.curves.values():
        vals = evaluate_batch(group, tuples, w)
        mask &= ~np.isin(vals, list(bad))
    t = group.table
    for tri in pants_words.pants:
        u = evaluate_batch(group, tuples, tri[0])
        v = evaluate_batch(group, tuples, tri[1])
        mask &= t[u, v] != t[v, u]
    return mask


# SL2(C) traces ---------------------------------------------------------------------

@dataclass
class TraceVerdict:
    name: str
    value: str
    verdict: str  # pass | fail | indeterminate

    def to_json(self) -> dict:
        return dict(self.__dict__)

    @property
    def index(self) -> str:
        return self.name


def _is_exact(v) -> bool:
    return isinstance(v, (Rational, CyclotomicNumber)) and not isinstance(v, bool)


def _exact_verdict(expr) -> str:
    zero = expr.is_zero() if isinstance(expr, CyclotomicNumber) else expr == 0
    return "fail" if zero else "pass"


def _float_verdict(expr: complex, scale: float, tol: float) -> str:
    return "indeterminate" if abs(expr) <= tol * max(1.0, scale) else "pass"


def _fmt(v) -> str:
    if isinstance(v, CyclotomicNumber):
        if v.is_rational():
            return str(v.to_fraction())
        return f"{float(v):.12g}" if v.is_real() else f"{complex(v):.12g}"
    return str(v)


def check_compat_sl2(curves: Sequence, pants: Sequence[Sequence], tol: float = SL2_TOLERANCE) -> CompatReport:
    """Trace tests: ``tr != +-2`` on curves and ``x^2+y^2+z^2-xyz-4 != 0`` on pants.

    Exact inputs (integers, fractions, cyclotomic numbers) give exact
    verdicts; any floating input switches that item to the tolerance policy,
    where values within ``tol`` relative to the magnitude of the terms are
    reported as indeterminate.
    """
    n_c, n_p = len(curves), len(pants)
    if n_p % 2 or n_p < 2 or n_c != 3 * (n_p // 2 + 1) - 3:
        raise InputError(f"{n_c} curves and {n_p} pants do not fit a closed surface")
    out_c = []
    for i, x in enumerate(curves):
        if _is_exact(x):
            v = _exact_verdict(x * x - 4)
        else:
            xc = complex(x)
            v = _float_verdict(xc * xc - 4, abs(xc) ** 2 + 4, tol)
            if v == "pass" and not all(map(cmath.isfinite, (xc,))):
                raise InputError("trace is not finite")
        out_c.append(TraceVerdict(f"c{i}", _fmt(x), v))
    out_p = []
    for i, tri in enumerate(pants):
        if len(tri) != 3:
            raise InputError("each pants needs three traces")
        x, y, z = tri
        if all(_is_exact(v) for v in tri):
            v = _exact_verdict(x * x + y * y + z * z - x * y * z - 4)
        else:
            xc, yc, zc = (complex(v) for v in tri)
            expr = xc * xc + yc * yc + zc * zc - xc * yc * zc - 4
            scale = abs(xc) ** 2 + abs(yc) ** 2 + abs(zc) ** 2 + abs(xc * yc * zc) + 4
            v = _float_verdict(expr, scale, tol)
        out_p.append(TraceVerdict(f"p{i}", ",".join(_fmt(t) for t in tri), v))
    verdicts = [c.verdict for c in out_c + out_p]
    compatible = False if "fail" in verdicts else None if "indeterminate" in verdicts else True
    return CompatReport(out_c, out_p, compatible)


def parse_trace(text: str | int | float | list):
    """Read a trace from JSON: integers and ``"p/q"`` are exact, ``"sqrt(n)"`` is exact, floats are not."""
    if isinstance(text, bool):
        raise InputError("boolean is not a trace")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        return text
    if isinstance(text, list) and len(text) == 2:
        return complex(float(text[0]), float(text[1]))
    if isinstance(text, str):
        s = text.strip().replace(" ", "")
        sign = 1
        if s.startswith("-sqrt(") or s.startswith("sqrt("):
            if s[0] == "-":
                sign, s = -1, s[1:]
            inner = s[5:-1]
            if not s.endswith(")") or not inner.isdigit():
                raise InputError(f"cannot parse trace {text!r}")
            n = int(inner)
            return sign * CyclotomicNumber.sqrt(4 * n if n % 4 else n, n) if n in (2, 3, 5) \
                else _sqrt_generic(n, sign)
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError):
            pass
        try:
            return complex(s.replace("i", "j"))
        except ValueError:
            raise InputError(f"cannot parse trace {text!r}") from None
    raise InputError(f"cannot parse trace {text!r}")


def _sqrt_generic(n: int, sign: int):
    root = Fraction(int(round(n ** 0.5)))
    if root * root == n:
        return sign * root
    raise InputError("only sqrt(2), sqrt(3), sqrt(5) and perfect squares are exact")


# standard triples ----------------------------------------------------------------------

@dataclass(frozen=True)
class StandardTriple:
    kind: str            # "square" (x, y, z) or "sausage" (x, a, y)
    names: tuple[str, str, str]
    elements: tuple[int, int, int]


def _square_names(group: FiniteGroup) -> tuple[str, str, str]:
    table = {
        "A4": ("(12)(34)", "(123)", "(234)"),
        "S4": ("(12)", "(1234)", "(324)"),
        "A5": ("(12)(34)", "(12345)", "(254)"),
        "Q8": ("I", "J", "-K"),
    }
    if group.kind == "D":
        return ("s", "r", "sr")
    if group.kind not in table:
        raise UnsupportedCombination(f"no square triple for {group.label}")
    return table[group.kind]


def _sausage_names(group: FiniteGroup) -> tuple[str, str, str]:
    if group.kind == "D":
        n = group.n
        if n % 2:
            return ("s", f"r^{(n + 1) // 2}", "r")
        return ("s", "r", "r^2")
    table = {
        "A4": ("(123)", "(234)", "(14)(23)"),
        "S4": ("(1234)", "(23)", "(234)"),
        "A5": ("(13)(24)", "(345)", "(13452)"),
    }
    if group.kind == "Q8":
        raise UnsupportedCombination("Q8 admits no sausage triple: every commutator in Q8 is central")
    if group.kind not in table:
        raise UnsupportedCombination(f"no sausage triple for {group.label}")
    return table[group.kind]


def validate_square(group: FiniteGroup, x: int, y: int, z: int) -> None:
    if any(group.is_central(v) for v in (x, y, z)):
        raise InvalidTriple("square triple contains a central element")
    if group.product([x, y, z]) != group.identity:
        raise InvalidTriple("square triple does not satisfy xyz = 1")
    if not group.generates([x, y]):
        raise InvalidTriple("x and y do not generate the group")


def validate_sausage(group: FiniteGroup, x: int, a: int, y: int) -> None:
    if group.mul(group.commutator(x, a), y) != group.identity:
        raise InvalidTriple("sausage triple does not satisfy [x,a]y = 1")
    if group.mul(x, y) == group.mul(y, x):
        raise InvalidTriple("x and y commute")
    if not group.generates([x, a]):
        raise InvalidTriple("x and a do not generate the group")


def standard_triples(group: FiniteGroup, kind: str) -> StandardTriple:
    if kind == "square":
        names = _square_names(group)
        els = tuple(group.element(n) for n in names)
        validate_square(group, *els)
    elif kind == "sausage":
        names = _sausage_names(group)
        els = tuple(group.element(n) for n in names)
        validate_sausage(group, *els)
    else:
        raise InputError(f"unknown decomposition type {kind!r}")
    return StandardTriple(kind, names, els)  # type: ignore[arg-type]


def _check_commuting_involution(group: FiniteGroup, b: int, partner: int) -> None:
    if group.element_order(b) != 2 or group.mul(b, partner) != group.mul(partner, b) \
            or b in (partner, group.inv(partner)):
        raise InvalidTriple("modifier must be an involution commuting with, and distinct from, its partner")


def square_modifier(group: FiniteGroup) -> int:
    """Involution ``a`` commuting with the square ``x``."""
    if group.kind == "D" and group.n % 2 == 0:
        name = f"r^{group.n // 2}"
    elif group.kind in ("A4", "A5"):
        name = "(13)(24)"
    elif group.kind == "S4":
        name = "(34)"
    else:
        raise UnsupportedCombination(f"{group.label}: every epimorphism lifts, no non-lifting variant")
    a = group.element(name)
    x = standard_triples(group, "square").elements[0]
    _check_commuting_involution(group, a, x)
    return a


def sausage_modifier(group: FiniteGroup) -> tuple[str, int]:
    """``(partner role, b)`` for the non-lifting sausage hexagon."""
    x, a, y = standard_triples(group, "sausage").elements
    if group.kind == "D" and group.n % 2 == 0:
        role, name = "x", f"r^{group.n // 2}"
    elif group.kind == "A4":
        role, name = "y", "(12)(34)"
    elif group.kind == "S4":
        role, name = "a", "(14)(23)"
    elif group.kind == "A5":
        role, name = "x", "(12)(34)"
    else:
        raise UnsupportedCombination(f"{group.label}: every epimorphism lifts, no non-lifting variant")
    b = group.element(name)
    _check_commuting_involution(group, b, {"x": x, "a": a, "y": y}[role])
    return role, b


# square type --------------------------------------------------------------------------

def square_cocycle(group: FiniteGroup, x: int, y: int, z: int, g: int) -> Cocycle:
    """Top arcs ``x_j -> x``, ``y_j -> y``, ``z_j -> z^-1``; everything else trivial."""
    validate_square(group, x, y, z)
    graph = necklace_graph(g)
    cw = build_cw(graph)
    vals = list(identity_cocycle(cw, group).values)
    for j in range(g - 1):
        vals[cw.top_arc(graph.edge_index(f"x{j}"))] = x
        vals[cw.top_arc(graph.edge_index(f"y{j}"))] = y
        vals[cw.top_arc(graph.edge_index(f"z{j}"))] = group.inv(z)
    return Cocycle(cw, group, tuple(vals))


def square_cocycle_nonlifting(group: FiniteGroup, g: int) -> Cocycle:
    """Seams of the first top hexagon become ``a^-1, 1, a``."""
    tri = standard_triples(group, "square")
    a = square_modifier(group)
    base = square_cocycle(group, *tri.elements, g)
    cw = base.cw
    return base.replace({cw.seam(0, 0): group.inv(a), cw.seam(0, 2): a})


# sausage type -----------------------------------------------------------------------

@dataclass
class SausageSearch:
    nodes: int = 0
    budget: int = 200_000


def _conjugator(group: FiniteGroup, y: int, target: int) -> int:
    ct = group.conj_table
    return int(np.flatnonzero(ct[:, y] == target)[0])


def _sausage_values(group: FiniteGroup, x: int, a: int, ys: Sequence[int], g: int) -> Cocycle:
    graph = sausage_graph(g)
    cw = build_cw(graph)
    vals = list(identity_cocycle(cw, group).values)
    y = ys[0]
    hyp = [group.identity] + [_conjugator(group, y, yk) for yk in ys[1:]]
    for k in range(1, g + 1):
        h = hyp[k - 1]
        xk, ak = group.conjugate(h, x), group.conjugate(h, a)
        v = k - 1
        vals[cw.top_arc(graph.edge_index(f"a{k}"))] = xk
        vals[cw.seam(v, 0)] = ak
        vals[cw.seam(v, 1)] = group.inv(ak)
    gamma = ys[0]  # c(gamma_2)
    vals[cw.top_arc(graph.edge_index("gamma2"))] = gamma
    for k in range(2, g):
        vals[cw.top_arc(graph.edge_index(f"d{k}"))] = ys[k - 1]
        gamma = group.mul(ys[k - 1], gamma)
        vals[cw.top_arc(graph.edge_index(f"gamma{k + 1}"))] = gamma
    return Cocycle(cw, group, tuple(vals))


def sausage_cocycle(group: FiniteGroup, x: int, a: int, g: int, lift_target: int | None = 1,
                    budget: int = 200_000) -> Cocycle:
    """Handle hexagons carry conjugates of ``x, a, x^-1, a^-1, y, 1``.

    The handle values ``y_k`` are conjugates of ``y`` chosen by depth-first
    search so that ``y_g ... y_1 = 1``, every spine curve is non-central and
    every connector pants is non-abelian.  ``lift_target`` (if given) also
    fixes the lifting sign of the result.
    """
    y = group.inv(group.commutator(x, a))
    validate_sausage(group, x, a, y)
    cls = sorted(int(v) for v in set(group.conj_table[:, y].tolist()))
    cover = None if group.in_su2 or lift_target is None else make_cover(group)
    state = SausageSearch(budget=budget)
    t = group.table

    def finish(ys: list[int]) -> Cocycle | None:
        prod = group.identity
        for v in ys:
            prod = int(t[v, prod])
        last = group.inv(prod)
        if last not in cls:
            return None
        c = _sausage_values(group, x, a, ys + [last], g)
        if cover is not None and lifting_obstruction(c, cover) != lift_target:
            return None
        return c

    def dfs(ys: list[int], gamma: int) -> Cocycle | None:
        state.nodes += 1
        if state.nodes > state.budget:
            raise SearchExhausted(f"sausage search exceeded {state.budget} nodes")
        if len(ys) == g - 1:
            return finish(ys)
        for yk in cls:
            if group.mul(yk, gamma) == group.mul(gamma, yk):
                continue  # connector pants would be abelian
            nxt = group.mul(yk, gamma)
            if group.is_central(nxt):
                continue
            found = dfs(ys + [yk], nxt)
            if found is not None:
                return found
        return None

    if group.is_central(y):
        raise SearchExhausted("y is central, so the spine curve gamma_2 is central")
    result = dfs([y], y)
    if result is None:
        raise SearchExhausted(
            "no choice of handle conjugates gives non-abelian connector pants "
            "with non-central spine curves")
    return result


def sausage_cocycle_nonlifting(group: FiniteGroup, g: int, budget: int = 200_000) -> Cocycle:
    """Lifting sausage cocycle with its first handle hexagon modified."""
    tri = standard_triples(group, "sausage")
    x, a, y = tri.elements
    role, b = sausage_modifier(group)
    base = sausage_cocycle(group, x, a, g, lift_target=1, budget=budget)
    cw = base.cw
    graph = cw.graph
    t_a1 = cw.top_arc(graph.edge_index("a1"))
    s0, s1, s2 = cw.seam(0, 0), cw.seam(0, 1), cw.seam(0, 2)
    # the first handle is unconjugated, so x, a, y appear literally
    inv, mul = group.inv, group.mul
    if role == "x":
        changes = {s0: mul(a, b), s1: mul(inv(b), inv(a))}
    elif role == "y":
        changes = {s1: mul(inv(a), b), s2: inv(b)}
    else:
        changes = {t_a1: mul(x, b)}
    return base.replace(changes)


# propositions -----------------------------------------------------------------------------

@dataclass
class PropositionReport:
    group: str
    genus: int
    kind: str
    lift: str                  # "yes" | "no" | "n/a"
    passed: bool
    reason: str | None
    epsilon: int | None
    epsilon_relator: int | None
    compat: CompatReport | None

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "genus": self.genus,
            "type": self.kind,
            "lift": self.lift,
            "passed": self.passed,
            "reason": self.reason,
            "epsilon": self.epsilon,
            "epsilon_relator": self.epsilon_relator,
            "compat": self.compat.to_json() if self.compat else None,
        }


def build_construction(group: FiniteGroup, g: int, kind: str, lift: str) -> Cocycle:
    if group.in_su2 and lift not in ("n/a", "yes"):
        raise UnsupportedCombination(f"{group.label} is already in SU(2); no lifting variant")
    if kind == "square":
        if lift == "no":
            return square_cocycle_nonlifting(group, g)
        return square_cocycle(group, *standard_triples(group, "square").elements, g)
    if kind == "sausage":
        if lift == "no":
            return sausage_cocycle_nonlifting(group, g)
        x, a, _ = standard_triples(group, "sausage").elements
        return sausage_cocycle(group, x, a, g, lift_target=None if group.in_su2 else 1)
    raise InputError(f"unknown decomposition type {kind!r}")


def verify_proposition(group: FiniteGroup, g: int, kind: str, lift: str = "yes") -> PropositionReport:
    """Build the construction and run every check on it.

    ``lift`` is ``"yes"`` (expect sign +1), ``"no"`` (expect -1) or ``"n/a"``
    for groups already realized in SU(2).
    """
    if group.in_su2:
        lift = "n/a"
    try:
        c = build_construction(group, g, kind, lift)
    except (InvalidTriple, SearchExhausted) as exc:
        return PropositionReport(group.label, g, kind, lift, False, f"{type(exc).__name__}: {exc}",
                                 None, None, None)
    report = check_compat_finite(c)
    eps = report.lift_sign
    eps_rel = None
    if not group.in_su2:
        eps_rel = relator_lift_sign(standard_tuple(c), make_cover(group))
    reason = None
    if not report.compatible:
        reason = f"incompatible at {report.first_failure()}"
    elif not report.surjective:
        reason = "holonomy is not surjective"
    elif eps != eps_rel:
        reason = "face product and relator disagree on the lifting sign"
    elif lift == "yes" and eps not in (None, 1):
        reason = "expected a lifting representation"
    elif lift == "no" and eps != -1:
        reason = "expected a non-lifting representation"
    return PropositionReport(group.label, g, kind, lift, reason is None, reason, eps, eps_rel, report)
