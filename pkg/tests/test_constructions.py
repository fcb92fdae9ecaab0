from __future__ import annotations

import itertools
import math
from fractions import Fraction

import pytest

from compatpants.algebra.cyclotomic import CyclotomicNumber
from compatpants.algebra.groups import make_cover, make_group
from compatpants.cocycle import lifting_obstruction
from compatpants.constructions import (
    check_compat_finite,
    check_compat_sl2,
    compat_mask,
    parse_trace,
    sausage_modifier,
    square_cocycle_nonlifting,
    square_modifier,
    standard_triples,
    verify_proposition,
)
from compatpants.errors import InputError, InvalidTriple, UnsupportedCombination
from compatpants.reps.curves import sausage_words
from compatpants.reps.enumeration import enumerate_homs

GROUPS = ["D3", "D4", "D5", "D6", "A4", "S4", "A5", "Q8"]

# Combinations that no representation can realise on the caterpillar model
# (see the impossibility tests below); kept in the matrix so a change shows up.
IMPOSSIBLE = {
    ("D4", g, "sausage", lift) for g in (2, 3, 4) for lift in ("yes", "no")
} | {
    (name, g, "sausage", lift)
    for name in ("D3", "D5", "D6", "A4") for g in (3, 4) for lift in ("yes", "no")
}


def matrix():
    for name in GROUPS:
        grp = make_group(name)
        for g in (2, 3, 4):
            for kind in ("square", "sausage"):
                if name == "Q8" and kind == "sausage":
                    continue
                lifts = ["n/a"] if grp.in_su2 else ["yes"]
                if grp.kind != "D" or grp.n % 2 == 0:
                    lifts += [] if grp.in_su2 else ["no"]
                for lift in lifts:
                    marks = []
                    if (name, g, kind, lift) in IMPOSSIBLE:
                        marks = [pytest.mark.xfail(strict=True, reason="abelian pants forced by the group")]
                    yield pytest.param(name, g, kind, lift, marks=marks, id=f"{name}-g{g}-{kind}-{lift}")


@pytest.mark.parametrize("name,g,kind,lift", list(matrix()))
def test_construction(name, g, kind, lift):
    rep = verify_proposition(make_group(name), g, kind, lift)
    assert rep.passed, rep.reason
    if lift == "yes":
        assert rep.epsilon == 1
    elif lift == "no":
        assert rep.epsilon == -1
    assert rep.epsilon == rep.epsilon_relator


@pytest.mark.parametrize("name", ["D3", "D4", "D5", "D6", "A4", "S4", "A5", "Q8"])
def test_square_triples_valid(name):
    t = standard_triples(make_group(name), "square")
    assert len(set(t.elements)) == 3


@pytest.mark.parametrize("name", ["D3", "D5", "D6", "A4", "S4", "A5"])
def test_sausage_triples_valid(name):
    standard_triples(make_group(name), "sausage")


def test_d4_sausage_triple_is_degenerate():
    with pytest.raises(InvalidTriple):
        standard_triples(make_group("D4"), "sausage")


def test_q8_has_no_sausage_triple_exhaustive():
    q8 = make_group("Q8")
    found = [
        (x, a, y) for x, a, y in itertools.product(range(8), repeat=3)
        if q8.mul(q8.commutator(x, a), y) == q8.identity and not q8.is_central(y)
    ]
    assert found == []
    with pytest.raises(UnsupportedCombination):
        standard_triples(q8, "sausage")


def test_odd_dihedral_has_no_nonlifting_variant():
    with pytest.raises(UnsupportedCombination):
        square_modifier(make_group("D5"))
    with pytest.raises(UnsupportedCombination):
        sausage_modifier(make_group("D3"))


def test_s4_modifier_from_recipe_would_break_a_pants():
    s4 = make_group("S4")
    x, a, y = standard_triples(s4, "sausage").elements
    b_bad = s4.element("(14)")
    xb = s4.mul(x, b_bad)
    assert s4.mul(xb, y) == s4.mul(y, xb)
    role, b = sausage_modifier(s4)
    assert (role, s4.name_of(b)) == ("a", "(14)(23)")


def test_square_nonlifting_d4_sign():
    grp = make_group("D4")
    c = square_cocycle_nonlifting(grp, 2)
    assert lifting_obstruction(c, make_cover(grp)) == -1
    assert check_compat_finite(c).compatible


# impossibility of the failing combinations ------------------------------------------------

def test_d4_derived_subgroup_is_central():
    d4 = make_group("D4")
    derived = d4.closure([d4.commutator(x, y) for x in range(8) for y in range(8)])
    assert derived <= d4.center()


@pytest.mark.parametrize("name", ["D3", "D4", "D5", "D6", "A4"])
def test_derived_subgroup_abelian(name):
    grp = make_group(name)
    derived = grp.closure([grp.commutator(x, y) for x in range(grp.order) for y in range(grp.order)])
    assert grp.is_abelian(derived)


@pytest.mark.parametrize("name", ["S4", "A5"])
def test_derived_subgroup_nonabelian(name):
    grp = make_group(name)
    derived = grp.closure([grp.commutator(x, y) for x in range(grp.order) for y in range(grp.order)])
    assert not grp.is_abelian(derived)


@pytest.mark.parametrize("name,g", [("D4", 2), ("D3", 3), ("D5", 3), ("A4", 3)])
def test_no_sausage_compatible_homomorphism(name, g):
    grp = make_group(name)
    homs = enumerate_homs(grp, g, budget=10 ** 9)
    assert int(compat_mask(grp, homs, sausage_words(g)).sum()) == 0


@pytest.mark.parametrize("name", ["D3", "A4"])
def test_genus_two_sausage_is_reachable(name):
    grp = make_group(name)
    homs = enumerate_homs(grp, 2)
    assert int(compat_mask(grp, homs, sausage_words(2)).sum()) > 0


# SL2 trace checks -----------------------------------------------------------------------

def sl2(curves, pants):
    return check_compat_sl2(curves, pants)


def test_trace_two_curve_fails_exactly():
    rep = sl2([Fraction(2), Fraction(3), Fraction(3)], [[Fraction(3)] * 3] * 2)
    assert rep.compatible is False
    assert rep.first_failure() == "curve c0"


def test_trace_minus_two_fails():
    rep = sl2([Fraction(-2), Fraction(3), Fraction(3)], [[Fraction(3)] * 3] * 2)
    assert rep.compatible is False


def test_generic_rational_traces_pass():
    rep = sl2([Fraction(3), Fraction(5, 2), Fraction(7)], [[Fraction(3), Fraction(5, 2), Fraction(7)]] * 2)
    assert rep.compatible is True


def test_reducible_pants_boundary_case():
    root3 = CyclotomicNumber.sqrt(12, 3)
    zero, one = CyclotomicNumber.from_rational(12, 0), CyclotomicNumber.from_rational(12, 1)
    exact = sl2([zero, one, root3], [[zero, one, root3]] * 2)
    assert exact.compatible is False
    assert [p.verdict for p in exact.pants] == ["fail", "fail"]
    floating = sl2([0.0, 1.0, math.sqrt(3)], [[0.0, 1.0, math.sqrt(3)]] * 2)
    assert floating.compatible is None
    assert [p.verdict for p in floating.pants] == ["indeterminate", "indeterminate"]


def test_reducible_locus_point_fails():
    # (2, 2, 2) satisfies x^2 + y^2 + z^2 - xyz = 4
    rep = sl2([Fraction(3)] * 3, [[Fraction(2)] * 3, [Fraction(3)] * 3])
    assert rep.pants[0].verdict == "fail" and rep.pants[1].verdict == "pass"


def test_parse_trace():
    assert parse_trace(3) == Fraction(3)
    assert parse_trace("5/2") == Fraction(5, 2)
    assert parse_trace("sqrt(3)") * parse_trace("sqrt(3)") == CyclotomicNumber.from_rational(12, 3)
    assert isinstance(parse_trace(1.5), float)
    with pytest.raises(InputError):
        parse_trace("sqrt(7)")
    with pytest.raises(InputError):
        parse_trace(True)


def test_trace_shape_checked():
    with pytest.raises(InputError):
        sl2([Fraction(3)] * 2, [[Fraction(3)] * 3] * 2)
