from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from compatpants.algebra.cyclotomic import CyclotomicNumber
from compatpants.algebra.groups import (
    commutator_of_lifts,
    group_from_json,
    make_cover,
    make_group,
)
from compatpants.algebra.quaternion import Quaternion
from compatpants.errors import InputError, UnsupportedGroup
from compatpants.reps.characters import character_degrees

ORDERS = {"D3": 6, "D4": 8, "D5": 10, "D6": 12, "A4": 12, "S4": 24, "A5": 60, "Q8": 8}

coeffs = st.lists(st.integers(-5, 5), min_size=4, max_size=4)


def cyc(cs):
    return CyclotomicNumber.from_coeffs(12, [Fraction(c) for c in cs])


@given(coeffs, coeffs, coeffs)
def test_cyclotomic_ring_axioms(u, v, w):
    x, y, z = cyc(u), cyc(v), cyc(w)
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    assert x * y == y * x
    assert x - x == CyclotomicNumber.from_rational(12, 0)


@given(coeffs)
def test_cyclotomic_inverse(u):
    x = cyc(u)
    if x.is_zero():
        return
    assert x * x.inverse() == CyclotomicNumber.from_rational(12, 1)
    assert abs(complex(x) * complex(x.inverse()) - 1) < 1e-9


@pytest.mark.parametrize("n", [2, 3, 5])
def test_exact_square_roots(n):
    order = {2: 8, 3: 12, 5: 5}[n]
    s = CyclotomicNumber.sqrt(4 * order if order % 4 else order, n) if n != 5 else CyclotomicNumber.sqrt(20, 5)
    assert s * s == CyclotomicNumber.from_rational(s.order, n)
    assert abs(complex(s) - n ** 0.5) < 1e-12


def test_quaternion_units():
    i = Quaternion.from_parts(4, 0, 1, 0, 0)
    j = Quaternion.from_parts(4, 0, 0, 1, 0)
    k = Quaternion.from_parts(4, 0, 0, 0, 1)
    assert i * j == k
    assert j * i == -k
    assert i * i == -Quaternion.one(4)
    assert (i * j * k) == -Quaternion.one(4)


@pytest.mark.parametrize("name,order", sorted(ORDERS.items()))
def test_group_orders_and_axioms(name, order):
    g = make_group(name)
    assert g.order == order
    t = g.table
    e = g.identity
    for x in range(order):
        assert t[e, x] == x and t[x, g.inv(x)] == e
    for x, y, z in itertools.islice(itertools.product(range(order), repeat=3), 2000):
        assert t[t[x, y], z] == t[x, t[y, z]]


@pytest.mark.parametrize("name,degrees", [
    ("D3", [1, 1, 2]), ("D4", [1, 1, 1, 1, 2]), ("Q8", [1, 1, 1, 1, 2]),
    ("A4", [1, 1, 1, 3]), ("S4", [1, 1, 2, 3, 3]), ("A5", [1, 3, 3, 4, 5]),
])
def test_character_degrees(name, degrees):
    assert character_degrees(make_group(name)) == degrees


@pytest.mark.parametrize("name", ["D3", "D4", "D5", "D6", "A4", "S4", "A5"])
def test_binary_cover(name):
    base = make_group(name)
    cov = make_cover(base)
    assert cov.cover.order == 2 * base.order
    for x in range(base.order):
        assert cov.projection[cov.lift[x]] == x
    assert cov.sign(cov.z) == -1 and cov.sign(cov.cover.identity) == 1
    assert cov.cover.is_central(cov.z)


def test_dicyclic_cover_of_d3():
    cov = make_cover(make_group("D3"))
    assert cov.cover.order == 12
    # dicyclic: a unique involution, the central -1
    invols = [x for x in range(12) if cov.cover.element_order(x) == 2]
    assert invols == [cov.z]


def test_q8_has_no_cover():
    with pytest.raises(UnsupportedGroup):
        make_cover(make_group("Q8"))


def test_commuting_involutions_lift_to_anticommuting():
    g = make_group("D4")
    cov = make_cover(g)
    r2, s = g.element("r^2"), g.element("s")
    assert commutator_of_lifts(r2, s, cov) == -1


@pytest.mark.parametrize("name", ["D4", "A4", "Q8", "A5"])
def test_group_json_round_trip(name):
    g = make_group(name)
    g2, mapping = group_from_json(g.to_json())
    assert g2 is g
    assert mapping == list(range(g.order))


def test_group_json_rejects_tampering():
    data = make_group("A4").to_json()
    data["elements"] = data["elements"][:-1] + data["elements"][:1]
    with pytest.raises(InputError):
        group_from_json(data)


def test_named_elements():
    s4 = make_group("S4")
    x = s4.element("(1234)")
    assert s4.element_order(x) == 4
    assert s4.name_of(x) == "(1234)"
    d5 = make_group("D5")
    assert d5.element_order(d5.element("r")) == 5
    assert make_group("Q8").element("-1") != make_group("Q8").identity
