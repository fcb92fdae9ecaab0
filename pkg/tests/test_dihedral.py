from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from compatpants.dihedral import (
    IDENTITY,
    DihedralElement,
    DihedralTuple,
    GaussianRational,
    check_conditions,
    commutator,
    is_loxodromic,
    normalize,
    random_tuple,
    replay_log,
)
from compatpants.errors import InputError, PreconditionError

D, F = DihedralElement.diag, DihedralElement.anti
small = st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(lambda q: q != 0)
gauss = st.builds(GaussianRational, small, st.fractions(min_value=-3, max_value=3, max_denominator=3))
elements = st.builds(DihedralElement, gauss, st.integers(0, 1))


def as_matrix(e: DihedralElement):
    return [[complex(float(v.re), float(v.im)) for v in row] for row in e.matrix()]


def matmul(p, q):
    return [[sum(p[i][k] * q[k][j] for k in range(2)) for j in range(2)] for i in range(2)]


@given(elements, elements)
def test_product_agrees_with_matrices(u, v):
    got = as_matrix(u * v)
    want = matmul(as_matrix(u), as_matrix(v))
    assert all(abs(got[i][j] - want[i][j]) < 1e-9 for i in range(2) for j in range(2))


@given(elements)
def test_inverse(u):
    assert u * u.inverse() == IDENTITY


@given(elements, elements)
def test_commutators_are_diagonal(u, v):
    assert commutator(u, v).flip == 0


@pytest.mark.parametrize("text,value", [
    ("3/4", GaussianRational(Fraction(3, 4))),
    ("-i", GaussianRational(0, -1)),
    ("1/2+3/4*i", GaussianRational(Fraction(1, 2), Fraction(3, 4))),
    ("2-5*i", GaussianRational(2, -5)),
    ("i", GaussianRational(0, 1)),
])
def test_scale_parsing(text, value):
    assert GaussianRational.parse(text) == value
    assert GaussianRational.parse(str(value)) == value


@pytest.mark.parametrize("bad", ["", "x", "1/0", "2+"])
def test_scale_parsing_rejects(bad):
    with pytest.raises(InputError):
        GaussianRational.parse(bad)


def test_worked_example_already_normal():
    t = DihedralTuple((F(1), D(2), F(1), D(Fraction(1, 2))))
    rep = check_conditions(t)
    assert rep.passed
    res = normalize(t)
    assert res.log == [] and res.tuple == t


def test_example_needing_moves():
    # flips on b_1 only, loxodromic handle second
    t = DihedralTuple((D(1), F(1), F(3), D(1)))
    assert not check_conditions(t).passed
    res = normalize(t)
    assert res.report.passed and res.log
    assert replay_log(t, res.log) == res.tuple


def test_condition_report_indices():
    t = DihedralTuple((D(1), F(1), F(3), D(1)))
    rep = check_conditions(t)
    assert rep.first_flip_failure == 1
    assert rep.first_loxodromic_failure == 2


def test_relator_enforced():
    with pytest.raises(InputError):
        DihedralTuple((F(1), D(2), F(1), D(2)))


def test_unitary_image_rejected():
    i = GaussianRational(0, 1)
    t = DihedralTuple((F(1), D(i), D(i), F(1)))
    with pytest.raises(PreconditionError):
        normalize(t)


def test_reducible_rejected():
    t = DihedralTuple((D(2), D(3), D(5), D(7)))
    with pytest.raises(PreconditionError):
        normalize(t)


def test_loxodromic():
    assert is_loxodromic(D(2)) and not is_loxodromic(D(GaussianRational(Fraction(3, 5), Fraction(4, 5))))
    assert not is_loxodromic(F(2))


@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3, 4]))
def test_random_inputs_normalize(seed, g):
    t = random_tuple(g, random.Random(seed))
    res = normalize(t)
    assert res.report.passed
    assert replay_log(t, res.log) == res.tuple
    assert all(e.flip == 1 for e in res.tuple.elements[0::2])
    for k in range(2, g + 1):
        assert is_loxodromic(res.tuple.tail_product(k))


def test_json_round_trip():
    t = random_tuple(3, random.Random(11))
    assert DihedralTuple.from_json(t.to_json()) == t


def test_json_rejects_genus_mismatch():
    data = random_tuple(2, random.Random(1)).to_json()
    data["genus"] = 3
    with pytest.raises(InputError):
        DihedralTuple.from_json(data)
