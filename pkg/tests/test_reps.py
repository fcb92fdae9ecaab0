from __future__ import annotations

import itertools
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from _util import random_surface_tuple
from compatpants.algebra.groups import make_cover, make_group
from compatpants.errors import BudgetExceeded, InputError
from compatpants.reps.characters import epi_count_oracle, hom_count_oracle
from compatpants.reps.curves import sausage_words, theta_words, validate_pants_words
from compatpants.reps.enumeration import (
    SurfaceTuple,
    count_homs,
    enumerate_epis,
    enumerate_homs,
    relator_lift_sign,
    relator_lift_signs,
)
from compatpants.reps.moves import check_move, move_set, twist_a, twist_b, twist_ba
from compatpants.reps.orbits import (
    apply_move,
    canonical_form,
    move_table,
    orbit_bfs,
    orbit_partition,
    replay,
)
from compatpants.reps.words import (
    Word,
    are_conjugate,
    inverse_letters,
    is_trivial,
    reduce_letters,
    relator_letters,
    substitute,
)

letters2 = st.lists(st.sampled_from([1, -1, 2, -2, 3, -3, 4, -4]), max_size=14)


# words ----------------------------------------------------------------------------

def test_word_parse_and_print():
    w = Word.parse("a1 b1 a1^-1 b1^-1")
    assert w.letters == (1, 2, -1, -2)
    assert str(w) == "a1 b1 a1^-1 b1^-1"
    assert Word.parse("a2*b2'").letters == (3, -4)
    with pytest.raises(ValueError):
        Word.parse("c1")


@given(letters2)
def test_free_reduction_idempotent(w):
    r = reduce_letters(w)
    assert reduce_letters(r) == r
    assert reduce_letters(r + inverse_letters(r)) == ()


@given(letters2, letters2)
def test_relator_conjugates_are_trivial(u, v):
    g = 2
    conj = tuple(u) + relator_letters(g) + inverse_letters(u)
    assert is_trivial(conj, g)
    assert is_trivial(tuple(v) + inverse_letters(v), g)


def test_nontrivial_words_detected():
    assert not is_trivial((1,), 2)
    assert not is_trivial((1, 2, -1, -2), 2)
    assert not is_trivial(relator_letters(2)[:-1], 2)


def test_conjugacy_of_free_words():
    assert are_conjugate((1, 2, 3), (3, 1, 2))
    assert not are_conjugate((1, 2), (2, 2))


# moves ------------------------------------------------------------------------------

@pytest.mark.parametrize("g", [2, 3, 4])
def test_every_move_is_valid(g):
    for m in move_set(g):
        check_move(m)
        assert round(abs(np.linalg.det(m.homology_matrix()))) == 1
        # inverse really inverts
        for x in range(1, 2 * g + 1):
            assert reduce_letters(substitute(m.images[x], m.inverse_images)) == (x,)


@pytest.mark.parametrize("g", [2, 3])
def test_homology_action_is_symplectic(g):
    n = 2 * g
    omega = np.zeros((n, n), dtype=np.int64)
    for i in range(g):
        omega[2 * i, 2 * i + 1], omega[2 * i + 1, 2 * i] = 1, -1
    for m in move_set(g):
        h = m.homology_matrix()
        assert (h.T @ omega @ h == omega).all()


def test_basic_twist_formulas():
    assert twist_a(2, 1).images[2] == (2, 1)
    assert twist_b(2, 1).images[1] == (1, 2)
    assert twist_ba(2, 1).images[1] == (1, -2, 3)


@given(st.integers(1, 6))
def test_chain_twist_power(k):
    m = twist_ba(2, 1)
    cur = (1,)
    for _ in range(k):
        cur = reduce_letters(substitute(cur, m.images))
    # a1 -> a1 (b1^-1 a2)^k
    assert is_trivial(cur + inverse_letters((1,) + (-2, 3) * k), 2)


# enumeration -------------------------------------------------------------------------

def brute_force_homs(group, g):
    count = 0
    for t in itertools.product(range(group.order), repeat=2 * g):
        acc = group.identity
        for i in range(g):
            acc = group.mul(acc, group.commutator(t[2 * i], t[2 * i + 1]))
        count += acc == group.identity
    return count


@pytest.mark.parametrize("name,homs,epis", [
    ("Q8", 2176, 1440), ("D3", 486, 360), ("D4", 2176, 1440), ("A4", 5376, 4800),
    ("D5", 2500, 1800), ("D6", 7776, 5040), ("S4", 34176, 21600),
])
def test_counts_genus_two(name, homs, epis):
    grp = make_group(name)
    assert count_homs(grp, 2) == homs == hom_count_oracle(grp, 2)
    assert len(enumerate_homs(grp, 2)) == homs
    assert len(enumerate_epis(grp, 2)) == epis == epi_count_oracle(grp, 2)


@pytest.mark.parametrize("name", ["Q8", "D3", "D4"])
def test_counts_against_brute_force(name):
    grp = make_group(name)
    assert brute_force_homs(grp, 2) == count_homs(grp, 2)


def test_a5_counts():
    grp = make_group("A5")
    assert count_homs(grp, 2) == 286140 == hom_count_oracle(grp, 2)
    assert epi_count_oracle(grp, 2) == 241920


def test_genus_three_count():
    assert count_homs(make_group("Q8"), 3) == 133120 == hom_count_oracle(make_group("Q8"), 3)


def test_enumeration_budget():
    with pytest.raises(BudgetExceeded):
        enumerate_homs(make_group("A5"), 3, budget=1000)


def test_surface_tuple_validation():
    grp = make_group("D4")
    with pytest.raises(InputError):
        SurfaceTuple(grp, (grp.element("r"), grp.element("s"), grp.identity, grp.identity))
    t = SurfaceTuple(grp, (grp.identity,) * 4)
    assert t.genus == 2


def test_vectorised_lift_signs():
    grp = make_group("A4")
    cov = make_cover(grp)
    epis = enumerate_epis(grp, 2)
    signs = relator_lift_signs(epis, cov)
    sample = epis[:: max(1, len(epis) // 200)]
    for row, s in zip(sample, signs[:: max(1, len(epis) // 200)]):
        assert relator_lift_sign(SurfaceTuple(grp, tuple(int(x) for x in row)), cov) == s
    assert set(signs.tolist()) == {1, -1}


# curves --------------------------------------------------------------------------------

@pytest.mark.parametrize("g", [2, 3, 4, 5])
def test_sausage_words_close_up(g):
    validate_pants_words(sausage_words(g))


def test_theta_words_close_up():
    validate_pants_words(theta_words())


# orbits ----------------------------------------------------------------------------------

def test_canonical_form_is_conjugation_invariant():
    grp = make_group("S4")
    rng = random.Random(3)
    t = random_surface_tuple(grp, 2, rng)
    h = rng.randrange(grp.order)
    conj = tuple(grp.conjugate(h, x) for x in t)
    assert canonical_form(SurfaceTuple(grp, t)).elements == canonical_form(SurfaceTuple(grp, conj)).elements


def test_moves_preserve_relator_on_tuples():
    grp = make_group("A5")
    rng = random.Random(4)
    for _ in range(5):
        t = SurfaceTuple(grp, random_surface_tuple(grp, 3, rng))
        for m in move_table(3):
            apply_move(m, t)  # SurfaceTuple re-validates the relator


@pytest.mark.parametrize("name,count", [("Q8", 1), ("D3", 1), ("D5", 1), ("D4", 2), ("A4", 2), ("D6", 2)])
def test_orbit_counts(name, count):
    grp = make_group(name)
    epis = enumerate_epis(grp, 2)
    part = orbit_partition(grp, epis)
    assert part.count == count
    assert sum(part.sizes) == len(epis)


def test_orbit_witness_replays():
    from compatpants.constructions import compat_mask

    grp = make_group("A4")
    words = sausage_words(2)
    epis = enumerate_epis(grp, 2)
    bad = epis[~compat_mask(grp, epis, words)]
    start = tuple(int(x) for x in bad[0])
    res = orbit_bfs(grp, start, predicate=lambda rows: compat_mask(grp, rows, words))
    assert res.witness is not None and len(res.witness) >= 1
    end = replay(grp, start, res.witness, 2)
    assert end == res.witness_tuple
    assert compat_mask(grp, np.array([end]), words)[0]
