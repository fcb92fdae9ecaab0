from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from _util import naive_relator_sign, random_surface_tuple
from compatpants.algebra.groups import make_cover, make_group
from compatpants.cocycle import (
    Cocycle,
    Gauge,
    cocycle_from_json,
    cocycle_from_tuple,
    curve_holonomy,
    find_gauge,
    gauge_transform,
    holonomy_image,
    identity_cocycle,
    lifting_obstruction,
    pants_boundary_holonomies,
    standard_tuple,
    surface_presentation,
)
from compatpants.errors import InvalidCocycle
from compatpants.reps.words import is_trivial, relator_letters
from compatpants.topology.cw import build_cw
from compatpants.topology.graphs import necklace_graph, sausage_graph

GRAPHS = [("sausage", 2), ("sausage", 3), ("necklace", 3)]


def cw_for(kind, g):
    return build_cw(sausage_graph(g) if kind == "sausage" else necklace_graph(g))


def test_identity_cocycle_is_valid():
    cw = cw_for("sausage", 3)
    c = identity_cocycle(cw, make_group("A4"))
    assert lifting_obstruction(c, make_cover(c.group)) == 1


def test_broken_face_rejected():
    cw = cw_for("sausage", 2)
    g = make_group("D4")
    vals = [g.identity] * len(cw.edges)
    vals[cw.seam(0, 0)] = g.element("r")
    with pytest.raises(InvalidCocycle):
        Cocycle(cw, g, tuple(vals))


@pytest.mark.parametrize("kind,g", GRAPHS)
def test_presentation_relator(kind, g):
    pres = surface_presentation(cw_for(kind, g))
    assert pres is not None
    assert is_trivial(relator_letters(g), g)


@pytest.mark.parametrize("name", ["D4", "A4", "S4", "A5"])
@pytest.mark.parametrize("kind,g", GRAPHS)
def test_tuple_round_trip_and_gauges(name, kind, g):
    grp = make_group(name)
    cw = cw_for(kind, g)
    rng = random.Random(hash((name, kind, g)) & 0xFFFF)
    for _ in range(4):
        t = random_surface_tuple(grp, g, rng)
        c = cocycle_from_tuple(cw, grp, t)
        assert standard_tuple(c) == t
        d = Gauge(tuple([grp.identity] + [rng.randrange(grp.order) for _ in range(cw.num_vertices - 1)]))
        c2 = gauge_transform(c, d)
        assert standard_tuple(c2) == t
        found = find_gauge(c, c2)
        assert found is not None and gauge_transform(c, found).values == c2.values


@pytest.mark.parametrize("kind,g", GRAPHS)
def test_pants_boundaries_multiply_to_identity(kind, g):
    grp = make_group("S4")
    cw = cw_for(kind, g)
    c = cocycle_from_tuple(cw, grp, random_surface_tuple(grp, g, random.Random(5)))
    for v in range(cw.graph.num_vertices):
        x, y, z = pants_boundary_holonomies(c, v)
        assert grp.product([x, y, z]) == grp.identity


@given(st.integers(0, 10 ** 6))
def test_obstruction_matches_relator_sign(seed):
    rng = random.Random(seed)
    name = rng.choice(["D4", "D6", "A4", "S4", "A5"])
    kind, g = rng.choice(GRAPHS)
    grp = make_group(name)
    cov = make_cover(grp)
    t = random_surface_tuple(grp, g, rng)
    c = cocycle_from_tuple(cw_for(kind, g), grp, t)
    eps = lifting_obstruction(c, cov)
    assert eps == naive_relator_sign(t, cov)
    signs = [rng.choice((1, -1)) for _ in c.values]
    assert lifting_obstruction(c, cov, signs) == eps


def test_both_signs_occur():
    grp = make_group("A4")
    cov = make_cover(grp)
    cw = cw_for("sausage", 2)
    rng = random.Random(0)
    seen = {lifting_obstruction(cocycle_from_tuple(cw, grp, random_surface_tuple(grp, 2, rng)), cov)
            for _ in range(60)}
    assert seen == {1, -1}


def test_curve_holonomy_and_image():
    grp = make_group("A5")
    cw = cw_for("sausage", 2)
    rng = random.Random(9)
    t = random_surface_tuple(grp, 2, rng)
    c = cocycle_from_tuple(cw, grp, t)
    assert holonomy_image(c) == grp.closure(t)
    # the loop a1 carries the first standard generator up to conjugacy
    a1 = curve_holonomy(c, cw.graph.edge_index("a1"))
    assert grp.element_order(a1) == grp.element_order(t[0])


def test_cocycle_json_round_trip():
    grp = make_group("D6")
    c = cocycle_from_tuple(cw_for("necklace", 3), grp, random_surface_tuple(grp, 3, random.Random(1)))
    c2 = cocycle_from_json(c.to_json(), grp)
    assert c2.values == c.values


def test_cocycle_json_rejects_bad_values():
    grp = make_group("D3")
    data = identity_cocycle(cw_for("sausage", 2), grp).to_json()
    data["values"][0] = 99
    with pytest.raises(InvalidCocycle):
        cocycle_from_json(data, grp)
