from __future__ import annotations

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from compatpants.errors import InputError, NoOneEdgeLoop
from compatpants.topology.cutting import cutting_schedule, replay_matches
from compatpants.topology.cw import build_cw, validate_cw
from compatpants.topology.graphs import (
    TrivalentGraph,
    dumbbell_graph,
    enumerate_trivalent,
    graph_from_edges,
    necklace_graph,
    sausage_graph,
    theta_graph,
)


def to_nx(graph: TrivalentGraph) -> nx.MultiGraph:
    m = nx.MultiGraph()
    m.add_nodes_from(range(graph.num_vertices))
    m.add_edges_from(graph.edge_list())
    return m


@pytest.mark.parametrize("g", range(2, 26))
def test_standard_graphs_genus_and_euler(g):
    for graph in (sausage_graph(g), necklace_graph(g)):
        graph.validate()
        assert graph.genus == g
        assert graph.num_vertices == 2 * g - 2 and graph.num_edges == 3 * g - 3
        cw = build_cw(graph)
        assert cw.euler_characteristic == 2 - 2 * g


@pytest.mark.parametrize("g", [2, 3, 4, 7])
def test_cells_validate(g):
    validate_cw(build_cw(sausage_graph(g)))
    validate_cw(build_cw(necklace_graph(g)))


def test_sausage_shape():
    graph = sausage_graph(4)
    assert len(graph.loop_edges()) == 4
    assert {graph.edge_labels[e] for e in graph.loop_edges()} == {"a1", "a2", "a3", "a4"}
    # connectors carry no loops
    loop_vertices = {graph.endpoints(e)[0] for e in graph.loop_edges()}
    assert loop_vertices == {0, 1, 2, 3}


def test_necklace_shape():
    graph = necklace_graph(4)
    assert graph.loop_edges() == []
    multi = to_nx(graph)
    doubled = sum(1 for u, v in nx.Graph(multi).edges if multi.number_of_edges(u, v) == 2)
    assert doubled == 3
    assert nx.is_isomorphic(to_nx(necklace_graph(2)), to_nx(theta_graph()))


def test_enumeration_counts_and_distinctness():
    graphs = enumerate_trivalent(8)
    by_size: dict[int, list[TrivalentGraph]] = {}
    for gr in graphs:
        by_size.setdefault(gr.num_vertices, []).append(gr)
    # connected cubic multigraphs with loops allowed: 2, 5, 17, 71
    assert [len(by_size[n]) for n in (2, 4, 6, 8)] == [2, 5, 17, 71]
    for n in (2, 4, 6):
        items = [to_nx(gr) for gr in by_size[n]]
        for i in range(len(items)):
            for j in range(i + 1, len(items)):
                assert not nx.is_isomorphic(items[i], items[j])


def test_canonical_form_agrees_with_networkx():
    graphs = [gr for gr in enumerate_trivalent(6) if gr.num_vertices == 6]
    for u in graphs:
        for v in graphs:
            assert (u.canonical_form() == v.canonical_form()) == nx.is_isomorphic(to_nx(u), to_nx(v))


@given(st.permutations(list(range(6))))
def test_canonical_form_is_relabelling_invariant(perm):
    graph = sausage_graph(4)
    edges = [(perm[u], perm[v]) for u, v in graph.edge_list()]
    assert graph_from_edges(6, edges).canonical_form() == graph.canonical_form()


def test_cutting_schedule_on_every_small_graph():
    accepted = rejected = 0
    for graph in enumerate_trivalent(8):
        if graph.loop_edges():
            sched = cutting_schedule(graph)
            assert replay_matches(graph, sched)
            assert sched.genus == graph.genus
            accepted += 1
        else:
            with pytest.raises(NoOneEdgeLoop):
                cutting_schedule(graph)
            rejected += 1
    assert accepted > 0 and rejected > 0


def test_cutting_schedule_on_sausage_and_dumbbell():
    for graph in (sausage_graph(5), dumbbell_graph()):
        assert replay_matches(graph, cutting_schedule(graph))
    with pytest.raises(NoOneEdgeLoop):
        cutting_schedule(necklace_graph(5))


def test_graph_json_round_trip():
    graph = sausage_graph(3)
    again = TrivalentGraph.from_json(graph.to_json())
    assert again.rotation == graph.rotation and again.edge_labels == graph.edge_labels


@pytest.mark.parametrize("rotation", [
    [(0, 1, 2)],                        # odd vertex count
    [(0, 1, 2), (3, 4, 4)],             # repeated half-edge
    [(0, 1), (2, 3, 4)],                # degree two
])
def test_malformed_graphs_rejected(rotation):
    with pytest.raises(InputError):
        TrivalentGraph(tuple(tuple(r) for r in rotation))


def test_disconnected_graph_rejected():
    with pytest.raises(InputError):
        graph_from_edges(4, [(0, 0), (0, 1), (1, 1), (2, 2), (2, 3), (3, 3)])
