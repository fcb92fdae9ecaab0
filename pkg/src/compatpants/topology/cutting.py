"""Reduction of a trivalent graph with a loop to a one-holed-torus core.

The procedure: detach the pants carrying a loop, cut the remaining graph
open along ``g - 1`` non-separating edges, strip vertices that carry two
boundary stubs one at a time (each gives its neighbour a fresh boundary
label), and finish with the last vertex glued to the detached loop pants.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from ..errors import NoOneEdgeLoop
from .graphs import TrivalentGraph, multigraph_canonical_form


@dataclass(frozen=True)
class CutMove:
    kind: str  # remove_loop | cut | remove_vertex | special_cut
    vertex: int | None = None
    edge: int | None = None
    labels: tuple[int, ...] = ()
    new_label: int | None = None
    vertices_after: int = 0
    boundaries_after: int = 0

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        for key in ("vertex", "edge", "new_label"):
            val = getattr(self, key)
            if val is not None:
                out[key] = val
        if self.labels:
            out["labels"] = list(self.labels)
        out["vertices_after"] = self.vertices_after
        out["boundaries_after"] = self.boundaries_after
        return out


@dataclass(frozen=True)
class CuttingSchedule:
    genus: int
    moves: tuple[CutMove, ...]
    loop_vertex: int
    core_vertex: int
    core_labels: tuple[int, int]

    @property
    def removals(self) -> int:
        return sum(1 for m in self.moves if m.kind == "remove_vertex")

    def to_json(self) -> dict:
        return {
            "schema": "compatpants.schedule/1",
            "genus": self.genus,
            "loop_vertex": self.loop_vertex,
            "core_vertex": self.core_vertex,
            "core_labels": list(self.core_labels),
            "moves": [m.to_json() for m in self.moves],
        }


@dataclass
class _State:
    """Partial graph: half-edges either paired or carrying a stub label."""

    vertex_halves: dict[int, list[int]]
    partner: dict[int, int]
    stub: dict[int, int | str] = field(default_factory=dict)

    def boundary_count(self) -> int:
        return sum(1 for v in self.stub.values() if v != "handle")


def cutting_schedule(graph: TrivalentGraph) -> CuttingSchedule:
    loops = graph.loop_edges()
    if not loops:
        raise NoOneEdgeLoop("graph has no one-edge loop")
    g = graph.genus
    e0 = loops[0]
    v0 = graph.vertex_of(2 * e0)
    h_link = next(h for h in graph.rotation[v0] if h // 2 != e0)
    h_w = h_link ^ 1
    w = graph.vertex_of(h_w)
    st = _State({v: list(hs) for v, hs in enumerate(graph.rotation) if v != v0}, {})
    for e in range(graph.num_edges):
        if e in (e0, h_link // 2):
            continue
        st.partner[2 * e] = 2 * e + 1
        st.partner[2 * e + 1] = 2 * e
    st.stub[h_w] = "handle"
    moves = [CutMove("remove_loop", vertex=v0, edge=e0, vertices_after=len(st.vertex_halves),
                     boundaries_after=0)]
    # spanning tree of the remaining graph, cut the complementary edges
    seen, tree = {w}, set()
    queue = deque([w])
    while queue:
        x = queue.popleft()
        for h in st.vertex_halves[x]:
            if h in st.partner:
                y = graph.vertex_of(st.partner[h])
                if y not in seen:
                    seen.add(y)
                    tree.add(h // 2)
                    queue.append(y)
    label = 0
    for e in sorted({h // 2 for h in st.partner}):
        if e not in tree:
            label += 1
            del st.partner[2 * e], st.partner[2 * e + 1]
            st.stub[2 * e] = st.stub[2 * e + 1] = label
            moves.append(CutMove("cut", edge=e, labels=(label,), vertices_after=len(st.vertex_halves),
                                 boundaries_after=st.boundary_count()))
    if label != g - 1:
        raise AssertionError("wrong number of cut edges")
    while len(st.vertex_halves) > 1:
        u = next(
            v for v in sorted(st.vertex_halves)
            if v != w and sum(1 for h in st.vertex_halves[v] if isinstance(st.stub.get(h), int)) == 2
        )
        hs = st.vertex_halves.pop(u)
        labs = tuple(sorted(st.stub.pop(h) for h in hs if h in st.stub))
        (inner,) = [h for h in hs if h in st.partner]
        outer = st.partner.pop(inner)
        del st.partner[outer]
        label += 1
        st.stub[outer] = label
        before_v, before_b = len(st.vertex_halves) + 1, st.boundary_count() + 1
        moves.append(CutMove("remove_vertex", vertex=u, labels=labs, new_label=label,
                             vertices_after=len(st.vertex_halves), boundaries_after=st.boundary_count()))
        assert before_v - 1 == moves[-1].vertices_after and before_b - 1 == moves[-1].boundaries_after
    core = tuple(sorted(st.stub[h] for h in st.vertex_halves[w] if st.stub.get(h) != "handle"))
    if len(core) != 2:
        raise AssertionError("core vertex does not carry two boundary labels")
    moves.append(CutMove("special_cut", vertex=w, labels=core, vertices_after=1, boundaries_after=2))
    return CuttingSchedule(g, tuple(moves), v0, w, core)


def replay(schedule: CuttingSchedule) -> tuple[int, list[tuple[int, int]]]:
    """Rebuild the graph (as vertex count and edge list) from the terminal state."""
    edges: list[tuple[int, int]] = [(0, 0), (0, 1)]  # loop pants 0, core pants 1
    stubs: list[tuple[int, int]] = [(1, schedule.core_labels[0]), (1, schedule.core_labels[1])]
    n = 2
    for mv in reversed(schedule.moves):
        if mv.kind != "remove_vertex":
            continue
        k = next(i for i, (_, lab) in enumerate(stubs) if lab == mv.new_label)
        anchor, _ = stubs.pop(k)
        edges.append((anchor, n))
        stubs += [(n, mv.labels[0]), (n, mv.labels[1])]
        n += 1
    cut_labels = [mv.labels[0] for mv in schedule.moves if mv.kind == "cut"]
    for lab in cut_labels:
        ends = [v for v, l in stubs if l == lab]
        if len(ends) != 2:
            raise AssertionError(f"label {lab} does not occur on exactly two stubs")
        edges.append((ends[0], ends[1]))
        stubs = [(v, l) for v, l in stubs if l != lab]
    if stubs:
        raise AssertionError("unmatched boundary stubs after replay")
    return n, edges


def replay_matches(graph: TrivalentGraph, schedule: CuttingSchedule) -> bool:
    n, edges = replay(schedule)
    return multigraph_canonical_form(n, edges) == graph.canonical_form()
