"""Hexagonal CW structure on the surface determined by a trivalent graph.

Per curve ``e``: vertices ``x_e^0 = 2e`` and ``x_e^1 = 2e+1``, a top arc
``t_e`` from ``x^0`` to ``x^1`` (edge index ``e``) and a bottom arc ``u_e``
from ``x^1`` to ``x^0`` (edge index ``E + e``).  Per pants ``v``: seams
``s_{v,i}`` (edge index ``2E + 3v + i``) running from the end of its ``i``-th
boundary arc to the start of the next one, a top hexagon (face ``2v``) and a
bottom hexagon (face ``2v + 1``).

A half-edge on side A starts at ``x^0``; one on side B starts at ``x^1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ..errors import InputError
from .graphs import TrivalentGraph

Step = tuple[int, int]  # (edge index, +1 forward / -1 backward)


@dataclass(frozen=True)
class CWEdge:
    index: int
    kind: str  # "top", "bottom", "seam"
    src: int
    dst: int
    curve: int | None = None
    pants: int | None = None
    slot: int | None = None


@dataclass(frozen=True)
class CWFace:
    index: int
    pants: int
    half: str  # "top" or "bottom"
    boundary: tuple[Step, ...]


@dataclass(frozen=True)
class PantsCW:
    graph: TrivalentGraph
    num_vertices: int
    edges: tuple[CWEdge, ...]
    faces: tuple[CWFace, ...]

    basepoint: int = 0

    @property
    def genus(self) -> int:
        return self.graph.genus

    @property
    def euler_characteristic(self) -> int:
        return self.num_vertices - len(self.edges) + len(self.faces)

    def top_arc(self, curve: int) -> int:
        return curve

    def bottom_arc(self, curve: int) -> int:
        return self.graph.num_edges + curve

    def seam(self, pants: int, i: int) -> int:
        return 2 * self.graph.num_edges + 3 * pants + i

    def step_start(self, step: Step) -> int:
        e = self.edges[step[0]]
        return e.src if step[1] > 0 else e.dst

    def step_end(self, step: Step) -> int:
        e = self.edges[step[0]]
        return e.dst if step[1] > 0 else e.src

    def check_path(self, steps: tuple[Step, ...], closed: bool = True) -> None:
        for a, b in zip(steps, steps[1:]):
            if self.step_end(a) != self.step_start(b):
                raise InputError(f"steps {a} and {b} are not incident")
        if closed and steps and self.step_end(steps[-1]) != self.step_start(steps[0]):
            raise InputError("path is not closed")

    # named loops ---------------------------------------------------------------
    def half_start(self, h: int) -> int:
        e = h // 2
        return 2 * e if h % 2 == 0 else 2 * e + 1

    def half_end(self, h: int) -> int:
        e = h // 2
        return 2 * e + 1 if h % 2 == 0 else 2 * e

    def curve_loop(self, curve: int) -> tuple[Step, ...]:
        """Top arc then bottom arc, based at ``x^0`` of the curve."""
        return ((self.top_arc(curve), 1), (self.bottom_arc(curve), 1))

    def pants_boundary_loops(self, pants: int) -> tuple[tuple[Step, ...], ...]:
        """Three boundary loops based at the start of the first half-edge.

        Loop ``i`` runs along the connecting path in the top hexagon, goes once
        around boundary ``i`` (bottom arc first, then top arc backwards) and
        returns.  Their product in order is trivial.
        """
        hs = self.graph.rotation[pants]
        top = self.faces[2 * pants].boundary
        loops = []
        for i, h in enumerate(hs):
            path = top[: 2 * i]
            e = h // 2
            sgn = 1 if h % 2 == 0 else -1
            around = ((self.top_arc(e), sgn), (self.bottom_arc(e), sgn))
            inv_around = tuple((ed, -s) for ed, s in reversed(around))
            back = tuple((ed, -s) for ed, s in reversed(path))
            loops.append(path + inv_around + back)
        return tuple(loops)

    # serialization -------------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "schema": "compatpants.cw/1",
            "graph": self.graph.to_json(),
            "num_vertices": self.num_vertices,
            "euler_characteristic": self.euler_characteristic,
            "edges": [
                {"index": e.index, "kind": e.kind, "src": e.src, "dst": e.dst,
                 **({"curve": e.curve} if e.curve is not None else {}),
                 **({"pants": e.pants, "slot": e.slot} if e.pants is not None else {})}
                for e in self.edges
            ],
            "faces": [
                {"index": f.index, "pants": f.pants, "half": f.half,
                 "boundary": [list(s) for s in f.boundary]}
                for f in self.faces
            ],
        }


@lru_cache(maxsize=256)
def build_cw(graph: TrivalentGraph) -> PantsCW:
    ne = graph.num_edges
    edges: list[CWEdge] = []
    for e in range(ne):
        edges.append(CWEdge(e, "top", 2 * e, 2 * e + 1, curve=e))
    for e in range(ne):
        edges.append(CWEdge(ne + e, "bottom", 2 * e + 1, 2 * e, curve=e))

    def start(h: int) -> int:
        return 2 * (h // 2) + (h % 2)

    def end(h: int) -> int:
        return 2 * (h // 2) + 1 - (h % 2)

    for v, hs in enumerate(graph.rotation):
        for i in range(3):
            idx = 2 * ne + 3 * v + i
            edges.append(CWEdge(idx, "seam", end(hs[i]), start(hs[(i + 1) % 3]), pants=v, slot=i))
    faces: list[CWFace] = []
    for v, hs in enumerate(graph.rotation):
        sg = [1 if h % 2 == 0 else -1 for h in hs]
        seam = [2 * ne + 3 * v + i for i in range(3)]
        top = []
        for i in range(3):
            top += [(hs[i] // 2, sg[i]), (seam[i], 1)]
        bottom = []
        for i in (2, 1, 0):
            bottom += [(seam[i], -1), (ne + hs[i] // 2, sg[i])]
        faces.append(CWFace(2 * v, v, "top", tuple(top)))
        faces.append(CWFace(2 * v + 1, v, "bottom", tuple(bottom)))
    cw = PantsCW(graph, 2 * ne, tuple(edges), tuple(faces))
    validate_cw(cw)
    return cw


def validate_cw(cw: PantsCW) -> None:
    """Check closed hexagons, two-sided edges, disc links and Euler characteristic."""
    uses: dict[Step, int] = {}
    for f in cw.faces:
        if len(f.boundary) != 6:
            raise AssertionError("face is not a hexagon")
        cw.check_path(f.boundary)
        kinds = [cw.edges[e].kind == "seam" for e, _ in f.boundary]
        if kinds != [False, True] * 3 and kinds != [True, False] * 3:
            raise AssertionError("face word does not alternate seams and arcs")
        for st in f.boundary:
            uses[st] = uses.get(st, 0) + 1
    for e in range(len(cw.edges)):
        if uses.get((e, 1)) != 1 or uses.get((e, -1)) != 1:
            raise AssertionError(f"edge {e} is not used once in each direction")
    # vertex links: nodes are edge ends, corners join consecutive steps
    link: dict[tuple[int, str], list[tuple[int, str]]] = {}
    for f in cw.faces:
        b = f.boundary
        for k in range(6):
            inc, out = b[k], b[(k + 1) % 6]
            end_in = (inc[0], "dst" if inc[1] > 0 else "src")
            end_out = (out[0], "src" if out[1] > 0 else "dst")
            link.setdefault(end_in, []).append(end_out)
            link.setdefault(end_out, []).append(end_in)
    by_vertex: dict[int, list[tuple[int, str]]] = {}
    for node in link:
        e = cw.edges[node[0]]
        by_vertex.setdefault(e.src if node[1] == "src" else e.dst, []).append(node)
    if len(by_vertex) != cw.num_vertices:
        raise AssertionError("some vertex has no incident edge")
    for vtx, nodes in by_vertex.items():
        if any(len(link[n]) != 2 for n in nodes):
            raise AssertionError(f"link of vertex {vtx} is not a union of cycles")
        seen = {nodes[0]}
        stack = [nodes[0]]
        while stack:
            for m in link[stack.pop()]:
                if m not in seen:
                    seen.add(m)
                    stack.append(m)
        if len(seen) != len(nodes):
            raise AssertionError(f"link of vertex {vtx} is disconnected")
    if cw.euler_characteristic != 2 - 2 * cw.genus:
        raise AssertionError("Euler characteristic mismatch")
