"""Trivalent dual graphs of pants decompositions.

Edge ``e`` owns the half-edges ``2e`` (side A) and ``2e + 1`` (side B).  Each
vertex lists its three half-edges in cyclic order; that order fixes how the
pants is glued into the hexagonal CW complex.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Iterable, Sequence

from ..errors import InputError

MAX_ENUM_VERTICES = 8


@dataclass(frozen=True)
class TrivalentGraph:
    rotation: tuple[tuple[int, int, int], ...]
    edge_labels: tuple[str, ...] = ()
    name: str = ""
    _vertex_of: tuple[int, ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self) -> None:
        rot = tuple(tuple(int(h) for h in r) for r in self.rotation)
        object.__setattr__(self, "rotation", rot)
        nh = 3 * len(rot)
        vertex_of = [-1] * nh
        for v, hs in enumerate(rot):
            if len(hs) != 3:
                raise InputError(f"vertex {v} does not have degree 3")
            for h in hs:
                if not 0 <= h < nh or vertex_of[h] != -1:
                    raise InputError(f"half-edge {h} is missing or repeated")
                vertex_of[h] = v
        object.__setattr__(self, "_vertex_of", tuple(vertex_of))
        if not self.edge_labels:
            object.__setattr__(self, "edge_labels", tuple(f"e{k}" for k in range(nh // 2)))
        elif len(self.edge_labels) != nh // 2:
            raise InputError("one label per edge is required")
        self.validate()

    # structure -------------------------------------------------------------------
    @property
    def num_vertices(self) -> int:
        return len(self.rotation)

    @property
    def num_edges(self) -> int:
        return 3 * len(self.rotation) // 2

    @property
    def genus(self) -> int:
        return self.num_edges - self.num_vertices + 1

    def vertex_of(self, h: int) -> int:
        return self._vertex_of[h]

    def endpoints(self, e: int) -> tuple[int, int]:
        return self._vertex_of[2 * e], self._vertex_of[2 * e + 1]

    def slot_of(self, h: int) -> int:
        return self.rotation[self._vertex_of[h]].index(h)

    def is_loop(self, e: int) -> bool:
        u, v = self.endpoints(e)
        return u == v

    def loop_edges(self) -> list[int]:
        return [e for e in range(self.num_edges) if self.is_loop(e)]

    def edge_list(self) -> list[tuple[int, int]]:
        return [self.endpoints(e) for e in range(self.num_edges)]

    def edge_index(self, label: str) -> int:
        try:
            return self.edge_labels.index(label)
        except ValueError:
            raise InputError(f"no edge labelled {label!r}") from None

    def validate(self) -> None:
        v = self.num_vertices
        if v < 2 or v % 2:
            raise InputError("a closed trivalent graph needs an even number (>= 2) of vertices")
        adj: dict[int, set[int]] = {i: set() for i in range(v)}
        for a, b in self.edge_list():
            adj[a].add(b)
            adj[b].add(a)
        seen = {0}
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        if len(seen) != v:
            raise InputError("graph is not connected")

    # isomorphism -----------------------------------------------------------------
    def canonical_form(self) -> tuple:
        return multigraph_canonical_form(self.num_vertices, self.edge_list())

    def is_isomorphic(self, other: "TrivalentGraph") -> bool:
        return self.canonical_form() == other.canonical_form()

    # serialization -----------------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "schema": "compatpants.graph/1",
            "name": self.name,
            "genus": self.genus,
            "num_vertices": self.num_vertices,
            "rotation": [list(r) for r in self.rotation],
            "edges": [
                {"index": e, "label": self.edge_labels[e], "half_edges": [2 * e, 2 * e + 1],
                 "endpoints": list(self.endpoints(e))}
                for e in range(self.num_edges)
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "TrivalentGraph":
        try:
            rotation = [tuple(r) for r in data["rotation"]]
            labels = tuple(str(e["label"]) for e in data.get("edges", ())) or ()
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed graph file: {exc}") from None
        g = cls(tuple(rotation), labels, str(data.get("name", "")))
        if "genus" in data and data["genus"] != g.genus:
            raise InputError("declared genus does not match the graph")
        return g


def graph_from_edges(num_vertices: int, edges: Sequence[tuple[int, int]],
                     labels: Sequence[str] = (), name: str = "") -> TrivalentGraph:
    """Build a graph from an edge list, using half-edge order as cyclic order."""
    slots: list[list[int]] = [[] for _ in range(num_vertices)]
    for e, (u, v) in enumerate(edges):
        slots[u].append(2 * e)
        slots[v].append(2 * e + 1)
    return TrivalentGraph(tuple(tuple(s) for s in slots), tuple(labels), name)


# canonical labelling -----------------------------------------------------------------

def _adjacency(n: int, edges: Iterable[tuple[int, int]]) -> list[list[int]]:
    adj = [[0] * n for _ in range(n)]
    for u, v in edges:
        if u == v:
            adj[u][u] += 1
        else:
            adj[u][v] += 1
            adj[v][u] += 1
    return adj


def _refine(adj: list[list[int]], cells: list[list[int]]) -> list[list[int]]:
    """Equitable refinement of an ordered partition (deterministic)."""
    while True:
        cell_of = {}
        for ci, cell in enumerate(cells):
            for v in cell:
                cell_of[v] = ci
        new_cells: list[list[int]] = []
        changed = False
        for ci, cell in enumerate(cells):
            if len(cell) == 1:
                new_cells.append(cell)
                continue
            sig = {}
            for v in cell:
                counts = [0] * len(cells)
                for w, m in enumerate(adj[v]):
                    if m:
                        counts[cell_of[w]] += m
                sig[v] = (adj[v][v], tuple(counts))
            keys = sorted(set(sig.values()))
            if len(keys) > 1:
                changed = True
            for k in keys:
                new_cells.append([v for v in cell if sig[v] == k])
        cells = new_cells
        if not changed:
            return cells


def multigraph_canonical_form(n: int, edges: Iterable[tuple[int, int]]) -> tuple:
    """Canonical invariant of a multigraph with loops.

    Individualization and refinement, exploring every branch; the form is the
    lexicographically smallest upper-triangular adjacency string among the
    leaves, so two graphs are isomorphic exactly when their forms agree.
    """
    adj = _adjacency(n, edges)
    best: list[tuple] = []

    def leaf_key(order: list[int]) -> tuple:
        return tuple(adj[order[i]][order[j]] for i in range(n) for j in range(i, n))

    def search(cells: list[list[int]]) -> None:
        cells = _refine(adj, cells)
        target = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if target is None:
            key = leaf_key([c[0] for c in cells])
            if not best or key < best[0]:
                best[:] = [key]
            return
        cell = cells[target]
        for v in cell:
            rest = [w for w in cell if w != v]
            search(cells[:target] + [[v], rest] + cells[target + 1:])

    search([list(range(n))])
    return (n, best[0] if best else ())


# standard families ---------------------------------------------------------------

def sausage_graph(g: int) -> TrivalentGraph:
    """Caterpillar with a loop at every handle vertex.

    Vertices ``0..g-1`` are the handle pants ``H_1..H_g``; vertices
    ``g..2g-3`` are connectors ``C_2..C_{g-1}``.  Edge labels: ``a<k>`` for the
    loops, ``d<k>`` for the edge joining ``H_k`` to ``C_k`` and ``gamma<k>`` for
    spine edges (``gamma<k>`` separates handles ``k..g`` from the rest).
    """
    if g < 2:
        raise InputError("genus must be at least 2")
    H = lambda k: k - 1
    C = lambda k: g + k - 2
    edges: list[tuple[int, int]] = []
    labels: list[str] = []
    for k in range(1, g + 1):
        edges.append((H(k), H(k)))
        labels.append(f"a{k}")
    if g == 2:
        edges.append((H(1), H(2)))
        labels.append("gamma2")
    else:
        edges.append((H(1), C(2)))
        labels.append("gamma2")
        for k in range(2, g):
            edges.append((H(k), C(k)))
            labels.append(f"d{k}")
        for k in range(3, g):
            edges.append((C(k - 1), C(k)))
            labels.append(f"gamma{k}")
        edges.append((C(g - 1), H(g)))
        labels.append(f"gamma{g}")
    rot: list[list[int]] = [[] for _ in range(2 * g - 2)]
    idx = {lab: e for e, lab in enumerate(labels)}
    for k in range(1, g + 1):
        e = idx[f"a{k}"]
        rot[H(k)] += [2 * e, 2 * e + 1]
    rot[H(1)].append(2 * idx["gamma2"])
    rot[H(g)].append(2 * idx[f"gamma{g}"] + 1)
    for k in range(2, g):
        rot[H(k)].append(2 * idx[f"d{k}"])
        rot[C(k)] = [2 * idx[f"gamma{k}"] + 1, 2 * idx[f"d{k}"] + 1, 2 * idx[f"gamma{k + 1}"]]
    return TrivalentGraph(tuple(tuple(r) for r in rot), tuple(labels), f"sausage{g}")


def necklace_graph(g: int) -> TrivalentGraph:
    """Cycle of ``2g-2`` pants with alternating double and single edges.

    Pants ``P_{2j}`` and ``P_{2j+1}`` share the curves ``x<j>``, ``y<j>``; the
    single edge ``z<j>`` joins ``P_{2j+1}`` to ``P_{2j+2}`` (indices mod
    ``2g-2``).  For ``g = 2`` this is the theta graph.
    """
    if g < 2:
        raise InputError("genus must be at least 2")
    m = 2 * g - 2
    edges, labels = [], []
    for j in range(g - 1):
        edges += [(2 * j, 2 * j + 1), (2 * j, 2 * j + 1), (2 * j + 1, (2 * j + 2) % m)]
        labels += [f"x{j}", f"y{j}", f"z{j}"]
    rot: list[tuple[int, int, int]] = []
    for j in range(g - 1):
        x, y, z = 3 * j, 3 * j + 1, 3 * j + 2
        zprev = 3 * ((j - 1) % (g - 1)) + 2
        rot.append((2 * x, 2 * y, 2 * zprev + 1))
        rot.append((2 * y + 1, 2 * x + 1, 2 * z))
    return TrivalentGraph(tuple(rot), tuple(labels), f"necklace{g}")


def theta_graph() -> TrivalentGraph:
    return necklace_graph(2)


def dumbbell_graph() -> TrivalentGraph:
    return sausage_graph(2)


# enumeration -------------------------------------------------------------------

def _grow(n: int, edges: list[tuple[int, int]]) -> Iterable[list[tuple[int, int]]]:
    """All graphs on ``n + 2`` vertices obtained by one insertion step."""
    x, y = n, n + 1
    m = len(edges)
    for i, j in combinations_with_replacement(range(m), 2):
        rest = [e for k, e in enumerate(edges) if k not in (i, j)]
        (u1, v1), (u2, v2) = edges[i], edges[j]
        if i == j:
            yield rest + [(u1, x), (x, y), (y, v1), (x, y)]
        else:
            yield rest + [(u1, x), (x, v1), (u2, y), (y, v2), (x, y)]
    for i in range(m):
        rest = [e for k, e in enumerate(edges) if k != i]
        u, v = edges[i]
        yield rest + [(u, x), (x, v), (x, y), (y, y)]


def enumerate_trivalent(max_vertices: int) -> list[TrivalentGraph]:
    """Connected trivalent multigraphs (loops allowed) up to isomorphism.

    Every such graph on ``n + 2`` vertices reduces to one on ``n`` vertices by
    deleting a pendant loop vertex or a non-bridge edge and smoothing the
    resulting degree-two vertices, so growing from the two graphs on two
    vertices reaches every class.
    """
    if max_vertices > MAX_ENUM_VERTICES:
        raise InputError(f"vertex bound {max_vertices} exceeds {MAX_ENUM_VERTICES}")
    if max_vertices < 2:
        return []
    layer = {}
    for edges in ([(0, 1), (0, 1), (0, 1)], [(0, 0), (0, 1), (1, 1)]):
        layer[multigraph_canonical_form(2, edges)] = edges
    out = [graph_from_edges(2, e) for e in layer.values()]
    n = 2
    while n + 2 <= max_vertices:
        nxt: dict[tuple, list[tuple[int, int]]] = {}
        for edges in layer.values():
            for cand in _grow(n, edges):
                key = multigraph_canonical_form(n + 2, cand)
                if key not in nxt:
                    nxt[key] = cand
        n += 2
        layer = dict(sorted(nxt.items()))
        out += [graph_from_edges(n, e) for e in layer.values()]
    return out
