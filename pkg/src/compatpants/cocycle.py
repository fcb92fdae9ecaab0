"""Group-valued cocycles on the hexagonal CW complex.

A cocycle stores one group element (an index into ``FiniteGroup``) per CW
edge, read in the edge's forward direction; traversing an edge backwards
contributes the inverse.  Every face word must multiply to the identity.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .algebra.groups import BinaryCover, FiniteGroup
from .errors import InputError, InvalidCocycle
from .reps.words import Letters, are_conjugate, inverse_letters, reduce_letters, substitute
from .topology.cw import PantsCW, Step, build_cw
from .topology.graphs import TrivalentGraph


@dataclass(frozen=True, eq=False)
class Cocycle:
    cw: PantsCW
    group: FiniteGroup
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        vals = tuple(int(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) != len(self.cw.edges):
            raise InvalidCocycle(f"expected {len(self.cw.edges)} edge values, got {len(vals)}")
        if any(not 0 <= v < self.group.order for v in vals):
            raise InvalidCocycle("edge value outside the group")
        for f in self.cw.faces:
            if self.path_product(f.boundary) != self.group.identity:
                raise InvalidCocycle(f"face {f.index} ({f.half} of pants {f.pants}) has nontrivial holonomy")

    def step_value(self, step: Step) -> int:
        v = self.values[step[0]]
        return v if step[1] > 0 else int(self.group.inverse[v])

    def path_product(self, steps: Sequence[Step]) -> int:
        t = self.group.table
        acc = self.group.identity
        for st in steps:
            acc = int(t[acc, self.step_value(st)])
        return acc

    def replace(self, changes: dict[int, int]) -> "Cocycle":
        vals = list(self.values)
        for e, v in changes.items():
            vals[e] = v
        return Cocycle(self.cw, self.group, tuple(vals))

    def to_json(self) -> dict:
        return {
            "schema": "compatpants.cocycle/1",
            "graph": self.cw.graph.to_json(),
            "group": {"kind": self.group.kind, "n": self.group.n},
            "values": list(self.values),
            "value_names": [self.group.name_of(v) for v in self.values],
        }


def cocycle_from_json(data: dict, group: FiniteGroup, mapping: Sequence[int] | None = None) -> Cocycle:
    """Read a cocycle; ``mapping`` translates file element indices to group indices."""
    try:
        graph = TrivalentGraph.from_json(data["graph"])
        raw = [int(v) for v in data["values"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed cocycle file: {exc}") from None
    if mapping is not None:
        if any(not 0 <= v < len(mapping) for v in raw):
            raise InvalidCocycle("element reference outside the group file")
        raw = [mapping[v] for v in raw]
    return Cocycle(build_cw(graph), group, tuple(raw))


def identity_cocycle(cw: PantsCW, group: FiniteGroup) -> Cocycle:
    return Cocycle(cw, group, (group.identity,) * len(cw.edges))


# holonomy --------------------------------------------------------------------

def holonomy(c: Cocycle, loop: Sequence[Step]) -> int:
    loop = tuple(loop)
    c.cw.check_path(loop, closed=True)
    return c.path_product(loop)


def curve_holonomy(c: Cocycle, curve: int) -> int:
    return holonomy(c, c.cw.curve_loop(curve))


def pants_boundary_holonomies(c: Cocycle, pants: int) -> tuple[int, int, int]:
    loops = c.cw.pants_boundary_loops(pants)
    return tuple(holonomy(c, lp) for lp in loops)  # type: ignore[return-value]


# gauges ----------------------------------------------------------------------

@dataclass(frozen=True)
class Gauge:
    values: tuple[int, ...]


def gauge_transform(c: Cocycle, d: Gauge) -> Cocycle:
    """``c'(e) = d(src) c(e) d(dst)^-1``; the basepoint value must be trivial."""
    grp = c.group
    if len(d.values) != c.cw.num_vertices:
        raise InputError("gauge has the wrong number of vertex values")
    if d.values[c.cw.basepoint] != grp.identity:
        raise InputError("gauge must be trivial at the basepoint")
    t, inv = grp.table, grp.inverse
    vals = tuple(int(t[t[d.values[e.src], c.values[e.index]], inv[d.values[e.dst]]]) for e in c.cw.edges)
    return Cocycle(c.cw, grp, vals)


@lru_cache(maxsize=256)
def spanning_tree(cw: PantsCW) -> tuple[tuple[int, ...], tuple[tuple[int, int], ...]]:
    """BFS tree of the 1-skeleton from the basepoint.

    Returns the visiting order of vertices and, for each non-root vertex in
    that order, ``(edge, direction)`` reaching it from its parent.
    """
    adj: dict[int, list[tuple[int, int, int]]] = {v: [] for v in range(cw.num_vertices)}
    for e in cw.edges:
        adj[e.src].append((e.dst, e.index, 1))
        adj[e.dst].append((e.src, e.index, -1))
    order = [cw.basepoint]
    via: list[tuple[int, int]] = []
    seen = {cw.basepoint}
    queue = deque([cw.basepoint])
    while queue:
        x = queue.popleft()
        for y, e, s in sorted(adj[x]):
            if y not in seen:
                seen.add(y)
                order.append(y)
                via.append((e, s))
                queue.append(y)
    if len(order) != cw.num_vertices:
        raise AssertionError("1-skeleton is disconnected")
    return tuple(order), tuple(via)


def find_gauge(c: Cocycle, c2: Cocycle) -> Gauge | None:
    """Gauge ``d`` with ``gauge_transform(c, d) == c2``, or ``None``."""
    if c.cw is not c2.cw and c.cw.graph != c2.cw.graph:
        raise InputError("cocycles live on different complexes")
    if c.group is not c2.group:
        raise InputError("cocycles take values in different groups")
    grp = c.group
    t, inv = grp.table, grp.inverse
    d = [-1] * c.cw.num_vertices
    d[c.cw.basepoint] = grp.identity
    order, via = spanning_tree(c.cw)
    for y, (e, s) in zip(order[1:], via):
        edge = c.cw.edges[e]
        if s > 0:  # parent is src: c2 = d(x) c d(y)^-1  =>  d(y) = c2^-1 d(x) c
            d[y] = int(t[t[inv[c2.values[e]], d[edge.src]], c.values[e]])
        else:      # parent is dst: c2 = d(y) c d(x)^-1  =>  d(y) = c2 d(x) c^-1
            d[y] = int(t[t[c2.values[e], d[edge.dst]], inv[c.values[e]]])
    gauge = Gauge(tuple(d))
    return gauge if gauge_transform(c, gauge).values == c2.values else None


def tree_gauge(c: Cocycle) -> Gauge:
    """The gauge that makes every spanning-tree edge trivial."""
    grp = c.group
    t, inv = grp.table, grp.inverse
    d = [-1] * c.cw.num_vertices
    d[c.cw.basepoint] = grp.identity
    order, via = spanning_tree(c.cw)
    for y, (e, s) in zip(order[1:], via):
        edge = c.cw.edges[e]
        if s > 0:
            d[y] = int(t[d[edge.src], c.values[e]])
        else:
            d[y] = int(t[d[edge.dst], inv[c.values[e]]])
    return Gauge(tuple(d))


def holonomy_image(c: Cocycle) -> frozenset[int]:
    """Image of the holonomy representation at the basepoint."""
    fixed = gauge_transform(c, tree_gauge(c))
    return c.group.closure(fixed.values)


# lifting obstruction -----------------------------------------------------------

def lifting_obstruction(c: Cocycle, cover: BinaryCover, lift_signs: Sequence[int] | None = None) -> int:
    """Product over faces of the lifted face holonomies, as ``+1`` or ``-1``.

    ``lift_signs`` optionally flips the chosen lift of individual edges; the
    result does not depend on it because every edge bounds two faces with
    opposite orientations.
    """
    if c.group is not cover.base:
        raise InputError("cocycle does not take values in the base of the cover")
    cg = cover.cover
    lifted = [int(cover.lift[v]) for v in c.values]
    if lift_signs is not None:
        lifted = [x if s > 0 else int(cg.table[x, cover.z]) for x, s in zip(lifted, lift_signs)]
    t, inv = cg.table, cg.inverse
    sign = 1
    for f in c.cw.faces:
        acc = cg.identity
        for e, s in f.boundary:
            acc = int(t[acc, lifted[e] if s > 0 else inv[lifted[e]]])
        sign *= cover.sign(acc)
    return sign


# standard generators via tree/cotree ------------------------------------------------

@dataclass(frozen=True)
class SurfacePresentation:
    """Bridge between the CW complex and the standard surface presentation.

    ``letters`` are the CW edges outside both the spanning tree and the dual
    tree; symbol ``k`` (1-based) stands for the loop through ``letters[k-1]``.
    ``generator_words[i]`` expresses the i-th standard generator (order
    ``a_1, b_1, ..., a_g, b_g``) in letter symbols, ``letter_words[k]`` the
    reverse.
    """

    cw: PantsCW
    tree_edges: frozenset[int]
    dual_order: tuple[tuple[int, int], ...]  # (face, edge to parent) in BFS order
    letters: tuple[int, ...]
    relation: Letters
    generator_words: tuple[Letters, ...]
    letter_words: dict[int, Letters]


def _dual_tree(cw: PantsCW, tree: frozenset[int]) -> tuple[tuple[int, int], ...]:
    faces_of: dict[int, list[int]] = {}
    for f in cw.faces:
        for e, _ in f.boundary:
            faces_of.setdefault(e, []).append(f.index)
    order: list[tuple[int, int]] = [(0, -1)]
    seen = {0}
    queue = deque([0])
    while queue:
        f = queue.popleft()
        for e, _ in cw.faces[f].boundary:
            if e in tree:
                continue
            for f2 in faces_of[e]:
                if f2 not in seen:
                    seen.add(f2)
                    order.append((f2, e))
                    queue.append(f2)
    if len(order) != len(cw.faces):
        raise AssertionError("dual graph is disconnected")
    return tuple(order)


def _merged_boundary(cw: PantsCW, dual: tuple[tuple[int, int], ...]) -> list[Step]:
    word: list[Step] = list(cw.faces[dual[0][0]].boundary)
    for f, e in dual[1:]:
        pos = next(i for i, st in enumerate(word) if st[0] == e)
        s = word[pos][1]
        fb = list(cw.faces[f].boundary)
        k = fb.index((e, -s))
        rotated = fb[k + 1:] + fb[:k]
        word[pos:pos + 1] = rotated
    return word


@lru_cache(maxsize=256)
def surface_presentation(cw: PantsCW) -> SurfacePresentation:
    _, via = spanning_tree(cw)
    tree = frozenset(e for e, _ in via)
    dual = _dual_tree(cw, tree)
    cotree = {e for _, e in dual[1:]}
    letters = tuple(e for e in range(len(cw.edges)) if e not in tree and e not in cotree)
    g = cw.genus
    if len(letters) != 2 * g:
        raise AssertionError("tree/cotree complement has the wrong size")
    sym = {e: k + 1 for k, e in enumerate(letters)}
    merged = [st for st in _merged_boundary(cw, dual) if st[0] not in tree]
    relation = tuple(sym[e] * s for e, s in merged)
    gens, letter_words = _normal_form(relation, 2 * g)
    # self-check: the relation becomes a conjugate of the standard relator
    rel_std: Letters = ()
    for i in range(g):
        ai, bi = 2 * i + 1, 2 * i + 2
        rel_std = reduce_letters(rel_std + (ai, bi, -ai, -bi))
    if not are_conjugate(substitute(relation, letter_words), rel_std):
        raise AssertionError("normal form does not match the standard relator")
    return SurfacePresentation(cw, tree, dual, letters, relation, tuple(gens), letter_words)


def standard_tuple(c: Cocycle) -> tuple[int, ...]:
    """Images of ``a_1, b_1, ..., a_g, b_g`` under the holonomy at the basepoint."""
    pres = surface_presentation(c.cw)
    fixed = gauge_transform(c, tree_gauge(c))
    grp = c.group
    vals = {k + 1: fixed.values[e] for k, e in enumerate(pres.letters)}
    return tuple(_evaluate(grp, w, vals) for w in pres.generator_words)


def cocycle_from_tuple(cw: PantsCW, group: FiniteGroup, tup: Sequence[int]) -> Cocycle:
    """Cocycle, trivial on the spanning tree, whose standard tuple is ``tup``."""
    pres = surface_presentation(cw)
    if len(tup) != 2 * cw.genus:
        raise InputError("tuple length does not match the genus")
    gens = {i + 1: int(v) for i, v in enumerate(tup)}
    vals: list[int | None] = [None] * len(cw.edges)
    for e in pres.tree_edges:
        vals[e] = group.identity
    for k, e in enumerate(pres.letters):
        vals[e] = _evaluate(group, pres.letter_words[k + 1], gens)
    t, inv = group.table, group.inverse
    for f, e in reversed(pres.dual_order[1:]):
        bd = cw.faces[f].boundary
        pos = next(i for i, st in enumerate(bd) if st[0] == e)
        pre = group.identity
        for st in bd[:pos]:
            v = vals[st[0]]
            pre = int(t[pre, v if st[1] > 0 else inv[v]])
        post = group.identity
        for st in bd[pos + 1:]:
            v = vals[st[0]]
            post = int(t[post, v if st[1] > 0 else inv[v]])
        step_val = int(inv[t[post, pre]])  # pre * x * post = 1
        vals[e] = step_val if bd[pos][1] > 0 else int(inv[step_val])
    return Cocycle(cw, group, tuple(vals))  # type: ignore[arg-type]


def _evaluate(group: FiniteGroup, word: Letters, values: dict[int, int]) -> int:
    t, inv = group.table, group.inverse
    acc = group.identity
    for x in word:
        acc = int(t[acc, values[x] if x > 0 else inv[values[-x]]])
    return acc


def _normal_form(relation: Letters, n: int) -> tuple[list[Letters], dict[int, Letters]]:
    """Cut-and-paste reduction of a one-relator surface word.

    Returns words for the new standard generators over the original symbols
    and words for the original symbols over the new generators (which are
    numbered ``1..n`` in the output, pairs ``(2i-1, 2i)`` forming handles).
    """
    tokens: list[tuple[str, int]] = [("L", x) for x in relation]
    cur_in_orig: dict[int, Letters] = {k: (k,) for k in range(1, n + 1)}
    orig_in_cur: dict[int, Letters] = {k: (k,) for k in range(1, n + 1)}
    blocks: list[tuple[int, int]] = []
    fresh = n + 1

    def expand(seg: list[tuple[str, int]]) -> Letters:
        out: list[int] = []
        for kind, v in seg:
            if kind == "L":
                out.append(v)
            else:
                x, y = blocks[v]
                out += [x, y, -x, -y]
        return reduce_letters(out)

    while any(k == "L" for k, _ in tokens):
        found = None
        for x in sorted({abs(v) for k, v in tokens if k == "L"}):
            p = next(i for i, (k, v) in enumerate(tokens) if k == "L" and v == x)
            rot = tokens[p:] + tokens[:p]
            qx = next(i for i, (k, v) in enumerate(rot) if k == "L" and v == -x)
            inside = [abs(v) for k, v in rot[1:qx] if k == "L"]
            y = next((u for u in sorted(set(inside)) if inside.count(u) == 1), None)
            if y is not None:
                found = (x, y, rot, qx)
                break
        if found is None:
            raise AssertionError("no interleaved pair in surface word")
        x, y, tokens, qx = found
        inside = next(i for i, (k, v) in enumerate(tokens) if k == "L" and abs(v) == y and 0 < i < qx)
        if tokens[inside][1] < 0:  # rename y -> y~^-1 so that y appears positively inside
            ny = fresh
            fresh += 1
            tokens = [(k, (ny if v < 0 else -ny) if k == "L" and abs(v) == y else v) for k, v in tokens]
            cur_in_orig[ny] = inverse_letters(cur_in_orig.pop(y))
            ren = _Fixing({y: (-ny,)})
            orig_in_cur = {k: substitute(w, ren) for k, w in orig_in_cur.items()}
            y = ny
        py = next(i for i, (k, v) in enumerate(tokens) if k == "L" and v == y)
        qy = next(i for i, (k, v) in enumerate(tokens) if k == "L" and v == -y)
        B, C, D, E = tokens[1:py], tokens[py + 1:qx], tokens[qx + 1:qy], tokens[qy + 1:]
        b, cc, d = expand(B), expand(C), expand(D)
        x2, y1 = fresh, fresh + 1
        fresh += 2
        x_sub = reduce_letters(d + cc + b + (x2,) + inverse_letters(b))
        y_sub = reduce_letters((y1,) + inverse_letters(b) + inverse_letters(cc))
        new_x2 = reduce_letters(inverse_letters(b) + inverse_letters(cc) + inverse_letters(d) + (x,) + b)
        new_y1 = reduce_letters((y,) + cc + b)
        cur_in_orig[x2] = substitute(new_x2, cur_in_orig)
        cur_in_orig[y1] = substitute(new_y1, cur_in_orig)
        del cur_in_orig[x], cur_in_orig[y]
        step = _Fixing({x: x_sub, y: y_sub})
        orig_in_cur = {k: substitute(w, step) for k, w in orig_in_cur.items()}
        blocks.append((x2, y1))
        tokens = [("K", len(blocks) - 1)] + E + D + C + B
    order = [v for _, v in tokens]
    renumber: dict[int, Letters] = {}
    gens: list[Letters] = []
    for i, blk in enumerate(order):
        x2, y1 = blocks[blk]
        renumber[x2] = (2 * i + 1,)
        renumber[y1] = (2 * i + 2,)
        gens += [cur_in_orig[x2], cur_in_orig[y1]]
    letter_words = {k: substitute(w, renumber) for k, w in orig_in_cur.items()}
    return gens, letter_words


class _Fixing(dict):
    """Substitution table leaving unlisted symbols fixed."""

    def __missing__(self, k: int) -> Letters:
        return (k,)
