"""Colored directed acyclic graphs with half-edges.

Every vertex carries an ordered list of in-ports and out-ports, each with
a color.  A port is either attached to an internal edge or is a leaf of the
graph; the graph's input and output leaves are ordered lists of ports.
Vertex identifiers are opaque: equality questions go through
:func:`canonical_form`.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Sequence


class GraphError(ValueError):
    pass


class BiprofileMismatch(GraphError):
    pass


class AcyclicityViolation(GraphError):
    pass


class ColorMismatch(GraphError):
    pass


@dataclass(frozen=True)
class Vertex:
    ins: tuple
    outs: tuple
    label: Hashable = None


@dataclass(frozen=True)
class Edge:
    src: Hashable
    out_port: int
    tgt: Hashable
    in_port: int


class ColoredDigraph:
    """Immutable colored digraph.

    ``inputs[k] = (v, q)`` says input leaf k is in-port q of vertex v;
    ``outputs[k] = (v, p)`` says output leaf k is out-port p of vertex v.
    """

    __slots__ = ("vertices", "edges", "inputs", "outputs", "_key")

    def __init__(self, vertices: dict, edges: Iterable[Edge], inputs: Sequence, outputs: Sequence,
                 check: bool = True):
        object.__setattr__(self, "vertices", dict(vertices))
        object.__setattr__(self, "edges", frozenset(edges))
        object.__setattr__(self, "inputs", tuple(tuple(x) for x in inputs))
        object.__setattr__(self, "outputs", tuple(tuple(x) for x in outputs))
        object.__setattr__(self, "_key", None)
        if check:
            self._validate()

    def __setattr__(self, *_):
        raise AttributeError("ColoredDigraph is immutable")

    def _validate(self):
        seen_in, seen_out = set(), set()
        for e in self.edges:
            if e.src not in self.vertices or e.tgt not in self.vertices:
                raise GraphError(f"edge {e} mentions an unknown vertex")
            cs = self.vertices[e.src].outs[e.out_port]
            ct = self.vertices[e.tgt].ins[e.in_port]
            if cs != ct:
                raise ColorMismatch(f"edge {e} joins colors {cs!r} and {ct!r}")
            seen_out.add((e.src, e.out_port))
            seen_in.add((e.tgt, e.in_port))
        if len(seen_in) != len(self.edges) or len(seen_out) != len(self.edges):
            raise GraphError("a port carries two edges")
        for v, q in self.inputs:
            if (v, q) in seen_in:
                raise GraphError(f"in-port {v}.{q} is both a leaf and an edge end")
            seen_in.add((v, q))
        for v, p in self.outputs:
            if (v, p) in seen_out:
                raise GraphError(f"out-port {v}.{p} is both a leaf and an edge end")
            seen_out.add((v, p))
        need_in = {(v, q) for v, x in self.vertices.items() for q in range(len(x.ins))}
        need_out = {(v, p) for v, x in self.vertices.items() for p in range(len(x.outs))}
        if seen_in != need_in or seen_out != need_out:
            raise GraphError("ports not covered exactly once")
        if len(self.inputs) + len(self.edges) != len(need_in):
            raise GraphError("duplicate input leaf")
        if len(self.outputs) + len(self.edges) != len(need_out):
            raise GraphError("duplicate output leaf")
        if not is_acyclic(self):
            raise AcyclicityViolation("graph has a directed cycle")

    # -- basic queries
    def biprofile(self) -> tuple:
        return (tuple(self.vertices[v].ins[q] for v, q in self.inputs),
                tuple(self.vertices[v].outs[p] for v, p in self.outputs))

    def in_edge(self, v, q):
        for e in self.edges:
            if e.tgt == v and e.in_port == q:
                return e
        return None

    def out_edge(self, v, p):
        for e in self.edges:
            if e.src == v and e.out_port == p:
                return e
        return None

    def successors(self, v) -> set:
        return {e.tgt for e in self.edges if e.src == v}

    def predecessors(self, v) -> set:
        return {e.src for e in self.edges if e.tgt == v}

    def key(self):
        """Canonical hashable encoding; equal iff strictly isomorphic."""
        if self._key is None:
            object.__setattr__(self, "_key", canonical_key(self))
        return self._key

    def __eq__(self, other):
        return (isinstance(other, ColoredDigraph) and self.vertices == other.vertices
                and self.edges == other.edges and self.inputs == other.inputs
                and self.outputs == other.outputs)

    def __hash__(self):
        return hash((frozenset(self.vertices.items()), self.edges, self.inputs, self.outputs))

    def __repr__(self):
        return f"ColoredDigraph(|V|={len(self.vertices)}, |E|={len(self.edges)}, {self.biprofile()})"


# ---------------------------------------------------------------------------
# constructions

def corolla(inputs: Sequence, outputs: Sequence, label: Hashable = None) -> ColoredDigraph:
    v = Vertex(tuple(inputs), tuple(outputs), label)
    return ColoredDigraph({0: v}, (), [(0, q) for q in range(len(inputs))],
                          [(0, p) for p in range(len(outputs))])


def relabel(g: ColoredDigraph, mapping: dict | Callable) -> ColoredDigraph:
    f = mapping if callable(mapping) else mapping.__getitem__
    return ColoredDigraph(
        {f(v): x for v, x in g.vertices.items()},
        [Edge(f(e.src), e.out_port, f(e.tgt), e.in_port) for e in g.edges],
        [(f(v), q) for v, q in g.inputs], [(f(v), p) for v, p in g.outputs], check=False)


def relabel_vertices(g: ColoredDigraph, fn: Callable) -> ColoredDigraph:
    """Replace every vertex label by ``fn(vertex_id, vertex)``."""
    return ColoredDigraph({v: Vertex(x.ins, x.outs, fn(v, x)) for v, x in g.vertices.items()},
                          g.edges, g.inputs, g.outputs, check=False)


def reorder_leaves(g: ColoredDigraph, in_perm: Sequence[int] | None = None,
                   out_perm: Sequence[int] | None = None) -> ColoredDigraph:
    """New input leaf k is old input leaf in_perm[k] (likewise outputs)."""
    ins = g.inputs if in_perm is None else [g.inputs[i] for i in in_perm]
    outs = g.outputs if out_perm is None else [g.outputs[i] for i in out_perm]
    return ColoredDigraph(g.vertices, g.edges, ins, outs, check=False)


def disjoint_union(g1: ColoredDigraph, g2: ColoredDigraph) -> ColoredDigraph:
    a = relabel(g1, lambda v: (0, v))
    b = relabel(g2, lambda v: (1, v))
    return _renumber(ColoredDigraph({**a.vertices, **b.vertices}, a.edges | b.edges,
                                    a.inputs + b.inputs, a.outputs + b.outputs, check=False))


def _renumber(g: ColoredDigraph) -> ColoredDigraph:
    order = sorted(g.vertices, key=repr)
    m = {v: i for i, v in enumerate(order)}
    return relabel(g, m)


def graft(g1: ColoredDigraph, g2: ColoredDigraph, pairing: Sequence[tuple]) -> ColoredDigraph:
    """Glue output leaves of g1 to input leaves of g2.

    ``pairing`` lists ``(k, l)``: output leaf k of g1 becomes an edge into
    input leaf l of g2.  Inputs of the result are g1's inputs followed by
    g2's unpaired inputs; outputs are g1's unpaired outputs followed by g2's
    outputs, each in their original order.
    """
    pairing = list(pairing)
    ks = [k for k, _ in pairing]
    ls = [l for _, l in pairing]
    if len(set(ks)) != len(ks) or len(set(ls)) != len(ls):
        raise GraphError("pairing is not injective")
    c1 = g1.biprofile()[1]
    c2 = g2.biprofile()[0]
    for k, l in pairing:
        if c1[k] != c2[l]:
            raise ColorMismatch(f"output {k} ({c1[k]!r}) vs input {l} ({c2[l]!r})")
    a = relabel(g1, lambda v: (0, v))
    b = relabel(g2, lambda v: (1, v))
    edges = set(a.edges | b.edges)
    for k, l in pairing:
        (u, p), (w, q) = a.outputs[k], b.inputs[l]
        edges.add(Edge(u, p, w, q))
    ins = list(a.inputs) + [x for i, x in enumerate(b.inputs) if i not in ls]
    outs = [x for i, x in enumerate(a.outputs) if i not in ks] + list(b.outputs)
    return _renumber(ColoredDigraph({**a.vertices, **b.vertices}, edges, ins, outs))


def substitute(host: ColoredDigraph, parts: dict, renumber: bool = True) -> ColoredDigraph:
    """Replace each vertex v of ``host`` by ``parts[v]`` (missing: keep v).

    A part's input leaf q stands for in-port q of v, output leaf p for
    out-port p.  Biprofiles must agree, colors and orders included.
    """
    pieces = {}
    for v, x in host.vertices.items():
        h = parts.get(v)
        if h is None:
            h = ColoredDigraph({0: x}, (), [(0, q) for q in range(len(x.ins))],
                               [(0, p) for p in range(len(x.outs))], check=False)
        if h.biprofile() != (x.ins, x.outs):
            raise BiprofileMismatch(f"part for {v!r} has biprofile {h.biprofile()}, "
                                    f"vertex has {(x.ins, x.outs)}")
        if not h.vertices:
            raise GraphError("parts must have at least one vertex")
        pieces[v] = relabel(h, lambda w, v=v: (v, w))
    verts, edges = {}, set()
    for h in pieces.values():
        verts.update(h.vertices)
        edges |= h.edges
    for e in host.edges:
        u, p = pieces[e.src].outputs[e.out_port]
        w, q = pieces[e.tgt].inputs[e.in_port]
        edges.add(Edge(u, p, w, q))
    ins = [pieces[v].inputs[q] for v, q in host.inputs]
    outs = [pieces[v].outputs[p] for v, p in host.outputs]
    g = ColoredDigraph(verts, edges, ins, outs)
    return _renumber(g) if renumber else g


def collapse(g: ColoredDigraph, order: Sequence, label: Hashable = None, new_id: Hashable = None):
    """Collapse the vertex set ``order`` into a single new vertex.

    The new vertex's in-ports are the boundary in-ports of the subset,
    sorted by (position of the vertex in ``order``, port); likewise for
    out-ports.  Returns ``(quotient, part)`` where ``part`` is the induced
    subgraph with leaves in that order, so that substituting ``part`` back
    recovers ``g`` up to strict isomorphism.
    """
    S = list(order)
    Sset = set(S)
    pos = {v: i for i, v in enumerate(S)}
    bin_ = sorted(((v, q) for v in S for q in range(len(g.vertices[v].ins))
                   if (e := g.in_edge(v, q)) is None or e.src not in Sset),
                  key=lambda t: (pos[t[0]], t[1]))
    bout = sorted(((v, p) for v in S for p in range(len(g.vertices[v].outs))
                   if (e := g.out_edge(v, p)) is None or e.tgt not in Sset),
                  key=lambda t: (pos[t[0]], t[1]))
    return collapse_with_boundary(g, S, bin_, bout, label, new_id)


def collapse_with_boundary(g: ColoredDigraph, S: Sequence, bin_: Sequence, bout: Sequence,
                           label: Hashable = None, new_id: Hashable = None):
    """As :func:`collapse`, with the boundary port orders of the new
    vertex given explicitly (``bin_`` lists in-ports, ``bout`` out-ports)."""
    S = list(S)
    Sset = set(S)
    bin_, bout = [tuple(t) for t in bin_], [tuple(t) for t in bout]
    part = ColoredDigraph({v: g.vertices[v] for v in S},
                          [e for e in g.edges if e.src in Sset and e.tgt in Sset], bin_, bout)
    nid = new_id if new_id is not None else ("c", len(g.vertices))
    while nid in g.vertices:
        nid = ("c", nid)
    nv = Vertex(tuple(g.vertices[v].ins[q] for v, q in bin_),
                tuple(g.vertices[v].outs[p] for v, p in bout), label)
    in_idx = {t: i for i, t in enumerate(bin_)}
    out_idx = {t: i for i, t in enumerate(bout)}

    def mv_in(v, q):
        return (nid, in_idx[(v, q)]) if v in Sset else (v, q)

    def mv_out(v, p):
        return (nid, out_idx[(v, p)]) if v in Sset else (v, p)

    verts = {v: x for v, x in g.vertices.items() if v not in Sset}
    verts[nid] = nv
    edges = []
    for e in g.edges:
        if e.src in Sset and e.tgt in Sset:
            continue
        (u, p), (w, q) = mv_out(e.src, e.out_port), mv_in(e.tgt, e.in_port)
        edges.append(Edge(u, p, w, q))
    quotient = ColoredDigraph(verts, edges, [mv_in(*t) for t in g.inputs],
                              [mv_out(*t) for t in g.outputs])
    return quotient, part


# ---------------------------------------------------------------------------
# properties

def is_acyclic(g: ColoredDigraph) -> bool:
    return topological_order(g) is not None


def topological_order(g: ColoredDigraph, key: Callable | None = None):
    """Upstream-first order (Kahn), ties broken by ``key``; None on a cycle."""
    indeg = {v: 0 for v in g.vertices}
    succ = {v: [] for v in g.vertices}
    for e in g.edges:
        indeg[e.tgt] += 1
        succ[e.src].append(e.tgt)
    key = key or repr
    ready = sorted((v for v, d in indeg.items() if d == 0), key=key)
    out = []
    while ready:
        v = ready.pop(0)
        out.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
        ready.sort(key=key)
    return out if len(out) == len(g.vertices) else None


def all_topological_orders(g: ColoredDigraph):
    indeg = {v: 0 for v in g.vertices}
    for e in g.edges:
        indeg[e.tgt] += 1

    def rec(prefix, indeg):
        if len(prefix) == len(g.vertices):
            yield list(prefix)
            return
        for v in sorted((v for v, d in indeg.items() if d == 0 and v not in prefix), key=repr):
            nd = dict(indeg)
            nd[v] = -1
            for e in g.edges:
                if e.src == v:
                    nd[e.tgt] -= 1
            prefix.append(v)
            yield from rec(prefix, nd)
            prefix.pop()

    yield from rec([], indeg)


def components(g: ColoredDigraph) -> list:
    adj = {v: set() for v in g.vertices}
    for e in g.edges:
        adj[e.src].add(e.tgt)
        adj[e.tgt].add(e.src)
    seen, comps = set(), []
    for v in sorted(g.vertices, key=repr):
        if v in seen:
            continue
        comp, stack = [], [v]
        seen.add(v)
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(comp)
    return comps


def is_connected(g: ColoredDigraph) -> bool:
    return len(components(g)) == 1


def is_simply_connected(g: ColoredDigraph) -> bool:
    """Connected and the underlying undirected multigraph is a tree."""
    return is_connected(g) and len(g.edges) == len(g.vertices) - 1


def first_betti_number(g: ColoredDigraph) -> int:
    return len(g.edges) - len(g.vertices) + len(components(g))


def reachable(g: ColoredDigraph, sources: Iterable) -> set:
    succ = {v: [] for v in g.vertices}
    for e in g.edges:
        succ[e.src].append(e.tgt)
    seen = set(sources)
    todo = deque(seen)
    while todo:
        u = todo.popleft()
        for w in succ[u]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return seen


def is_convex(g: ColoredDigraph, S: Iterable) -> bool:
    """No directed path leaves S and comes back."""
    S = set(S)
    outside_succ = {e.tgt for e in g.edges if e.src in S and e.tgt not in S}
    return not (reachable(g, outside_succ) & S)


def contractible_pairs(g: ColoredDigraph) -> list:
    """Pairs (u, w) joined by exactly one edge u -> w, no other edges
    between them and no other directed path from u to w."""
    out = []
    for e in g.edges:
        u, w = e.src, e.tgt
        between = [f for f in g.edges if {f.src, f.tgt} == {u, w}]
        if len(between) != 1:
            continue
        others = {f.tgt for f in g.edges if f.src == u and f.tgt != w}
        if w in reachable(g, others):
            continue
        out.append((u, w))
    return sorted(out, key=repr)


# ---------------------------------------------------------------------------
# canonical forms

def _label_key(label):
    return repr(label)


def _traverse(g: ColoredDigraph, start, in_edge: dict, out_edge: dict, in_leaf: dict,
              out_leaf: dict, ordered: bool, label_key: Callable):
    num = {start: 0}
    order = [start]
    code = []
    i = 0
    while i < len(order):
        v = order[i]
        i += 1
        x = g.vertices[v]
        item = [label_key(x.label), x.ins, x.outs]
        for q in range(len(x.ins)):
            if (v, q) in in_leaf:
                item.append(("i", in_leaf[(v, q)] if ordered else -1))
            else:
                e = in_edge[(v, q)]
                if e.src not in num:
                    num[e.src] = len(order)
                    order.append(e.src)
                item.append(("e", num[e.src], e.out_port))
        for p in range(len(x.outs)):
            if (v, p) in out_leaf:
                item.append(("o", out_leaf[(v, p)] if ordered else -1))
            else:
                e = out_edge[(v, p)]
                if e.tgt not in num:
                    num[e.tgt] = len(order)
                    order.append(e.tgt)
                item.append(("f", num[e.tgt], e.in_port))
        code.append(tuple(item))
    return tuple(code), order


def _canonical(g: ColoredDigraph, ordered: bool, label_key: Callable):
    in_leaf = {t: k for k, t in enumerate(g.inputs)}
    out_leaf = {t: k for k, t in enumerate(g.outputs)}
    in_edge = {(e.tgt, e.in_port): e for e in g.edges}
    out_edge = {(e.src, e.out_port): e for e in g.edges}
    best = []
    for comp in components(g):
        cands = [_traverse(g, s, in_edge, out_edge, in_leaf, out_leaf, ordered, label_key)
                 for s in comp]
        best.append(_min(cands))
    try:
        best.sort(key=lambda c: c[0])
    except TypeError:
        best.sort(key=lambda c: repr(c[0]))
    return best


def _min(cands):
    try:
        return min(cands, key=lambda c: c[0])
    except TypeError:  # colors of incomparable types
        return min(cands, key=lambda c: repr(c[0]))


def canonical_key(g: ColoredDigraph, ordered_leaves: bool = True,
                  label_key: Callable = _label_key):
    """Hashable invariant: equal iff strictly isomorphic (ports, colors,
    labels and, when ``ordered_leaves``, leaf orders preserved)."""
    best = _canonical(g, ordered_leaves, label_key)
    return (ordered_leaves,) + tuple(c for c, _ in best)


def canonical_form(g: ColoredDigraph, label_key: Callable = _label_key):
    """Relabel vertices 0..n-1 canonically.

    Returns ``(graph, certificate)`` where ``certificate`` maps old vertex
    ids to new ones.  Two graphs are strictly isomorphic iff their
    canonical graphs are equal.  Traversal from a start vertex through the
    totally ordered ports determines every other vertex, so minimising over
    start vertices per component gives a canonical labelling.
    """
    best = _canonical(g, True, label_key)
    cert = {}
    for _, order in best:
        for v in order:
            cert[v] = len(cert)
    return relabel(g, cert), cert


def strictly_isomorphic(g: ColoredDigraph, h: ColoredDigraph) -> bool:
    return g.key() == h.key()


def brute_force_isomorphic(g: ColoredDigraph, h: ColoredDigraph, ordered_leaves: bool = True) -> bool:
    """Reference check by enumerating vertex bijections."""
    from itertools import permutations
    if len(g.vertices) != len(h.vertices) or len(g.edges) != len(h.edges):
        return False
    if g.biprofile() != h.biprofile() and ordered_leaves:
        return False
    gv = list(g.vertices)
    hedges = {(e.src, e.out_port, e.tgt, e.in_port) for e in h.edges}
    for img in permutations(list(h.vertices)):
        m = dict(zip(gv, img))
        if any(g.vertices[v] != h.vertices[m[v]] for v in gv):
            continue
        if {(m[e.src], e.out_port, m[e.tgt], e.in_port) for e in g.edges} != hedges:
            continue
        if ordered_leaves:
            if [(m[v], q) for v, q in g.inputs] != list(h.inputs):
                continue
            if [(m[v], p) for v, p in g.outputs] != list(h.outputs):
                continue
        return True
    return False


# ---------------------------------------------------------------------------
# enumeration

def extend_by_vertex(g: ColoredDigraph, ins: tuple, outs: tuple, label=None, connect: bool = True):
    """All graphs obtained by adding one vertex wired to leaves of ``g``.

    New input leaves and output leaves are appended in port order.  With
    ``connect`` at least one new edge is required.
    """
    from itertools import permutations
    nid = len(g.vertices)
    while nid in g.vertices:
        nid += 1
    gouts = g.biprofile()[1]
    gins = g.biprofile()[0]

    def partial_matchings(my_colors, their_colors):
        # map each of my ports to a distinct leaf index or None
        def rec(i, used):
            if i == len(my_colors):
                yield []
                return
            for rest in rec(i + 1, used):
                yield [None] + rest
            for k, c in enumerate(their_colors):
                if k not in used and c == my_colors[i]:
                    for rest in rec(i + 1, used | {k}):
                        yield [k] + rest
        # dedupe: rec yields each assignment once
        yield from rec(0, frozenset())

    for mi in partial_matchings(ins, gouts):
        for mo in partial_matchings(outs, gins):
            n_new = sum(x is not None for x in mi) + sum(x is not None for x in mo)
            if connect and n_new == 0:
                continue
            edges = set(g.edges)
            for q, k in enumerate(mi):
                if k is not None:
                    u, p = g.outputs[k]
                    edges.add(Edge(u, p, nid, q))
            for p, k in enumerate(mo):
                if k is not None:
                    w, q = g.inputs[k]
                    edges.add(Edge(nid, p, w, q))
            used_out = {k for k in mi if k is not None}
            used_in = {k for k in mo if k is not None}
            new_ins = [x for k, x in enumerate(g.inputs) if k not in used_in] + \
                      [(nid, q) for q, k in enumerate(mi) if k is None]
            new_outs = [x for k, x in enumerate(g.outputs) if k not in used_out] + \
                       [(nid, p) for p, k in enumerate(mo) if k is None]
            verts = dict(g.vertices)
            verts[nid] = Vertex(tuple(ins), tuple(outs), label)
            h = ColoredDigraph(verts, edges, new_ins, new_outs, check=False)
            if is_acyclic(h):
                yield h


def enumerate_connected(signature: Sequence[tuple], max_vertices: int,
                        simply_connected: bool = False) -> list:
    """Connected graphs over a signature of ``(ins, outs, label)`` vertex
    types, up to strict isomorphism ignoring leaf order."""
    level = {}
    for ins, outs, lab in signature:
        c = corolla(ins, outs, lab)
        level[canonical_key(c, ordered_leaves=False)] = c
    found = dict(level)
    for _ in range(max_vertices - 1):
        nxt = {}
        for g in level.values():
            for ins, outs, lab in signature:
                for h in extend_by_vertex(g, ins, outs, lab):
                    if simply_connected and not is_simply_connected(h):
                        continue
                    k = canonical_key(h, ordered_leaves=False)
                    if k not in found and k not in nxt:
                        nxt[k] = h
        found.update(nxt)
        level = nxt
    return list(found.values())


# ---------------------------------------------------------------------------
# text format

def _fmt_colors(cs):
    return "(" + ", ".join(str(c) for c in cs) + ")"


def to_text(g: ColoredDigraph) -> str:
    """One line per vertex, edge and leaf; vertices are numbered canonically."""
    g, _ = canonical_form(g)
    lines = []
    for v in sorted(g.vertices):
        x = g.vertices[v]
        lab = "" if x.label is None else f" [{x.label}]"
        lines.append(f"{v}: {_fmt_colors(x.ins)} -> {_fmt_colors(x.outs)}{lab}")
    for e in sorted(g.edges, key=lambda e: (e.src, e.out_port)):
        c = g.vertices[e.src].outs[e.out_port]
        lines.append(f"{e.src}.{e.out_port} -> {e.tgt}.{e.in_port} : {c}")
    for k, (v, q) in enumerate(g.inputs):
        lines.append(f"in[{k}] -> {v}.{q} : {g.vertices[v].ins[q]}")
    for k, (v, p) in enumerate(g.outputs):
        lines.append(f"{v}.{p} -> out[{k}] : {g.vertices[v].outs[p]}")
    return "\n".join(lines) + "\n"


def _parse_colors(s: str) -> tuple:
    s = s.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise GraphError(f"expected a parenthesised color list, got {s!r}")
    body = s[1:-1].strip()
    return tuple(c.strip() for c in body.split(",")) if body else ()


def from_text(text: str) -> ColoredDigraph:
    """Inverse of :func:`to_text`; labels are read back as strings."""
    verts, edges, ins, outs = {}, [], {}, {}
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            if line.startswith("in["):
                lhs, rest = line.split("->")
                k = int(lhs.strip()[3:-1])
                port = rest.split(":")[0].strip()
                v, q = port.split(".")
                ins[k] = (int(v), int(q))
            elif "-> out[" in line:
                lhs, rest = line.split("->")
                v, p = lhs.strip().split(".")
                k = int(rest.split("]")[0].strip()[4:])
                outs[k] = (int(v), int(p))
            elif ":" in line.split("->")[0] and "." not in line.split(":")[0]:
                vid, rest = line.split(":", 1)
                label = None
                if "[" in rest:
                    rest, lab = rest.split("[", 1)
                    label = lab.rsplit("]", 1)[0]
                a, b = rest.split("->")
                verts[int(vid)] = Vertex(_parse_colors(a), _parse_colors(b), label)
            else:
                lhs, rest = line.split("->")
                u, p = lhs.strip().split(".")
                w, q = rest.split(":")[0].strip().split(".")
                edges.append(Edge(int(u), int(p), int(w), int(q)))
        except (ValueError, IndexError) as exc:
            raise GraphError(f"line {ln}: cannot parse {raw!r}") from exc
    return ColoredDigraph(verts, edges, [ins[k] for k in sorted(ins)],
                          [outs[k] for k in sorted(outs)])



def vertex_types(colors: Sequence, max_arity: int) -> list:
    """All (ins, outs) with len(ins) + len(outs) <= max_arity."""
    from itertools import product
    out = []
    for m in range(max_arity + 1):
        for n in range(max_arity + 1 - m):
            for ins in product(colors, repeat=m):
                for outs in product(colors, repeat=n):
                    out.append((ins, outs))
    return out


def all_digraphs(colors: Sequence, max_vertices: int, max_arity: int,
                 leaf_orders: str = "all", max_leaf_orders: int = 24, seed: int = 0,
                 labels: Sequence = (None,)):
    """Every colored digraph with 1..max_vertices vertices whose vertices
    have total arity <= max_arity, one representative per vertex wiring.

    ``leaf_orders``: "fixed" keeps construction order, "all" enumerates
    every input/output leaf order (capped at ``max_leaf_orders`` per
    wiring, sampled with ``seed`` beyond the cap).
    """
    import random
    from itertools import combinations_with_replacement, permutations, islice
    from math import factorial
    rng = random.Random(seed)
    types = [(i, o, lab) for i, o in vertex_types(colors, max_arity) for lab in labels]
    for nv in range(1, max_vertices + 1):
        for combo in combinations_with_replacement(range(len(types)), nv):
            verts = {k: Vertex(types[t][0], types[t][1], types[t][2]) for k, t in enumerate(combo)}
            outs = [(v, p) for v, x in verts.items() for p in range(len(x.outs))]
            ins = [(v, q) for v, x in verts.items() for q in range(len(x.ins))]
            for edges in _matchings(outs, ins, verts):
                used_o = {(e.src, e.out_port) for e in edges}
                used_i = {(e.tgt, e.in_port) for e in edges}
                li = [t for t in ins if t not in used_i]
                lo = [t for t in outs if t not in used_o]
                base = ColoredDigraph(verts, edges, li, lo, check=False)
                if not is_acyclic(base):
                    continue
                if leaf_orders == "fixed":
                    yield base
                    continue
                total = factorial(len(li)) * factorial(len(lo))
                if total <= max_leaf_orders:
                    for pi in permutations(range(len(li))):
                        for po in permutations(range(len(lo))):
                            yield reorder_leaves(base, pi, po)
                else:
                    yield base
                    for _ in range(max_leaf_orders - 1):
                        pi = list(range(len(li)))
                        po = list(range(len(lo)))
                        rng.shuffle(pi)
                        rng.shuffle(po)
                        yield reorder_leaves(base, pi, po)


def _matchings(outs, ins, verts):
    """All sets of edges pairing out-ports with in-ports of equal color
    (each port used at most once, no self-loops)."""
    def color_o(t):
        return verts[t[0]].outs[t[1]]

    def color_i(t):
        return verts[t[0]].ins[t[1]]

    def rec(i, used):
        if i == len(outs):
            yield []
            return
        for rest in rec(i + 1, used):
            yield rest
        u, p = outs[i]
        for t in ins:
            if t not in used and t[0] != u and color_i(t) == color_o(outs[i]):
                for rest in rec(i + 1, used | {t}):
                    yield [Edge(u, p, t[0], t[1])] + rest

    yield from rec(0, frozenset())


# ---------------------------------------------------------------------------
# random instances

def random_types(rng, colors: Sequence, n: int, max_arity: int = 3) -> list:
    out = []
    for _ in range(n):
        m = rng.randint(0, max_arity)
        k = rng.randint(0, max_arity - m)
        out.append((tuple(rng.choice(colors) for _ in range(m)),
                    tuple(rng.choice(colors) for _ in range(k)), None))
    return out


def random_graph_on(rng, types: Sequence, p_edge: float = 0.6) -> ColoredDigraph:
    """Random acyclic wiring of the given vertex types (ins, outs, label).

    Edges only run from earlier to later vertices; leaf orders are
    shuffled.
    """
    verts = {k: Vertex(tuple(i), tuple(o), lab) for k, (i, o, lab) in enumerate(types)}
    free_in = {(v, q) for v, x in verts.items() for q in range(len(x.ins))}
    edges = []
    for u in sorted(verts):
        for p, c in enumerate(verts[u].outs):
            if rng.random() >= p_edge:
                continue
            cands = sorted(t for t in free_in if t[0] > u and verts[t[0]].ins[t[1]] == c)
            if cands:
                t = rng.choice(cands)
                free_in.discard(t)
                edges.append(Edge(u, p, t[0], t[1]))
    used_out = {(e.src, e.out_port) for e in edges}
    ins = sorted(free_in)
    outs = [(v, p) for v, x in verts.items() for p in range(len(x.outs)) if (v, p) not in used_out]
    rng.shuffle(ins)
    rng.shuffle(outs)
    return ColoredDigraph(verts, edges, ins, outs)


def random_nested_substitution(rng, colors: Sequence = ("a", "b"), max_total: int = 6):
    """Random (host, parts, subparts) with the fine graph having at most
    ``max_total`` vertices.

    ``parts[v]`` has biprofile of host vertex v and ``subparts[(v, w)]``
    has biprofile of vertex w of ``parts[v]``.
    """
    while True:
        n_host = rng.randint(1, 3)
        sizes = [[rng.randint(1, 2) for _ in range(rng.randint(1, 2))] for _ in range(n_host)]
        if sum(map(sum, sizes)) <= max_total:
            break
    subs_raw, parts = {}, {}
    host_types = []
    for v, block in enumerate(sizes):
        mid_types = []
        for w, k in enumerate(block):
            kg = random_graph_on(rng, random_types(rng, colors, k))
            subs_raw[(v, w)] = kg
            bi = kg.biprofile()
            mid_types.append((bi[0], bi[1], None))
        h = random_graph_on(rng, mid_types)
        parts[v] = h
        bi = h.biprofile()
        host_types.append((bi[0], bi[1], None))
    host = random_graph_on(rng, host_types)
    return host, parts, subs_raw
