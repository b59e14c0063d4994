"""Dioperads and properads.

A dioperad is anything with the methods of :class:`Dioperad`: colors,
operations with ordered input/output profiles, identities, composition
along a single edge (``compose_edge``) and reordering (``act``).  The
composition convention is the one of :func:`diop.graphcore.graft`: in
``compose_edge(a, j, b, i)`` output j of a is plugged into input i of b,
the result has a's inputs followed by b's remaining inputs and a's
remaining outputs followed by b's outputs.

Realizations here: free dioperads on a signature (operations are
canonical labelled trees), presented dioperads (bounded rewriting), the
Frobenius dioperad Frob (one operation per biprofile) and d-twists.  The
underlying dioperads of monoidal categories live in :mod:`diop.moncat`.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Hashable, Sequence

from . import graphcore as gc
from .graphcore import ColoredDigraph, Edge, Vertex

ID = "id"  # reserved vertex label for identity operations


class ShapeNotSimplyConnected(gc.GraphError):
    pass


class LabelMismatch(ValueError):
    pass


class ParseError(ValueError):
    def __init__(self, msg: str, text: str = "", pos: int = 0):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{msg} at line {line}, column {col}")
        self.pos, self.line, self.col = pos, line, col


class Dioperad:
    """Interface.  Subclasses implement ``identity``, ``compose_edge``,
    ``profile`` and ``act``; ``equal`` defaults to ``==``."""

    linear = False
    multi = False
    colors: Sequence = ()

    def identity(self, color):
        raise NotImplementedError

    def compose_edge(self, a, j: int, b, i: int):
        raise NotImplementedError

    def profile(self, op) -> tuple:
        raise NotImplementedError

    def act(self, op, in_perm=None, out_perm=None):
        raise NotImplementedError

    def equal(self, a, b) -> bool:
        return a == b

    def ops(self, ins, outs, **kw) -> list:
        raise NotImplementedError


# ---------------------------------------------------------------------------
# evaluation along a tree shape

def compose_graph(P, shape: ColoredDigraph, labels: dict, order: Sequence | None = None):
    """Evaluate a simply-connected shape whose vertices are labelled by
    operations of P, contracting one edge at a time.

    ``order`` is an optional list of the shape's edges giving the
    contraction order; the result does not depend on it when P is a
    dioperad.
    """
    if not gc.is_simply_connected(shape):
        raise ShapeNotSimplyConnected("shape must be connected with |E| = |V| - 1")
    groups = {}
    where = {}
    for v, x in shape.vertices.items():
        op = labels[v]
        prof = P.profile(op)
        if (tuple(prof[0]), tuple(prof[1])) != (x.ins, x.outs):
            raise LabelMismatch(f"vertex {v!r} has biprofile {(x.ins, x.outs)}, label has {prof}")
        groups[v] = (op, [(v, q) for q in range(len(x.ins))], [(v, p) for p in range(len(x.outs))])
        where[v] = v
    edges = list(order) if order is not None else sorted(shape.edges, key=repr)
    for e in edges:
        g1, g2 = where[e.src], where[e.tgt]
        op1, ins1, outs1 = groups.pop(g1)
        op2, ins2, outs2 = groups.pop(g2)
        j = outs1.index((e.src, e.out_port))
        i = ins2.index((e.tgt, e.in_port))
        op = P.compose_edge(op1, j, op2, i)
        ins = ins1 + ins2[:i] + ins2[i + 1:]
        outs = outs1[:j] + outs1[j + 1:] + outs2
        groups[g1] = (op, ins, outs)
        for v, w in where.items():
            if w == g2:
                where[v] = g1
    (op, ins, outs), = groups.values()
    in_perm = [ins.index(t) for t in shape.inputs]
    out_perm = [outs.index(t) for t in shape.outputs]
    if in_perm == list(range(len(ins))) and out_perm == list(range(len(outs))):
        return op
    return P.act(op, in_perm, out_perm)


# ---------------------------------------------------------------------------
# free dioperads

def normalize(g: ColoredDigraph) -> ColoredDigraph:
    """Splice out identity vertices and return the canonical form."""
    while True:
        ids = [v for v, x in g.vertices.items() if x.label == ID]
        if not ids or len(g.vertices) == 1:
            break
        done = False
        for v in sorted(ids, key=repr):
            ein, eout = g.in_edge(v, 0), g.out_edge(v, 0)
            edges = set(g.edges) - {ein, eout}
            ins, outs = list(g.inputs), list(g.outputs)
            if ein is not None and eout is not None:
                edges.add(Edge(ein.src, ein.out_port, eout.tgt, eout.in_port))
            elif ein is None and eout is not None:
                ins[ins.index((v, 0))] = (eout.tgt, eout.in_port)
            elif ein is not None and eout is None:
                outs[outs.index((v, 0))] = (ein.src, ein.out_port)
            else:
                continue  # a bare wire component
            verts = {w: x for w, x in g.vertices.items() if w != v}
            g = ColoredDigraph(verts, edges, ins, outs, check=False)
            done = True
            break
        if not done:
            break
    return gc.canonical_form(g)[0]


class FreeDioperad(Dioperad):
    """Free dioperad on a signature ``{name: (ins, outs)}``.

    Operations are canonical simply-connected graphs whose vertices are
    labelled by generator names; the identity of color c is a single
    vertex labelled ``"id"``.
    """

    def __init__(self, signature: dict, colors: Sequence | None = None):
        self.signature = {k: (tuple(v[0]), tuple(v[1])) for k, v in signature.items()}
        if ID in self.signature:
            raise ValueError("'id' is reserved")
        cs = set(colors or ())
        for ins, outs in self.signature.values():
            cs |= set(ins) | set(outs)
        self.colors = tuple(sorted(cs))

    def generator(self, name: str) -> ColoredDigraph:
        ins, outs = self.signature[name]
        return gc.canonical_form(gc.corolla(ins, outs, name))[0]

    def identity(self, color) -> ColoredDigraph:
        return gc.corolla((color,), (color,), ID)

    def is_identity(self, g: ColoredDigraph) -> bool:
        return len(g.vertices) == 1 and next(iter(g.vertices.values())).label == ID

    def profile(self, op: ColoredDigraph) -> tuple:
        return op.biprofile()

    def compose_edge(self, a, j, b, i):
        return normalize(gc.graft(a, b, [(j, i)]))

    def act(self, op, in_perm=None, out_perm=None):
        return gc.canonical_form(gc.reorder_leaves(op, in_perm, out_perm))[0]

    def equal(self, a, b) -> bool:
        return a.key() == b.key()

    def size(self, op) -> int:
        return 0 if self.is_identity(op) else len(op.vertices)

    def ops(self, ins, outs, max_vertices: int = 3) -> list:
        """All operations of the given biprofile with at most
        ``max_vertices`` generators."""
        ins, outs = tuple(ins), tuple(outs)
        sig = [(i, o, n) for n, (i, o) in self.signature.items()]
        found = {}
        if ins == outs and len(ins) == 1:
            found[self.identity(ins[0]).key()] = self.identity(ins[0])
        for g in gc.enumerate_connected(sig, max_vertices, simply_connected=True):
            bi = g.biprofile()
            if sorted(bi[0]) != sorted(ins) or sorted(bi[1]) != sorted(outs):
                continue
            for h in _leaf_orders_matching(g, ins, outs):
                h = gc.canonical_form(h)[0]
                found.setdefault(h.key(), h)
        return list(found.values())

    def all_ops(self, max_vertices: int = 3) -> list:
        sig = [(i, o, n) for n, (i, o) in self.signature.items()]
        out = {}
        for g in gc.enumerate_connected(sig, max_vertices, simply_connected=True):
            bi = g.biprofile()
            for h in _leaf_orders_matching(g, bi[0], bi[1]):
                h = gc.canonical_form(h)[0]
                out.setdefault(h.key(), h)
        return list(out.values())


def _leaf_orders_matching(g: ColoredDigraph, ins, outs):
    """All reorderings of g's leaves whose colors read ``ins`` / ``outs``."""
    from itertools import permutations
    ci, co = g.biprofile()
    pis = {p for p in permutations(range(len(ci))) if tuple(ci[k] for k in p) == tuple(ins)}
    pos = {p for p in permutations(range(len(co))) if tuple(co[k] for k in p) == tuple(outs)}
    for pi in sorted(pis):
        for po in sorted(pos):
            yield gc.reorder_leaves(g, pi, po)


# ---------------------------------------------------------------------------
# expressions and presentations

_TOKEN = re.compile(r"(#[^\n]*)|([A-Za-z_][A-Za-z0-9_']*)|(\d+)|(\S)")


def _tokenize(text: str) -> list:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m.group(1) is not None:
            pos = m.end()
            continue
        if m.group(2) is not None:
            toks.append(("ident", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            toks.append(("num", int(m.group(3)), m.start(3)))
        elif m.group(4) is not None:
            toks.append(("sym", m.group(4), m.start(4)))
        pos = m.end()
    toks.append(("eof", None, len(text)))
    return toks


@dataclass
class Presentation:
    colors: tuple
    signature: dict
    relations: list  # (name, lhs graph, rhs graph)
    text: str = ""


class _Parser:
    """Recursive descent parser for presentations and expressions.

    Expressions::

        expr   := atom post*
        atom   := NAME | 'id' | 'id_' COLOR | '(' expr ')'
        post   := '.' '(' slot, ... ')'   plug output 0 (or @n) of slot k into input k
                | '.' '[' slot, ... ']'   plug output k into input 0 (or @n) of slot k
                | '<' n n ... '>'         reorder inputs:  new k = old perm[k]
                | '{' n n ... '}'         reorder outputs
        slot   := 'id' | expr ['@' n]
    """

    def __init__(self, text: str, free: FreeDioperad | None = None):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.free = free

    # token helpers
    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.text, tok[2])

    def expect(self, sym):
        t = self.peek()
        if t[1] != sym:
            self.error(f"expected {sym!r}, found {t[1]!r}")
        self.i += 1
        return t

    def ident(self):
        t = self.peek()
        if t[0] != "ident":
            self.error(f"expected a name, found {t[1]!r}")
        self.i += 1
        return t[1]

    # presentations
    def presentation(self) -> Presentation:
        colors, sig, rels = [], {}, []
        while self.peek()[0] != "eof":
            kw = self.ident()
            if kw == "colors":
                self.expect(":")
                while self.peek()[1] != ";":
                    colors.append(self.ident())
                self.expect(";")
            elif kw == "gen":
                name_tok = self.peek()
                name = self.ident()
                if name == ID or name in sig:
                    self.error(f"generator name {name!r} is reserved or repeated", name_tok)
                self.expect(":")
                self.expect("(")
                ins = []
                while self.peek()[1] != ";":
                    ins.append(self._color(colors))
                self.expect(";")
                outs = []
                while self.peek()[1] != ")":
                    outs.append(self._color(colors))
                self.expect(")")
                self.expect(";")
                sig[name] = (tuple(ins), tuple(outs))
            elif kw == "rel":
                self.free = FreeDioperad(sig, colors)
                start = self.peek()
                lhs = self.expr()
                self.expect("=")
                rhs = self.expr()
                self.expect(";")
                if lhs.biprofile() != rhs.biprofile():
                    self.error(f"relation sides have biprofiles {lhs.biprofile()} and "
                               f"{rhs.biprofile()}", start)
                rels.append((f"r{len(rels)}", normalize(lhs), normalize(rhs)))
            else:
                self.error(f"unknown statement {kw!r}", self.toks[self.i - 1])
        return Presentation(tuple(colors), sig, rels, self.text)

    def _color(self, colors):
        tok = self.peek()
        c = self.ident()
        if colors and c not in colors:
            self.error(f"unknown color {c!r}", tok)
        return c

    # expressions
    def expr(self) -> ColoredDigraph:
        g = self.atom()
        while True:
            t = self.peek()
            if t[1] == "." and self.peek(1)[1] in ("(", "["):
                self.i += 1
                g = self.plug(g, pre=self.peek()[1] == "(")
            elif t[1] == "<":
                g = gc.reorder_leaves(g, self.perm("<", ">", len(g.inputs)), None)
            elif t[1] == "{":
                g = gc.reorder_leaves(g, None, self.perm("{", "}", len(g.outputs)))
            else:
                return g

    def perm(self, open_, close, n):
        tok = self.expect(open_)
        out = []
        while self.peek()[1] != close:
            t = self.peek()
            if t[0] != "num":
                self.error("expected an index", t)
            out.append(t[1])
            self.i += 1
            if self.peek()[1] == ",":
                self.i += 1
        self.expect(close)
        if sorted(out) != list(range(n)):
            self.error(f"not a permutation of {n} elements", tok)
        return out

    def atom(self) -> ColoredDigraph:
        t = self.peek()
        if t[1] == "(":
            self.i += 1
            g = self.expr()
            self.expect(")")
            return g
        name = self.ident()
        free = self.free
        if free is None:
            self.error("no signature in scope", t)
        if name == ID or name.startswith("id_"):
            c = name[3:] if name != ID else None
            if c is None:
                if len(free.colors) != 1:
                    self.error("'id' is ambiguous with several colors; write id_COLOR", t)
                c = free.colors[0]
            if c not in free.colors:
                self.error(f"unknown color {c!r}", t)
            return free.identity(c)
        if name not in free.signature:
            self.error(f"unknown generator {name!r}", t)
        ins, outs = free.signature[name]
        return gc.corolla(ins, outs, name)

    def slot(self):
        t = self.peek()
        if t[1] == ID and self.peek(1)[1] in (",", ")", "]"):
            self.i += 1
            return None, 0, t
        g = self.expr()
        port = 0
        if self.peek()[1] == "@":
            self.i += 1
            nt = self.peek()
            if nt[0] != "num":
                self.error("expected a port number after '@'", nt)
            port = nt[1]
            self.i += 1
        return g, port, t

    def plug(self, f: ColoredDigraph, pre: bool) -> ColoredDigraph:
        open_tok = self.peek()
        close = ")" if pre else "]"
        self.i += 1
        slots = []
        while True:
            slots.append(self.slot())
            if self.peek()[1] == ",":
                self.i += 1
                continue
            self.expect(close)
            break
        n = len(f.inputs) if pre else len(f.outputs)
        if len(slots) != n:
            self.error(f"expected {n} slots, found {len(slots)}", open_tok)
        try:
            return plug(f, slots, pre)
        except (gc.GraphError, IndexError) as exc:
            self.error(str(exc), open_tok)


def plug(f: ColoredDigraph, slots: Sequence, pre: bool) -> ColoredDigraph:
    """Attach graphs to every input (``pre``) or output of ``f``.

    ``slots[k]`` is ``(g, port, _)`` or ``(None, 0, _)`` for a pass-through.
    With ``pre``, output ``port`` of g feeds input k of f; the result's
    inputs are read slot by slot and its outputs are the slots' remaining
    outputs followed by f's outputs.  Otherwise output k of f feeds input
    ``port`` of g; inputs are f's inputs then the slots' remaining inputs,
    outputs are read slot by slot.
    """
    F = gc.relabel(f, lambda v: ("f", v))
    verts, edges = dict(F.vertices), set(F.edges)
    ins, outs = [], []
    tail_outs, tail_ins = [], []
    for k, (g, port, _) in enumerate(slots):
        if g is None:
            (ins if pre else outs).append(F.inputs[k] if pre else F.outputs[k])
            continue
        G = gc.relabel(g, lambda v, k=k: (k, v))
        verts.update(G.vertices)
        edges |= G.edges
        if pre:
            u, p = G.outputs[port]
            w, q = F.inputs[k]
            if G.vertices[u].outs[p] != F.vertices[w].ins[q]:
                raise gc.ColorMismatch(f"slot {k}: color {G.vertices[u].outs[p]} "
                                       f"vs {F.vertices[w].ins[q]}")
            edges.add(Edge(u, p, w, q))
            ins.extend(G.inputs)
            tail_outs.extend(x for n, x in enumerate(G.outputs) if n != port)
        else:
            u, p = F.outputs[k]
            w, q = G.inputs[port]
            if G.vertices[w].ins[q] != F.vertices[u].outs[p]:
                raise gc.ColorMismatch(f"slot {k}: color {F.vertices[u].outs[p]} "
                                       f"vs {G.vertices[w].ins[q]}")
            edges.add(Edge(u, p, w, q))
            outs.extend(G.outputs)
            tail_ins.extend(x for n, x in enumerate(G.inputs) if n != port)
    if pre:
        outs = tail_outs + list(F.outputs)
    else:
        ins = list(F.inputs) + tail_ins
    return ColoredDigraph(verts, edges, ins, outs)


def parse_presentation(text: str) -> "PresentedDioperad":
    pres = _Parser(text).presentation()
    return PresentedDioperad(FreeDioperad(pres.signature, pres.colors), pres.relations)


def parse_expr(text: str, free: FreeDioperad) -> ColoredDigraph:
    p = _Parser(text, free)
    g = p.expr()
    if p.peek()[0] != "eof":
        p.error(f"unexpected {p.peek()[1]!r}")
    return normalize(g)


# ---------------------------------------------------------------------------
# presented dioperads: bounded rewriting

def find_occurrences(g: ColoredDigraph, L: ColoredDigraph):
    """Embeddings of the connected pattern L into g as a convex subgraph.

    Yields dicts (L vertex -> g vertex).  Edges of L must map to edges of
    g on the same ports, leaves of L must not be joined inside the image,
    and the image must be convex so that it can be collapsed.
    """
    lv = list(L.vertices)
    if not lv:
        return
    l_out = {(e.src, e.out_port): e for e in L.edges}
    l_in = {(e.tgt, e.in_port): e for e in L.edges}
    g_out = {(e.src, e.out_port): e for e in g.edges}
    g_in = {(e.tgt, e.in_port): e for e in g.edges}
    start = lv[0]
    seen = set()
    for cand in g.vertices:
        if g.vertices[cand] != L.vertices[start]:
            continue
        m = {start: cand}
        todo = deque([start])
        ok = True
        while todo and ok:
            s = todo.popleft()
            x = L.vertices[s]
            for p in range(len(x.outs)):
                e = l_out.get((s, p))
                if e is None:
                    continue
                ge = g_out.get((m[s], p))
                if ge is None or ge.in_port != e.in_port:
                    ok = False
                    break
                if e.tgt in m:
                    ok = ok and m[e.tgt] == ge.tgt
                else:
                    m[e.tgt] = ge.tgt
                    todo.append(e.tgt)
            for q in range(len(x.ins)):
                e = l_in.get((s, q))
                if e is None or not ok:
                    continue
                ge = g_in.get((m[s], q))
                if ge is None or ge.out_port != e.out_port:
                    ok = False
                    break
                if e.src in m:
                    ok = ok and m[e.src] == ge.src
                else:
                    m[e.src] = ge.src
                    todo.append(e.src)
        if not ok or len(m) != len(lv) or len(set(m.values())) != len(lv):
            continue
        if any(g.vertices[m[v]] != L.vertices[v] for v in lv):
            continue
        S = set(m.values())
        inner = [e for e in g.edges if e.src in S and e.tgt in S]
        if len(inner) != len(L.edges):
            continue
        if not gc.is_convex(g, S):
            continue
        key = tuple(sorted(m.items(), key=repr))
        if key in seen:
            continue
        seen.add(key)
        yield m


def _wires(g: ColoredDigraph):
    """Every wire of g as (kind, data, color)."""
    for e in sorted(g.edges, key=repr):
        yield ("edge", e, g.vertices[e.src].outs[e.out_port])
    for k, (v, q) in enumerate(g.inputs):
        yield ("in", k, g.vertices[v].ins[q])
    for k, (v, p) in enumerate(g.outputs):
        yield ("out", k, g.vertices[v].outs[p])


def _insert_on_wire(g: ColoredDigraph, wire, R: ColoredDigraph) -> ColoredDigraph:
    kind, data, color = wire
    hole = ("hole",)
    verts = dict(g.vertices)
    verts[hole] = Vertex((color,), (color,), None)
    edges = set(g.edges)
    ins, outs = list(g.inputs), list(g.outputs)
    if kind == "edge":
        edges.discard(data)
        edges.add(Edge(data.src, data.out_port, hole, 0))
        edges.add(Edge(hole, 0, data.tgt, data.in_port))
    elif kind == "in":
        edges.add(Edge(hole, 0, *ins[data]))
        ins[data] = (hole, 0)
    else:
        edges.add(Edge(*outs[data], hole, 0))
        outs[data] = (hole, 0)
    h = ColoredDigraph(verts, edges, ins, outs, check=False)
    return gc.substitute(h, {hole: R})


def rewrite_at(g: ColoredDigraph, m: dict, L: ColoredDigraph, R: ColoredDigraph) -> ColoredDigraph:
    S = [m[v] for v in L.vertices]
    bin_ = [(m[v], q) for v, q in L.inputs]
    bout = [(m[v], p) for v, p in L.outputs]
    q, _ = gc.collapse_with_boundary(g, S, bin_, bout, label=None, new_id=("hole",))
    return gc.substitute(q, {("hole",): R})


@dataclass
class CongruenceResult:
    verdict: str           # "equal" | "distinct" | "unknown"
    steps: int = 0
    explored: int = 0
    path: list = field(default_factory=list)


class PresentedDioperad(Dioperad):
    """Free dioperad modulo relations, with equality decided by bounded
    rewriting.

    ``equal`` is sound: it answers True only when a chain of relation
    applications (in either direction, every intermediate graph with at
    most ``bound`` vertices) joins the two operations.
    """

    def __init__(self, free: FreeDioperad, relations: Sequence, bound: int = 6,
                 max_states: int = 20000, separators: Sequence = ()):
        self.free = free
        self.relations = [(n, normalize(l), normalize(r)) for n, l, r in relations]
        self.bound = bound
        self.max_states = max_states
        self.separators = list(separators)
        self.colors = free.colors

    # Dioperad interface (operations are free representatives)
    def identity(self, color):
        return self.free.identity(color)

    def profile(self, op):
        return op.biprofile()

    def compose_edge(self, a, j, b, i):
        return self.free.compose_edge(a, j, b, i)

    def act(self, op, in_perm=None, out_perm=None):
        return self.free.act(op, in_perm, out_perm)

    def equal(self, a, b) -> bool:
        return self.decide(a, b).verdict == "equal"

    def parse(self, text: str) -> ColoredDigraph:
        return parse_expr(text, self.free)

    def rules(self):
        for name, l, r in self.relations:
            yield name, l, r
            yield name + "^-1", r, l

    def neighbours(self, g: ColoredDigraph):
        """All graphs one relation application away (within the bound)."""
        for name, L, R in self.rules():
            if self.free.is_identity(L):
                color = L.biprofile()[0][0]
                if self.free.is_identity(g):
                    ws = [("in", 0, color)]
                    base = g
                else:
                    ws = [w for w in _wires(g) if w[2] == color]
                    base = g
                for w in ws:
                    if self.free.is_identity(base):
                        h = R
                    else:
                        h = _insert_on_wire(base, w, R)
                    h = normalize(h)
                    if self.free.size(h) <= self.bound:
                        yield name, h
                continue
            if self.free.is_identity(g):
                continue
            for m in find_occurrences(g, L):
                h = normalize(rewrite_at(g, m, L, R))
                if self.free.size(h) <= self.bound:
                    yield name, h

    def decide(self, a: ColoredDigraph, b: ColoredDigraph) -> CongruenceResult:
        """Bidirectional breadth-first search for a rewrite chain."""
        a, b = normalize(a), normalize(b)
        if a.biprofile() != b.biprofile():
            return CongruenceResult("distinct")
        if a.key() == b.key():
            return CongruenceResult("equal", 0, 1)
        for sep in self.separators:
            if not sep(a, b):
                return CongruenceResult("distinct")
        par = [{a.key(): None}, {b.key(): None}]
        frontier = [[a], [b]]
        explored = 2
        while frontier[0] or frontier[1]:
            side = 0 if (len(frontier[0]) <= len(frontier[1]) and frontier[0]) or not frontier[1] else 1
            nxt = []
            for g in frontier[side]:
                for name, h in self.neighbours(g):
                    k = h.key()
                    if k in par[side]:
                        continue
                    par[side][k] = (g.key(), name)
                    explored += 1
                    if k in par[1 - side]:
                        return CongruenceResult("equal", self._chain_len(par, k), explored)
                    nxt.append(h)
                    if explored > self.max_states:
                        return CongruenceResult("unknown", 0, explored)
            frontier[side] = nxt
        return CongruenceResult("unknown", 0, explored)

    @staticmethod
    def _chain_len(par, k) -> int:
        n = 0
        for side in (0, 1):
            x = k
            while par[side][x] is not None:
                x = par[side][x][0]
                n += 1
        return n


# ---------------------------------------------------------------------------
# the Frobenius dioperad

@dataclass(frozen=True)
class FrobOp:
    m: int
    n: int
    color: str = "x"


FROB_TEXT = """
colors: {c};
gen mu : ({c} {c} ; {c});
gen eta : ( ; {c});
gen delta : ({c} ; {c} {c});
gen eps : ({c} ; );
rel mu.(mu, id) = mu.(id, mu);
rel mu = mu<1 0>;
rel mu.(eta, id) = id;
rel delta.[delta, id] = delta.[id, delta];
rel delta = delta{1 0};
rel delta.[eps, id] = id;
rel mu.(id, delta@0){1 0} = delta.(mu);
rel mu.(delta@1, id) = delta.(mu);
"""


class FrobDioperad(Dioperad):
    """Frob: one color, and exactly one operation in every biprofile (m; n).

    Generated by a commutative associative product with unit and a
    cocommutative coassociative coproduct with counit, subject to the
    Frobenius compatibility.
    """

    def __init__(self, color: str = "x"):
        self.color = color
        self.colors = (color,)
        self._pres = None

    def identity(self, color=None):
        return FrobOp(1, 1, self.color)

    def profile(self, op: FrobOp):
        return (self.color,) * op.m, (self.color,) * op.n

    def compose_edge(self, a, j, b, i):
        if not (0 <= j < a.n and 0 <= i < b.m):
            raise IndexError("no such port")
        return FrobOp(a.m + b.m - 1, a.n + b.n - 1, self.color)

    def act(self, op, in_perm=None, out_perm=None):
        return op

    def ops(self, ins, outs, **kw):
        return [FrobOp(len(ins), len(outs), self.color)]

    # every operation is invariant under reordering its inputs and outputs
    port_symmetric = True

    def factor_edge(self, op: FrobOp, in_sel: Sequence[int], out_sel: Sequence[int]) -> list:
        """All ways to write ``op`` as ``upper`` plugged into ``lower``
        along one edge, where ``upper`` takes the inputs ``in_sel`` and
        keeps the outputs ``out_sel`` (in that order) followed by the
        connecting output; ``lower`` takes the connecting input first.
        Returns ``[(color, upper, lower)]``."""
        a, b = len(in_sel), len(out_sel)
        return [(self.color, FrobOp(a, b + 1, self.color),
                 FrobOp(op.m - a + 1, op.n - b, self.color))]

    def presentation(self) -> PresentedDioperad:
        if self._pres is None:
            self._pres = parse_presentation(FROB_TEXT.replace("{c}", self.color))
        return self._pres

    GENERATORS = {"mu": (2, 1), "eta": (0, 1), "delta": (1, 2), "eps": (1, 0)}

    def generator_op(self, name: str) -> FrobOp:
        m, n = self.GENERATORS[name]
        return FrobOp(m, n, self.color)

    def factorization(self, op: FrobOp) -> ColoredDigraph:
        """A tree of generators representing ``op``: a left comb of
        products (or the unit), followed by a comb of coproducts (or the
        counit)."""
        P = self.presentation()
        F = P.free
        c = self.color
        if op.m == 0:
            top = F.generator("eta")
        else:
            top = F.identity(c)
            for _ in range(op.m - 1):
                top = F.compose_edge(top, 0, F.generator("mu"), 0)
        if op.n == 0:
            return F.compose_edge(top, 0, F.generator("eps"), 0)
        g = top
        for k in range(op.n - 1):
            g = F.compose_edge(g, len(g.outputs) - 1, F.generator("delta"), 0)
        return g

    def classify(self, g: ColoredDigraph) -> FrobOp:
        """The unique Frob operation of a free graph's biprofile (genus 0)."""
        ins, outs = g.biprofile()
        return FrobOp(len(ins), len(outs), self.color)


# ---------------------------------------------------------------------------
# twists

@dataclass(frozen=True)
class TwOp:
    op: Hashable
    exponent: int


class TwistedDioperad(Dioperad):
    """P{d}: operations P(x; y) (x) d^(n-1), stored as (op, n - 1).

    ``d`` is the integer degree of the invertible graded line.  Over a
    graded linear base an operation of exponent k is represented by an
    element of P of degree ``k * d``.
    """

    def __init__(self, P, d: int):
        self.P, self.d = P, d
        self.colors = P.colors
        self.linear = getattr(P, "linear", False)

    def identity(self, color):
        return TwOp(self.P.identity(color), 0)

    def profile(self, op: TwOp):
        return self.P.profile(op.op)

    def compose_edge(self, a, j, b, i):
        return TwOp(self.P.compose_edge(a.op, j, b.op, i), a.exponent + b.exponent)

    def act(self, op, in_perm=None, out_perm=None):
        return TwOp(self.P.act(op.op, in_perm, out_perm), op.exponent)

    def equal(self, a, b) -> bool:
        return a.exponent == b.exponent and self.P.equal(a.op, b.op)

    def twist_degree(self, op: TwOp) -> int:
        return op.exponent * self.d

    def ops(self, ins, outs, **kw):
        k = len(outs) - 1
        if self.linear:
            return [TwOp(o, k) for o in self.P.ops(ins, outs, degree=k * self.d)]
        return [TwOp(o, k) for o in self.P.ops(ins, outs, **kw)]

    def wrap(self, op) -> TwOp:
        return TwOp(op, len(self.P.profile(op)[1]) - 1)

    @property
    def port_symmetric(self) -> bool:
        return getattr(self.P, "port_symmetric", False)

    def factor_edge(self, op: TwOp, in_sel, out_sel) -> list:
        return [(c, self.wrap(u), self.wrap(w))
                for c, u, w in self.P.factor_edge(op.op, in_sel, out_sel)]


def twist(P, d: int) -> TwistedDioperad:
    return TwistedDioperad(P, d)


def cancel_twist(op: TwOp):
    """(P{d}){-d} -> P: drop both exponents (they are equal)."""
    inner = op.op
    assert isinstance(inner, TwOp) and inner.exponent == op.exponent
    return inner.op


# ---------------------------------------------------------------------------
# morphisms, algebras and polynatural transformations

@dataclass
class DioperadMorphism:
    """Color map plus an action on operations."""

    source: object
    target: object
    color_map: Callable
    on_op: Callable
    generator_images: dict = field(default_factory=dict)
    expected_degree: Callable | None = None

    def __call__(self, op):
        return self.on_op(op)


def from_generators(source, target, color_map, images: dict,
                    expected_degree: Callable | None = None) -> DioperadMorphism:
    """Morphism out of a free, presented, Frob or twisted-Frob dioperad
    determined by the images of the generators."""
    cmap = color_map if callable(color_map) else color_map.__getitem__
    free = _free_of(source)

    def on_graph(g: ColoredDigraph):
        if free.is_identity(g):
            return target.identity(cmap(g.biprofile()[0][0]))
        shape = gc.relabel_vertices(g, lambda v, x: None)
        shape = ColoredDigraph({v: Vertex(tuple(map(cmap, x.ins)), tuple(map(cmap, x.outs)))
                                for v, x in shape.vertices.items()},
                               shape.edges, shape.inputs, shape.outputs, check=False)
        labels = {v: images[x.label] for v, x in g.vertices.items()}
        return compose_graph(target, shape, labels)

    base = source.P if isinstance(source, TwistedDioperad) else source

    def on_op(op):
        if isinstance(op, TwOp):
            op = op.op
        if isinstance(op, FrobOp):
            op = base.factorization(op)
        return on_graph(op)

    return DioperadMorphism(source, target, cmap, on_op, dict(images), expected_degree)


def _free_of(P) -> FreeDioperad:
    if isinstance(P, TwistedDioperad):
        P = P.P
    if isinstance(P, FreeDioperad):
        return P
    if isinstance(P, PresentedDioperad):
        return P.free
    if isinstance(P, FrobDioperad):
        return P.presentation().free
    raise TypeError(f"{type(P).__name__} has no generators")


def _relations_of(P):
    if isinstance(P, TwistedDioperad):
        P = P.P
    if isinstance(P, PresentedDioperad):
        return P.relations
    if isinstance(P, FrobDioperad):
        return P.presentation().relations
    return None


@dataclass
class AlgebraReport:
    ok: bool
    checked: int
    failures: list

    def first(self):
        return self.failures[0] if self.failures else None


def algebra_check(P, target, F: DioperadMorphism, sample_bound: int = 2,
                  degree_of: Callable | None = None) -> AlgebraReport:
    """Check that F: P -> target preserves identities and composition.

    For presented sources every relation is evaluated on both sides; for
    other sources all composable pairs among operations of at most
    ``sample_bound`` inputs and outputs are checked.  ``F.expected_degree``
    (if given) is compared with ``degree_of(image)`` for each generator.
    """
    failures, checked = [], 0
    rels = _relations_of(P)
    if F.expected_degree is not None and degree_of is not None:
        for name, img in F.generator_images.items():
            checked += 1
            want, got = F.expected_degree(name), degree_of(img)
            if want != got:
                failures.append(("degree", name, want, got))
    if rels is not None:
        free = _free_of(P)
        for c in free.colors:
            checked += 1
            if not target.equal(F(free.identity(c)), target.identity(F.color_map(c))):
                failures.append(("identity", c))
        for name, lhs, rhs in rels:
            checked += 1
            if not target.equal(F(lhs), F(rhs)):
                failures.append(("relation", name, lhs, rhs))
        return AlgebraReport(not failures, checked, failures)
    colors = list(P.colors)
    for c in colors:
        checked += 1
        if not target.equal(F(P.identity(c)), target.identity(F.color_map(c))):
            failures.append(("identity", c))
    profiles = [(tuple(i), tuple(o)) for m in range(sample_bound + 1) for n in range(sample_bound + 1)
                for i in product(colors, repeat=m) for o in product(colors, repeat=n)]
    ops = [op for ins, outs in profiles for op in P.ops(ins, outs)]
    for a, b in product(ops, repeat=2):
        ia, oa = P.profile(a)
        ib, ob = P.profile(b)
        for j, i in product(range(len(oa)), range(len(ib))):
            if oa[j] != ib[i]:
                continue
            checked += 1
            lhs = F(P.compose_edge(a, j, b, i))
            rhs = target.compose_edge(F(a), j, F(b), i)
            if not target.equal(lhs, rhs):
                failures.append(("composition", a, j, b, i))
    return AlgebraReport(not failures, checked, failures)


@dataclass
class PolynaturalTransformation:
    """Unary operations theta_c: F(c) -> G(c) of the target, one per source color."""

    F: DioperadMorphism
    G: DioperadMorphism
    components: dict

    def check(self, generators: Sequence) -> list:
        """Naturality against each operation o of the source:
        G(o) after theta on every input equals theta on every output after F(o)."""
        Q = self.F.target
        bad = []
        for o in generators:
            ins, outs = self.F.source.profile(o)
            lhs = self.G(o)
            for k in range(len(ins)):
                lhs = Q.compose_edge(self.components[ins[k]], 0, lhs, k)
                lhs = Q.act(lhs, _move_first_to(len(ins), k), None)
            rhs = self.F(o)
            for k in range(len(outs)):
                rhs = Q.compose_edge(rhs, k, self.components[outs[k]], 0)
                rhs = Q.act(rhs, None, _move_last_to(len(outs), k))
            if not Q.equal(lhs, rhs):
                bad.append(o)
        return bad

    def then(self, other: "PolynaturalTransformation") -> "PolynaturalTransformation":
        """Vertical composite: first self, then other."""
        Q = self.F.target
        comps = {c: Q.compose_edge(self.components[c], 0, other.components[c], 0)
                 for c in self.components}
        return PolynaturalTransformation(self.F, other.G, comps)


def _move_first_to(n: int, k: int) -> list:
    """Permutation putting the first of n entries back at position k."""
    order = list(range(1, n))
    order.insert(k, 0)
    return order


def _move_last_to(n: int, k: int) -> list:
    """Permutation putting the last of n entries back at position k."""
    order = list(range(n - 1))
    order.insert(k, n - 1)
    return order
