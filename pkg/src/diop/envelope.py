"""Envelopes.

* :class:`PropEnvelope` -- the properadic envelope E^d O of a dioperad.
  An operation is a class of connected labelled digraphs; two labelled
  graphs are identified when one is obtained from the other by composing
  the labels along a simply-connected subgraph.  Composition grafts
  representatives.
* :class:`MonoidalEnvelope` -- the symmetric monoidal envelope E^p P of a
  properad: morphisms are finite families of labelled corollas
  (:class:`EnvMorphism`), composed by grafting and contracting.
* :func:`full_envelope` -- E = E^p E^d.
* :func:`upsilon` / :func:`gamma` -- translate between properad maps
  P -> U^p C and symmetric monoidal functors E^p P -> C.

Deciding equality of E^d classes
--------------------------------
Contracting a pair of vertices joined by exactly one edge (and no other
directed path) is a single step of the colimit relation.  Contracting as
long as possible is *not* confluent once the graph has a cycle: a
triangle of two coproducts and one product reduces to two different
two-vertex graphs.  The normal form is therefore the smallest irreducible
graph in the component of the start graph under "expand one vertex into
an edge, then contract" moves, explored up to ``max_states`` graphs.
Expansions need the dioperad to factor operations (``factor_edge``);
without it only contraction sequences are explored.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from typing import Callable, Sequence

from . import dioperad as dp
from . import graphcore as gc
from . import moncat as mc
from .graphcore import ColoredDigraph, Edge, Vertex


def _default_label_key(op):
    key = getattr(op, "key", None)
    return key() if callable(key) else repr(op)


def _subsets(n: int):
    for r in range(n + 1):
        yield from combinations(range(n), r)


# ---------------------------------------------------------------------------
# keys of labelled graphs

def _ordered_key(g: ColoredDigraph, label_key: Callable):
    return gc.canonical_key(g, True, label_key)


def _unordered_key(g: ColoredDigraph, label_key: Callable):
    """Invariant of a labelled graph up to isomorphism *and* reordering of
    the ports of each vertex (for dioperads whose operations ignore port
    order).  External leaves keep their positions."""
    in_leaf, out_leaf = {}, {}
    for k, (v, q) in enumerate(g.inputs):
        in_leaf.setdefault(v, []).append((k, g.vertices[v].ins[q]))
    for k, (v, p) in enumerate(g.outputs):
        out_leaf.setdefault(v, []).append((k, g.vertices[v].outs[p]))

    def sig(v):
        x = g.vertices[v]
        return repr((label_key(x.label), sorted(map(repr, x.ins)), sorted(map(repr, x.outs)),
                     sorted(in_leaf.get(v, [])), sorted(out_leaf.get(v, []))))

    groups = {}
    for v in g.vertices:
        groups.setdefault(sig(v), []).append(v)
    names = sorted(groups)
    mult = {}
    for e in g.edges:
        t = (e.src, e.tgt, repr(g.vertices[e.src].outs[e.out_port]))
        mult[t] = mult.get(t, 0) + 1
    best = None
    for choice in product(*(permutations(groups[s]) for s in names)):
        pos = {v: i for i, v in enumerate(v for grp in choice for v in grp)}
        code = tuple(sorted((pos[u], pos[w], c, m) for (u, w, c), m in mult.items()))
        if best is None or code < best:
            best = code
    return (tuple(names), best)


# ---------------------------------------------------------------------------
# the properadic envelope

class EnvelopeOpClass:
    """An operation of E^d O, held by a labelled connected representative
    (vertex labels are operations of O).  Equality is class equality."""

    __slots__ = ("env", "rep")

    def __init__(self, env: "PropEnvelope", rep: ColoredDigraph):
        self.env, self.rep = env, rep

    @property
    def profile(self):
        return self.rep.biprofile()

    def key(self):
        return self.env.key(self)

    def __eq__(self, other):
        return isinstance(other, EnvelopeOpClass) and self.env.equal(self, other)

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        ins, outs = self.profile
        return f"EnvelopeOpClass({ins}; {outs}, {len(self.rep.vertices)} vertices)"


@dataclass
class NormalFormStats:
    states: int = 0
    components: int = 0
    bounded: int = 0   # components whose exploration hit max_states


class PropEnvelope:
    """E^d O: properad whose operations are :class:`EnvelopeOpClass` values."""

    multi = True

    def __init__(self, O, max_states: int = 5000, label_key: Callable | None = None):
        self.O = O
        self.colors = tuple(getattr(O, "colors", ()))
        self.max_states = max_states
        self.label_key = label_key or getattr(O, "label_key", None) or _default_label_key
        self.symmetric = bool(getattr(O, "port_symmetric", False))
        self.can_expand = hasattr(O, "factor_edge")
        self._irr = {}      # graph key -> frozenset of irreducible keys reachable
        self._graphs = {}   # key -> representative graph
        self._nf = {}       # irreducible key -> normal-form key of its class
        self.stats = NormalFormStats()

    # -- structure

    def corolla(self, op) -> EnvelopeOpClass:
        ins, outs = self.O.profile(op)
        return EnvelopeOpClass(self, gc.corolla(tuple(ins), tuple(outs), op))

    unit = corolla  # the unit map O -> U^d E^d O

    def identity(self, color) -> EnvelopeOpClass:
        return self.corolla(self.O.identity(color))

    def profile(self, c: EnvelopeOpClass):
        return c.rep.biprofile()

    def compose_multi(self, a: EnvelopeOpClass, b: EnvelopeOpClass, pairing) -> EnvelopeOpClass:
        pairing = list(pairing)
        if not pairing:
            raise ValueError("properadic composition needs at least one edge")
        return EnvelopeOpClass(self, gc.graft(a.rep, b.rep, pairing))

    def compose_edge(self, a, j: int, b, i: int) -> EnvelopeOpClass:
        return self.compose_multi(a, b, [(j, i)])

    def act(self, c: EnvelopeOpClass, in_perm=None, out_perm=None) -> EnvelopeOpClass:
        return EnvelopeOpClass(self, gc.reorder_leaves(c.rep, in_perm, out_perm))

    def key(self, c: EnvelopeOpClass):
        return self.normal_key(c.rep)

    def equal(self, a: EnvelopeOpClass, b: EnvelopeOpClass) -> bool:
        return self.profile(a) == self.profile(b) and self.key(a) == self.key(b)

    # -- graph keys and single steps

    def graph_key(self, g: ColoredDigraph):
        if self.symmetric:
            return _unordered_key(g, self.label_key)
        return _ordered_key(g, self.label_key)

    def _remember(self, g: ColoredDigraph):
        k = self.graph_key(g)
        if k not in self._graphs:
            self._graphs[k] = gc.canonical_form(g, self.label_key)[0]
        return k

    def contract(self, g: ColoredDigraph, u, w) -> ColoredDigraph:
        """Compose the labels of the pair u -> w into one vertex."""
        nid = ("c", len(g.vertices))
        while nid in g.vertices:
            nid = ("c", nid)
        q, part = gc.collapse(g, [u, w], new_id=nid)
        label = dp.compose_graph(self.O, part, {v: x.label for v, x in part.vertices.items()})
        return gc.relabel_vertices(q, lambda v, x: label if v == nid else x.label)

    def contractions(self, g: ColoredDigraph) -> list:
        return [self.contract(g, u, w) for u, w in gc.contractible_pairs(g)]

    def expansions(self, g: ColoredDigraph):
        """Graphs obtained by factoring one vertex label along a new edge
        (both factors non-trivial)."""
        for v, x in g.vertices.items():
            m, n = len(x.ins), len(x.outs)
            for in_sel in _subsets(m):
                for out_sel in _subsets(n):
                    a, b = len(in_sel), len(out_sel)
                    if (a == 1 and b == 0) or (m - a == 0 and n - b == 1):
                        continue  # one factor would be an identity
                    for c, upper, lower in self.O.factor_edge(x.label, in_sel, out_sel):
                        yield gc.substitute(g, {v: _split_part(x, in_sel, out_sel, c, upper, lower)})

    # -- normal forms

    def irreducibles(self, g: ColoredDigraph) -> frozenset:
        """Keys of all graphs reachable from ``g`` by contractions that
        admit no further contraction."""
        k = self._remember(g)
        if k in self._irr:
            return self._irr[k]
        stack, order, seen, succ = [k], [], {k}, {}
        while stack:
            s = stack.pop()
            order.append(s)
            succ[s] = [self._remember(h) for h in self.contractions(self._graphs[s])]
            for t in succ[s]:
                if t not in seen and t not in self._irr:
                    seen.add(t)
                    stack.append(t)
        # every contraction removes a vertex: resolve smallest graphs first
        order.sort(key=lambda s: len(self._graphs[s].vertices))
        for s in order:
            if not succ[s]:
                self._irr[s] = frozenset([s])
            else:
                self._irr[s] = frozenset().union(*(self._irr[t] for t in succ[s]))
        self.stats.states = len(self._graphs)
        return self._irr[k]

    def _explore(self, start: frozenset) -> None:
        """Close a set of irreducible graphs under expand-then-contract and
        record the minimum as the normal form of every member."""
        comp, queue = set(start), deque(start)
        hit_bound = False
        known = None
        while queue:
            s = queue.popleft()
            if s in self._nf:
                known = self._nf[s]
                continue
            g = self._graphs[s]
            if len(g.vertices) <= 1 or not self.can_expand:
                continue
            for h in self.expansions(g):
                for t in self.irreducibles(h):
                    if t not in comp:
                        if len(comp) >= self.max_states:
                            hit_bound = True
                            continue
                        comp.add(t)
                        queue.append(t)
        self.stats.components += 1
        self.stats.bounded += hit_bound
        nf = known if known is not None else min(comp, key=repr)
        for s in comp:
            self._nf.setdefault(s, nf)

    def normal_key(self, g: ColoredDigraph):
        irr = self.irreducibles(g)
        todo = [s for s in irr if s not in self._nf]
        if todo:
            self._explore(irr)
        return self._nf[next(iter(irr))]

    def normal_form(self, c: EnvelopeOpClass | ColoredDigraph) -> ColoredDigraph:
        g = c.rep if isinstance(c, EnvelopeOpClass) else c
        return self._graphs[self.normal_key(g)]


def _split_part(x: Vertex, in_sel, out_sel, c, upper, lower) -> ColoredDigraph:
    """Two-vertex graph upper -> lower whose leaves are in the port order of x."""
    in_rest = [q for q in range(len(x.ins)) if q not in in_sel]
    out_rest = [p for p in range(len(x.outs)) if p not in out_sel]
    u = Vertex(tuple(x.ins[q] for q in in_sel), tuple(x.outs[p] for p in out_sel) + (c,), upper)
    w = Vertex((c,) + tuple(x.ins[q] for q in in_rest), tuple(x.outs[p] for p in out_rest), lower)
    ins = [(0, in_sel.index(q)) if q in in_sel else (1, 1 + in_rest.index(q))
           for q in range(len(x.ins))]
    outs = [(0, out_sel.index(p)) if p in out_sel else (1, out_rest.index(p))
            for p in range(len(x.outs))]
    return ColoredDigraph({0: u, 1: w}, [Edge(0, len(out_sel), 1, 0)], ins, outs)


def properadic_envelope(O, **kw) -> PropEnvelope:
    return PropEnvelope(O, **kw)


def env_normal_form(c: EnvelopeOpClass) -> ColoredDigraph:
    """Canonical representative of an E^d class."""
    return c.env.normal_form(c)


# ---------------------------------------------------------------------------
# evaluating a labelled connected graph in a properad

def convex_orders(g: ColoredDigraph):
    """Vertex orders whose every prefix is connected and convex: the
    orders in which the vertices can be composed one at a time."""
    def rec(prefix, rest):
        if not rest:
            yield list(prefix)
            return
        S = set(prefix)
        for v in sorted(rest, key=repr):
            if S and not (g.successors(v) | g.predecessors(v)) & S:
                continue
            if not gc.is_convex(g, S | {v}):
                continue
            prefix.append(v)
            yield from rec(prefix, rest - {v})
            prefix.pop()
    yield from rec([], frozenset(g.vertices))


def evaluate_graph(P, g: ColoredDigraph, labels: dict | None = None, order: Sequence | None = None):
    """Compose the labels of a connected graph in the properad P.

    Vertices are added one at a time in ``order`` (default: the first of
    :func:`convex_orders`); each step is one ``compose_multi`` along all
    edges between the part built so far and the new vertex.
    """
    labels = labels if labels is not None else {v: x.label for v, x in g.vertices.items()}
    if order is None:
        order = next(convex_orders(g), None)
        if order is None:
            raise gc.GraphError("graph is not connected")
    order = list(order)
    first = order[0]
    x0 = g.vertices[first]
    op = labels[first]
    ins = [(first, q) for q in range(len(x0.ins))]
    outs = [(first, p) for p in range(len(x0.outs))]
    done = {first}
    for v in order[1:]:
        x = g.vertices[v]
        into = [e for e in g.edges if e.tgt == v and e.src in done]
        outof = [e for e in g.edges if e.src == v and e.tgt in done]
        if into and outof:
            raise gc.GraphError(f"vertex {v!r} is not convex with the part built so far")
        if not into and not outof:
            raise gc.GraphError(f"vertex {v!r} is not adjacent to the part built so far")
        vins = [(v, q) for q in range(len(x.ins))]
        vouts = [(v, p) for p in range(len(x.outs))]
        if into:
            pairing = [(outs.index((e.src, e.out_port)), e.in_port) for e in into]
            op = P.compose_multi(op, labels[v], pairing)
            used = {e.in_port for e in into}
            ins = ins + [t for t in vins if t[1] not in used]
            gone = {(e.src, e.out_port) for e in into}
            outs = [t for t in outs if t not in gone] + vouts
        else:
            pairing = [(e.out_port, ins.index((e.tgt, e.in_port))) for e in outof]
            op = P.compose_multi(labels[v], op, pairing)
            gone = {(e.tgt, e.in_port) for e in outof}
            used = {e.out_port for e in outof}
            ins = vins + [t for t in ins if t not in gone]
            outs = [t for t in vouts if t[1] not in used] + outs
        done.add(v)
    in_perm = [ins.index(t) for t in g.inputs]
    out_perm = [outs.index(t) for t in g.outputs]
    if in_perm == sorted(in_perm) and out_perm == sorted(out_perm):
        return op
    return P.act(op, in_perm, out_perm)


# ---------------------------------------------------------------------------
# the symmetric monoidal envelope

@dataclass(frozen=True)
class Part:
    """One labelled corolla of an envelope morphism: the source positions
    it consumes, the target positions it produces (both increasing) and a
    properad operation of the restricted biprofile."""

    ins: tuple
    outs: tuple
    op: object


@dataclass(frozen=True)
class EnvMorphism:
    src: tuple
    tgt: tuple
    parts: tuple   # of Part; order carries no meaning

    def partition(self) -> dict:
        """The map from (side, position) to part index."""
        p = {}
        for a, part in enumerate(self.parts):
            p.update({("in", i): a for i in part.ins})
            p.update({("out", j): a for j in part.outs})
        return p


class MonoidalEnvelope:
    """E^p P: objects are color words, morphisms :class:`EnvMorphism`."""

    def __init__(self, P, bound: int = 3):
        self.P = P
        self.bound = bound
        self.colors = tuple(P.colors)

    # -- keys

    def _op_key(self, op):
        k = getattr(self.P, "key", None)
        return repr(k(op)) if k is not None else repr(op)

    def key(self, f: EnvMorphism):
        return (f.src, f.tgt, tuple(sorted((p.ins, p.outs, self._op_key(p.op)) for p in f.parts)))

    def equal(self, f: EnvMorphism, g: EnvMorphism) -> bool:
        return self.key(f) == self.key(g)

    # -- construction

    def check(self, f: EnvMorphism) -> EnvMorphism:
        seen_in = sorted(i for p in f.parts for i in p.ins)
        seen_out = sorted(j for p in f.parts for j in p.outs)
        if seen_in != list(range(len(f.src))) or seen_out != list(range(len(f.tgt))):
            raise ValueError("parts must partition the source and target positions")
        for p in f.parts:
            want = (tuple(f.src[i] for i in p.ins), tuple(f.tgt[j] for j in p.outs))
            got = tuple(map(tuple, self.P.profile(p.op)))
            if want != got:
                raise ValueError(f"part label has biprofile {got}, expected {want}")
        return f

    def elementary(self, op) -> EnvMorphism:
        ins, outs = map(tuple, self.P.profile(op))
        return EnvMorphism(ins, outs, (Part(tuple(range(len(ins))), tuple(range(len(outs))), op),))

    def identity(self, word) -> EnvMorphism:
        word = tuple(word)
        return EnvMorphism(word, word, tuple(Part((i,), (i,), self.P.identity(c))
                                              for i, c in enumerate(word)))

    def permute(self, word, order) -> EnvMorphism:
        """Symmetry ``word -> tuple(word[o] for o in order)``."""
        word = tuple(word)
        pos = {o: k for k, o in enumerate(order)}
        return EnvMorphism(word, tuple(word[o] for o in order),
                           tuple(Part((i,), (pos[i],), self.P.identity(c))
                                 for i, c in enumerate(word)))

    def braid(self, x, y) -> EnvMorphism:
        x, y = tuple(x), tuple(y)
        return self.permute(x + y, list(range(len(x), len(x) + len(y))) + list(range(len(x))))

    def tensor(self, f: EnvMorphism, g: EnvMorphism) -> EnvMorphism:
        a, b = len(f.src), len(f.tgt)
        shifted = tuple(Part(tuple(i + a for i in p.ins), tuple(j + b for j in p.outs), p.op)
                        for p in g.parts)
        return EnvMorphism(f.src + g.src, f.tgt + g.tgt, f.parts + shifted)

    def compose(self, g: EnvMorphism, f: EnvMorphism) -> EnvMorphism:
        """g after f: graft along the middle word, then compose each
        connected cluster of parts into a single operation."""
        if f.tgt != g.src:
            raise ValueError(f"cannot compose: {f.tgt} != {g.src}")
        P = self.P
        nodes = [("f", a) for a in range(len(f.parts))] + [("g", b) for b in range(len(g.parts))]
        producer = {k: ("f", a) for a, p in enumerate(f.parts) for k in p.outs}
        consumer = {k: ("g", b) for b, p in enumerate(g.parts) for k in p.ins}
        adj = {n: set() for n in nodes}
        for k in range(len(f.tgt)):
            adj[producer[k]].add(consumer[k])
            adj[consumer[k]].add(producer[k])
        part_of = {("f", a): p for a, p in enumerate(f.parts)}
        part_of.update({("g", b): p for b, p in enumerate(g.parts)})

        def tokens(n):
            p = part_of[n]
            if n[0] == "f":
                return [("x", i) for i in p.ins], [("y", k) for k in p.outs]
            return [("y", k) for k in p.ins], [("z", j) for j in p.outs]

        new_parts, seen = [], set()
        for start in nodes:
            if start in seen:
                continue
            seen.add(start)
            op = part_of[start].op
            ins, outs = tokens(start)
            queue = deque([start])
            while queue:
                n = queue.popleft()
                for m in sorted(adj[n]):
                    if m in seen:
                        continue
                    seen.add(m)
                    queue.append(m)
                    mins, mouts = tokens(m)
                    if m[0] == "g":   # the cluster feeds m
                        pairing = [(outs.index(t), l) for l, t in enumerate(mins) if t in outs]
                        op = P.compose_multi(op, part_of[m].op, pairing)
                        ins = ins + [t for t in mins if t not in outs]
                        outs = [t for t in outs if t not in mins] + mouts
                    else:             # m feeds the cluster
                        pairing = [(k, ins.index(t)) for k, t in enumerate(mouts) if t in ins]
                        op = P.compose_multi(part_of[m].op, op, pairing)
                        outs = [t for t in mouts if t not in ins] + outs
                        ins = mins + [t for t in ins if t not in mouts]
            xi = sorted(i for s, i in ins)
            zj = sorted(j for s, j in outs)
            in_perm = [ins.index(("x", i)) for i in xi]
            out_perm = [outs.index(("z", j)) for j in zj]
            if in_perm != list(range(len(ins))) or out_perm != list(range(len(outs))):
                op = P.act(op, in_perm, out_perm)
            new_parts.append(Part(tuple(xi), tuple(zj), op))
        return EnvMorphism(f.src, g.tgt, tuple(new_parts))

    def permute_blocks(self, words, order) -> EnvMorphism:
        """Symmetry moving whole subwords: block k of the target is
        ``words[order[k]]``."""
        starts, n = [], 0
        for w in words:
            starts.append(n)
            n += len(w)
        idx = [i for o in order for i in range(starts[o], starts[o] + len(words[o]))]
        return self.permute(sum(map(tuple, words), ()), idx)

    def tensor_all(self, fs) -> EnvMorphism:
        out = EnvMorphism((), (), ())
        for f in fs:
            out = self.tensor(out, f)
        return out

    def compose_all(self, *fs) -> EnvMorphism:
        out = fs[-1]
        for h in reversed(fs[:-1]):
            out = self.compose(h, out)
        return out


def monoidal_envelope(P, bound: int = 3) -> MonoidalEnvelope:
    return MonoidalEnvelope(P, bound)


class EnvelopeUnderlying(mc.UnderlyingProperad):
    """U^p of an envelope category, with equality of morphisms up to the
    order of their parts."""

    def __init__(self, E: MonoidalEnvelope):
        super().__init__(E)

    @property
    def colors(self):
        return [(c,) for c in self.C.colors]

    def equal(self, a, b) -> bool:
        return a.ins == b.ins and a.outs == b.outs and self.C.equal(a.arrow, b.arrow)


# ---------------------------------------------------------------------------
# translating between functors and properad maps

@dataclass
class EnvFunctor:
    """Strict symmetric monoidal functor out of an envelope: colors go to
    words of C, a word to the concatenation of its colors' images."""

    env: MonoidalEnvelope
    C: object
    on_color: Callable
    on_morphism: Callable

    def obj(self, word) -> tuple:
        return sum((tuple(self.on_color(c)) for c in word), ())

    def __call__(self, f: EnvMorphism):
        return self.on_morphism(f)


def upsilon(env: MonoidalEnvelope, C, phi, order: Callable | None = None) -> EnvFunctor:
    """Extend a properad map ``phi: P -> U^p C`` to a functor E^p P -> C.

    A morphism with parts f_a is sent to: regroup the source by parts,
    tensor the phi(f_a), then put the target back in order.  ``order``
    picks the linear order of the parts (a function from the tuple of
    parts to a list of indices); the result does not depend on it.
    """
    def words(cs):
        return [tuple(phi.color_map(c)) for c in cs]

    def on_morphism(f: EnvMorphism):
        idx = list(order(f.parts)) if order is not None else list(range(len(f.parts)))
        src_blocks, tgt_blocks = words(f.src), words(f.tgt)
        in_order = [i for a in idx for i in f.parts[a].ins]
        out_order = [j for a in idx for j in f.parts[a].outs]
        pre = C.permute_blocks(src_blocks, in_order)
        middle = [phi(f.parts[a].op).arrow for a in idx]
        mid = C.tensor_all(middle) if middle else C.identity(())
        grouped = [tgt_blocks[j] for j in out_order]
        post = C.permute_blocks(grouped, [out_order.index(j) for j in range(len(f.tgt))])
        return C.compose_all(post, mid, pre)

    return EnvFunctor(env, C, phi.color_map, on_morphism)


def gamma(F: EnvFunctor, U=None) -> dp.DioperadMorphism:
    """Restrict a functor along the unit P -> U^p E^p P."""
    U = U or mc.UnderlyingProperad(F.C)
    P = F.env.P

    def on_op(op):
        ins, outs = P.profile(op)
        return U.make([F.obj((c,)) for c in ins], [F.obj((c,)) for c in outs],
                      F(F.env.elementary(op)))

    return dp.DioperadMorphism(P, U, lambda c: F.obj((c,)), on_op)


def extend_to_envelope(Ed: PropEnvelope, psi, U) -> dp.DioperadMorphism:
    """The properad map E^d O -> P induced by a dioperad map psi: O -> U^d P:
    evaluate a representative with the labels sent through psi."""
    def on_op(c: EnvelopeOpClass):
        g = c.rep
        shape = ColoredDigraph({v: Vertex(tuple(map(psi.color_map, x.ins)),
                                          tuple(map(psi.color_map, x.outs)))
                                for v, x in g.vertices.items()},
                               g.edges, g.inputs, g.outputs, check=False)
        return evaluate_graph(U, shape, {v: psi(x.label) for v, x in g.vertices.items()})

    return dp.DioperadMorphism(Ed, U, psi.color_map, on_op)


# ---------------------------------------------------------------------------
# the full envelope E = E^p E^d and finite enumeration

def _generators(O) -> list:
    """``[(name, ins, outs, op)]`` for the generating operations of O."""
    base = O.P if isinstance(O, dp.TwistedDioperad) else O
    wrap = O.wrap if isinstance(O, dp.TwistedDioperad) else (lambda op: op)
    if isinstance(base, dp.FrobDioperad):
        gens = [(n, base.generator_op(n)) for n in base.GENERATORS]
    elif isinstance(base, dp.FreeDioperad):
        gens = [(n, base.generator(n)) for n in base.signature]
    else:
        raise TypeError(f"{type(O).__name__} has no generators to enumerate")
    out = []
    for n, op in gens:
        ins, outs = base.profile(op)
        out.append((n, tuple(ins), tuple(outs), wrap(op)))
    return out


def _set_partitions(items: list):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1:]
        yield [[first]] + part


class FullEnvelope(MonoidalEnvelope):
    """E O = E^p E^d O with bounded enumeration of morphisms: a morphism is
    counted at size s when its parts have representatives with s
    generator vertices in total (identities count 0)."""

    def __init__(self, O, bound: int = 3, **kw):
        super().__init__(PropEnvelope(O, **kw), bound)
        self.O = O
        self._graphs = {}

    def unit(self, op) -> EnvMorphism:
        """The unit O -> U E O."""
        return self.elementary(self.P.corolla(op))

    def _connected(self, n: int) -> list:
        if n not in self._graphs:
            gens = _generators(self.O)
            sig = [(ins, outs, name) for name, ins, outs, _ in gens]
            ops = {name: op for name, _, _, op in gens}
            self._graphs[n] = [gc.relabel_vertices(g, lambda v, x: ops[x.label])
                               for g in gc.enumerate_connected(sig, n)] if n else []
        return self._graphs[n]

    def classes(self, ins, outs, max_vertices: int) -> dict:
        """Classes of E^d O with biprofile (ins; outs) having a
        representative with at most ``max_vertices`` generators:
        ``{normal key: (class, fewest generators)}``."""
        ins, outs = tuple(ins), tuple(outs)
        found = {}

        def add(g, size):
            c = EnvelopeOpClass(self.P, g)
            k = self.P.key(c)
            if k not in found or found[k][1] > size:
                found[k] = (c, size)

        if len(ins) == 1 and ins == outs:
            add(gc.corolla(ins, outs, self.O.identity(ins[0])), 0)
        for g in self._connected(max_vertices):
            gi, go = g.biprofile()
            if sorted(map(repr, gi)) != sorted(map(repr, ins)) or \
                    sorted(map(repr, go)) != sorted(map(repr, outs)):
                continue
            for ip in permutations(range(len(gi))):
                if tuple(gi[k] for k in ip) != ins:
                    continue
                for op_ in permutations(range(len(go))):
                    if tuple(go[k] for k in op_) == outs:
                        add(gc.reorder_leaves(g, ip, op_), len(g.vertices))
        return found

    def hom(self, x, y, max_vertices: int | None = None) -> list:
        """Morphisms x -> y of size at most ``max_vertices`` (default: the
        bound), one per equality class."""
        budget = self.bound if max_vertices is None else max_vertices
        x, y = tuple(x), tuple(y)
        leaves = [("in", i) for i in range(len(x))] + [("out", j) for j in range(len(y))]
        closed = sorted(self.classes((), (), budget).values(), key=lambda t: t[1])
        out = {}
        for blocks in _set_partitions(leaves):
            options = []
            for blk in blocks:
                bi = tuple(sorted(i for s, i in blk if s == "in"))
                bo = tuple(sorted(j for s, j in blk if s == "out"))
                cls = self.classes(tuple(x[i] for i in bi), tuple(y[j] for j in bo), budget)
                options.append([(Part(bi, bo, c), size) for c, size in cls.values()])
            for choice in product(*options):
                used = sum(s for _, s in choice)
                if used > budget:
                    continue
                for extra in self._closed_multisets(closed, budget - used):
                    f = EnvMorphism(x, y, tuple(p for p, _ in choice) + extra)
                    out.setdefault(self.key(f), f)
        return list(out.values())

    @staticmethod
    def _closed_multisets(closed, budget, start=0):
        yield ()
        for k in range(start, len(closed)):
            c, size = closed[k]
            if 0 < size <= budget:
                for rest in FullEnvelope._closed_multisets(closed, budget - size, k):
                    yield (Part((), (), c),) + rest


def full_envelope(O, bound: int = 3, **kw) -> FullEnvelope:
    return FullEnvelope(O, bound, **kw)


# ---------------------------------------------------------------------------
# axioms of a symmetric monoidal category, on a finite sample

def check_axioms(E: MonoidalEnvelope, morphisms: Sequence[EnvMorphism], cap: int = 2000) -> list:
    """Failures of unit, associativity, interchange, braid naturality and
    involutivity on tuples drawn from ``morphisms`` (at most ``cap`` of
    each kind)."""
    bad = []
    eq = E.equal
    for f in morphisms:
        if not (eq(E.compose(f, E.identity(f.src)), f) and eq(E.compose(E.identity(f.tgt), f), f)):
            bad.append(("unit", f))
        b = E.braid(f.src, f.src)
        if not eq(E.compose(b, b), E.identity(f.src + f.src)):
            bad.append(("braid involutive", f))
    pairs = list(product(morphisms, repeat=2))[:cap]
    for f, g in pairs:
        lhs = E.compose(E.braid(g.tgt, f.tgt), E.tensor(g, f))
        rhs = E.compose(E.tensor(f, g), E.braid(g.src, f.src))
        if not eq(lhs, rhs):
            bad.append(("braid naturality", f, g))
    chains = [(f, g) for f, g in pairs if f.tgt == g.src]
    triples = [(f, g, h) for f, g in chains for h in morphisms if h.src == g.tgt][:cap]
    for f, g, h in triples:
        if not eq(E.compose(h, E.compose(g, f)), E.compose(E.compose(h, g), f)):
            bad.append(("associativity", f, g, h))
    for (f, g), (f2, g2) in list(product(chains, repeat=2))[:cap]:
        lhs = E.compose(E.tensor(g, g2), E.tensor(f, f2))
        rhs = E.tensor(E.compose(g, f), E.compose(g2, f2))
        if not eq(lhs, rhs):
            bad.append(("interchange", f, g, f2, g2))
    return bad
