"""String-diagram terms for the duality calculus.

A :class:`DiagramTerm` is a formal composite/tensor tree of generator
boxes (products ``nabla``, evaluations under ``G``, the orientation
``xi``, cups and caps, ``alpha`` and its inverse, the colax map
``Delta``) typed by lists of wire types.  Wire types are ``("G", e)`` or
``("G*", e)`` where ``e`` is a symbolic word: a tuple of atoms
``(name, dualised)``.  Evaluation binds the names to concrete words of a
duality context.

For rewriting, terms are flattened to a :class:`Diagram` -- boxes joined
by wires, with no planar structure.  Two terms related by the exchange
law, by symmetries or by unitors flatten to isomorphic diagrams, so the
canonical key of :mod:`diop.graphcore` identifies them.  The rules are
local graph rewrites; :func:`join` runs a bidirectional breadth-first
search for a common rewrite of two terms.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from . import graphcore as gc
from .moncat import Arrow, MonCat


class TypeMismatch(ValueError):
    """Composite or tensor of ill-typed terms."""


class BoundExhausted(RuntimeError):
    """Search ran out of steps without deciding; inconclusive."""


# ---------------------------------------------------------------------------
# symbolic words and wire types

def sym(*names: str) -> tuple:
    """The symbolic word X1 X2 ... for plain (undualised) names."""
    return tuple((n, False) for n in names)


def dual(e: tuple) -> tuple:
    return tuple((n, not b) for n, b in reversed(e))


def G(e: tuple) -> tuple:
    return ("G", tuple(e))


def Gs(e: tuple) -> tuple:
    return ("G*", tuple(e))


def show_word(e: tuple) -> str:
    return "".join(n + ("^" if b else "") for n, b in e) or "1"


def show_wire(t: tuple) -> str:
    return ("G(%s)" if t[0] == "G" else "G(%s)*") % show_word(t[1])


# ---------------------------------------------------------------------------
# boxes

@dataclass(frozen=True)
class Box:
    """A generator box; ``dmult`` is its degree in units of d."""
    kind: str
    params: tuple
    ins: tuple
    outs: tuple
    dmult: int = 0

    def __repr__(self):
        return f"{self.kind}[{','.join(show_word(p) for p in self.params)}]"


def nabla(p, q) -> Box:
    p, q = tuple(p), tuple(q)
    return Box("nabla", (p, q), (G(p), G(q)), (G(p + q),))


def gev(p, y, q) -> Box:
    """G(id_P (x) ev_Y (x) id_Q): G(P Y Y^ Q) -> G(P Q)."""
    p, y, q = tuple(p), tuple(y), tuple(q)
    return Box("Gev", (p, y, q), (G(p + y + dual(y) + q),), (G(p + q),))


def xi() -> Box:
    return Box("xi", (), (G(()),), (), -1)


def cup(e) -> Box:
    """coev': 1 -> V V* for V = G(e)."""
    e = tuple(e)
    return Box("cup", (e,), (), (G(e), Gs(e)))


def cap(e) -> Box:
    """ev': V* V -> 1 for V = G(e)."""
    e = tuple(e)
    return Box("cap", (e,), (Gs(e), G(e)), ())


def alpha(x) -> Box:
    x = tuple(x)
    return Box("alpha", (x,), (G(x),), (Gs(dual(x)),), -1)


def alpha_inv(x) -> Box:
    x = tuple(x)
    return Box("alpha_inv", (x,), (Gs(dual(x)),), (G(x),), 1)


def delta(x, y) -> Box:
    x, y = tuple(x), tuple(y)
    return Box("Delta", (x, y), (G(x + y),), (G(x), G(y)), 1)


# ---------------------------------------------------------------------------
# terms

class DiagramTerm:
    src: tuple
    tgt: tuple

    @property
    def dmult(self) -> int:
        raise NotImplementedError

    def __rshift__(self, other):           # f >> g  is  g o f
        return Compose(other, self)

    def __matmul__(self, other):           # f @ g  is  f (x) g
        return Tensor(self, other)


@dataclass(frozen=True)
class BoxTerm(DiagramTerm):
    box: Box

    @property
    def src(self):
        return self.box.ins

    @property
    def tgt(self):
        return self.box.outs

    @property
    def dmult(self):
        return self.box.dmult


@dataclass(frozen=True)
class Id(DiagramTerm):
    wires: tuple

    @property
    def src(self):
        return self.wires

    @property
    def tgt(self):
        return self.wires

    @property
    def dmult(self):
        return 0


@dataclass(frozen=True)
class Swap(DiagramTerm):
    """The symmetry A B -> B A on two blocks of wires."""
    a: tuple
    b: tuple

    @property
    def src(self):
        return self.a + self.b

    @property
    def tgt(self):
        return self.b + self.a

    @property
    def dmult(self):
        return 0


@dataclass(frozen=True)
class Compose(DiagramTerm):
    """``g o f``."""
    g: DiagramTerm
    f: DiagramTerm

    def __post_init__(self):
        if self.f.tgt != self.g.src:
            raise TypeMismatch(f"cannot compose {_sig(self.g)} after {_sig(self.f)}")

    @property
    def src(self):
        return self.f.src

    @property
    def tgt(self):
        return self.g.tgt

    @property
    def dmult(self):
        return self.f.dmult + self.g.dmult


@dataclass(frozen=True)
class Tensor(DiagramTerm):
    f: DiagramTerm
    g: DiagramTerm

    @property
    def src(self):
        return self.f.src + self.g.src

    @property
    def tgt(self):
        return self.f.tgt + self.g.tgt

    @property
    def dmult(self):
        return self.f.dmult + self.g.dmult


def _sig(t: DiagramTerm) -> str:
    return f"{[show_wire(w) for w in t.src]} -> {[show_wire(w) for w in t.tgt]}"


def term(x) -> DiagramTerm:
    return BoxTerm(x) if isinstance(x, Box) else x


def seq(*parts) -> DiagramTerm:
    """Composite of ``parts`` applied left to right."""
    parts = [term(p) for p in parts]
    out = parts[0]
    for p in parts[1:]:
        out = Compose(p, out)
    return out


def par(*parts) -> DiagramTerm:
    parts = [term(p) for p in parts]
    out = parts[0]
    for p in parts[1:]:
        out = Tensor(out, p)
    return out


def ids(*wires) -> Id:
    return Id(tuple(wires))


# ---------------------------------------------------------------------------
# evaluation

@dataclass
class Bindings:
    """Concrete meaning of boxes and wires in a monoidal category ``D``."""
    D: MonCat
    wire: Callable            # wire type -> D-word
    box: Callable             # Box -> Arrow
    d: int = 0


def diagram_eval(t: DiagramTerm, b: Bindings) -> Arrow:
    """The composite denoted by ``t``, computed exactly."""
    D = b.D
    if isinstance(t, BoxTerm):
        return b.box(t.box)
    if isinstance(t, Id):
        return D.identity(_word(b, t.wires))
    if isinstance(t, Swap):
        return D.permute_blocks([_word(b, t.a), _word(b, t.b)], [1, 0])
    if isinstance(t, Compose):
        return D.compose(diagram_eval(t.g, b), diagram_eval(t.f, b))
    if isinstance(t, Tensor):
        return D.tensor(diagram_eval(t.f, b), diagram_eval(t.g, b))
    raise TypeError(f"not a diagram term: {t!r}")


def _word(b: Bindings, wires) -> tuple:
    return tuple(x for w in wires for x in b.wire(w))


# ---------------------------------------------------------------------------
# diagrams (terms modulo exchange, symmetry and unitors)

@dataclass
class Diagram:
    """Boxes joined by wires.

    ``feed[(v, q)]`` is the source of in-port ``q`` of box ``v``: either
    ``("in", k)`` (input wire ``k``) or ``("v", u, p)`` (out-port ``p`` of
    box ``u``).  ``outputs`` lists the sources of the output wires.
    """
    src: tuple
    boxes: dict
    feed: dict
    outputs: tuple
    _key: object = field(default=None, repr=False, compare=False)

    @property
    def tgt(self) -> tuple:
        return tuple(self.type_of(e) for e in self.outputs)

    @property
    def dmult(self) -> int:
        return sum(x.dmult for x in self.boxes.values())

    def type_of(self, end) -> tuple:
        return self.src[end[1]] if end[0] == "in" else self.boxes[end[1]].outs[end[2]]

    def consumers(self) -> dict:
        """source end -> ("v", box, in-port) or ("out", k)."""
        out = {end: ("v",) + vq for vq, end in self.feed.items()}
        out.update({end: ("out", k) for k, end in enumerate(self.outputs)})
        return out

    def order(self) -> list | None:
        """A topological order of the boxes, or None when cyclic."""
        indeg = {v: 0 for v in self.boxes}
        succ = {v: [] for v in self.boxes}
        for (v, _), end in self.feed.items():
            if end[0] == "v":
                indeg[v] += 1
                succ[end[1]].append(v)
        ready = deque(sorted((v for v, n in indeg.items() if n == 0), key=repr))
        out = []
        while ready:
            v = ready.popleft()
            out.append(v)
            for w in succ[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    ready.append(w)
        return out if len(out) == len(self.boxes) else None

    def to_graph(self) -> gc.ColoredDigraph:
        """The diagram as a colored digraph; bare wires get identity boxes."""
        verts = {("b", v): gc.Vertex(x.ins, x.outs, x) for v, x in self.boxes.items()}
        edges, inputs, outputs = [], [None] * len(self.src), []
        for (v, q), end in self.feed.items():
            if end[0] == "in":
                inputs[end[1]] = (("b", v), q)
            else:
                edges.append(gc.Edge(("b", end[1]), end[2], ("b", v), q))
        for k, end in enumerate(self.outputs):
            if end[0] == "in":
                w = self.src[end[1]]
                verts[("w", k)] = gc.Vertex((w,), (w,), ("wire",))
                inputs[end[1]] = (("w", k), 0)
                outputs.append((("w", k), 0))
            else:
                outputs.append((("b", end[1]), end[2]))
        return gc.ColoredDigraph(verts, edges, inputs, outputs)

    def key(self):
        """Equal for diagrams that differ only by exchange, symmetries of
        the drawing and renaming of boxes."""
        if self._key is None:
            self._key = (self.src, gc.canonical_key(self.to_graph()))
        return self._key

    def describe(self) -> list:
        """Human-readable list of boxes in a topological order."""
        return [repr(self.boxes[v]) for v in self.order() or sorted(self.boxes)]


def to_diagram(t: DiagramTerm) -> Diagram:
    boxes, feed = {}, {}

    def build(t, ends):
        if isinstance(t, BoxTerm):
            v = len(boxes)
            boxes[v] = t.box
            for q, e in enumerate(ends):
                feed[(v, q)] = e
            return [("v", v, p) for p in range(len(t.box.outs))]
        if isinstance(t, Id):
            return list(ends)
        if isinstance(t, Swap):
            return list(ends[len(t.a):]) + list(ends[:len(t.a)])
        if isinstance(t, Compose):
            return build(t.g, build(t.f, ends))
        if isinstance(t, Tensor):
            n = len(t.f.src)
            return build(t.f, ends[:n]) + build(t.g, ends[n:])
        raise TypeError(f"not a diagram term: {t!r}")

    t = term(t)
    outs = build(t, [("in", k) for k in range(len(t.src))])
    return Diagram(tuple(t.src), boxes, feed, tuple(outs))


def evaluate_diagram(dg: Diagram, b: Bindings) -> Arrow:
    """Evaluate a diagram box by box along a topological order."""
    D = b.D
    order = dg.order()
    if order is None:
        raise gc.AcyclicityViolation("diagram has a cycle")
    state = [("in", k) for k in range(len(dg.src))]
    arrow = D.identity(_word(b, dg.src))
    for v in order:
        x = dg.boxes[v]
        need = [dg.feed[(v, q)] for q in range(len(x.ins))]
        rest = [t for t in state if t not in need]
        blocks = [b.wire(dg.type_of(t)) for t in state]
        perm = D.permute_blocks(blocks, [state.index(t) for t in rest + need])
        step = D.tensor(D.identity(_word(b, [dg.type_of(t) for t in rest])), b.box(x))
        arrow = D.compose_all(step, perm, arrow)
        state = rest + [("v", v, p) for p in range(len(x.outs))]
    blocks = [b.wire(dg.type_of(t)) for t in state]
    return D.compose(D.permute_blocks(blocks, [state.index(t) for t in dg.outputs]), arrow)


# ---------------------------------------------------------------------------
# local replacement

def replace(dg: Diagram, S: Sequence, bin_: Sequence, bout: Sequence,
            sub: DiagramTerm | Diagram) -> Diagram | None:
    """Replace the boxes ``S`` by ``sub``.

    ``bin_`` lists the in-ports ``(v, q)`` of ``S`` fed from outside, in
    the order of ``sub``'s inputs; ``bout`` lists the out-ports ``(v, p)``
    of ``S`` used outside, in the order of ``sub``'s outputs.  Returns
    None if the result would contain a cycle.
    """
    S = set(S)
    sub = sub if isinstance(sub, Diagram) else to_diagram(sub)
    if len(bin_) != len(sub.src) or len(bout) != len(sub.outputs):
        raise TypeMismatch("boundary does not match the replacement")
    fresh = max(dg.boxes, default=-1) + 1
    rename = {u: fresh + i for i, u in enumerate(sorted(sub.boxes))}
    outer = [dg.feed[vq] for vq in bin_]

    def inner(end):
        return outer[end[1]] if end[0] == "in" else ("v", rename[end[1]], end[2])

    bpos = {("v",) + vp: k for k, vp in enumerate(bout)}

    def remap(end):
        if end[0] == "v" and end[1] in S:
            return inner(sub.outputs[bpos[end]])
        return end

    boxes = {v: x for v, x in dg.boxes.items() if v not in S}
    boxes.update({rename[u]: x for u, x in sub.boxes.items()})
    feed = {vq: remap(e) for vq, e in dg.feed.items() if vq[0] not in S}
    feed.update({(rename[u], q): inner(e) for (u, q), e in sub.feed.items()})
    out = Diagram(dg.src, boxes, feed, tuple(remap(e) for e in dg.outputs))
    return out if out.order() is not None else None


# ---------------------------------------------------------------------------
# rules

def alpha_definition(x) -> DiagramTerm:
    """alpha_X = (beta_X (x) id) o (id (x) coev'), beta_X = xi G(ev_X) nabla."""
    x = tuple(x)
    xd = dual(x)
    return seq(par(ids(G(x)), cup(xd)),
               par(nabla(x, xd), ids(Gs(xd))),
               par(gev((), x, ()), ids(Gs(xd))),
               par(xi(), ids(Gs(xd))))


def mate_of_nabla(p, q) -> DiagramTerm:
    """The transpose of nabla_{P,Q}: G(PQ)* -> G(Q)* G(P)*, drawn with
    nested cups for G(P) G(Q) and one cap for G(PQ)."""
    p, q = tuple(p), tuple(q)
    pq = p + q
    cups = seq(cup(p), par(ids(G(p)), cup(q), ids(Gs(p))))
    return seq(par(ids(Gs(pq)), cups),
               par(ids(Gs(pq)), nabla(p, q), ids(Gs(q), Gs(p))),
               par(cap(pq), ids(Gs(q), Gs(p))))


def delta_definition(x, y) -> DiagramTerm:
    """Delta_{X,Y} = (alpha_X^-1 (x) alpha_Y^-1) o nabla*_{Y^,X^} o alpha_XY."""
    x, y = tuple(x), tuple(y)
    return seq(alpha(x + y), mate_of_nabla(dual(y), dual(x)), par(alpha_inv(x), alpha_inv(y)))


def rule_unfold_delta(dg: Diagram) -> Iterator:
    for v, x in dg.boxes.items():
        if x.kind == "Delta":
            yield replace(dg, [v], [(v, 0)], [(v, 0), (v, 1)], delta_definition(*x.params))


def rule_unfold_alpha(dg: Diagram) -> Iterator:
    for v, x in dg.boxes.items():
        if x.kind == "alpha":
            yield replace(dg, [v], [(v, 0)], [(v, 0)], alpha_definition(x.params[0]))


def rule_fold_alpha(dg: Diagram) -> Iterator:
    """Recognise ``xi o G(ev_X) o nabla_{X,X^} o (id (x) cup)`` and fold it."""
    cons = dg.consumers()
    for c, x in dg.boxes.items():
        if x.kind != "cup":
            continue
        tgt = cons.get(("v", c, 0))
        if tgt is None or tgt[0] != "v" or tgt[2] != 1:
            continue
        n = tgt[1]
        nb = dg.boxes[n]
        if nb.kind != "nabla" or nb.params[1] != x.params[0] or dual(nb.params[0]) != x.params[0]:
            continue
        g = cons.get(("v", n, 0))
        if g is None or g[0] != "v" or dg.boxes[g[1]] != gev((), nb.params[0], ()):
            continue
        s = cons.get(("v", g[1], 0))
        if s is None or s[0] != "v" or dg.boxes[s[1]].kind != "xi":
            continue
        yield replace(dg, [c, n, g[1], s[1]], [(n, 0)], [(c, 1)], alpha(nb.params[0]))


def rule_yank(dg: Diagram) -> Iterator:
    """Snake identities for cups and caps of the same wire."""
    cons = dg.consumers()
    for c, x in dg.boxes.items():
        if x.kind != "cup":
            continue
        e = x.params[0]
        for p, q in ((1, 0), (0, 1)):
            t = cons.get(("v", c, p))
            if t and t[0] == "v" and t[2] == q and dg.boxes[t[1]] == cap(e):
                k = t[1]
                wire = (G(e),) if p == 1 else (Gs(e),)
                yield replace(dg, [c, k], [(k, 1 - q)], [(c, 1 - p)], Id(wire))


def rule_cancel_alpha(dg: Diagram) -> Iterator:
    cons = dg.consumers()
    pairs = {"alpha": "alpha_inv", "alpha_inv": "alpha"}
    for a, x in dg.boxes.items():
        if x.kind not in pairs:
            continue
        t = cons.get(("v", a, 0))
        if t and t[0] == "v":
            y = dg.boxes[t[1]]
            if y.kind == pairs[x.kind] and y.params == x.params:
                yield replace(dg, [a, t[1]], [(a, 0)], [(t[1], 0)], Id(x.ins))


def rule_assoc(dg: Diagram) -> Iterator:
    """nabla_{PQ,R} o (nabla_{P,Q} (x) id) = nabla_{P,QR} o (id (x) nabla_{Q,R})."""
    cons = dg.consumers()
    for u, x in dg.boxes.items():
        if x.kind != "nabla":
            continue
        t = cons.get(("v", u, 0))
        if not t or t[0] != "v" or dg.boxes[t[1]].kind != "nabla":
            continue
        v, port = t[1], t[2]
        y = dg.boxes[v]
        if port == 0 and y.params[0] == x.params[0] + x.params[1]:
            p, q, r = x.params[0], x.params[1], y.params[1]
            sub = seq(par(ids(G(p)), nabla(q, r)), nabla(p, q + r))
            yield replace(dg, [u, v], [(u, 0), (u, 1), (v, 1)], [(v, 0)], sub)
        if port == 1 and y.params[1] == x.params[0] + x.params[1]:
            p, q, r = y.params[0], x.params[0], x.params[1]
            sub = seq(par(nabla(p, q), ids(G(r))), nabla(p + q, r))
            yield replace(dg, [u, v], [(v, 0), (u, 0), (u, 1)], [(v, 0)], sub)


def _splits(e):
    return [(e[:i], e[i:]) for i in range(1, len(e))]


def rule_star(dg: Diagram) -> Iterator:
    """Functoriality of G on evaluations of composite words, and naturality
    of nabla against such evaluations, in both directions."""
    cons = dg.consumers()
    for v, x in dg.boxes.items():
        if x.kind != "Gev":
            continue
        p, y, q = x.params
        # G(ev_{Y1 Y2}) = G(ev_Y1) o G(id (x) ev_Y2 (x) id)
        for y1, y2 in _splits(y):
            sub = seq(gev(p + y1, y2, dual(y1) + q), gev(p, y1, q))
            yield replace(dg, [v], [(v, 0)], [(v, 0)], sub)
        t = cons.get(("v", v, 0))
        if not (t and t[0] == "v"):
            continue
        w = dg.boxes[t[1]]
        if w.kind == "Gev":
            p2, y1, q2 = w.params
            if p == p2 + y1 and q == dual(y1) + q2:
                yield replace(dg, [v, t[1]], [(v, 0)], [(t[1], 0)], gev(p2, y1 + y, q2))
        elif w.kind == "nabla":
            a, b = w.params
            if t[2] == 0 and a == p + q:
                sub = seq(nabla(p + y + dual(y) + q, b), gev(p, y, q + b))
                yield replace(dg, [v, t[1]], [(v, 0), (t[1], 1)], [(t[1], 0)], sub)
            if t[2] == 1 and b == p + q:
                sub = seq(nabla(a, p + y + dual(y) + q), gev(a + p, y, q))
                yield replace(dg, [v, t[1]], [(t[1], 0), (v, 0)], [(t[1], 0)], sub)
    for n, x in dg.boxes.items():
        if x.kind != "nabla":
            continue
        t = cons.get(("v", n, 0))
        if not t or t[0] != "v" or dg.boxes[t[1]].kind != "Gev":
            continue
        a, b = x.params
        p, y, q = dg.boxes[t[1]].params
        g = t[1]
        k = len(p) + 2 * len(y)
        # the contracted segment lies in the first factor
        if len(a) >= k and a[:k] == p + y + dual(y) and q == a[k:] + b:
            rest = a[k:]
            sub = seq(par(gev(p, y, rest), ids(G(b))), nabla(p + rest, b))
            yield replace(dg, [n, g], [(n, 0), (n, 1)], [(g, 0)], sub)
        # ... or in the second
        if len(p) >= len(a) and p[:len(a)] == a:
            b1 = p[len(a):]
            if b == b1 + y + dual(y) + q:
                sub = seq(par(ids(G(a)), gev(b1, y, q)), nabla(a, b1 + q))
                yield replace(dg, [n, g], [(n, 0), (n, 1)], [(g, 0)], sub)


RULES = {
    "def": rule_unfold_delta,
    "def alpha": lambda dg: (r for f in (rule_unfold_alpha, rule_fold_alpha) for r in f(dg)),
    "Dual": rule_yank,
    "alpha^-1 alpha = id": rule_cancel_alpha,
    "Assoc": rule_assoc,
    "*": rule_star,
}


def rewrites(dg: Diagram, rules: dict = RULES) -> Iterator:
    """All one-step rewrites ``(tag, diagram)`` of ``dg``."""
    for tag, rule in rules.items():
        for out in rule(dg):
            if out is not None:
                yield tag, out


def diagram_rewrite(t, rules: dict = RULES, bound: int = 2) -> dict:
    """Every diagram reachable from ``t`` in at most ``bound`` steps,
    keyed canonically, with one shortest path of rule tags to each."""
    start = t if isinstance(t, Diagram) else to_diagram(t)
    seen = {start.key(): (start, ())}
    frontier = [start]
    for _ in range(bound):
        nxt = []
        for dg in frontier:
            path = seen[dg.key()][1]
            for tag, out in rewrites(dg, rules):
                k = out.key()
                if k not in seen:
                    seen[k] = (out, path + (tag,))
                    nxt.append(out)
        frontier = nxt
    return seen


@dataclass
class JoinCertificate:
    """``left`` rewrites the first term and ``right`` the second to a
    common diagram ``meet``."""
    left: tuple
    right: tuple
    meet: Diagram

    @property
    def steps(self) -> int:
        return len(self.left) + len(self.right)

    @property
    def tags(self) -> tuple:
        return self.left + tuple(reversed(self.right))


def join(s, t, rules: dict = RULES, bound: int = 2) -> JoinCertificate:
    """Shortest common rewrite of ``s`` and ``t`` within ``bound`` steps
    in total.  Raises :class:`BoundExhausted` if there is none."""
    a = diagram_rewrite(s, rules, (bound + 1) // 2)
    b = diagram_rewrite(t, rules, bound // 2)
    best = None
    for k in a.keys() & b.keys():
        c = JoinCertificate(a[k][1], b[k][1], a[k][0])
        if c.steps <= bound and (best is None or c.steps < best.steps):
            best = c
    if best is None:
        # allow lopsided joins (all steps on one side)
        a = diagram_rewrite(s, rules, bound) if bound > 1 else a
        b = diagram_rewrite(t, rules, bound) if bound > 1 else b
        for k in a.keys() & b.keys():
            c = JoinCertificate(a[k][1], b[k][1], a[k][0])
            if c.steps <= bound and (best is None or c.steps < best.steps):
                best = c
    if best is None:
        raise BoundExhausted(f"no common rewrite within {bound} steps")
    return best
