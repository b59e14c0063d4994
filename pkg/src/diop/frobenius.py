"""Frobenius monoidal functors and their dioperadic description.

A Frobenius monoidal functor G: C -> D carries a lax structure
``nabla_{X,Y}: GX GY -> G(XY)``, ``nabla0: 1 -> G1`` and a colax structure
``delta_{X,Y}: G(XY) -> GX GY``, ``delta0: G1 -> 1`` tied together by the
Frobenius relation.  In the twisted variant the colax maps carry degree
``k * d`` (and ``delta0`` degree ``-k * d``).

Such data is the same thing as a symmetric monoidal functor out of the
envelope of U C: :func:`lambda_` evaluates a labelled graph vertex by
vertex, :func:`theta` reads the structure back off single corollas.
:func:`psi`/:func:`phi` do the same for the properadic envelope, which
needs separability, and :func:`to_dioperad_map`/:func:`from_dioperad_map`
translate to and from dioperad maps U C -> U D{d}.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from itertools import islice, product
from typing import Callable, Sequence

from . import dioperad as dp
from . import envelope as ev
from . import graphcore as gc
from . import moncat as mc
from .moncat import Arrow, MonCat, UOp
from .vbase import Mat


class NotFrobenius(ValueError):
    pass


class NotSeparable(ValueError):
    pass


class DegreeMismatch(ValueError):
    pass


def _concat(words) -> tuple:
    return sum((tuple(w) for w in words), ())


# ---------------------------------------------------------------------------
# the data

@dataclass
class FrobeniusData:
    """A functor G: C -> D on words together with its lax and colax maps.

    ``on_obj`` sends a C-word to a D-word, ``on_mor`` a C-arrow to a
    D-arrow; ``nabla_map(X, Y)`` and ``delta_map(X, Y)`` build the
    structure components.  Components are cached.
    """

    C: MonCat
    D: MonCat
    on_obj: Callable
    on_mor: Callable
    nabla_map: Callable
    nabla0: Arrow
    delta_map: Callable
    delta0: Arrow
    k: int = 0
    d: int = 0
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def twist_degree(self) -> int:
        return self.k * self.d

    def obj(self, word) -> tuple:
        return tuple(self.on_obj(tuple(word)))

    def objs(self, words) -> tuple:
        return _concat(self.obj(w) for w in words)

    def __call__(self, f: Arrow) -> Arrow:
        return self.on_mor(f)

    def _get(self, tag, x, y, fn):
        key = (tag, tuple(x), tuple(y))
        if key not in self._cache:
            self._cache[key] = fn(tuple(x), tuple(y))
        return self._cache[key]

    def nabla(self, x, y) -> Arrow:
        return self._get("n", x, y, self.nabla_map)

    def delta(self, x, y) -> Arrow:
        return self._get("d", x, y, self.delta_map)

    def nabla_n(self, words: Sequence) -> Arrow:
        """G(w1) ... G(wm) -> G(w1 ... wm), bracketed to the left."""
        words = [tuple(w) for w in words]
        if not words:
            return self.nabla0
        if len(words) == 1:
            return self.D.identity(self.obj(words[0]))
        D = self.D
        head = self.nabla_n(words[:-1])
        step = D.tensor(head, D.identity(self.obj(words[-1])))
        return D.compose(self.nabla(_concat(words[:-1]), words[-1]), step)

    def delta_n(self, words: Sequence) -> Arrow:
        """G(w1 ... wn) -> G(w1) ... G(wn), bracketed to the left."""
        words = [tuple(w) for w in words]
        if not words:
            return self.delta0
        if len(words) == 1:
            return self.D.identity(self.obj(words[0]))
        D = self.D
        head = self.delta_n(words[:-1])
        step = D.tensor(head, D.identity(self.obj(words[-1])))
        return D.compose(step, self.delta(_concat(words[:-1]), words[-1]))

    def box(self, ins: Sequence, outs: Sequence, f: Arrow) -> Arrow:
        """The vertex value ``delta_outs o G(f) o nabla_ins``."""
        return self.D.compose_all(self.delta_n(outs), self(f), self.nabla_n(ins))


def with_structure(data: FrobeniusData, **changes) -> FrobeniusData:
    """A copy with some fields replaced (and a fresh cache)."""
    return replace(data, _cache={}, **changes)


def identity_frobenius(C: MonCat) -> FrobeniusData:
    """The identity functor with identity structure maps."""
    def ident(x, y):
        return C.identity(tuple(x) + tuple(y))
    return FrobeniusData(C, C, lambda w: w, lambda f: f, ident, C.identity(()), ident,
                         C.identity(()), name="identity")


def space_label(word) -> str:
    return "G(" + ".".join(word) + ")"


def forgetful_frobenius(C: mc.FreeModuleCat, bound: int | None = None) -> FrobeniusData:
    """The forgetful functor from free A-modules to graded vector spaces.

    Each word X of C becomes a one-letter word ``G(X)`` of D whose basis
    is the underlying basis of X.  The lax map is the quotient
    ``GX GY -> G(X (x)_A Y)`` (multiply the algebra coefficients), the
    colax map inserts the copairing of A, ``delta0`` is the trace and
    ``nabla0`` the unit.  The colax maps have degree d = the trace
    degree of A, so the structure is twisted when d != 0.
    """
    A = C.algebra
    n = A.dim
    b = C.bound if bound is None else bound
    words = C.objects(b)
    D = mc.vect_category({space_label(w): C.space(w).degrees for w in words}, bound=3)
    D.name = f"Vect[{A.name}]"
    Pinv = A.pairing_matrix().inverse()
    copair = [(i, j, Pinv[i, j]) for i in range(n) for j in range(n) if Pinv[i, j]]

    def obj(w):
        return (space_label(w),)

    def on_mor(f: Arrow) -> Arrow:
        return Arrow(obj(f.src), obj(f.tgt), f.mat, f.degree)

    def nabla(x, y):
        rx, ry = C.rank(x), C.rank(y)
        ent = {}
        for I, k, J, l in product(range(rx), range(n), range(ry), range(n)):
            col = (I * n + k) * (ry * n) + J * n + l
            for m, c in enumerate(A.mult[k][l]):
                if c:
                    ent[((I * ry + J) * n + m, col)] = c
        return Arrow(obj(x) + obj(y), obj(x + y), Mat.from_entries(rx * ry * n, rx * ry * n ** 2, ent))

    def delta(x, y):
        rx, ry = C.rank(x), C.rank(y)
        ent = {}
        for I, J, m in product(range(rx), range(ry), range(n)):
            col = (I * ry + J) * n + m
            for i, j, c in copair:
                for k, e in enumerate(A.mult[m][i]):
                    if e:
                        row = (I * n + k) * (ry * n) + J * n + j
                        ent[(row, col)] = ent.get((row, col), 0) + c * e
        return Arrow(obj(x + y), obj(x) + obj(y),
                     Mat.from_entries(rx * ry * n ** 2, rx * ry * n, ent), A.d)

    nabla0 = Arrow((), obj(()), Mat.from_rows([[u] for u in A.unit], 1))
    delta0 = Arrow(obj(()), (), Mat.from_rows([list(A.trace)], n), -A.d)
    return FrobeniusData(C, D, obj, on_mor, nabla, nabla0, delta, delta0,
                         k=1 if A.d else 0, d=A.d, name=f"forget[{A.name}]")


def zero_coproduct(data: FrobeniusData) -> FrobeniusData:
    """Fault injection: the components delta_{X,Y} with X and Y both
    non-empty replaced by zero.  (Zeroing every component would satisfy
    the Frobenius relation trivially, both sides being zero, and only
    break the counit law.)"""
    def delta(x, y):
        good = data.delta(x, y)
        if not x or not y:
            return good
        return data.D.zero(good.src, good.tgt, good.degree)
    return with_structure(data, delta_map=delta, name=data.name + "+zero-delta")


# ---------------------------------------------------------------------------
# checking

@dataclass
class FrobeniusReport:
    failures: list = field(default_factory=list)          # (axiom, objects)
    mirror_failures: list = field(default_factory=list)
    separable: bool = True
    separability_witness: tuple | None = None
    degree_violations: list = field(default_factory=list)
    checked: Counter = field(default_factory=Counter)

    @property
    def ok(self) -> bool:
        return not self.failures and not self.degree_violations

    def first(self):
        if self.failures:
            return self.failures[0]
        return self.degree_violations[0] if self.degree_violations else None


def _triples(words, bound):
    return [(x, y, z) for x, y, z in product(words, repeat=3) if len(x) + len(y) + len(z) <= bound]


def check_frobenius(data: FrobeniusData, bound: int | None = None, cap: int = 16,
                    words: Sequence | None = None) -> FrobeniusReport:
    """Exhaustively check the Frobenius functor equations on all words of C
    (or the given ``words``) whose combined length stays within ``bound``
    (default: C's bound).

    Naturality and functoriality use the hom bases between words of length
    at most one (at most ``cap`` arrows per hom).  The mirror Frobenius
    relation and separability are reported separately and do not affect
    ``ok``.
    """
    C, D, G = data.C, data.D, data
    b = C.bound if bound is None else bound
    words = C.objects(b) if words is None else [tuple(w) for w in words if len(w) <= b]
    rep = FrobeniusReport()

    def expect(axiom, objs, lhs, rhs, sink=None):
        rep.checked[axiom] += 1
        if lhs != rhs:
            (rep.failures if sink is None else sink).append((axiom, objs))

    def I(w):
        return D.identity(G.obj(w))

    # degrees of the structure maps
    t = data.twist_degree

    def audit(name, objs, f, want):
        rep.checked["degree"] += 1
        if f.degree != want or D.degree_violations(f):
            rep.degree_violations.append((name, objs, want, f.degree))

    audit("nabla0", (), G.nabla0, 0)
    audit("delta0", (), G.delta0, -t)
    pairs = [(x, y) for x, y in product(words, repeat=2) if len(x) + len(y) <= b]
    for x, y in pairs:
        audit("nabla", (x, y), G.nabla(x, y), 0)
        audit("delta", (x, y), G.delta(x, y), t)

    for x, y, z in _triples(words, b):
        nx, dx = G.nabla, G.delta
        expect("lax-associativity", (x, y, z),
               D.compose(nx(x + y, z), D.tensor(nx(x, y), I(z))),
               D.compose(nx(x, y + z), D.tensor(I(x), nx(y, z))))
        expect("colax-coassociativity", (x, y, z),
               D.compose(D.tensor(dx(x, y), I(z)), dx(x + y, z)),
               D.compose(D.tensor(I(x), dx(y, z)), dx(x, y + z)))
        expect("frobenius", (x, y, z),
               D.compose(dx(x + y, z), nx(x, y + z)),
               D.compose(D.tensor(nx(x, y), I(z)), D.tensor(I(x), dx(y, z))))
        expect("frobenius-mirror", (x, y, z),
               D.compose(dx(x, y + z), nx(x + y, z)),
               D.compose(D.tensor(I(x), nx(y, z)), D.tensor(dx(x, y), I(z))),
               sink=rep.mirror_failures)

    for x in words:
        expect("lax-unit", (x,), D.compose(G.nabla((), x), D.tensor(G.nabla0, I(x))), I(x))
        expect("lax-unit", (x,), D.compose(G.nabla(x, ()), D.tensor(I(x), G.nabla0)), I(x))
        expect("colax-counit", (x,), D.compose(D.tensor(G.delta0, I(x)), G.delta((), x)), I(x))
        expect("colax-counit", (x,), D.compose(D.tensor(I(x), G.delta0), G.delta(x, ())), I(x))

    for x, y in pairs:
        braid_c = G(C.braid(x, y))
        braid_d = D.braid(G.obj(x), G.obj(y))
        expect("lax-symmetry", (x, y), D.compose(braid_c, G.nabla(x, y)),
               D.compose(G.nabla(y, x), braid_d))
        expect("colax-symmetry", (x, y), D.compose(G.delta(y, x), braid_c),
               D.compose(D.braid(G.obj(x), G.obj(y)), G.delta(x, y)))
        rep.checked["separability"] += 1
        if rep.separable and D.compose(G.nabla(x, y), G.delta(x, y)) != I(x + y):
            rep.separable = False
            rep.separability_witness = (x, y)

    short = [w for w in words if len(w) <= 1]

    def basis(x, y):
        return list(islice(C.hom_basis(x, y), cap))

    for x in short:
        expect("functor-identity", (x,), G(C.identity(x)), I(x))
    for x, y, z in product(short, repeat=3):
        for f in basis(x, y)[:2]:
            for g in basis(y, z)[:2]:
                expect("functor-composition", (x, y, z), G(C.compose(g, f)), D.compose(G(g), G(f)))
    if 2 <= b:
        for x, x2, y, y2 in product(short, repeat=4):
            if len(x + y) > b or len(x2 + y2) > b:
                continue
            for f in basis(x, x2)[:2]:
                for g in basis(y, y2)[:2]:
                    expect("lax-naturality", (x, x2, y, y2),
                           D.compose(G.nabla(x2, y2), D.tensor(G(f), G(g))),
                           D.compose(G(C.tensor(f, g)), G.nabla(x, y)))
                    expect("colax-naturality", (x, x2, y, y2),
                           D.compose(D.tensor(G(f), G(g)), G.delta(x, y)),
                           D.compose(G.delta(x2, y2), G(C.tensor(f, g))))
    return rep


def is_separable(data: FrobeniusData, bound: int | None = None) -> tuple:
    """(True, None) if nabla o delta = id on all pairs within bound, else
    (False, witness)."""
    C, D = data.C, data.D
    b = C.bound if bound is None else bound
    for x, y in product(C.objects(b), repeat=2):
        if len(x) + len(y) <= b and \
                D.compose(data.nabla(x, y), data.delta(x, y)) != D.identity(data.obj(x + y)):
            return False, (x, y)
    return True, None


def compare_frobenius(a: FrobeniusData, b: FrobeniusData, bound: int | None = None,
                      cap: int = 8) -> list:
    """Components on which two FrobeniusData differ (objects, structure
    maps and the functor on hom bases between words of length <= 1)."""
    C = a.C
    bd = C.bound if bound is None else bound
    words = C.objects(bd)
    diff = []
    for w in words:
        if a.obj(w) != b.obj(w):
            diff.append(("object", w))
    if a.nabla0 != b.nabla0:
        diff.append(("nabla0",))
    if a.delta0 != b.delta0:
        diff.append(("delta0",))
    for x, y in product(words, repeat=2):
        if len(x) + len(y) <= bd:
            if a.nabla(x, y) != b.nabla(x, y):
                diff.append(("nabla", x, y))
            if a.delta(x, y) != b.delta(x, y):
                diff.append(("delta", x, y))
    for x, y in product(C.objects(min(1, bd)), repeat=2):
        for f in islice(C.hom_basis(x, y), cap):
            if a(f) != b(f):
                diff.append(("morphism", x, y))
                break
    return diff


@dataclass
class FrobNatTransformation:
    """Components ``component(X): FX -> GX`` between two FrobeniusData
    with the same source and target categories."""
    source: FrobeniusData
    target: FrobeniusData
    component: Callable

    def __call__(self, x) -> Arrow:
        return self.component(tuple(x))


def check_frob_nat(t: FrobNatTransformation, bound: int | None = None, cap: int = 4) -> list:
    """Failures ``(axiom, objects)`` of naturality and of the four
    compatibilities with (nabla, nabla0) and (delta, delta0)."""
    F, G = t.source, t.target
    C, D = F.C, F.D
    b = C.bound if bound is None else bound
    words = C.objects(b)
    bad = []
    for x in words:
        a = t(x)
        if (a.src, a.tgt) != (F.obj(x), G.obj(x)):
            bad.append(("type", (x,)))
            return bad
    if D.compose(t(()), F.nabla0) != G.nabla0:
        bad.append(("unit", ()))
    if D.compose(G.delta0, t(())) != F.delta0:
        bad.append(("counit", ()))
    for x, y in product(words, repeat=2):
        if len(x) + len(y) > b:
            continue
        axy, both = t(x + y), D.tensor(t(x), t(y))
        if D.compose(axy, F.nabla(x, y)) != D.compose(G.nabla(x, y), both):
            bad.append(("monoidal", (x, y)))
        if D.compose(G.delta(x, y), axy) != D.compose(both, F.delta(x, y)):
            bad.append(("comonoidal", (x, y)))
    for x, y in product(C.objects(min(1, b)), repeat=2):
        for f in islice(C.hom_basis(x, y), cap):
            if D.compose(G(f), t(x)) != D.compose(t(y), F(f)):
                bad.append(("naturality", (x, y)))
                break
    return bad


# ---------------------------------------------------------------------------
# functors out of the envelope of U C

def _vertex_order(K: gc.ColoredDigraph):
    return gc.topological_order(K, key=lambda v: (repr(K.vertices[v].ins), repr(K.vertices[v].outs),
                                                  repr(v)))


def evaluate(data: FrobeniusData, K: gc.ColoredDigraph, order: Sequence | None = None) -> Arrow:
    """Value of a labelled graph under the functor built from ``data``.

    Vertex colors are C-words and labels are C-arrows from the
    concatenated inputs to the concatenated outputs (or :class:`UOp`
    wrapping such arrows).  Vertices are applied
    upstream first (``order`` must be a topological order); each one
    contributes ``id (x) (delta o G(f) o nabla)`` after its input wires
    have been brought to the end by a symmetry.
    """
    D = data.D
    order = list(_vertex_order(K) if order is None else order)
    if sorted(map(repr, order)) != sorted(map(repr, K.vertices)):
        raise gc.GraphError("order must list every vertex once")
    feeds = {(e.tgt, e.in_port): ("v", e.src, e.out_port) for e in K.edges}
    feeds.update({vq: ("leaf", k) for k, vq in enumerate(K.inputs)})
    color = {("leaf", k): K.vertices[v].ins[q] for k, (v, q) in enumerate(K.inputs)}
    state = [("leaf", k) for k in range(len(K.inputs))]
    arrow = D.identity(data.objs(color[t] for t in state))
    done = set()
    for v in order:
        x = K.vertices[v]
        need = [feeds[(v, q)] for q in range(len(x.ins))]
        for t in need:
            if t not in state:
                raise gc.GraphError(f"vertex {v!r} comes before one of its inputs")
        rest = [t for t in state if t not in need]
        blocks = [data.obj(color[t]) for t in state]
        perm = D.permute_blocks(blocks, [state.index(t) for t in rest + need])
        box = data.box(x.ins, x.outs, getattr(x.label, "arrow", x.label))
        step = D.tensor(D.identity(data.objs(color[t] for t in rest)), box)
        arrow = D.compose_all(step, perm, arrow)
        new = [("v", v, p) for p in range(len(x.outs))]
        color.update({t: c for t, c in zip(new, x.outs)})
        state = rest + new
        done.add(v)
    final = [("v", v, p) for v, p in K.outputs]
    blocks = [data.obj(color[t]) for t in state]
    return D.compose(D.permute_blocks(blocks, [state.index(t) for t in final]), arrow)


@dataclass
class GraphFunctor:
    """A symmetric monoidal functor out of E(U C), given by its value on
    labelled graphs (possibly disconnected)."""

    C: MonCat
    D: MonCat
    obj: Callable
    value: Callable

    def __call__(self, K: gc.ColoredDigraph, order: Sequence | None = None) -> Arrow:
        return self.value(K) if order is None else self.value(K, order)


def lambda_(data: FrobeniusData, check: bool = True, bound: int | None = None) -> GraphFunctor:
    """The functor E(U C) -> D determined by a Frobenius monoidal functor.

    With ``check`` the input is run through :func:`check_frobenius` first
    and rejected with :class:`NotFrobenius` if it fails.
    """
    if check:
        rep = check_frobenius(data, bound)
        if not rep.ok:
            raise NotFrobenius(f"{data.name or 'data'} fails {rep.first()}")

    def value(K, order=None):
        return evaluate(data, K, order)

    return GraphFunctor(data.C, data.D, data.obj, value)


def unit_corolla(ins, outs, f: Arrow) -> gc.ColoredDigraph:
    """The one-vertex graph labelled by f."""
    return gc.corolla([tuple(w) for w in ins], [tuple(w) for w in outs], f)


def _restrict(C, D, obj, at, name) -> FrobeniusData:
    """FrobeniusData whose components are the values ``at(ins, outs, f)``
    of a functor on the corollas labelled f."""
    def on_mor(f):
        return at((f.src,), (f.tgt,), f)

    def nabla(x, y):
        return at((x, y), (x + y,), C.identity(x + y))

    def delta(x, y):
        return at((x + y,), (x, y), C.identity(x + y))

    one = C.identity(())
    nabla0 = at((), ((),), one)
    delta0 = at(((),), (), one)
    d = -delta0.degree
    return FrobeniusData(C, D, obj, on_mor, nabla, nabla0, delta, delta0,
                         k=1 if d else 0, d=d, name=name)


def theta(F: GraphFunctor) -> FrobeniusData:
    """Restrict a functor on E(U C) along the unit: the structure maps
    are the values on the corollas labelled by identities."""
    return _restrict(F.C, F.D, F.obj, lambda ins, outs, f: F(unit_corolla(ins, outs, f)), "theta")


# ---------------------------------------------------------------------------
# properadic envelope: separable functors

class _BoxMap:
    """The properad map U^p C -> U^p D sending f to delta o G(f) o nabla."""

    def __init__(self, data: FrobeniusData):
        self.data = data

    def color_map(self, c):
        return self.data.obj(c)

    def __call__(self, op: UOp) -> UOp:
        G = self.data
        return UOp(tuple(G.obj(w) for w in op.ins), tuple(G.obj(w) for w in op.outs),
                   G.box(op.ins, op.outs, op.arrow))


def properadic_envelope_of(C: MonCat, bound: int = 3) -> ev.MonoidalEnvelope:
    return ev.MonoidalEnvelope(mc.UnderlyingProperad(C), bound)


def psi(data: FrobeniusData, env: ev.MonoidalEnvelope | None = None, check: bool = True,
        bound: int | None = None) -> ev.EnvFunctor:
    """The functor E^p U^p C -> D of a separable Frobenius functor: each
    part f of a morphism goes to ``delta o G(f) o nabla``.

    Raises :class:`NotSeparable` (with the witnessing pair) if
    ``nabla o delta != id``; pass ``check=False`` to build the would-be
    functor anyway, e.g. to watch :func:`functoriality_failures` find the
    broken composite.
    """
    if check:
        rep = check_frobenius(data, bound)
        if not rep.ok:
            raise NotFrobenius(f"{data.name or 'data'} fails {rep.first()}")
        if not rep.separable:
            raise NotSeparable(f"nabla o delta != id at {rep.separability_witness}")
    env = env or properadic_envelope_of(data.C)
    return ev.upsilon(env, data.D, _BoxMap(data))


def phi(F: ev.EnvFunctor) -> FrobeniusData:
    """Restrict a functor E^p U^p C -> D to FrobeniusData."""
    env = F.env

    def at(ins, outs, f):
        return F(env.elementary(UOp(tuple(map(tuple, ins)), tuple(map(tuple, outs)), f)))

    return _restrict(env.P.C, F.C, lambda w: F.obj((tuple(w),)), at, "phi")


def functoriality_failures(F: ev.EnvFunctor, pairs: Sequence) -> list:
    """Composable pairs (g, f) of envelope morphisms with F(g o f) != F(g) o F(f)."""
    env, D = F.env, F.C
    return [(g, f) for g, f in pairs if F(env.compose(g, f)) != D.compose(F(g), F(f))]


def split_merge_pairs(C: MonCat, bound: int | None = None) -> list:
    """The composites ``merge o split`` on X Y: the elementary morphism
    (XY) -> (X, Y) labelled id followed by (X, Y) -> (XY) labelled id.
    Their envelope composite is the identity corolla, so a functor
    respects them exactly when nabla o delta = id."""
    env = properadic_envelope_of(C)
    b = C.bound if bound is None else bound
    out = []
    for x, y in product(C.objects(b), repeat=2):
        if x and y and len(x) + len(y) <= b:
            i = C.identity(x + y)
            split = env.elementary(UOp((x + y,), (x, y), i))
            merge = env.elementary(UOp((x, y), (x + y,), i))
            out.append((merge, split))
    return out


# ---------------------------------------------------------------------------
# dioperad maps U C -> U D{d}

def to_dioperad_map(data: FrobeniusData) -> dp.DioperadMorphism:
    """The dioperad map U C -> (U D){k d}: an operation f of C with n
    outputs goes to ``delta o G(f) o nabla`` with twist exponent n - 1."""
    box = _BoxMap(data)
    source = mc.UnderlyingDioperad(data.C)
    target = dp.twist(mc.UnderlyingDioperad(data.D), data.twist_degree)

    def on_op(op: UOp) -> dp.TwOp:
        img = box(op)
        n = len(op.outs)
        want = op.degree + (n - 1) * data.twist_degree
        if img.degree != want:
            raise DegreeMismatch(f"image of {op.ins}->{op.outs} has degree {img.degree}, expected {want}")
        return dp.TwOp(img, n - 1)

    return dp.DioperadMorphism(source, target, data.obj, on_op)


def from_dioperad_map(F: dp.DioperadMorphism, C: MonCat, D: MonCat, d: int = 0) -> FrobeniusData:
    """Read FrobeniusData off a dioperad map U C -> (U D){d}; exponents of
    the images must equal (number of outputs) - 1."""
    def at(ins, outs, f):
        img = F(UOp(tuple(map(tuple, ins)), tuple(map(tuple, outs)), f))
        if isinstance(img, dp.TwOp):
            if img.exponent != len(outs) - 1:
                raise DegreeMismatch(f"exponent {img.exponent} for {len(outs)} outputs")
            img = img.op
        return img.arrow

    data = _restrict(C, D, F.color_map, at, "from-dioperad")
    return with_structure(data, k=1 if d else 0, d=d)
