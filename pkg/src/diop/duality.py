"""Duality contexts and the twisted Frobenius structure they induce.

A duality context is an adjunction F: D <-> C: G with F strong (here:
strict) symmetric monoidal, both categories rigid, and an orientation
``xi: G(1) -> 1`` of degree -d.  The right adjoint G is lax monoidal via

    nabla_{X,Y} = G(c_X (x) c_Y) o u_{GX (x) GY}: GX GY -> G(XY)

and the orientation makes ``beta_X = xi o G(ev_X) o nabla_{X,X^}`` a
non-degenerate pairing, whence an isomorphism ``alpha: G -> G'`` with
``G'X = G(X^)^*`` and the colax structure

    delta_{X,Y} = (alpha_X^-1 (x) alpha_Y^-1) o (nabla_{Y^,X^})^* o alpha_{XY},
    delta0 = (nabla0)^* o alpha_1.

:func:`verify_main_theorem` assembles the resulting FrobeniusData and runs
the exhaustive checker on it.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from itertools import product
from typing import Callable, Sequence

from . import diagrams as dg
from . import dioperad as dp
from . import frobenius as fr
from . import moncat as mc
from .moncat import Arrow, MonCat, UOp


class OrientationRequired(ValueError):
    pass


def dual_arrow(D: MonCat, f: Arrow) -> Arrow:
    """The mate f^*: B^* -> A^* of f: A -> B,
    ``(ev'_B (x) id) o (id (x) f (x) id) o (id (x) coev'_A)``."""
    a, b = f.src, f.tgt
    ad, bd = D.dual(a), D.dual(b)
    step1 = D.tensor(D.identity(bd), D.coev_prime(a))
    step2 = D.tensor_all([D.identity(bd), f, D.identity(ad)])
    step3 = D.tensor(D.ev_prime(b), D.identity(ad))
    return D.compose_all(step3, step2, step1)


def invert(f: Arrow) -> Arrow:
    return Arrow(f.tgt, f.src, f.mat.inverse(), -f.degree)


# ---------------------------------------------------------------------------
# adjunctions

@dataclass
class Adjunction:
    """F: D -> C strictly monoidal on words, G: C -> D, unit and counit.

    ``unit(V)`` is a D-arrow V -> G(F(V)); ``counit(X)`` a C-arrow
    F(G(X)) -> X.
    """

    C: MonCat
    D: MonCat
    F_obj: Callable
    F_mor: Callable
    G_obj: Callable
    G_mor: Callable
    unit: Callable
    counit: Callable
    name: str = ""

    def F(self, x):
        return self.F_mor(x) if isinstance(x, Arrow) else tuple(self.F_obj(tuple(x)))

    def G(self, x):
        return self.G_mor(x) if isinstance(x, Arrow) else tuple(self.G_obj(tuple(x)))


def check_adjunction(adj: Adjunction, c_words: Sequence, d_words: Sequence, cap: int = 4) -> list:
    """Triangle identities, strict monoidality and symmetry of F, and
    naturality of unit and counit on generator-level hom bases."""
    C, D = adj.C, adj.D
    bad = []
    for x in c_words:
        gx = adj.G(x)
        if D.compose(adj.G(adj.counit(x)), adj.unit(gx)) != D.identity(gx):
            bad.append(("triangle-G", x))
    for v in d_words:
        fv = adj.F(v)
        if C.compose(adj.counit(fv), adj.F(adj.unit(v))) != C.identity(fv):
            bad.append(("triangle-F", v))
    for v, w in product(d_words, repeat=2):
        if len(v) + len(w) > min(C.bound, D.bound):
            continue
        if adj.F(v + w) != adj.F(v) + adj.F(w):
            bad.append(("F-monoidal", v, w))
        elif adj.F(D.braid(v, w)) != C.braid(adj.F(v), adj.F(w)):
            bad.append(("F-symmetric", v, w))
    short_c = [x for x in c_words if len(x) <= 1]
    short_d = [v for v in d_words if len(v) <= 1]
    for x, y in product(short_c, repeat=2):
        for f in C.hom_basis(x, y)[:cap]:
            lhs = C.compose(f, adj.counit(x))
            rhs = C.compose(adj.counit(y), adj.F(adj.G(f)))
            if lhs != rhs:
                bad.append(("counit-naturality", x, y))
                break
    for v, w in product(short_d, repeat=2):
        for f in D.hom_basis(v, w)[:cap]:
            if D.compose(adj.unit(w), f) != D.compose(adj.G(adj.F(f)), adj.unit(v)):
                bad.append(("unit-naturality", v, w))
                break
    return bad


def identity_adjunction(C: MonCat) -> Adjunction:
    ident = lambda x: x  # noqa: E731
    return Adjunction(C, C, ident, ident, ident, ident, C.identity, C.identity, name="identity")


def free_module_adjunction(alg: mc.FrobeniusAlgebra, gens: dict | None = None,
                           bound: int = 3) -> Adjunction:
    """Free module / forgetful adjunction between graded vector spaces and
    free ``alg``-modules.

    Both categories share the generators ``gens`` and an extra generator
    ``a`` carrying the basis of the algebra; F is the identity on words
    (the free module on a graded space), G appends ``a`` (the underlying
    space of a free module, in the basis order of
    :meth:`FreeModuleCat.space`).  The unit inserts 1 in the new ``a``
    factor, the counit multiplies it into the coefficient.
    """
    gens = dict(gens if gens is not None else {"A": (0,)})
    if "a" in gens:
        raise ValueError("generator name 'a' is reserved for the algebra")
    n = alg.dim
    allg = {**gens, "a": tuple(alg.degrees)}
    C = mc.FreeModuleCat(alg, allg, bound=3 * (bound + 1), name=f"{alg.name}-mod")
    D = mc.vect_category(allg, bound=3 * (bound + 1))
    D.name = "Vect"
    one = tuple(alg.unit)
    zero = tuple(0 for _ in range(n))

    def F_mor(f: Arrow) -> Arrow:
        rows = f.mat.rows
        amat = [[tuple(c * u for u in one) if c else zero for c in r] for r in rows]
        return C.from_amat(amat, f.src, f.tgt, f.degree)

    def G_obj(w):
        return tuple(w) + ("a",)

    def G_mor(f: Arrow) -> Arrow:
        return Arrow(G_obj(f.src), G_obj(f.tgt), f.mat, f.degree)

    def unit(v):
        v = tuple(v)
        r = D.dim(v)
        col = mc.Mat.from_rows([[u] for u in one], 1)
        return Arrow(v, G_obj(v), mc.Mat.identity(r).kron(col))

    def counit(x):
        x = tuple(x)
        r = C.rank(x)
        amat = [[zero] * (r * n) for _ in range(r)]
        for i, k in product(range(r), range(n)):
            amat[i][i * n + k] = alg.basis_vec(k)
        return C.from_amat(amat, G_obj(x), x)

    return Adjunction(C, D, lambda w: tuple(w), F_mor, G_obj, G_mor, unit, counit,
                      name=f"free[{alg.name}]")


# ---------------------------------------------------------------------------
# contexts

@dataclass
class DualityContext:
    """An adjunction, a degree d and an orientation ``xi: G(1) -> 1``.

    ``generators`` are the C-generators whose words are swept (the tested
    range); ``bound`` caps the word length.  ``xi_for`` optionally
    overrides the orientation used in the pairing of a given object (used
    to inject faults); ``alpha_convention`` is "right" or "left", see
    :func:`alpha`.
    """

    adj: Adjunction
    d: int
    xi: Arrow
    generators: tuple
    bound: int = 3
    xi_for: Callable | None = None
    alpha_convention: str = "right"
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def C(self):
        return self.adj.C

    @property
    def D(self):
        return self.adj.D

    def words(self, bound: int | None = None) -> list:
        b = self.bound if bound is None else bound
        return [w for k in range(b + 1) for w in product(self.generators, repeat=k)]

    def memo(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]


def identity_context(C: MonCat, generators: Sequence | None = None, bound: int = 3) -> DualityContext:
    """F = G = id, d = 0, xi = id: beta is the evaluation."""
    adj = identity_adjunction(C)
    return DualityContext(adj, 0, C.identity(()), tuple(generators or C.generators), bound,
                          name="identity")


def frobenius_algebra_context(alg: mc.FrobeniusAlgebra, gens: dict | None = None,
                              bound: int = 3) -> DualityContext:
    """Free modules over a graded Frobenius algebra with xi = the trace
    (degree -d); d is the trace degree of the algebra."""
    adj = free_module_adjunction(alg, gens, bound)
    g1 = adj.G(())
    xi = Arrow(g1, (), mc.Mat.from_rows([list(alg.trace)], alg.dim), -alg.d)
    C = adj.C
    gens_ = [g for g in C.generators if g not in ("a", "a*")]
    return DualityContext(adj, alg.d, xi, tuple(gens_), bound, name=f"frobenius[{alg.name}]")


def with_context(ctx: DualityContext, **changes) -> DualityContext:
    return replace(ctx, _cache={}, **changes)


# ---------------------------------------------------------------------------
# lax structure

def nabla(ctx: DualityContext, x, y) -> Arrow:
    x, y = tuple(x), tuple(y)

    def build():
        adj, C, D = ctx.adj, ctx.C, ctx.D
        gxy = adj.G(x) + adj.G(y)
        u = adj.unit(gxy)
        if adj.F(gxy) != adj.F(adj.G(x)) + adj.F(adj.G(y)):
            raise ValueError("F is not strictly monoidal on these words")
        return D.compose(adj.G(C.tensor(adj.counit(x), adj.counit(y))), u)
    return ctx.memo(("nabla", x, y), build)


def nabla0(ctx: DualityContext) -> Arrow:
    """The transpose of F(1_D) = 1_C: G(id) o u_1."""
    adj = ctx.adj
    return ctx.memo(("nabla0",), lambda: ctx.D.compose(adj.G(ctx.C.identity(adj.F(()))),
                                                      adj.unit(())))


def induced_lax(ctx: DualityContext) -> tuple:
    """(nabla as a function of (X, Y), nabla0)."""
    return (lambda x, y: nabla(ctx, x, y)), nabla0(ctx)


# ---------------------------------------------------------------------------
# orientation

def _xi(ctx, x):
    return ctx.xi_for(tuple(x)) if ctx.xi_for is not None else ctx.xi


def beta(ctx: DualityContext, x) -> Arrow:
    """GX G(X^) -> 1, of degree -d."""
    x = tuple(x)

    def build():
        C, D, adj = ctx.C, ctx.D, ctx.adj
        xd = C.dual(x)
        return D.compose_all(_xi(ctx, x), adj.G(C.ev(x)), nabla(ctx, x, xd))
    return ctx.memo(("beta", x), build)


def sharp(D: MonCat, b: Arrow, a, bb) -> Arrow:
    """b^sharp = (b (x) id) o (id (x) coev'): A -> B^* for a pairing b: A B -> 1."""
    a, bb = tuple(a), tuple(bb)
    return D.compose(D.tensor(b, D.identity(D.dual(bb))),
                     D.tensor(D.identity(a), D.coev_prime(bb)))


def alpha(ctx: DualityContext, x) -> Arrow:
    """alpha_X: GX -> G'X = G(X^)^*, of degree -d.

    "right": ``beta_X^sharp``, pairing GX on the left of G(X^).
    "left": the same construction for the swapped pairing
    ``beta o braid: G(X^) GX -> 1``, coevaluating on the left,
    ``(id (x) beta o braid) o (coev_{G(X^)} (x) id)``.
    """
    x = tuple(x)

    def build():
        C, D, adj = ctx.C, ctx.D, ctx.adj
        gx, gxd = adj.G(x), adj.G(C.dual(x))
        b = beta(ctx, x)
        if ctx.alpha_convention == "right":
            return sharp(D, b, gx, gxd)
        if ctx.alpha_convention == "left":
            swapped = D.compose(b, D.braid(gxd, gx))
            coev = D.coev(gxd)          # 1 -> G(X^)^* G(X^)
            return D.compose(D.tensor(D.identity(D.dual(gxd)), swapped),
                             D.tensor(coev, D.identity(gx)))
        raise ValueError(f"unknown convention {ctx.alpha_convention!r}")
    return ctx.memo(("alpha", x), build)


def g_prime(ctx: DualityContext, x) -> tuple:
    return ctx.D.dual(ctx.adj.G(ctx.C.dual(tuple(x))))


@dataclass
class OrientationReport:
    tested: list
    degenerate: list = field(default_factory=list)
    degree_violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.degenerate and not self.degree_violations


def check_orientation(ctx: DualityContext, bound: int | None = None) -> OrientationReport:
    """beta^sharp_X must be invertible (exact rank) with degree -d for
    every swept word X."""
    words = ctx.words(bound)
    rep = OrientationReport(tested=words)
    if ctx.xi.degree != -ctx.d or ctx.D.degree_violations(ctx.xi):
        rep.degree_violations.append(("xi", (), -ctx.d, ctx.xi.degree))
    for x in words:
        a = alpha(ctx, x)
        if a.mat.nrows != a.mat.ncols or a.mat.rank() != a.mat.nrows:
            rep.degenerate.append(x)
        if a.degree != -ctx.d or ctx.D.degree_violations(a):
            rep.degree_violations.append(("alpha", x, -ctx.d, a.degree))
    return rep


def alpha_inverse(ctx: DualityContext, x) -> Arrow:
    x = tuple(x)
    return ctx.memo(("alpha-inv", x), lambda: invert(alpha(ctx, x)))


def kappa(ctx: DualityContext, x) -> Arrow:
    """The copairing 1 -> G(X^) GX of degree d dual to beta_X:
    ``(id (x) alpha_X^-1) o coev'``.  With the "right" convention
    (beta (x) id) o (id (x) kappa) = id_GX and
    (id (x) beta) o (kappa (x) id) = id_G(X^)."""
    x = tuple(x)
    D = ctx.D
    gxd = ctx.adj.G(ctx.C.dual(x))
    return D.compose(D.tensor(D.identity(gxd), alpha_inverse(ctx, x)), D.coev_prime(gxd))


# ---------------------------------------------------------------------------
# colax structure

def delta(ctx: DualityContext, x, y) -> Arrow:
    x, y = tuple(x), tuple(y)

    def build():
        C, D = ctx.C, ctx.D
        n = nabla(ctx, C.dual(y), C.dual(x))
        return D.compose_all(D.tensor(alpha_inverse(ctx, x), alpha_inverse(ctx, y)),
                             dual_arrow(D, n), alpha(ctx, x + y))
    return ctx.memo(("delta", x, y), build)


def delta0(ctx: DualityContext) -> Arrow:
    return ctx.memo(("delta0",), lambda: ctx.D.compose(dual_arrow(ctx.D, nabla0(ctx)),
                                                       alpha(ctx, ())))


def induced_colax(ctx: DualityContext, check: bool = True) -> tuple:
    """(delta as a function of (X, Y), delta0); refuses a context whose
    orientation fails :func:`check_orientation`."""
    if check:
        rep = check_orientation(ctx)
        if not rep.ok:
            raise OrientationRequired(f"degenerate at {rep.degenerate[:3]}, "
                                      f"degrees {rep.degree_violations[:3]}")
    return (lambda x, y: delta(ctx, x, y)), delta0(ctx)


def frobenius_data(ctx: DualityContext) -> fr.FrobeniusData:
    """G with the induced lax and colax structures, twist exponent 1 when d != 0."""
    adj = ctx.adj
    return fr.FrobeniusData(ctx.C, ctx.D, adj.G, adj.G, lambda x, y: nabla(ctx, x, y),
                            nabla0(ctx), lambda x, y: delta(ctx, x, y), delta0(ctx),
                            k=1 if ctx.d else 0, d=ctx.d, name=ctx.name)


@dataclass
class MainTheoremReport:
    tested_generators: tuple
    bound: int
    adjunction: list = field(default_factory=list)
    orientation: OrientationReport | None = None
    frobenius: fr.FrobeniusReport | None = None
    alpha_failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (not self.adjunction and self.orientation is not None and self.orientation.ok
                and not self.alpha_failures and self.frobenius is not None and self.frobenius.ok)

    @property
    def degree_violations(self) -> list:
        out = list(self.orientation.degree_violations) if self.orientation else []
        if self.frobenius:
            out += self.frobenius.degree_violations
        return out

    def witness(self):
        """The first failure, tagged with the stage that found it."""
        if self.adjunction:
            return ("adjunction",) + tuple(self.adjunction[0])
        if self.orientation and self.orientation.degenerate:
            return ("degenerate", self.orientation.degenerate[0])
        if self.degree_violations:
            return ("degree",) + tuple(self.degree_violations[0])
        if self.alpha_failures:
            return ("alpha",) + tuple(self.alpha_failures[0])
        if self.frobenius and self.frobenius.failures:
            return self.frobenius.failures[0]
        return None


def verify_main_theorem(ctx: DualityContext, bound: int | None = None) -> MainTheoremReport:
    """Run every check on the context and on the induced FrobeniusData.

    The sweep covers all words in ``ctx.generators`` (and their duals, if
    listed) up to ``bound``: adjunction identities, non-degeneracy,
    alpha o alpha^-1 = id, then the full Frobenius checker.
    """
    b = ctx.bound if bound is None else bound
    words = ctx.words(b)
    rep = MainTheoremReport(tuple(ctx.generators), b)
    d_words = sorted({ctx.adj.G(w) for w in words if len(w) <= 1} | {()})
    rep.adjunction = check_adjunction(ctx.adj, words, d_words)
    rep.orientation = check_orientation(ctx, b)
    if not rep.orientation.ok or rep.adjunction:
        return rep
    D = ctx.D
    for x in words:
        a, ai = alpha(ctx, x), alpha_inverse(ctx, x)
        if D.compose(ai, a) != D.identity(a.src) or D.compose(a, ai) != D.identity(a.tgt):
            rep.alpha_failures.append((x,))
    rep.frobenius = fr.check_frobenius(frobenius_data(ctx), b, words=words)
    return rep


# ---------------------------------------------------------------------------
# fault injection

def scaled_orientation_at(ctx: DualityContext, x, factor=2) -> DualityContext:
    """xi scaled by ``factor`` in the pairing of the single object x only:
    alpha stops being natural."""
    x = tuple(x)
    xi = ctx.xi
    return with_context(ctx, xi_for=lambda w: xi.scale(factor) if w == x else xi,
                        name=ctx.name + f"+xi*{factor}@{x}")


def zero_orientation(ctx: DualityContext) -> DualityContext:
    xi = ctx.xi
    return with_context(ctx, xi=ctx.D.zero(xi.src, xi.tgt, xi.degree), name=ctx.name + "+xi=0")


def scaled_counit_at(ctx: DualityContext, x, factor=2) -> DualityContext:
    """The counit scaled on one object: the triangle identities fail."""
    x = tuple(x)
    adj = ctx.adj
    c = adj.counit
    bad = replace(adj, counit=lambda w: c(w).scale(factor) if tuple(w) == x else c(w))
    return with_context(ctx, adj=bad, name=ctx.name + f"+counit*{factor}@{x}")


# ---------------------------------------------------------------------------
# algebras

def frobenius_algebra_in_context(ctx: DualityContext, word=("A",)) -> dp.DioperadMorphism:
    """The rank-one free module ``word`` as a Frobenius algebra in C with
    the canonical isomorphisms A (x)_A A = A as product and coproduct."""
    C = ctx.C
    w = tuple(word)
    U = mc.UnderlyingDioperad(C)

    def iso(src, tgt):
        return C.from_amat([[tuple(C.algebra.unit)]], src, tgt)

    imgs = {"mu": U.make((w, w), (w,), iso(w + w, w)), "eta": U.make((), (w,), iso((), w)),
            "delta": U.make((w,), (w, w), iso(w, w + w)), "eps": U.make((w,), (), iso(w, ()))}
    return dp.from_generators(dp.FrobDioperad(), U, {"x": w}, imgs)


def transfer_algebra(ctx_or_data, P, alg: dp.DioperadMorphism) -> dp.DioperadMorphism:
    """Send a P-algebra in C to a P{-d}-algebra in D along G.

    ``alg`` must be built by :func:`dioperad.from_generators`; each
    generator image f becomes ``delta o G(f) o nabla`` in U D, of degree
    deg(f) + (n - 1) d for n outputs.
    """
    data = frobenius_data(ctx_or_data) if isinstance(ctx_or_data, DualityContext) else ctx_or_data
    t = data.twist_degree
    U = mc.UnderlyingDioperad(data.D)
    images = {}
    for name, u in alg.generator_images.items():
        images[name] = UOp(tuple(data.obj(w) for w in u.ins), tuple(data.obj(w) for w in u.outs),
                           data.box(u.ins, u.outs, u.arrow))
    source = dp.twist(P, -t) if t else P
    want = {name: u.degree + (len(u.outs) - 1) * t for name, u in alg.generator_images.items()}
    return dp.from_generators(source, U, lambda c: data.obj(alg.color_map(c)), images,
                              expected_degree=want.__getitem__)


def check_transferred(ctx_or_data, P, alg) -> dp.AlgebraReport:
    T = transfer_algebra(ctx_or_data, P, alg)
    return dp.algebra_check(T.source, T.target, T, degree_of=lambda op: op.degree)


# ---------------------------------------------------------------------------
# graphical calculus and the replay of the Frobenius-relation proof

def diagram_bindings(ctx: DualityContext, words: dict) -> dg.Bindings:
    """Interpret diagram boxes in ``ctx``; ``words`` maps the symbol
    names to concrete words of C."""
    C, D, adj = ctx.C, ctx.D, ctx.adj
    if ctx.xi_for is not None:
        raise ValueError("diagrams need a single orientation xi")
    if ctx.alpha_convention != "right":
        raise ValueError("diagram definitions of alpha use the 'right' convention")

    def word(e):
        out = ()
        for name, dualised in e:
            w = tuple(words[name])
            out += C.dual(w) if dualised else w
        return out

    def wire(t):
        gw = adj.G(word(t[1]))
        return gw if t[0] == "G" else D.dual(gw)

    def box(b: dg.Box) -> Arrow:
        k, ps = b.kind, [word(p) for p in b.params]
        if k == "nabla":
            return nabla(ctx, *ps)
        if k == "Gev":
            p, y, q = ps
            return adj.G(C.tensor(C.tensor(C.identity(p), C.ev(y)), C.identity(q)))
        if k == "xi":
            return ctx.xi
        if k == "cup":
            return D.coev_prime(adj.G(ps[0]))
        if k == "cap":
            return D.ev_prime(adj.G(ps[0]))
        if k == "alpha":
            return alpha(ctx, ps[0])
        if k == "alpha_inv":
            return alpha_inverse(ctx, ps[0])
        if k == "Delta":
            return delta(ctx, *ps)
        raise ValueError(f"unknown box {b!r}")

    return dg.Bindings(D, wire, box, ctx.d)


def frobenius_relation_chain() -> list:
    """Terms rewriting ``Delta_{XY,Z} o nabla_{X,YZ}`` into
    ``(nabla_{X,Y} (x) id) o (id (x) Delta_{Y,Z})``.

    Returns ``[(tag, term), ...]``; the tag names the rules relating a
    term to its predecessor (None for the first).
    """
    from .diagrams import (G, Gs, alpha as a_, alpha_definition, alpha_inv as ai, cup,
                           delta as dl, delta_definition, dual, gev, ids, mate_of_nabla,
                           nabla as nb, par, seq, sym, xi)
    X, Y, Z = sym("X"), sym("Y"), sym("Z")
    XY, YZ, XYZ = X + Y, Y + Z, X + Y + Z
    dX, dY, dZ, dXY = dual(X), dual(Y), dual(Z), dual(X + Y)
    W = dual(XYZ)
    src = (G(X), G(YZ))
    two_cups = seq(cup(dZ), par(ids(G(dZ)), cup(dXY), ids(Gs(dZ))))   # 1 -> Z^ XY^ XY^* Z^*
    tail = par(ai(XY), ai(Z))
    chain = []
    # Delta_{XY,Z} o nabla_{X,YZ}
    chain.append((None, seq(nb(X, YZ), dl(XY, Z))))
    chain.append(("def", seq(nb(X, YZ), delta_definition(XY, Z))))
    # alpha_XYZ unfolded; its cup cancels against the cap of the mate
    chain.append(("def alpha, Dual", seq(
        par(nb(X, YZ), two_cups),
        par(ids(G(XYZ)), nb(dZ, dXY), ids(Gs(dXY), Gs(dZ))),
        par(nb(XYZ, W), ids(Gs(dXY), Gs(dZ))),
        par(gev((), XYZ, ()), ids(Gs(dXY), Gs(dZ))),
        par(xi(), tail))))
    chain.append(("Assoc", seq(
        par(nb(X, YZ), two_cups),
        par(nb(XYZ, dZ), ids(G(dXY), Gs(dXY), Gs(dZ))),
        par(nb(XYZ + dZ, dXY), ids(Gs(dXY), Gs(dZ))),
        par(gev((), XYZ, ()), ids(Gs(dXY), Gs(dZ))),
        par(xi(), tail))))
    chain.append(("*", seq(
        par(nb(X, YZ), two_cups),
        par(nb(XYZ, dZ), ids(G(dXY), Gs(dXY), Gs(dZ))),
        par(gev(XY, Z, ()), ids(G(dXY), Gs(dXY), Gs(dZ))),
        par(nb(XY, dXY), ids(Gs(dXY), Gs(dZ))),
        par(gev((), XY, ()), ids(Gs(dXY), Gs(dZ))),
        par(xi(), tail))))
    # the pairing on G(XY) together with the cup for XY^ is alpha_XY
    contract = seq(nb(XYZ, dZ), gev(XY, Z, ()))
    chain.append(("def alpha", seq(
        par(nb(X, YZ), cup(dZ)),
        par(contract, ids(Gs(dZ))),
        par(a_(XY), ids(Gs(dZ))),
        tail)))
    inner = seq(par(ids(G(X)), nb(YZ, dZ)), nb(X, YZ + dZ), gev(XY, Z, ()))
    chain.append(("Assoc", seq(
        par(ids(G(X), G(YZ)), cup(dZ)),
        par(inner, ids(Gs(dZ))),
        par(a_(XY), ids(Gs(dZ))),
        tail)))
    chain.append(("alpha^-1 alpha = id", seq(
        par(ids(G(X), G(YZ)), cup(dZ)),
        par(inner, ai(Z)))))
    # naturality of nabla: the contraction happens on the G(YZ) factor
    half = seq(par(ids(G(YZ)), cup(dZ)), par(nb(YZ, dZ), ids(Gs(dZ))),
               par(gev(Y, Z, ()), ids(Gs(dZ))))                       # G(YZ) -> GY G(Z^)*
    chain.append(("*", seq(par(ids(G(X)), half), par(nb(X, Y), ai(Z)))))
    chain.append(("alpha^-1 alpha = id, def alpha", seq(
        par(ids(G(X)), half),
        par(ids(G(X)), alpha_definition(Y), ids(Gs(dZ))),
        par(ids(G(X)), ai(Y), ai(Z)),
        par(nb(X, Y), ids(G(Z))))))
    yz_cups = seq(cup(dZ), par(ids(G(dZ)), cup(dY), ids(Gs(dZ))))
    chain.append(("*", seq(
        par(ids(G(X), G(YZ)), yz_cups),
        par(ids(G(X)), nb(YZ, dZ), ids(G(dY), Gs(dY), Gs(dZ))),
        par(ids(G(X)), nb(YZ + dZ, dY), ids(Gs(dY), Gs(dZ))),
        par(ids(G(X)), gev((), YZ, ()), ids(Gs(dY), Gs(dZ))),
        par(ids(G(X)), xi(), ai(Y), ai(Z)),
        par(nb(X, Y), ids(G(Z))))))
    unfolded = seq(alpha_definition(YZ), mate_of_nabla(dZ, dY), par(ai(Y), ai(Z)))
    chain.append(("Assoc, Dual", seq(par(ids(G(X)), unfolded), par(nb(X, Y), ids(G(Z))))))
    chain.append(("def alpha, def", seq(par(ids(G(X)), dl(Y, Z)), par(nb(X, Y), ids(G(Z))))))
    for _, t in chain:
        if t.src != src or t.tgt != (G(XY), G(Z)):
            raise dg.TypeMismatch("chain term has the wrong boundary")
    return chain


@dataclass
class ReplayReport:
    """Evaluated matrices per instance and join certificates per link."""
    tags: list
    joins: list                      # JoinCertificate or None, one per link
    values: dict                     # instance -> list of arrows, one per term
    degree_violations: list = field(default_factory=list)

    @property
    def constant(self) -> bool:
        return all(len({v for v in vals}) == 1 for vals in self.values.values())

    @property
    def joined(self) -> bool:
        return all(j is not None for j in self.joins)

    @property
    def ok(self) -> bool:
        return self.constant and self.joined and not self.degree_violations


def replay_main_proof(ctx: DualityContext, instances: Sequence | None = None,
                      max_steps: int = 2) -> ReplayReport:
    """Evaluate every term of :func:`frobenius_relation_chain` on each
    instance ``(X, Y, Z)`` of words of ``ctx`` and join consecutive terms
    by the rewrite rules within ``max_steps`` steps."""
    chain = frobenius_relation_chain()
    if instances is None:
        ws = ctx.words(1)
        instances = [(x, y, z) for x in ws for y in ws for z in ws]
    joins = []
    for (_, s), (_, t) in zip(chain, chain[1:]):
        try:
            joins.append(dg.join(s, t, bound=max_steps))
        except dg.BoundExhausted:
            joins.append(None)
    rep = ReplayReport([tag for tag, _ in chain[1:]], joins, {})
    for inst in instances:
        b = diagram_bindings(ctx, dict(zip("XYZ", inst)))
        vals = []
        for k, (_, t) in enumerate(chain):
            v = dg.diagram_eval(t, b)
            if v.degree != t.dmult * ctx.d:
                rep.degree_violations.append((inst, k, t.dmult * ctx.d, v.degree))
            vals.append(v)
        rep.values[tuple(inst)] = vals
    return rep
