"""Day convolution of dioperads over a rigid monoidal category.

Colors of ``Fun(C, D)`` are functors ``C -> D`` from a declared finite list.
A natural operation ``(F_1..F_n; G_1..G_m)`` is stored through the family

    phi(a, b, h) in D(F_1 a_1 ... F_n a_n ; G_1 b_1 ... G_m b_m)

for ``h: a_1...a_n -> b_1...b_m`` in C, required to be linear and natural
in every ``a_i`` and ``b_j`` (the rewriting law).  The component at a pair
``f: a -> x``, ``g: x -> b`` is ``phi(a, b, g o f)``, which makes the
dinaturality in ``x`` automatic; :func:`natural_operations` computes the
same spaces the long way, as a limit followed by an equalizer.

For rigid C the par of words is again the tensor, the distributors are
symmetries, and C's operations are taken in tensor form (``U C``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Sequence

from . import dioperad as dp
from . import moncat as mc
from . import vbase as vb
from .moncat import Arrow, MonCat, UOp
from .vbase import Mat


class ColorMismatch(ValueError):
    pass


class EqualizerViolation(AssertionError):
    """A constructed family is not natural; carries the failing data."""

    def __init__(self, where, detail):
        super().__init__(f"{where}: {detail}")
        self.where, self.detail = where, detail


def _concat(words) -> tuple:
    out = ()
    for w in words:
        out += tuple(w)
    return out


# ---------------------------------------------------------------------------
# functors

@dataclass(frozen=True)
class Functor:
    """A functor between word categories: ``obj`` on words, ``mor`` on arrows."""

    name: str
    obj: Callable = field(compare=False)
    mor: Callable = field(compare=False)

    def __repr__(self):
        return self.name


def identity_functor(C: MonCat, name: str = "Id") -> Functor:
    return Functor(name, lambda w: tuple(w), lambda f: f)


def shift_functor(C: MonCat, word, name: str | None = None) -> Functor:
    """x |-> x P and h |-> h (x) id_P."""
    word = tuple(word)
    return Functor(name or f"-{''.join(word)}", lambda w: tuple(w) + word,
                   lambda f: C.tensor(f, C.identity(word)))


def constant_functor(D: MonCat, word, name: str | None = None) -> Functor:
    """The functor out of a one-object category with value ``word``: the
    identity goes to the identity, so ``c id`` goes to ``c id``."""
    word = tuple(word)

    def mor(f: Arrow) -> Arrow:
        if f.src or f.tgt:
            raise ColorMismatch("a constant functor lives on the trivial category")
        c = f.mat[0, 0] if f.mat.nrows else 0
        return D.identity(word).scale(c)
    return Functor(name or f"[{''.join(word)}]", lambda w: word, mor)


def context_functor(ctx, name: str = "G") -> Functor:
    """The right adjoint of a duality context."""
    return Functor(name, ctx.adj.G, ctx.adj.G)


def trivial_category() -> mc.FreeModuleCat:
    """One object (the empty word) with endomorphisms Q."""
    return mc.vect_category({}, bound=0)


# ---------------------------------------------------------------------------
# natural operations

@dataclass
class NaturalOperation:
    sources: tuple
    targets: tuple
    phi: Callable = field(repr=False)
    degree: int = 0
    name: str = ""

    @property
    def profile(self):
        return tuple(f.name for f in self.sources), tuple(f.name for f in self.targets)

    def at(self, a, b, h: Arrow) -> UOp:
        """The D-operation attached to ``h: a_1...a_n -> b_1...b_m``."""
        a, b = tuple(map(tuple, a)), tuple(map(tuple, b))
        if h.src != _concat(a) or h.tgt != _concat(b):
            raise ColorMismatch(f"{h} does not go from {a} to {b}")
        return self.phi(a, b, h)

    def component(self, C: MonCat, a, b, f: Arrow, g: Arrow) -> UOp:
        """The component at ``f: a -> x``, ``g: x -> b``."""
        return self.at(a, b, C.compose(g, f))


class ConvolutionDioperad(dp.Dioperad):
    """Fun(C, D) for rigid C and D = U(D-category), over a finite list of
    functors.  Operations are :class:`NaturalOperation`; equality is tested
    on all in-universe data (words of ``universe``, hom bases capped at
    ``cap``)."""

    linear = True

    def __init__(self, C: MonCat, D: MonCat, functors: Sequence[Functor],
                 universe: Sequence | None = None, cap: int = 6):
        self.C, self.D = C, D
        self.functors = {F.name: F for F in functors}
        self.colors = tuple(self.functors)
        self.UC, self.UD = mc.UnderlyingDioperad(C), mc.UnderlyingDioperad(D)
        self.universe = [tuple(w) for w in (universe if universe is not None
                                            else C.objects(min(C.bound, 1)))]
        self.cap = cap

    def functor(self, F) -> Functor:
        if isinstance(F, Functor):
            return F
        if F not in self.functors:
            raise ColorMismatch(f"{F!r} is not a declared functor")
        return self.functors[F]

    def operation(self, sources, targets, phi, degree: int = 0, name: str = "") -> NaturalOperation:
        return NaturalOperation(tuple(map(self.functor, sources)),
                                tuple(map(self.functor, targets)), phi, degree, name)

    # -- the dioperad structure
    def profile(self, op: NaturalOperation):
        return op.profile

    def identity(self, color) -> NaturalOperation:
        F = self.functor(color)
        return NaturalOperation((F,), (F,), lambda a, b, h: UOp((F.obj(a[0]),), (F.obj(b[0]),),
                                                               F.mor(h)), 0, f"id[{F.name}]")

    def compose_edge(self, alpha: NaturalOperation, j: int, beta: NaturalOperation,
                     i: int) -> NaturalOperation:
        """Graft output j of ``alpha`` into input i of ``beta``.

        The component at ``h: a c -> b' d`` is computed through the
        factorisation ``h = (id_b' (x) g_h) o (f (x) id_c)`` along the shared
        object ``x = b'^ a``, with ``f = coev'_b' (x) id_a`` and
        ``g_h = (ev'_b' (x) id_d) o (id (x) h)``; by naturality any other
        factorisation gives the same value.
        """
        if alpha.targets[j].name != beta.sources[i].name:
            raise ColorMismatch(f"{alpha.targets[j]} vs {beta.sources[i]}")
        C, UD = self.C, self.UD
        n, m = len(alpha.sources), len(alpha.targets)

        def phi(a_all, b_all, h):
            a, c = a_all[:n], a_all[n:]
            bp, d = b_all[:m - 1], b_all[m - 1:]
            A, Bp, Dw = _concat(a), _concat(bp), _concat(d)
            x = C.dual(Bp) + A
            f = C.compose(C.permute_blocks(list(bp) + [x], _insert_last_at(m, j)),
                          C.tensor(C.coev_prime(Bp), C.identity(A)))
            g0 = C.compose(C.tensor(C.ev_prime(Bp), C.identity(Dw)),
                           C.tensor(C.identity(C.dual(Bp)), h))
            cs = list(c[:i]) + [x] + list(c[i:])
            g = C.compose(g0, C.permute_blocks(cs, _move_to_front(len(cs), i)))
            top = alpha.phi(a, tuple(bp[:j]) + (x,) + tuple(bp[j:]), f)
            bottom = beta.phi(tuple(cs), d, g)
            return UD.compose_edge(top, j, bottom, i)

        srcs = alpha.sources + beta.sources[:i] + beta.sources[i + 1:]
        tgts = alpha.targets[:j] + alpha.targets[j + 1:] + beta.targets
        return NaturalOperation(srcs, tgts, phi, alpha.degree + beta.degree,
                                f"({alpha.name} {j}>{i} {beta.name})")

    def act(self, op: NaturalOperation, in_perm=None, out_perm=None) -> NaturalOperation:
        """New input k is old input ``in_perm[k]`` (likewise outputs)."""
        C, UD = self.C, self.UD
        ip = list(range(len(op.sources))) if in_perm is None else list(in_perm)
        pp = list(range(len(op.targets))) if out_perm is None else list(out_perm)
        ip_inv, pp_inv = _inverse(ip), _inverse(pp)

        def phi(a_new, b_new, h):
            a_old = tuple(a_new[ip_inv[k]] for k in range(len(ip)))
            b_old = tuple(b_new[pp_inv[k]] for k in range(len(pp)))
            pre = C.permute_blocks(list(a_old), ip)
            post = C.permute_blocks(list(b_new), pp_inv)
            return UD.act(op.phi(a_old, b_old, C.compose_all(post, h, pre)), ip, pp)

        return NaturalOperation(tuple(op.sources[p] for p in ip),
                                tuple(op.targets[p] for p in pp), phi, op.degree, op.name)

    # -- comparison on test data
    def test_data(self, n: int, m: int, universe=None):
        """All ``(a, b, h)`` with words from the universe and h running over
        (at most ``cap`` elements of) the degree-0 hom basis."""
        U = self.universe if universe is None else [tuple(w) for w in universe]
        for a in product(U, repeat=n):
            for b in product(U, repeat=m):
                for h in self.C.hom_basis(_concat(a), _concat(b))[:self.cap]:
                    yield a, b, h

    def difference(self, x: NaturalOperation, y: NaturalOperation, universe=None):
        """First ``(a, b, h)`` where the two operations differ, or None."""
        if x.profile != y.profile:
            return ("profile", x.profile, y.profile)
        for a, b, h in self.test_data(len(x.sources), len(x.targets), universe):
            if x.phi(a, b, h) != y.phi(a, b, h):
                return (a, b, h)
        return None

    def equal(self, x, y) -> bool:
        return self.difference(x, y) is None

    def add(self, x: NaturalOperation, y: NaturalOperation) -> NaturalOperation:
        return NaturalOperation(x.sources, x.targets,
                                lambda a, b, h: self.UD.add(x.phi(a, b, h), y.phi(a, b, h)),
                                x.degree, f"{x.name}+{y.name}")

    def scale(self, x: NaturalOperation, c) -> NaturalOperation:
        return NaturalOperation(x.sources, x.targets,
                                lambda a, b, h: self.UD.scale(x.phi(a, b, h), c),
                                x.degree, f"{c}{x.name}")


def _inverse(perm) -> list:
    inv = [0] * len(perm)
    for k, p in enumerate(perm):
        inv[p] = k
    return inv


def _insert_last_at(n: int, k: int) -> list:
    """Block order putting the last of n blocks at position k."""
    order = list(range(n - 1))
    order.insert(k, n - 1)
    return order


def _move_to_front(n: int, k: int) -> list:
    """Block order putting block k first."""
    return [k] + [p for p in range(n) if p != k]


# ---------------------------------------------------------------------------
# the rewriting law

def naturality_failures(conv: ConvolutionDioperad, op: NaturalOperation,
                        universe=None, limit: int = 1) -> list:
    """Check the rewriting law against every basis morphism ``u`` between
    universe words, on every input and output slot:

        phi(a[k := a'], b, h o (id (x) u (x) id)) = phi(a, b, h) o (id (x) F_k u (x) id)
        phi(a, b[k := b'], (id (x) v (x) id) o h) = (id (x) G_k v (x) id) o phi(a, b, h)

    Returns up to ``limit`` witnesses ``(side, k, a, b, h, u)``.
    """
    C, D = conv.C, conv.D
    U = conv.universe if universe is None else [tuple(w) for w in universe]
    n, m = len(op.sources), len(op.targets)
    bad = []
    for a, b, h in conv.test_data(n, m, U):
        base = op.phi(a, b, h).arrow
        for k in range(n):
            for w in U:
                for u in C.hom_basis(w, a[k])[:conv.cap]:
                    a2 = a[:k] + (w,) + a[k + 1:]
                    hu = C.compose(h, C.tensor_all([C.identity(_concat(a[:k])), u,
                                                    C.identity(_concat(a[k + 1:]))]))
                    Fu = D.tensor_all([D.identity(_concat(F.obj(x) for F, x in zip(op.sources[:k], a[:k]))),
                                       op.sources[k].mor(u),
                                       D.identity(_concat(F.obj(x) for F, x in
                                                          zip(op.sources[k + 1:], a[k + 1:])))])
                    if op.phi(a2, b, hu).arrow != D.compose(base, Fu):
                        bad.append(("in", k, a, b, h, u))
                        if len(bad) >= limit:
                            return bad
        for k in range(m):
            for w in U:
                for v in C.hom_basis(b[k], w)[:conv.cap]:
                    b2 = b[:k] + (w,) + b[k + 1:]
                    vh = C.compose(C.tensor_all([C.identity(_concat(b[:k])), v,
                                                 C.identity(_concat(b[k + 1:]))]), h)
                    Gv = D.tensor_all([D.identity(_concat(G.obj(x) for G, x in zip(op.targets[:k], b[:k]))),
                                       op.targets[k].mor(v),
                                       D.identity(_concat(G.obj(x) for G, x in
                                                          zip(op.targets[k + 1:], b[k + 1:])))])
                    if op.phi(a, b2, vh).arrow != D.compose(Gv, base):
                        bad.append(("out", k, a, b, h, v))
                        if len(bad) >= limit:
                            return bad
    return bad


def check_operation(conv: ConvolutionDioperad, op: NaturalOperation, universe=None):
    """Raise :class:`EqualizerViolation` unless ``op`` is natural and of its
    declared degree on the test data."""
    bad = naturality_failures(conv, op, universe)
    if bad:
        raise EqualizerViolation(op.name or op.profile, bad[0])
    for a, b, h in conv.test_data(len(op.sources), len(op.targets), universe):
        arr = op.phi(a, b, h).arrow
        if conv.D.degree_violations(arr) or (not arr.is_zero() and arr.degree != op.degree + h.degree):
            raise EqualizerViolation(op.name or op.profile, ("degree", a, b, h, arr.degree))
    return op


# ---------------------------------------------------------------------------
# the spaces of natural operations, computed as limit then equalizer

def _coords(C: MonCat, f: Arrow, basis: list, cache: dict) -> tuple:
    key = (f.src, f.tgt, f.degree)
    if key not in cache:
        cols = [tuple(x for r in b.mat.rows for x in r) for b in basis]
        cache[key] = vb.columns_to_mat(cols, f.mat.nrows * f.mat.ncols) if cols else None
    M = cache[key]
    if M is None:
        if not f.is_zero():
            raise ValueError(f"{f} is not in the span of an empty basis")
        return ()
    x = vb.solve(M, [v for r in f.mat.rows for v in r])
    if x is None:
        raise ValueError(f"{f} is not in the span of the hom basis")
    return x


@dataclass
class NatOpSpace:
    """A basis of natural operations of one biprofile, as vectors over the
    component unknowns ``(x, a, b, k, l, r, c)``: entry (r, c) of the
    component at the k-th basis morphism a -> x and the l-th x -> b."""

    sources: tuple
    targets: tuple
    degree: int
    variables: list
    basis: list
    limit_dim: int
    universe: list

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, vec) -> bool:
        if not self.basis:
            return not any(vec)
        return vb.solve(vb.columns_to_mat(self.basis, len(self.variables)), vec) is not None

    def component(self, vec, x, a, b, k, l, D: MonCat, src, tgt) -> Arrow:
        entries = {(r, c): vec[i] for i, (x_, a_, b_, k_, l_, r, c) in enumerate(self.variables)
                   if (x_, a_, b_, k_, l_) == (x, a, b, k, l) and vec[i]}
        return Arrow(src, tgt, Mat.from_entries(D.dim(tgt), D.dim(src), entries), self.degree)


def natural_operations(conv: ConvolutionDioperad, sources, targets, degree: int = 0,
                       universe=None) -> NatOpSpace:
    """Natural operations ``(sources; targets)`` of the given degree, with
    objects ``x, a_i, b_j`` restricted to the universe.

    Unknowns are the entries of the components ``alpha^x_{f,g}`` at basis
    morphisms; the limit imposes naturality in each ``a_i`` and ``b_j``, the
    equalizer the dinaturality ``alpha^y_{f, g h} = alpha^z_{h f, g}``.
    """
    C, D = conv.C, conv.D
    srcs, tgts = tuple(map(conv.functor, sources)), tuple(map(conv.functor, targets))
    U = conv.universe if universe is None else [tuple(w) for w in universe]
    n, m = len(srcs), len(tgts)
    hb = {}

    def hom(x, y):
        if (x, y) not in hb:
            hb[(x, y)] = C.hom_basis(x, y)
        return hb[(x, y)]

    def fa(a):
        return _concat(F.obj(w) for F, w in zip(srcs, a))

    def gb(b):
        return _concat(G.obj(w) for G, w in zip(tgts, b))

    index, variables = {}, []
    for x in U:
        for a in product(U, repeat=n):
            for b in product(U, repeat=m):
                sd, td = D.space(fa(a)).degrees, D.space(gb(b)).degrees
                for k in range(len(hom(_concat(a), x))):
                    for l in range(len(hom(x, _concat(b)))):
                        for r in range(len(td)):
                            for c in range(len(sd)):
                                if td[r] == sd[c] + degree:
                                    index[(x, a, b, k, l, r, c)] = len(variables)
                                    variables.append((x, a, b, k, l, r, c))
    N = len(variables)
    cache = {}
    groups = {}
    for key, i in index.items():
        groups.setdefault(key[:5], []).append((key[5:], i))

    def expand(x, a, b, f, g):
        """The component at arbitrary (f, g) as {(r, c): {var: coeff}}."""
        fc = _coords(C, f, hom(_concat(a), x), cache)
        gc_ = _coords(C, g, hom(x, _concat(b)), cache)
        out = {}
        for k, p in enumerate(fc):
            if not p:
                continue
            for l, q in enumerate(gc_):
                if not q:
                    continue
                for key, i in groups.get((x, a, b, k, l), ()):
                    out.setdefault(key, {})
                    out[key][i] = out[key].get(i, 0) + p * q
        return out

    limit_rows, eq_rows = [], []

    def add_row(rows, lhs: dict, rhs: dict):
        keys = set(lhs) | set(rhs)
        for key in keys:
            row = dict(lhs.get(key, {}))
            for i, v in rhs.get(key, {}).items():
                row[i] = row.get(i, 0) - v
            row = {i: v for i, v in row.items() if v}
            if row:
                rows.append(row)

    def times_right(comp: dict, M: Mat) -> dict:
        # (X M)_{rc} = sum_s X_{rs} M_{sc}
        out = {}
        for (r, s), row in comp.items():
            for c in range(M.ncols):
                if M[s, c]:
                    tgt = out.setdefault((r, c), {})
                    for i, v in row.items():
                        tgt[i] = tgt.get(i, 0) + v * M[s, c]
        return out

    def times_left(M: Mat, comp: dict) -> dict:
        out = {}
        for (s, c), row in comp.items():
            for r in range(M.nrows):
                if M[r, s]:
                    tgt = out.setdefault((r, c), {})
                    for i, v in row.items():
                        tgt[i] = tgt.get(i, 0) + M[r, s] * v
        return out

    # the limit: naturality in each a_i and b_j
    for x in U:
        for a in product(U, repeat=n):
            for b in product(U, repeat=m):
                fs, gs = hom(_concat(a), x), hom(x, _concat(b))
                for f in fs:
                    for g in gs:
                        comp = expand(x, a, b, f, g)
                        for k in range(n):
                            for w in U:
                                a2 = a[:k] + (w,) + a[k + 1:]
                                for u in hom(w, a[k]):
                                    uu = C.tensor_all([C.identity(_concat(a[:k])), u,
                                                       C.identity(_concat(a[k + 1:]))])
                                    Fu = D.tensor_all([D.identity(fa(a[:k]) if k else ()),
                                                       srcs[k].mor(u),
                                                       D.identity(_concat(F.obj(y) for F, y in
                                                                          zip(srcs[k + 1:], a[k + 1:])))])
                                    add_row(limit_rows, expand(x, a2, b, C.compose(f, uu), g),
                                            times_right(comp, Fu.mat))
                        for k in range(m):
                            for w in U:
                                b2 = b[:k] + (w,) + b[k + 1:]
                                for v in hom(b[k], w):
                                    vv = C.tensor_all([C.identity(_concat(b[:k])), v,
                                                       C.identity(_concat(b[k + 1:]))])
                                    Gv = D.tensor_all([D.identity(_concat(G.obj(y) for G, y in
                                                                          zip(tgts[:k], b[:k]))),
                                                       tgts[k].mor(v),
                                                       D.identity(_concat(G.obj(y) for G, y in
                                                                          zip(tgts[k + 1:], b[k + 1:])))])
                                    add_row(limit_rows, expand(x, a, b2, f, C.compose(vv, g)),
                                            times_left(Gv.mat, comp))
    # the equalizer: dinaturality in x
    for y in U:
        for z in U:
            for h in hom(y, z):
                for a in product(U, repeat=n):
                    for b in product(U, repeat=m):
                        for f in hom(_concat(a), y):
                            for g in hom(z, _concat(b)):
                                add_row(eq_rows, expand(y, a, b, f, C.compose(g, h)),
                                        expand(z, a, b, C.compose(h, f), g))

    def as_map(rows):
        return vb.LinearMap(vb.RatVect(N), vb.RatVect(len(rows)),
                            Mat.from_entries(len(rows), N, {(r, i): v for r, row in enumerate(rows)
                                                            for i, v in row.items()}))

    def zero_map(rows):
        return vb.LinearMap(vb.RatVect(N), vb.RatVect(len(rows)), Mat.zeros(len(rows), N))

    # limit: the equalizer of (s - t) and 0 on the product of component
    # spaces; the redundant constraint rows are first reduced sparsely
    limit_rows = vb.sparse_row_basis(limit_rows)
    lim, inc = vb.equalizer(as_map(limit_rows), zero_map(limit_rows))
    eq_rows = vb.sparse_row_basis(eq_rows)
    s_t = as_map(eq_rows)
    on_lim = vb.LinearMap(lim, s_t.target, s_t.mat @ inc.mat)
    eq, inc2 = vb.equalizer(on_lim, vb.LinearMap(lim, s_t.target, Mat.zeros(len(eq_rows), lim.dim)))
    B = inc.mat @ inc2.mat
    basis = [B.column(j) for j in range(B.ncols)]
    return NatOpSpace(srcs, tgts, degree, variables, basis, lim.dim, list(U))



# ---------------------------------------------------------------------------
# sample operations

def _tail(F: Functor) -> tuple:
    return F.obj(())


def decorated_operation(conv: ConvolutionDioperad, sources, targets, M: Arrow,
                        name: str = "") -> NaturalOperation:
    """For functors of the form ``x |-> x P`` (the identity has P = ()):
    ``phi(h) = shuffle o (h (x) M) o unshuffle`` with ``M: P_1..P_n -> Q_1..Q_m``
    acting on the decorations.  Natural in every slot, of degree ``M.degree``."""
    srcs, tgts = tuple(map(conv.functor, sources)), tuple(map(conv.functor, targets))
    D = conv.D
    P = [_tail(F) for F in srcs]
    Q = [_tail(G) for G in tgts]
    if M.src != _concat(P) or M.tgt != _concat(Q):
        raise ColorMismatch(f"{M} does not act on the decorations {P} -> {Q}")

    def phi(a, b, h):
        n, m = len(a), len(b)
        # a1 P1 a2 P2 ... -> a1 a2 ... P1 P2 ...
        blocks_in = [w for pair in zip(a, P) for w in pair]
        pre = D.permute_blocks(blocks_in, [2 * k for k in range(n)] + [2 * k + 1 for k in range(n)])
        blocks_out = list(b) + Q
        post = D.permute_blocks(blocks_out, [p for k in range(m) for p in (k, m + k)])
        arrow = D.compose_all(post, D.tensor(h, M), pre)
        return UOp(tuple(F.obj(w) for F, w in zip(srcs, a)),
                   tuple(G.obj(w) for G, w in zip(tgts, b)), arrow)

    return NaturalOperation(srcs, tgts, phi, M.degree, name or "dec")


# ---------------------------------------------------------------------------
# evaluation

def ev(op: NaturalOperation, h: UOp) -> UOp:
    """The evaluation ``Fun(C, D) (x) U C -> U D``: the component of ``op``
    at ``(id, h)``, i.e. at x = the tensor of the inputs."""
    return op.at(h.ins, h.outs, h.arrow)


def ev_composition_failure(conv: ConvolutionDioperad, alpha, j: int, beta, i: int,
                     f: UOp, g: UOp):
    """Compare ``ev(alpha o_L beta, f o_x g)`` with ``ev(alpha, f) o ev(beta, g)``
    (output j of the first into input i of the second on both sides).
    Returns None or the pair of differing values."""
    lhs = ev(conv.compose_edge(alpha, j, beta, i), conv.UC.compose_edge(f, j, g, i))
    rhs = conv.UD.compose_edge(ev(alpha, f), j, ev(beta, g), i)
    return None if lhs == rhs else (lhs, rhs)


# ---------------------------------------------------------------------------
# the universal property for O -> Fun(C, D)

def Phi(rho: dp.DioperadMorphism) -> Callable:
    """A map O -> Fun(C, D) gives ``(o, h) |-> ev(rho(o), h)`` on O (x) U C."""
    return lambda o, h: ev(rho(o), h)


def Psi(conv: ConvolutionDioperad, phi_map: Callable, color_functor: Callable,
        O) -> dp.DioperadMorphism:
    """A map ``phi_map: O (x) U C -> U D`` gives O -> Fun(C, D) with
    ``Psi(o)_{f, g} = phi_map(o, g o f)``; ``color_functor(p)`` names the
    declared functor ``phi_map(p, -)``."""

    def on_op(o):
        ins, outs = O.profile(o)

        def phi(a, b, h):
            return phi_map(o, UOp(a, b, h))
        return NaturalOperation(tuple(conv.functor(color_functor(p)) for p in ins),
                                tuple(conv.functor(color_functor(p)) for p in outs), phi,
                                name=f"Psi({o})")
    return dp.DioperadMorphism(O, conv, color_functor, on_op)


def functor_of(conv: ConvolutionDioperad, phi_map: Callable, O, p, name: str) -> Functor:
    """The functor ``phi_map(id_p, -)`` on words and morphisms."""
    idp = O.identity(p)

    def mor(u: Arrow) -> Arrow:
        return phi_map(idp, UOp((u.src,), (u.tgt,), u)).arrow

    def obj(w):
        return mor(conv.C.identity(tuple(w))).src
    return Functor(name, obj, mor)


def psi_transformation(conv: ConvolutionDioperad, components: Callable, F, G,
                       degree: int = 0) -> NaturalOperation:
    """A family ``t_x: F x -> G x`` as a unary natural operation
    ``phi(h) = G(h) o t_a``."""
    F, G = conv.functor(F), conv.functor(G)

    def phi(a, b, h):
        return UOp((F.obj(a[0]),), (G.obj(b[0]),), conv.D.compose(G.mor(h), components(a[0])))
    return NaturalOperation((F,), (G,), phi, degree, "t")


def phi_transformation(conv: ConvolutionDioperad, op: NaturalOperation) -> Callable:
    """The components ``x |-> op(id_x)`` of a unary natural operation."""
    return lambda x: op.phi((tuple(x),), (tuple(x),), conv.C.identity(tuple(x))).arrow


# ---------------------------------------------------------------------------
# the Frobenius algebra induced by a duality context

@dataclass
class ContextFrobenius:
    """G with product, unit, counit and copairing as natural operations in
    Fun(C, U D), and the derived pairing ``chi = eps o mu`` and coproduct."""

    ctx: object
    conv: ConvolutionDioperad
    G: Functor
    mu: NaturalOperation
    eta: NaturalOperation
    eps: NaturalOperation
    gamma: NaturalOperation

    @property
    def chi(self) -> NaturalOperation:
        return self.conv.compose_edge(self.mu, 0, self.eps, 0)

    @property
    def coproduct(self) -> NaturalOperation:
        """Copairing followed by multiplication into its first leg."""
        return self.conv.compose_edge(self.gamma, 0, self.mu, 1)

    def morphism(self) -> dp.DioperadMorphism:
        """Frob -> Fun(C, U D) determined by mu, eta, delta, eps."""
        images = {"mu": self.mu, "eta": self.eta, "eps": self.eps, "delta": self.coproduct}
        return dp.from_generators(FROB, self.conv, {FROB.color: self.G.name}, images)

    def snake_failures(self, universe=None) -> list:
        """The two composites of chi with gamma along one leg must be the
        identity of G."""
        conv, idG = self.conv, self.conv.identity(self.G.name)
        bad = []
        for j, i in [(1, 0), (0, 1)]:
            w = conv.difference(conv.compose_edge(self.gamma, j, self.chi, i), idG, universe)
            if w is not None:
                bad.append(((j, i), w))
        return bad


FROB = dp.FrobDioperad()


def frobenius_from_context(ctx, universe=None, cap: int = 4) -> ContextFrobenius:
    """Product ``G(h) o nabla``, unit ``G(h) o nabla0``, counit ``xi o G(h)``
    (degree -d) and copairing (degree d): for ``h: 1 -> b1 b2`` the composite

        1 -> G(b1) G(b1^) . G(b1 b2) . G(b2) G(b2^)        kappa', G(h) o nabla0, kappa'
          -> G(b1) G(b2) G(b2^) G(b1^) G(b1 b2)             reorder
          -> G(b1) G(b2) G((b1 b2)^) G(b1 b2) -> G(b1) G(b2)   nabla, then beta'

    where ``kappa'`` and ``beta'`` are the copairing and pairing of the
    orientation with the legs in this order.  Refuses a degenerate
    orientation.
    """
    from . import duality as du
    rep = du.check_orientation(ctx)
    if not rep.ok:
        raise du.OrientationRequired(f"degenerate at {rep.degenerate[:3]}")
    C, D, G_ = ctx.C, ctx.D, ctx.adj.G
    G = context_functor(ctx)
    if universe is None:
        universe = ctx.words(1)
    conv = ConvolutionDioperad(C, D, [G], universe, cap)
    nab0 = du.nabla0(ctx)

    def mu(a, b, h):
        return UOp((G_(a[0]), G_(a[1])), (G_(b[0]),),
                   D.compose(G_(h), du.nabla(ctx, a[0], a[1])))

    def eta(a, b, h):
        return UOp((), (G_(b[0]),), D.compose(G_(h), nab0))

    def eps(a, b, h):
        return UOp((G_(a[0]),), (), D.compose(du._xi(ctx, ()), G_(h)))

    def kappa_prime(x):
        return D.compose(D.braid(G_(C.dual(x)), G_(x)), du.kappa(ctx, x))

    def gamma(a, b, h):
        b1, b2 = b
        gb1, gb2, gd1, gd2 = G_(b1), G_(b2), G_(C.dual(b1)), G_(C.dual(b2))
        g12 = G_(b1 + b2)
        start = D.tensor_all([kappa_prime(b1), D.compose(G_(h), nab0), kappa_prime(b2)])
        reorder = D.permute_blocks([gb1, gd1, g12, gb2, gd2], [0, 3, 4, 1, 2])
        merge = D.tensor_all([D.identity(gb1 + gb2), du.nabla(ctx, C.dual(b2), C.dual(b1)),
                              D.identity(g12)])
        pair = D.compose(du.beta(ctx, b1 + b2), D.braid(G_(C.dual(b1 + b2)), g12))
        close = D.tensor(D.identity(gb1 + gb2), pair)
        return UOp((), (gb1, gb2), D.compose_all(close, merge, reorder, start))

    d = ctx.d
    return ContextFrobenius(ctx, conv, G,
                            conv.operation(["G", "G"], ["G"], mu, 0, "mu"),
                            conv.operation([], ["G"], eta, 0, "eta"),
                            conv.operation(["G"], [], eps, -d, "eps"),
                            conv.operation([], ["G", "G"], gamma, d, "gamma"))


def frob_ops(max_arity: int = 3) -> list:
    """Frob operations (m; n) with m + n <= max_arity and n >= 0."""
    return [dp.FrobOp(m, n, FROB.color) for m in range(max_arity + 1)
            for n in range(max_arity + 1 - m)]


def duality_route_differences(cf: ContextFrobenius, max_arity: int = 3,
                              universe=None) -> list:
    """Compare the convolution route ``ev(rho(o), h)`` with the duality
    route ``Delta o G(h) o nabla`` on every Frob operation up to the given
    arity and every test datum; returns the differing cases."""
    from . import duality as du
    data = du.frobenius_data(cf.ctx)
    rho = cf.morphism()
    bad = []
    for o in frob_ops(max_arity):
        if o.m + o.n == 0:
            continue
        op = rho(o)
        for a, b, h in cf.conv.test_data(o.m, o.n, universe):
            got = op.phi(a, b, h).arrow
            want = data.box(a, b, h)
            if got != want or got.degree != want.degree:
                bad.append(((o.m, o.n), a, b, h))
    return bad


@dataclass
class RoundTripReport:
    """Outcome of the Phi/Psi comparison on enumerated data."""

    phi_psi: list = field(default_factory=list)      # Phi(Psi(phi)) != phi
    psi_phi: list = field(default_factory=list)      # Psi(Phi(rho)) != rho
    psi_morphism: list = field(default_factory=list)  # Psi(phi) fails to respect composition
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not (self.phi_psi or self.psi_phi or self.psi_morphism)


def universal_property_round_trip(conv: ConvolutionDioperad, phi_map: Callable,
                                  rho: dp.DioperadMorphism, color_functor: Callable,
                                  O=FROB, max_arity: int = 3) -> RoundTripReport:
    """Check ``Phi(Psi(phi_map)) = phi_map`` and ``Psi(Phi(rho)) = rho`` on
    the Frob operations up to ``max_arity``, and that ``Psi(phi_map)``
    respects single-edge composition of those operations."""
    rep = RoundTripReport()
    psi = Psi(conv, phi_map, color_functor, O)
    back = Phi(psi)
    rho_again = Psi(conv, Phi(rho), color_functor, O)
    ops = [o for o in frob_ops(max_arity) if o.m + o.n]
    for o in ops:
        for a, b, h in conv.test_data(o.m, o.n):
            hop = UOp(a, b, h)
            rep.checked += 1
            if back(o, hop) != phi_map(o, hop):
                rep.phi_psi.append((o, a, b, h))
        w = conv.difference(rho_again(o), rho(o))
        if w is not None:
            rep.psi_phi.append((o, w))
    for o1 in ops:
        for o2 in ops:
            if o1.n == 0 or o2.m == 0 or o1.m + o2.m - 1 + o1.n + o2.n - 1 > max_arity:
                continue
            lhs = psi(O.compose_edge(o1, 0, o2, 0))
            rhs = conv.compose_edge(psi(o1), 0, psi(o2), 0)
            w = conv.difference(lhs, rhs)
            if w is not None:
                rep.psi_morphism.append((o1, o2, w))
    return rep


def components_of(conv: ConvolutionDioperad, space: NatOpSpace, op: NaturalOperation) -> tuple:
    """The vector of components ``alpha^x_{f_k, g_l} = phi(g_l o f_k)`` of a
    stored operation, in the coordinates of ``space``; membership in the
    space is the equalizer condition."""
    C = conv.C
    vec = []
    homs = {}
    for (x, a, b, k, l, r, c) in space.variables:
        key = (x, a, b, k, l)
        if key not in homs:
            f = C.hom_basis(_concat(a), x)[k]
            g = C.hom_basis(x, _concat(b))[l]
            homs[key] = op.phi(a, b, C.compose(g, f)).arrow.mat
        vec.append(homs[key][r, c])
    return tuple(vec)
