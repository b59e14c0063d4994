"""Strict symmetric monoidal matrix categories.

Objects are words (tuples) over a finite set of generator names; the
tensor product is concatenation and the unit is the empty word.  A
morphism is an :class:`Arrow`: a rational matrix acting on the underlying
graded vector spaces, together with its degree.

Two families are bundled:

* :class:`FreeModuleCat` -- finitely generated free graded modules over a
  commutative Frobenius algebra A, with A-linear maps.  Over A = Q this is
  the category of finite-dimensional graded vector spaces.
* :class:`PermutationCategory` -- finite ordinals and bijections.

Rigid categories have word duals ``(x1 ... xn)^ = xn^ ... x1^``,
evaluations ``ev_X: X X^ -> 1`` and coevaluations ``coev_X: 1 -> X^ X``.
The second tensor product is ``X par Y = (X^ Y^)^ = Y X``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from . import vbase as vb
from .vbase import GradedVect, Mat, ShapeMismatch


class BoundExceeded(ValueError):
    pass


class NotRigid(TypeError):
    pass


@dataclass(frozen=True)
class Arrow:
    src: tuple
    tgt: tuple
    mat: Mat
    degree: int = 0

    def __repr__(self):
        return f"Arrow({' '.join(self.src) or '1'} -> {' '.join(self.tgt) or '1'}, deg {self.degree})"

    def is_zero(self) -> bool:
        return self.mat.is_zero()

    def scale(self, c) -> "Arrow":
        return Arrow(self.src, self.tgt, self.mat.scale(c), self.degree)

    def __add__(self, other: "Arrow") -> "Arrow":
        if (self.src, self.tgt) != (other.src, other.tgt):
            raise ShapeMismatch("adding arrows of different type")
        return Arrow(self.src, self.tgt, self.mat + other.mat, self.degree)

    def __sub__(self, other: "Arrow") -> "Arrow":
        return self + other.scale(-1)


def perm_of_blocks(sizes: Sequence[int], order: Sequence[int]) -> list:
    """Index permutation for rearranging tensor blocks.

    Blocks of the given sizes are laid out lexicographically (first block
    most significant).  The result sends the flat index of a basis tensor
    in the old layout to its flat index in the layout whose k-th block is
    old block ``order[k]``.
    """
    new_sizes = [sizes[o] for o in order]
    out = []
    for idx in product(*(range(s) for s in sizes)):
        new_idx = [idx[o] for o in order]
        flat = 0
        for s, i in zip(new_sizes, new_idx):
            flat = flat * s + i
        out.append(flat)
    return out


# ---------------------------------------------------------------------------
# commutative Frobenius algebras

@dataclass(frozen=True)
class FrobeniusAlgebra:
    """Graded commutative Frobenius algebra with a chosen basis.

    ``mult[i][j]`` is the coefficient vector of ``a_i a_j``; ``unit`` and
    ``trace`` are vectors; ``trace`` has degree ``-d``.
    """

    name: str
    degrees: tuple
    mult: tuple
    unit: tuple
    trace: tuple
    d: int = 0

    @property
    def dim(self) -> int:
        return len(self.degrees)

    def mul(self, u: Sequence, v: Sequence) -> tuple:
        out = [Fraction(0)] * self.dim
        for i, a in enumerate(u):
            if a:
                for j, b in enumerate(v):
                    if b:
                        for k, c in enumerate(self.mult[i][j]):
                            if c:
                                out[k] += a * b * c
        return tuple(out)

    def basis_vec(self, k: int) -> tuple:
        return tuple(Fraction(int(i == k)) for i in range(self.dim))

    def pairing_matrix(self) -> Mat:
        return Mat.from_rows([[sum(c * t for c, t in zip(self.mult[i][j], self.trace))
                               for j in range(self.dim)] for i in range(self.dim)])

    def mult_mat(self) -> Mat:
        n = self.dim
        return Mat.from_entries(n, n * n, {(k, i * n + j): self.mult[i][j][k]
                                           for i in range(n) for j in range(n) for k in range(n)
                                           if self.mult[i][j][k]})

    def check(self) -> list:
        """Associativity, commutativity, unit, homogeneity and a
        non-degenerate trace pairing; returns a list of failures."""
        bad = []
        n = self.dim
        e = [self.basis_vec(i) for i in range(n)]
        for i, j, k in product(range(n), repeat=3):
            if self.mul(self.mul(e[i], e[j]), e[k]) != self.mul(e[i], self.mul(e[j], e[k])):
                bad.append(("assoc", i, j, k))
        for i, j in product(range(n), repeat=2):
            if self.mult[i][j] != self.mult[j][i]:
                bad.append(("comm", i, j))
            for k, c in enumerate(self.mult[i][j]):
                if c and self.degrees[k] != self.degrees[i] + self.degrees[j]:
                    bad.append(("degree", i, j, k))
        for i in range(n):
            if self.mul(self.unit, e[i]) != e[i]:
                bad.append(("unit", i))
            if self.trace[i] and self.degrees[i] != self.d:
                bad.append(("trace-degree", i))
        if any(self.unit[i] and self.degrees[i] != 0 for i in range(n)):
            bad.append(("unit-degree",))
        if self.pairing_matrix().rank() != n:
            bad.append(("degenerate",))
        return bad


def _alg(name, degrees, table, unit, trace, d=0):
    n = len(degrees)
    mult = tuple(tuple(tuple(Fraction(table.get((i, j), {}).get(k, 0)) for k in range(n))
                       for j in range(n)) for i in range(n))
    return FrobeniusAlgebra(name, tuple(degrees), mult, tuple(map(Fraction, unit)),
                            tuple(map(Fraction, trace)), d)


def ground_field() -> FrobeniusAlgebra:
    return _alg("Q", (0,), {(0, 0): {0: 1}}, (1,), (1,))


def dual_numbers(d: int = 0) -> FrobeniusAlgebra:
    """Q[x]/x^2 with |x| = d and trace picking the x coefficient."""
    return _alg(f"Q[x]/x^2(|x|={d})", (0, d),
                {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}}, (1, 0), (0, 1), d)


def split_pair() -> FrobeniusAlgebra:
    """Q x Q with componentwise product and trace (a, b) -> a + b."""
    return _alg("QxQ", (0, 0), {(0, 0): {0: 1}, (1, 1): {1: 1}}, (1, 1), (1, 1))


ALGEBRAS = {"Q": ground_field, "dual_numbers": dual_numbers, "split_pair": split_pair}


# ---------------------------------------------------------------------------
# the abstract interface

class MonCat:
    """Strict symmetric monoidal category on words.

    Subclasses supply ``space``, ``tensor_arrows``, ``permute`` and
    ``hom_basis``; rigid subclasses add ``dual_gen``, ``ev`` and ``coev``.
    """

    generators: tuple = ()
    bound: int = 3
    rigid: bool = False

    # objects
    def space(self, word) -> GradedVect:
        raise NotImplementedError

    def dim(self, word) -> int:
        return self.space(word).dim

    def objects(self, bound: int | None = None) -> list:
        b = self.bound if bound is None else bound
        return [w for n in range(b + 1) for w in product(self.generators, repeat=n)]

    def check_bound(self, *words):
        for w in words:
            if len(w) > self.bound:
                raise BoundExceeded(f"word {w} longer than bound {self.bound}")

    # morphisms
    def identity(self, word) -> Arrow:
        word = tuple(word)
        return Arrow(word, word, Mat.identity(self.dim(word)))

    def compose(self, g: Arrow, f: Arrow) -> Arrow:
        """g after f."""
        if f.tgt != g.src:
            raise ShapeMismatch(f"cannot compose {g} after {f}")
        return Arrow(f.src, g.tgt, g.mat @ f.mat, f.degree + g.degree)

    def compose_all(self, *arrows: Arrow) -> Arrow:
        """compose_all(h, g, f) = h after g after f."""
        out = arrows[-1]
        for a in reversed(arrows[:-1]):
            out = self.compose(a, out)
        return out

    def tensor(self, f: Arrow, g: Arrow) -> Arrow:
        return Arrow(f.src + g.src, f.tgt + g.tgt, self.tensor_arrows(f, g), f.degree + g.degree)

    def tensor_all(self, arrows: Sequence[Arrow]) -> Arrow:
        out = self.identity(())
        for a in arrows:
            out = self.tensor(out, a)
        return out

    def tensor_arrows(self, f: Arrow, g: Arrow) -> Mat:
        raise NotImplementedError

    def permute(self, word, order: Sequence[int]) -> Arrow:
        """Symmetry ``word -> tuple(word[o] for o in order)``."""
        raise NotImplementedError

    def permute_blocks(self, words: Sequence[tuple], order: Sequence[int]) -> Arrow:
        """Symmetry moving whole subwords: block k of the target is
        ``words[order[k]]``.  Results are cached per category."""
        words, order = tuple(map(tuple, words)), tuple(order)
        cache = self.__dict__.setdefault("_block_perm_cache", {})
        key = (words, order)
        if key in cache:
            return cache[key]
        starts, flat = [], []
        for w in words:
            starts.append(len(flat))
            flat.extend(range(len(flat), len(flat) + len(w)))
        idx = []
        for o in order:
            idx.extend(range(starts[o], starts[o] + len(words[o])))
        out = cache[key] = self.permute(sum(words, ()), idx)
        return out

    def braid(self, x, y) -> Arrow:
        return self.permute_blocks([tuple(x), tuple(y)], [1, 0])

    def hom_basis(self, x, y, degree: int = 0) -> list:
        raise NotImplementedError

    def hom_dim(self, x, y, degree: int = 0) -> int:
        return len(self.hom_basis(x, y, degree))

    def degree_violations(self, f: Arrow) -> list:
        return vb.degree_violations(f.mat, self.space(f.src).degrees,
                                    self.space(f.tgt).degrees, f.degree)

    def zero(self, x, y, degree: int = 0) -> Arrow:
        return Arrow(tuple(x), tuple(y), Mat.zeros(self.dim(y), self.dim(x)), degree)

    # rigid structure
    def dual_gen(self, g):
        raise NotRigid(type(self).__name__)

    def dual(self, word) -> tuple:
        return tuple(self.dual_gen(g) for g in reversed(tuple(word)))

    def ev(self, word) -> Arrow:
        raise NotRigid(type(self).__name__)

    def coev(self, word) -> Arrow:
        raise NotRigid(type(self).__name__)

    def coev_prime(self, word) -> Arrow:
        """1 -> X X^, the coevaluation followed by the symmetry."""
        word = tuple(word)
        return self.compose(self.braid(self.dual(word), word), self.coev(word))

    def ev_prime(self, word) -> Arrow:
        """X^ X -> 1, the evaluation precomposed with the symmetry."""
        word = tuple(word)
        return self.compose(self.ev(word), self.braid(self.dual(word), word))

    # linearly distributive structure
    def par(self, x, y) -> tuple:
        """X par Y := (X^ Y^)^, which on words is Y X."""
        return tuple(y) + tuple(x)

    def par_all(self, words: Sequence) -> tuple:
        out = ()
        for w in words:
            out = self.par(out, w)
        return out

    def delta(self, x, y, z) -> Arrow:
        """Distributor X (Y par Z) -> (X Y) par Z, i.e. X Z Y -> Z X Y."""
        x, y, z = tuple(x), tuple(y), tuple(z)
        return self.permute_blocks([x, z, y], [1, 0, 2])

    def sharp(self, f: Arrow, x, y) -> Arrow:
        """C(X Y, Z) -> C(X, Y^ par Z):  (f (x) id) o (id (x) coev')."""
        x, y = tuple(x), tuple(y)
        if f.src != x + y:
            raise ShapeMismatch(f"{f} does not start at {x} {y}")
        yd = self.dual(y)
        step = self.tensor(self.identity(x), self.coev_prime(y))
        return self.compose(self.tensor(f, self.identity(yd)), step)

    def flat(self, g: Arrow, x, y) -> Arrow:
        """Inverse of :meth:`sharp`: (id_Z (x) ev_{Y^}) o (g (x) id_Y)."""
        x, y = tuple(x), tuple(y)
        yd = self.dual(y)
        if g.src != x or g.tgt[len(g.tgt) - len(yd):] != yd:
            raise ShapeMismatch(f"{g} is not of the form {x} -> Z {yd}")
        z = g.tgt[:len(g.tgt) - len(yd)]
        step = self.tensor(g, self.identity(y))
        return self.compose(self.tensor(self.identity(z), self.ev(yd)), step)


# ---------------------------------------------------------------------------
# free graded modules over a commutative Frobenius algebra

@dataclass
class FreeModuleCat(MonCat):
    """Free graded A-modules and A-linear maps.

    ``gens`` maps a generator name to the tuple of degree shifts of its
    basis.  Every generator gets a dual named ``name + "*"`` with negated
    shifts.  The underlying vector space of a word has basis
    ``a_k e_I`` (multi-index I major, algebra index k minor) in degree
    ``shift(I) + |a_k|``.
    """

    algebra: FrobeniusAlgebra
    gens: dict
    bound: int = 3
    name: str = ""
    rigid: bool = field(default=True, init=False)

    def __post_init__(self):
        full = dict(self.gens)
        for g, sh in self.gens.items():
            if not g.endswith("*"):
                full.setdefault(g + "*", tuple(-s for s in sh))
        self.shifts = {g: tuple(s) for g, s in full.items()}
        self.generators = tuple(full)
        self._space_cache = {}

    # words
    def shifts_of(self, word) -> tuple:
        out = (0,)
        for g in word:
            out = tuple(a + b for a in out for b in self.shifts[g])
        return out

    def rank(self, word) -> int:
        return len(self.shifts_of(word))

    def space(self, word) -> GradedVect:
        word = tuple(word)
        if word not in self._space_cache:
            A = self.algebra
            self._space_cache[word] = GradedVect(
                tuple(s + a for s in self.shifts_of(word) for a in A.degrees))
        return self._space_cache[word]

    def dual_gen(self, g):
        return g[:-1] if g.endswith("*") else g + "*"

    # A-matrices: nested lists F[i][j] of algebra vectors
    def to_amat(self, f: Arrow) -> list:
        A = self.algebra
        n = A.dim
        ri, rj = self.rank(f.tgt), self.rank(f.src)
        M = f.mat.rows
        F = [[None] * rj for _ in range(ri)]
        for i in range(ri):
            for j in range(rj):
                F[i][j] = tuple(sum((A.unit[l] * M[i * n + k][j * n + l] for l in range(n)
                                     if A.unit[l]), Fraction(0)) for k in range(n))
        return F

    def from_amat(self, F: list, src, tgt, degree: int = 0) -> Arrow:
        A = self.algebra
        n = A.dim
        ri, rj = self.rank(tgt), self.rank(src)
        entries = {}
        for i in range(ri):
            for j in range(rj):
                c = F[i][j]
                if not any(c):
                    continue
                for l in range(n):
                    prod = A.mul(c, A.basis_vec(l))
                    for k, v in enumerate(prod):
                        if v:
                            entries[(i * n + k, j * n + l)] = v
        return Arrow(tuple(src), tuple(tgt), Mat.from_entries(ri * n, rj * n, entries), degree)

    def is_module_map(self, f: Arrow) -> bool:
        """Whether the underlying matrix commutes with the A-action."""
        return self.from_amat(self.to_amat(f), f.src, f.tgt, f.degree).mat == f.mat

    def tensor_arrows(self, f: Arrow, g: Arrow) -> Mat:
        A = self.algebra
        if A.dim == 1 and A.unit[0] == 1:
            return f.mat.kron(g.mat)
        F, G = self.to_amat(f), self.to_amat(g)
        ri, rj = len(F), (len(F[0]) if F else self.rank(f.src))
        si, sj = len(G), (len(G[0]) if G else self.rank(g.src))
        H = [[A.mul(F[i][j], G[k][l]) for j in range(rj) for l in range(sj)]
             for i in range(ri) for k in range(si)]
        return self.from_amat(H, f.src + g.src, f.tgt + g.tgt).mat

    def permute(self, word, order: Sequence[int]) -> Arrow:
        word = tuple(word)
        tgt = tuple(word[o] for o in order)
        sizes = [len(self.shifts[g]) for g in word]
        perm = perm_of_blocks(sizes, order)
        # a_l e_j -> a_l e_perm[j]
        n = self.algebra.dim
        return Arrow(word, tgt, Mat.permutation([perm[j] * n + l for j in range(len(perm))
                                                 for l in range(n)]))

    def hom_basis(self, x, y, degree: int = 0) -> list:
        x, y = tuple(x), tuple(y)
        self.check_bound(x, y)
        A = self.algebra
        sx, sy = self.shifts_of(x), self.shifts_of(y)
        zero = tuple(Fraction(0) for _ in range(A.dim))
        out = []
        for i, ti in enumerate(sy):
            for j, sj in enumerate(sx):
                for k, dk in enumerate(A.degrees):
                    if ti + dk == sj + degree:
                        F = [[zero] * len(sx) for _ in sy]
                        F[i][j] = A.basis_vec(k)
                        out.append(self.from_amat(F, x, y, degree))
        return out

    def hom_element(self, x, y, coeffs: Sequence, degree: int = 0) -> Arrow:
        basis = self.hom_basis(x, y, degree)
        out = self.zero(x, y, degree)
        for c, b in zip(coeffs, basis):
            if c:
                out = out + b.scale(c)
        return out

    # rigidity
    def _pairing_amat(self, word, as_ev: bool):
        word = tuple(word)
        sizes = [len(self.shifts[g]) for g in word]
        A = self.algebra
        zero = tuple(Fraction(0) for _ in range(A.dim))
        r = self.rank(word)
        F = [[zero] * (r * r)]
        for idx in product(*(range(s) for s in sizes)):
            a = 0
            for s, i in zip(sizes, idx):
                a = a * s + i
            b = 0
            for s, i in zip(reversed(sizes), reversed(idx)):
                b = b * s + i
            # ev: X X^ (a, b); coev: X^ X (b, a)
            F[0][a * r + b if as_ev else b * r + a] = tuple(A.unit)
        return F

    def ev(self, word) -> Arrow:
        word = tuple(word)
        F = self._pairing_amat(word, True)
        return self.from_amat(F, word + self.dual(word), ())

    def coev(self, word) -> Arrow:
        word = tuple(word)
        F = self._pairing_amat(word, False)
        G = [[F[0][c]] for c in range(len(F[0]))]
        return self.from_amat(G, (), self.dual(word) + word)


def vect_category(gens: dict, bound: int = 3) -> FreeModuleCat:
    """Finite-dimensional graded vector spaces: ``gens`` maps names to the
    degrees of a basis."""
    return FreeModuleCat(ground_field(), gens, bound, name="Vect")


def module_category(algebra: FrobeniusAlgebra, gens: dict | None = None,
                    bound: int = 3) -> FreeModuleCat:
    return FreeModuleCat(algebra, gens if gens is not None else {"A": (0,)}, bound,
                         name=f"{algebra.name}-mod")


# ---------------------------------------------------------------------------
# permutations

@dataclass
class PermutationCategory(MonCat):
    """Finite ordinals and bijections on one generator; tensor is the
    ordinal sum.  Set-enriched: hom_basis lists all bijections."""

    bound: int = 3
    generators: tuple = ("*",)

    def space(self, word) -> GradedVect:
        return GradedVect((0,) * len(word))

    def tensor_arrows(self, f: Arrow, g: Arrow) -> Mat:
        return vb.block_diag(f.mat, g.mat)

    def permute(self, word, order: Sequence[int]) -> Arrow:
        word = tuple(word)
        # basis vector j of the source lands at the position it moves to
        pos = {o: k for k, o in enumerate(order)}
        return Arrow(word, tuple(word[o] for o in order),
                     Mat.permutation([pos[j] for j in range(len(word))]))

    def hom_basis(self, x, y, degree: int = 0) -> list:
        from itertools import permutations
        x, y = tuple(x), tuple(y)
        self.check_bound(x, y)
        if len(x) != len(y) or degree:
            return []
        return [Arrow(x, y, Mat.permutation(p)) for p in permutations(range(len(x)))]


# ---------------------------------------------------------------------------
# axiom checks

def check_axioms(C: MonCat, bound: int = 2, cap: int = 64) -> list:
    """Check unit, interchange, symmetry, naturality of the braiding and
    (for rigid C) the triangle identities.

    Words up to length ``bound``; naturality and interchange use every
    basis arrow between words of length at most one, skipping homs of
    dimension above ``cap``.  Returns a list of (law, witness) failures.
    """
    bad = []
    words = C.objects(bound)
    short = C.objects(min(bound, 1))

    def basis(x, y):
        b = C.hom_basis(x, y)
        return b if len(b) <= cap else b[:cap]

    for x, y in product(short, repeat=2):
        for f in basis(x, y):
            if C.compose(C.identity(y), f) != f or C.compose(f, C.identity(x)) != f:
                bad.append(("unit", f))
            if C.tensor(C.identity(()), f) != f:
                bad.append(("tensor-unit", f))
    for x, y in product(words, repeat=2):
        s = C.braid(x, y)
        if C.compose(C.braid(y, x), s) != C.identity(x + y):
            bad.append(("symmetry", (x, y)))
    gen_words = [w for w in short if w]
    for x, x2, y, y2 in product(gen_words, repeat=4):
        for f in basis(x, x2)[:4]:
            for g in basis(y, y2)[:4]:
                lhs = C.compose(C.braid(x2, y2), C.tensor(f, g))
                rhs = C.compose(C.tensor(g, f), C.braid(x, y))
                if lhs != rhs:
                    bad.append(("braid-natural", (f, g)))
                # interchange with identities on both sides
                a = C.compose(C.tensor(f, C.identity(y2)), C.tensor(C.identity(x), g))
                b = C.compose(C.tensor(C.identity(x2), g), C.tensor(f, C.identity(y)))
                if a != b or a != C.tensor(f, g):
                    bad.append(("interchange", (f, g)))
    if C.rigid:
        for x in words:
            xd = C.dual(x)
            t1 = C.compose(C.tensor(C.ev(x), C.identity(x)), C.tensor(C.identity(x), C.coev(x)))
            t2 = C.compose(C.tensor(C.identity(xd), C.ev(x)), C.tensor(C.coev(x), C.identity(xd)))
            if t1 != C.identity(x):
                bad.append(("triangle", x))
            if t2 != C.identity(xd):
                bad.append(("triangle-dual", x))
    return bad


# ---------------------------------------------------------------------------
# underlying properads and dioperads

def _concat(words) -> tuple:
    return sum((tuple(w) for w in words), ())


def _inverse(perm: Sequence[int]) -> list:
    inv = [0] * len(perm)
    for k, p in enumerate(perm):
        inv[p] = k
    return inv


@dataclass(frozen=True)
class UOp:
    """Operation of an underlying (di/pr)operad: colors are words of C,
    ``arrow`` goes from the concatenated inputs to the combined outputs."""

    ins: tuple
    outs: tuple
    arrow: Arrow

    @property
    def profile(self):
        return self.ins, self.outs

    @property
    def degree(self):
        return self.arrow.degree


class UnderlyingProperad:
    """U^p C: operations (x_i; y_j) are arrows x_1...x_m -> y_1...y_n.

    Compositions follow the grafting convention of
    :func:`diop.graphcore.graft`: inputs of ``compose_multi(a, b, P)`` are
    a's inputs then b's unpaired inputs, outputs are a's unpaired outputs
    then b's outputs.
    """

    linear = True
    multi = True

    def __init__(self, C: MonCat):
        self.C = C

    @property
    def colors(self):
        return [w for w in self.C.objects() if w]

    def out_word(self, outs) -> tuple:
        return _concat(outs)

    def ops(self, ins, outs, degree: int = 0) -> list:
        ins, outs = tuple(map(tuple, ins)), tuple(map(tuple, outs))
        return [UOp(ins, outs, a) for a in
                self.C.hom_basis(_concat(ins), self.out_word(outs), degree)]

    def make(self, ins, outs, arrow: Arrow) -> UOp:
        ins, outs = tuple(map(tuple, ins)), tuple(map(tuple, outs))
        if arrow.src != _concat(ins) or arrow.tgt != self.out_word(outs):
            raise ShapeMismatch(f"{arrow} does not have profile {ins} -> {outs}")
        return UOp(ins, outs, arrow)

    def identity(self, color) -> UOp:
        color = tuple(color)
        return UOp((color,), (color,), self.C.identity(color))

    def profile(self, op: UOp):
        return op.ins, op.outs

    def equal(self, a: UOp, b: UOp) -> bool:
        return a == b

    def add(self, a: UOp, b: UOp) -> UOp:
        return UOp(a.ins, a.outs, a.arrow + b.arrow)

    def scale(self, a: UOp, c) -> UOp:
        return UOp(a.ins, a.outs, a.arrow.scale(c))

    def compose_multi(self, a: UOp, b: UOp, pairing: Sequence[tuple]) -> UOp:
        C = self.C
        pairing = list(pairing)
        if not pairing:
            raise ValueError("properadic composition needs at least one edge")
        paired_out = {k: l for k, l in pairing}
        paired_in = {l: k for k, l in pairing}
        for k, l in pairing:
            if a.outs[k] != b.ins[l]:
                raise ShapeMismatch(f"output {k} of a is {a.outs[k]}, input {l} of b is {b.ins[l]}")
        w_un = [l for l in range(len(b.ins)) if l not in paired_in]
        y_un = [k for k in range(len(a.outs)) if k not in paired_out]
        wu_words = [b.ins[l] for l in w_un]
        step1 = C.tensor(a.arrow, C.identity(_concat(wu_words)))
        blocks = list(a.outs) + wu_words
        order = list(y_un)
        for l in range(len(b.ins)):
            order.append(paired_in[l] if l in paired_in else len(a.outs) + w_un.index(l))
        step2 = C.permute_blocks(blocks, order)
        yu = _concat(a.outs[k] for k in y_un)
        step3 = C.tensor(C.identity(yu), b.arrow)
        arrow = C.compose_all(step3, step2, step1)
        return UOp(a.ins + tuple(wu_words), tuple(a.outs[k] for k in y_un) + b.outs, arrow)

    def compose_edge(self, a: UOp, j: int, b: UOp, i: int) -> UOp:
        return self.compose_multi(a, b, [(j, i)])

    def act(self, op: UOp, in_perm: Sequence[int] | None = None,
            out_perm: Sequence[int] | None = None) -> UOp:
        """Reorder: new input k is old input ``in_perm[k]`` (likewise outputs)."""
        C = self.C
        ip = list(range(len(op.ins))) if in_perm is None else list(in_perm)
        pp = list(range(len(op.outs))) if out_perm is None else list(out_perm)
        new_ins = tuple(op.ins[p] for p in ip)
        new_outs = tuple(op.outs[p] for p in pp)
        pre = C.permute_blocks(list(new_ins), _inverse(ip))
        post = self._out_permutation(op.outs, pp)
        return UOp(new_ins, new_outs, C.compose_all(post, op.arrow, pre))

    def _out_permutation(self, outs, pp) -> Arrow:
        return self.C.permute_blocks(list(outs), pp)


class UnderlyingDioperad(UnderlyingProperad):
    """U C: the same operations, composed along single edges only."""

    multi = False

    def compose_multi(self, a, b, pairing):
        if len(list(pairing)) != 1:
            raise ValueError("dioperads compose along exactly one edge")
        return super().compose_multi(a, b, pairing)


class UnderlyingLinDistDioperad(UnderlyingProperad):
    """U-bar C: operations (x_i; y_j) are arrows x_1...x_m -> y_1 par ... par y_n.

    On words ``y_1 par ... par y_n = y_n ... y_1``.  Composition along one
    edge is the composite ``(id par b) o delta o (a (x) id)``, with the
    distributor moving the remaining inputs of b next to the shared color.
    """

    multi = False

    def out_word(self, outs) -> tuple:
        return self.C.par_all(outs)

    def compose_multi(self, a, b, pairing):
        pairing = list(pairing)
        if len(pairing) != 1:
            raise ValueError("dioperads compose along exactly one edge")
        return self.compose_edge(a, pairing[0][0], b, pairing[0][1])

    def compose_edge(self, a: UOp, j: int, b: UOp, i: int) -> UOp:
        C = self.C
        z = a.outs[j]
        if b.ins[i] != z:
            raise ShapeMismatch(f"output {j} of a is {z}, input {i} of b is {b.ins[i]}")
        a1 = C.par_all(a.outs[j + 1:])
        a2 = C.par_all(a.outs[:j])
        w1, w2 = _concat(b.ins[:i]), _concat(b.ins[i + 1:])
        step1 = C.tensor(a.arrow, C.identity(w1 + w2))
        # distributor: A1 z A2 W1 W2 -> A1 (W1 z W2) A2
        step2 = C.permute_blocks([a1, z, a2, w1, w2], [0, 3, 1, 4, 2])
        step3 = C.tensor_all([C.identity(a1), b.arrow, C.identity(a2)])
        # distributor: A1 V A2 -> V A1 A2
        step4 = C.permute_blocks([a1, b.arrow.tgt, a2], [1, 0, 2])
        arrow = C.compose_all(step4, step3, step2, step1)
        outs = a.outs[:j] + a.outs[j + 1:] + b.outs
        return UOp(a.ins + b.ins[:i] + b.ins[i + 1:], outs, arrow)

    def _out_permutation(self, outs, pp) -> Arrow:
        # par-words are reversed, so reverse the block order on both sides
        n = len(outs)
        rev = list(reversed(outs))
        return self.C.permute_blocks(rev, [n - 1 - pp[n - 1 - k] for k in range(n)])

    def to_tensor_form(self, op: UOp) -> UOp:
        """The isomorphism U-bar C -> U C: reverse the output blocks."""
        n = len(op.outs)
        rev = self.C.permute_blocks(list(reversed(op.outs)), list(reversed(range(n))))
        return UOp(op.ins, op.outs, self.C.compose(rev, op.arrow))

    def from_tensor_form(self, op: UOp) -> UOp:
        n = len(op.outs)
        rev = self.C.permute_blocks(list(op.outs), list(reversed(range(n))))
        return UOp(op.ins, op.outs, self.C.compose(rev, op.arrow))


def frobenius_algebra_arrows(C: MonCat, word, alg: FrobeniusAlgebra) -> dict:
    """Structure maps of ``alg`` on an object ``word`` of C whose underlying
    space is the algebra itself (basis order and degrees included).

    Returns arrows ``mu, eta, delta, eps``; the coproduct is
    ``(mu (x) id) o (id (x) copairing)`` where the copairing is the inverse
    of the trace pairing.  ``delta`` has degree d and ``eps`` degree -d.
    """
    word = tuple(word)
    if C.space(word).degrees != alg.degrees:
        raise ShapeMismatch(f"{word} does not carry the algebra's basis")
    n = alg.dim
    mu = Arrow(word + word, word, alg.mult_mat())
    eta = Arrow((), word, Mat.from_rows([[u] for u in alg.unit], 1))
    eps = Arrow(word, (), Mat.from_rows([list(alg.trace)], n), -alg.d)
    Pinv = alg.pairing_matrix().inverse()
    copair = Arrow((), word + word, Mat.from_rows([[Pinv[i, j]] for i in range(n)
                                                   for j in range(n)], 1), alg.d)
    delta = C.compose(C.tensor(mu, C.identity(word)), C.tensor(C.identity(word), copair))
    return {"mu": mu, "eta": eta, "delta": delta, "eps": eps}
