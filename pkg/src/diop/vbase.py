"""Enrichment bases: finite sets, exact rational vector spaces and
integer-graded exact rational vector spaces.

Everything is strict and skeletal.  A rational vector space is its
dimension, a graded one is the tuple of degrees of its basis vectors (so
the basis order is part of the object, which keeps Kronecker products and
braidings strict).  Scalars are :class:`fractions.Fraction` throughout.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence


class BaseMismatch(TypeError):
    pass


class ShapeMismatch(ValueError):
    pass


ZERO, ONE = Fraction(0), Fraction(1)


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


# ---------------------------------------------------------------------------
# dense exact matrices

@dataclass(frozen=True)
class Mat:
    """Dense matrix over Q.  ``rows[i][j]`` is the entry in row i, column j."""

    nrows: int
    ncols: int
    rows: tuple
    # set on permutation matrices so products with them just reorder
    perm: tuple | None = field(default=None, compare=False, repr=False)

    @staticmethod
    def from_rows(rows: Sequence[Sequence], ncols: int | None = None) -> "Mat":
        rows = tuple(tuple(_q(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ShapeMismatch("ragged matrix")
        return Mat(len(rows), ncols, rows)

    @staticmethod
    def zeros(nrows: int, ncols: int) -> "Mat":
        return Mat(nrows, ncols, tuple((ZERO,) * ncols for _ in range(nrows)))

    @staticmethod
    @lru_cache(maxsize=256)
    def identity(n: int) -> "Mat":
        return Mat(n, n, tuple((ZERO,) * i + (ONE,) + (ZERO,) * (n - i - 1) for i in range(n)),
                   tuple(range(n)))

    @staticmethod
    def from_entries(nrows: int, ncols: int, entries: dict) -> "Mat":
        rows = [[ZERO] * ncols for _ in range(nrows)]
        for (i, j), v in entries.items():
            rows[i][j] = _q(v)
        return Mat(nrows, ncols, tuple(tuple(r) for r in rows))

    @staticmethod
    def permutation(perm: Sequence[int]) -> "Mat":
        """Matrix sending basis vector j to basis vector perm[j]."""
        n = len(perm)
        m = Mat.from_entries(n, n, {(perm[j], j): 1 for j in range(n)})
        return Mat(n, n, m.rows, tuple(perm))

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.ncols != other.nrows:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        if self.perm is not None and other.perm is not None:
            return Mat.permutation([self.perm[k] for k in other.perm])
        if self.perm is not None:
            # row perm[j] of the product is row j of other
            out = [None] * self.nrows
            for j, r in zip(self.perm, other.rows):
                out[j] = r
            return Mat(self.nrows, other.ncols, tuple(out))
        if other.perm is not None:
            # column j of the product is column perm[j] of self
            p = other.perm
            return Mat(self.nrows, other.ncols, tuple(tuple(r[k] for k in p) for r in self.rows))
        cols = other.ncols
        sparse = [[(j, b) for j, b in enumerate(r) if b] for r in other.rows]
        out = []
        for r in self.rows:
            acc = [ZERO] * cols
            for k, a in enumerate(r):
                if a:
                    for j, b in sparse[k]:
                        acc[j] += a if b == 1 else a * b
            out.append(tuple(acc))
        return Mat(self.nrows, cols, tuple(out))

    def __add__(self, other: "Mat") -> "Mat":
        if self.shape != other.shape:
            raise ShapeMismatch(f"cannot add {self.shape} and {other.shape}")
        return Mat(self.nrows, self.ncols, tuple(
            tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __neg__(self) -> "Mat":
        return self.scale(-1)

    def __sub__(self, other: "Mat") -> "Mat":
        return self + (-other)

    def scale(self, c) -> "Mat":
        c = _q(c)
        return Mat(self.nrows, self.ncols, tuple(tuple(c * a for a in r) for r in self.rows))

    def transpose(self) -> "Mat":
        return Mat(self.ncols, self.nrows, tuple(zip(*self.rows)) if self.nrows else
                   tuple(() for _ in range(self.ncols)))

    def kron(self, other: "Mat") -> "Mat":
        if self.perm is not None and other.perm is not None:
            n = other.nrows
            return Mat.permutation([p * n + q for p in self.perm for q in other.perm])
        out = []
        zs = (ZERO,) * other.ncols
        for r in self.rows:
            for s in other.rows:
                out.append(tuple(x for a in r for x in (tuple(a * b if b else ZERO for b in s)
                                                          if a else zs)))
        return Mat(self.nrows * other.nrows, self.ncols * other.ncols, tuple(out))

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def nonzero(self):
        for i, r in enumerate(self.rows):
            for j, a in enumerate(r):
                if a:
                    yield i, j, a

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Mat":
        return Mat(len(rows), len(cols), tuple(tuple(self.rows[i][j] for j in cols) for i in rows))

    def rank(self) -> int:
        return len(rref(self)[1])

    def inverse(self) -> "Mat":
        if self.nrows != self.ncols:
            raise ShapeMismatch("inverse of a non-square matrix")
        n = self.nrows
        aug = Mat(n, 2 * n, tuple(r + Mat.identity(n).rows[i] for i, r in enumerate(self.rows)))
        red, piv = rref(aug)
        if piv[:n] != list(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return red.submatrix(range(n), range(n, 2 * n))

    def __repr__(self):
        return f"Mat({format_matrix(self)!r})"


def rref(m: Mat):
    """Reduced row echelon form and the list of pivot columns."""
    rows = [list(r) for r in m.rows]
    piv = []
    r = 0
    for c in range(m.ncols):
        p = next((i for i in range(r, m.nrows) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(m.nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv.append(c)
        r += 1
        if r == m.nrows:
            break
    return Mat(m.nrows, m.ncols, tuple(tuple(x) for x in rows)), piv


def kernel_basis(m: Mat) -> list[tuple]:
    """Basis of {v : m v = 0}, one tuple per vector."""
    red, piv = rref(m)
    free = [c for c in range(m.ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.ncols
        v[f] = Fraction(1)
        for i, p in enumerate(piv):
            v[p] = -red.rows[i][f]
        basis.append(tuple(v))
    return basis


def solve(m: Mat, b: Sequence) -> tuple | None:
    """Some solution x of m x = b, or None."""
    aug = Mat(m.nrows, m.ncols + 1, tuple(r + (_q(bi),) for r, bi in zip(m.rows, b)))
    red, piv = rref(aug)
    if m.ncols in piv:
        return None
    x = [Fraction(0)] * m.ncols
    for i, p in enumerate(piv):
        x[p] = red.rows[i][m.ncols]
    return tuple(x)


def sparse_row_basis(rows: Iterable[dict]) -> list[dict]:
    """Echelon basis of the span of sparse rows ``{column: value}``.

    Same row space (hence same kernel) as the input; used to shrink large,
    redundant constraint systems before dense elimination.
    """
    pivots: dict = {}
    for row in rows:
        r = {c: _q(v) for c, v in row.items() if v}
        while r:
            c = min(r)
            if c not in pivots:
                inv = 1 / r[c]
                pivots[c] = {k: v * inv for k, v in r.items()}
                break
            p, f = pivots[c], r[c]
            for k, v in p.items():
                x = r.get(k, 0) - f * v
                if x:
                    r[k] = x
                else:
                    r.pop(k, None)
    return [pivots[c] for c in sorted(pivots)]


def columns_to_mat(cols: Sequence[Sequence], nrows: int) -> Mat:
    return Mat(nrows, len(cols), tuple(tuple(_q(c[i]) for c in cols) for i in range(nrows)))


def block_diag(*mats: Mat) -> Mat:
    n = sum(m.nrows for m in mats)
    k = sum(m.ncols for m in mats)
    entries = {}
    r0 = c0 = 0
    for m in mats:
        for i, j, a in m.nonzero():
            entries[r0 + i, c0 + j] = a
        r0 += m.nrows
        c0 += m.ncols
    return Mat.from_entries(n, k, entries)


# ---------------------------------------------------------------------------
# matrix literals: entries separated by whitespace, rows by a lone "/"

def parse_matrix(text: str, ncols: int | None = None) -> Mat:
    text = text.strip().strip("[]")
    rows, cur = [], []
    for tok in text.replace(",", " ").split():
        if tok == "/":
            rows.append(cur)
            cur = []
        else:
            cur.append(Fraction(tok))
    if cur or rows:
        rows.append(cur)
    if not rows or rows == [[]]:
        return Mat.zeros(0, ncols or 0)
    return Mat.from_rows(rows)


def format_matrix(m: Mat) -> str:
    if m.nrows == 0:
        return "[]"
    return "[" + " / ".join(" ".join(str(x) for x in r) for r in m.rows) + "]"


# ---------------------------------------------------------------------------
# objects

@dataclass(frozen=True)
class FinSet:
    elements: tuple

    @property
    def size(self):
        return len(self.elements)


@dataclass(frozen=True)
class RatVect:
    dim: int

    def __post_init__(self):
        if self.dim < 0:
            raise ValueError("negative dimension")


@dataclass(frozen=True)
class GradedVect:
    """Graded space given by the degree of each basis vector, in basis order."""

    degrees: tuple

    @staticmethod
    def from_dims(dims: dict) -> "GradedVect":
        if any(v < 0 for v in dims.values()):
            raise ValueError("negative dimension")
        return GradedVect(tuple(d for d in sorted(dims) for _ in range(dims[d])))

    @property
    def dim(self):
        return len(self.degrees)

    @property
    def dims(self) -> dict:
        out: dict = {}
        for d in self.degrees:
            out[d] = out.get(d, 0) + 1
        return out

    def shift(self, k: int) -> "GradedVect":
        return GradedVect(tuple(d + k for d in self.degrees))

    def dual(self) -> "GradedVect":
        return GradedVect(tuple(-d for d in self.degrees))


def DegreeObject(k: int) -> GradedVect:
    """The invertible graded line concentrated in degree k."""
    return GradedVect((k,))


def parse_graded(text: str) -> GradedVect:
    body = text.strip().strip("{}").strip()
    dims = {}
    if body:
        for item in body.split(","):
            k, v = item.split(":")
            dims[int(k)] = int(v)
    return GradedVect.from_dims(dims)


def format_graded(v: GradedVect) -> str:
    return "{" + ", ".join(f"{k}: {n}" for k, n in sorted(v.dims.items())) + "}"


VObject = FinSet | RatVect | GradedVect


def _dim(v) -> int:
    return v.dim if not isinstance(v, FinSet) else v.size


def unit(like) -> VObject:
    if isinstance(like, FinSet):
        return FinSet(((),))
    if isinstance(like, RatVect):
        return RatVect(1)
    return GradedVect((0,))


# ---------------------------------------------------------------------------
# morphisms

@dataclass(frozen=True)
class FinFunction:
    source: FinSet
    target: FinSet
    table: tuple  # table[i] = index in target of image of source.elements[i]

    def __call__(self, x):
        return self.target.elements[self.table[self.source.elements.index(x)]]


@dataclass(frozen=True)
class LinearMap:
    """Linear map of a given degree; ``mat`` is target-dim by source-dim."""

    source: RatVect | GradedVect
    target: RatVect | GradedVect
    mat: Mat
    degree: int = 0

    def __post_init__(self):
        if self.mat.shape != (self.target.dim, self.source.dim):
            raise ShapeMismatch(
                f"matrix {self.mat.shape} does not fit {self.source} -> {self.target}")


VMorphism = FinFunction | LinearMap


def degree_violations(mat: Mat, src_degrees: Sequence[int], tgt_degrees: Sequence[int],
                      degree: int) -> list:
    """Nonzero entries that do not shift degree by exactly ``degree``."""
    return [(i, j) for i, j, _ in mat.nonzero() if tgt_degrees[i] != src_degrees[j] + degree]


def check_homogeneous(f: LinearMap) -> list:
    if not isinstance(f.source, GradedVect):
        return []
    return degree_violations(f.mat, f.source.degrees, f.target.degrees, f.degree)


def identity(v) -> VMorphism:
    if isinstance(v, FinSet):
        return FinFunction(v, v, tuple(range(v.size)))
    return LinearMap(v, v, Mat.identity(v.dim))


def compose(g: VMorphism, f: VMorphism) -> VMorphism:
    """g after f."""
    if type(f) is not type(g):
        raise BaseMismatch("cannot compose across bases")
    if f.target != g.source:
        raise ShapeMismatch("morphisms not composable")
    if isinstance(f, FinFunction):
        return FinFunction(f.source, g.target, tuple(g.table[i] for i in f.table))
    return LinearMap(f.source, g.target, g.mat @ f.mat, f.degree + g.degree)


def _check_same_base(a, b):
    ta = type(a.source) if isinstance(a, (FinFunction, LinearMap)) else type(a)
    tb = type(b.source) if isinstance(b, (FinFunction, LinearMap)) else type(b)
    if ta is not tb:
        raise BaseMismatch(f"{ta.__name__} vs {tb.__name__}")


def tensor(a, b):
    """Tensor product of two objects or of two morphisms of the same base."""
    _check_same_base(a, b)
    if isinstance(a, FinSet):
        return FinSet(tuple(product(a.elements, b.elements)))
    if isinstance(a, RatVect):
        return RatVect(a.dim * b.dim)
    if isinstance(a, GradedVect):
        return GradedVect(tuple(x + y for x in a.degrees for y in b.degrees))
    if isinstance(a, FinFunction):
        nb = b.target.size
        return FinFunction(tensor(a.source, b.source), tensor(a.target, b.target),
                           tuple(i * nb + j for i in a.table for j in b.table))
    return LinearMap(tensor(a.source, b.source), tensor(a.target, b.target),
                     a.mat.kron(b.mat), a.degree + b.degree)


def tensor_all(items: Iterable, like=None):
    items = list(items)
    if not items:
        return unit(like)
    out = items[0]
    for x in items[1:]:
        out = tensor(out, x)
    return out


def braiding(a, b) -> VMorphism:
    """Symmetry a (x) b -> b (x) a, with no Koszul signs."""
    _check_same_base(a, b)
    na, nb = _dim(a), _dim(b)
    perm = [j * na + i for i in range(na) for j in range(nb)]
    if isinstance(a, FinSet):
        return FinFunction(tensor(a, b), tensor(b, a), tuple(perm))
    return LinearMap(tensor(a, b), tensor(b, a), Mat.permutation(perm))


# ---------------------------------------------------------------------------
# limits

def equalizer(f: VMorphism, g: VMorphism):
    """Equalizer object of a parallel pair together with its inclusion."""
    if f.source != g.source or f.target != g.target:
        raise ShapeMismatch("equalizer needs a parallel pair")
    if isinstance(f, FinFunction):
        keep = [i for i in range(f.source.size) if f.table[i] == g.table[i]]
        sub = FinSet(tuple(f.source.elements[i] for i in keep))
        return sub, FinFunction(sub, f.source, tuple(keep))
    diff = f.mat - g.mat
    src = f.source
    if isinstance(src, GradedVect):
        # homogeneous kernel basis, degree by degree
        cols = []
        degs = []
        for d in sorted(set(src.degrees)):
            idx = [j for j, e in enumerate(src.degrees) if e == d]
            for v in kernel_basis(diff.submatrix(range(diff.nrows), idx)):
                full = [Fraction(0)] * src.dim
                for j, x in zip(idx, v):
                    full[j] = x
                cols.append(full)
                degs.append(d)
        sub = GradedVect(tuple(degs))
    else:
        cols = kernel_basis(diff)
        sub = RatVect(len(cols))
    return sub, LinearMap(sub, src, columns_to_mat(cols, src.dim))


def product_obj(objs: Sequence) -> tuple:
    """Product with its projections (direct sum in the linear bases)."""
    if not objs:
        raise ValueError("empty product has no base tag here")
    if isinstance(objs[0], FinSet):
        prod = FinSet(tuple(product(*(o.elements for o in objs))))
        projs = []
        for k, o in enumerate(objs):
            projs.append(FinFunction(prod, o, tuple(o.elements.index(t[k]) for t in prod.elements)))
        return prod, projs
    if isinstance(objs[0], GradedVect):
        prod = GradedVect(tuple(d for o in objs for d in o.degrees))
    else:
        prod = RatVect(sum(o.dim for o in objs))
    projs = []
    off = 0
    for o in objs:
        projs.append(LinearMap(prod, o, Mat.from_entries(
            o.dim, prod.dim, {(i, off + i): 1 for i in range(o.dim)})))
        off += o.dim
    return prod, projs


def factor_through(inclusion: LinearMap, h: LinearMap) -> LinearMap | None:
    """The unique k with inclusion o k = h, if h lands in the image."""
    cols = []
    for j in range(h.mat.ncols):
        x = solve(inclusion.mat, h.mat.column(j))
        if x is None:
            return None
        cols.append(x)
    return LinearMap(h.source, inclusion.source, columns_to_mat(cols, inclusion.source.dim),
                     h.degree - inclusion.degree)


def finite_limit(objects: Sequence, arrows: Sequence[tuple]):
    """Limit of a finite diagram.

    ``arrows`` is a list of ``(i, j, m)`` with ``m: objects[i] -> objects[j]``.
    Returns the limit object and its projections to each vertex, computed as
    the equalizer of two maps out of the product.
    """
    prod, projs = product_obj(list(objects))
    if not arrows:
        return prod, projs
    tgt_prod, tgt_projs = product_obj([objects[j] for _, j, _ in arrows])
    if isinstance(prod, FinSet):
        s = tuple(tgt_prod.elements.index(tuple(m(t[i]) for i, _, m in arrows))
                  for t in prod.elements)
        t_ = tuple(tgt_prod.elements.index(tuple(t[j] for _, j, _ in arrows))
                   for t in prod.elements)
        eq, inc = equalizer(FinFunction(prod, tgt_prod, s), FinFunction(prod, tgt_prod, t_))
        return eq, [compose(p, inc) for p in projs]
    rows_s, rows_t = [], []
    for i, j, m in arrows:
        rows_s.append((m.mat @ projs[i].mat).rows)
        rows_t.append(projs[j].mat.rows)
    S = Mat(tgt_prod.dim, prod.dim, tuple(r for blk in rows_s for r in blk))
    T = Mat(tgt_prod.dim, prod.dim, tuple(r for blk in rows_t for r in blk))
    eq, inc = equalizer(LinearMap(prod, tgt_prod, S), LinearMap(prod, tgt_prod, T))
    return eq, [compose(p, inc) for p in projs]
