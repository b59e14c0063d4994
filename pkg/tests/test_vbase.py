from fractions import Fraction
from itertools import product

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from diop import vbase as vb
from diop.vbase import Mat, GradedVect, RatVect, FinSet, LinearMap

rats = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def mats(r, c):
    return st.lists(st.lists(rats, min_size=c, max_size=c), min_size=r, max_size=r).map(
        lambda rows: Mat.from_rows(rows, c))


def test_unit_tensor_is_strict():
    x = RatVect(3)
    assert vb.tensor(vb.unit(x), x) == x
    f = vb.identity(x)
    assert vb.tensor(vb.identity(vb.unit(x)), f).mat == f.mat


def test_ratvect_tensor_dim():
    assert vb.tensor(RatVect(2), RatVect(3)) == RatVect(6)


@pytest.mark.parametrize("a,b", [({0: 1, 1: 2}, {0: 2, -1: 1}), ({2: 1}, {0: 3, 5: 1}), ({}, {0: 1})])
def test_graded_tensor_dims_by_basis_enumeration(a, b):
    A, B = GradedVect.from_dims(a), GradedVect.from_dims(b)
    # oracle: enumerate pairs of basis vectors and count degrees
    expected = {}
    for x, y in product(A.degrees, B.degrees):
        expected[x + y] = expected.get(x + y, 0) + 1
    assert vb.tensor(A, B).dims == expected


def test_degree_objects_add():
    for j, k in product(range(-3, 4), repeat=2):
        assert vb.tensor(vb.DegreeObject(j), vb.DegreeObject(k)) == vb.DegreeObject(j + k)
    assert vb.tensor(vb.DegreeObject(2), vb.DegreeObject(-2)) == vb.unit(GradedVect(()))


def test_braiding_squares_to_identity():
    A, B = GradedVect((0, 1)), GradedVect((0, 2, 3))
    s = vb.braiding(A, B)
    t = vb.braiding(B, A)
    assert vb.compose(t, s).mat == Mat.identity(6)


@settings(max_examples=30, deadline=None)
@given(mats(2, 2), mats(3, 3))
def test_braiding_natural(f, g):
    F = LinearMap(RatVect(2), RatVect(2), f)
    G = LinearMap(RatVect(3), RatVect(3), g)
    lhs = vb.compose(vb.braiding(RatVect(2), RatVect(3)), vb.tensor(F, G))
    rhs = vb.compose(vb.tensor(G, F), vb.braiding(RatVect(2), RatVect(3)))
    assert lhs.mat == rhs.mat


@settings(max_examples=30, deadline=None)
@given(mats(2, 3), mats(3, 2), mats(2, 2), mats(2, 3))
def test_tensor_functorial(f1, f2, g1, g2):
    F1 = LinearMap(RatVect(3), RatVect(2), f1)
    F2 = LinearMap(RatVect(2), RatVect(3), f2)
    G1 = LinearMap(RatVect(2), RatVect(2), g1)
    G2 = LinearMap(RatVect(3), RatVect(2), g2)
    lhs = vb.tensor(vb.compose(F1, F2), vb.compose(G1, G2))
    rhs = vb.compose(vb.tensor(F1, G1), vb.tensor(F2, G2))
    assert lhs.mat == rhs.mat


def test_equalizer_trivial_cases():
    V = RatVect(2)
    f = vb.identity(V)
    eq, inc = vb.equalizer(f, f)
    assert eq == V
    zero = LinearMap(V, V, Mat.zeros(2, 2))
    eq, inc = vb.equalizer(f, zero)
    assert eq == RatVect(0)


@settings(max_examples=40, deadline=None)
@given(mats(3, 4), mats(3, 4))
def test_equalizer_matches_sympy_nullspace(a, b):
    f = LinearMap(RatVect(4), RatVect(3), a)
    g = LinearMap(RatVect(4), RatVect(3), b)
    eq, inc = vb.equalizer(f, g)
    oracle = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r]
                           for r in (a - b).rows]).nullspace()
    assert eq.dim == len(oracle)
    # inclusion is mono and equalizes
    assert inc.mat.rank() == eq.dim
    assert (a @ inc.mat) == (b @ inc.mat)
    # every oracle vector factors through the inclusion
    for v in oracle:
        assert vb.solve(inc.mat, [Fraction(int(x.p), int(x.q)) for x in v]) is not None


def test_graded_equalizer_is_homogeneous():
    A = GradedVect((0, 1, 1))
    B = GradedVect((1,))
    f = LinearMap(A, B, Mat.from_rows([[0, 1, 1]]), 0)
    zero = LinearMap(A, B, Mat.zeros(1, 3), 0)
    eq, inc = vb.equalizer(f, zero)
    assert eq.dims == {0: 1, 1: 1}
    assert vb.check_homogeneous(inc) == []


def test_finite_limit_one_object_and_product():
    V = RatVect(3)
    lim, projs = vb.finite_limit([V], [])
    assert lim == V
    S2, S3 = FinSet((0, 1)), FinSet(("a", "b", "c"))
    lim, projs = vb.finite_limit([S2, S3], [])
    assert lim.size == 6


def test_pullback_against_linear_solve():
    # pullback of f: Q^2 -> Q^2 and g: Q^1 -> Q^2
    f = LinearMap(RatVect(2), RatVect(2), Mat.from_rows([[1, 1], [0, 0]]))
    g = LinearMap(RatVect(1), RatVect(2), Mat.from_rows([[2], [0]]))
    P = RatVect(2)
    lim, projs = vb.finite_limit([RatVect(2), RatVect(1), P], [(0, 2, f), (1, 2, g)])
    # oracle: solutions (u, v) of f u = g v, i.e. u0 + u1 = 2 v
    M = sympy.Matrix([[1, 1, -2], [0, 0, 0]])
    assert lim.dim == len(M.nullspace())
    pu, pv = projs[0].mat, projs[1].mat
    assert f.mat @ pu == g.mat @ pv


def test_finset_equalizer():
    S = FinSet((0, 1, 2, 3))
    T = FinSet(("x", "y"))
    f = vb.FinFunction(S, T, (0, 0, 1, 1))
    g = vb.FinFunction(S, T, (0, 1, 1, 0))
    eq, inc = vb.equalizer(f, g)
    assert eq.elements == (0, 2)


def test_matrix_literals_round_trip():
    m = Mat.from_rows([[1, Fraction(-1, 2)], [0, 3]])
    assert vb.parse_matrix(vb.format_matrix(m)) == m
    assert vb.parse_graded("{0: 1, 2: 3}") == GradedVect((0, 2, 2, 2))
    assert vb.format_graded(GradedVect((0, 2, 2, 2))) == "{0: 1, 2: 3}"


def test_inverse_and_singular():
    m = Mat.from_rows([[1, 2], [3, 4]])
    assert m @ m.inverse() == Mat.identity(2)
    with pytest.raises(ZeroDivisionError):
        Mat.from_rows([[1, 2], [2, 4]]).inverse()


def test_base_mismatch():
    with pytest.raises(vb.BaseMismatch):
        vb.tensor(RatVect(1), GradedVect((0,)))


def test_degree_violations_detected():
    f = LinearMap(GradedVect((0, 1)), GradedVect((0, 1)), Mat.from_rows([[0, 0], [1, 0]]), 0)
    assert vb.check_homogeneous(f) == [(1, 0)]
    assert vb.check_homogeneous(LinearMap(f.source, f.target, f.mat, 1)) == []


@settings(max_examples=60, deadline=None)
@given(st.permutations(range(4)), st.permutations(range(4)),
       st.lists(st.integers(-3, 3), min_size=12, max_size=12))
def test_permutation_products_match_dense_products(p, q, entries):
    M = Mat.from_rows([entries[i * 4:(i + 1) * 4] for i in range(3)])
    P, Q = Mat.permutation(p), Mat.permutation(q)
    dense = lambda X: Mat.from_rows(X.rows)  # same entries, no permutation tag
    assert M @ P == M @ dense(P)
    assert P @ M.transpose() == dense(P) @ M.transpose()
    assert P @ Q == dense(P) @ dense(Q)
    assert (P @ Q).perm is not None
    assert Mat.identity(4) @ P == P


def test_kron_of_permutations_matches_dense():
    P, Q = Mat.permutation([2, 0, 1]), Mat.permutation([1, 0])
    dense = Mat.from_rows(P.rows).kron(Mat.from_rows(Q.rows))
    assert P.kron(Q) == dense and P.kron(Q).perm is not None
