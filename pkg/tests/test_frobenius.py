import random
from fractions import Fraction

import pytest

from diop import dioperad as dp
from diop import envelope as ev
from diop import frobenius as fr
from diop import graphcore as gc
from diop import moncat as mc
from diop.graphcore import ColoredDigraph, Edge, Vertex
from diop.moncat import UOp
from diop.vbase import Mat

A = ("A",)
AA = ("A", "A")


@pytest.fixture(scope="module")
def dual():
    C = mc.module_category(mc.dual_numbers(0), bound=3)
    return C, fr.forgetful_frobenius(C)


@pytest.fixture(scope="module")
def graded():
    C = mc.module_category(mc.dual_numbers(1), bound=3)
    return C, fr.forgetful_frobenius(C)


@pytest.fixture(scope="module")
def split():
    C = mc.module_category(mc.split_pair(), bound=3)
    return C, fr.forgetful_frobenius(C)


def random_label(C, rng, ins, outs):
    x, y = sum(map(tuple, ins), ()), sum(map(tuple, outs), ())
    out = C.zero(x, y)
    for b in C.hom_basis(x, y):
        out = out + b.scale(rng.randint(-2, 2))
    return out


def labelled(C, K, seed=0):
    rng = random.Random(seed)
    return gc.relabel_vertices(K, lambda v, x: random_label(C, rng, x.ins, x.outs))


# -- hand-computed structure of the forgetful functor on Q[x]/x^2

def test_forgetful_structure_matches_hand_computation(dual):
    # basis (1, x): the quotient map multiplies, the coproduct is
    # 1 -> 1(x)x + x(x)1 and x -> x(x)x, the counit picks the x coefficient
    _, G = dual
    assert G.nabla(A, A).mat == Mat.from_rows([[1, 0, 0, 0], [0, 1, 1, 0]])
    assert G.delta(A, A).mat == Mat.from_rows([[0, 0], [1, 0], [1, 0], [0, 1]])
    assert G.nabla0.mat == Mat.from_rows([[1], [0]])
    assert G.delta0.mat == Mat.from_rows([[0, 1]])


def test_split_pair_structure_matches_hand_computation(split):
    # orthogonal idempotents: e_i -> e_i (x) e_i
    _, G = split
    assert G.delta(A, A).mat == Mat.from_rows([[1, 0], [0, 0], [0, 0], [0, 1]])
    assert G.nabla(A, A).mat == Mat.from_rows([[1, 0, 0, 0], [0, 0, 0, 1]])


# -- the checker

def test_identity_functor_passes_and_is_separable(dual):
    C, _ = dual
    rep = fr.check_frobenius(fr.identity_frobenius(C))
    assert rep.ok and rep.separable and not rep.mirror_failures


def test_forgetful_functor_is_frobenius_but_not_separable(dual):
    _, G = dual
    rep = fr.check_frobenius(G)
    assert rep.ok, rep.first()
    assert rep.checked["frobenius"] > 0 and rep.checked["lax-naturality"] > 0
    assert not rep.mirror_failures
    assert not rep.separable
    # nabla o delta multiplies by the Euler element 2x: 1 -> 2x, x -> 0
    D = G.D
    assert rep.separability_witness == ((), ())
    for x, y in [((), ()), (A, ()), (A, A)]:
        assert D.compose(G.nabla(x, y), G.delta(x, y)).mat == Mat.from_rows([[0, 0], [2, 0]])


def test_split_pair_is_separable(split):
    rep = fr.check_frobenius(split[1])
    assert rep.ok and rep.separable


def test_zero_coproduct_breaks_the_frobenius_relation(dual):
    rep = fr.check_frobenius(fr.zero_coproduct(dual[1]))
    assert not rep.ok
    axiom, objs = rep.first()
    assert axiom == "frobenius" and len(objs) == 3


def test_graded_instance_is_twisted_and_degree_clean(graded):
    _, G = graded
    assert (G.k, G.d) == (1, 1)
    assert G.delta(A, A).degree == 1 and G.delta0.degree == -1
    rep = fr.check_frobenius(G)
    assert rep.ok and not rep.degree_violations


def test_mislabelled_degree_is_reported(graded):
    _, G = graded
    bad = fr.with_structure(G, delta0=mc.Arrow(G.delta0.src, G.delta0.tgt, G.delta0.mat, 0))
    rep = fr.check_frobenius(bad)
    assert any(v[0] == "delta0" for v in rep.degree_violations)


def test_broken_lax_symmetry_is_reported(dual):
    C, G = dual
    D = G.D

    def nabla(x, y):
        good = G.nabla(x, y)
        return good.scale(2) if (x, y) == (A, ("A*",)) else good
    rep = fr.check_frobenius(fr.with_structure(G, nabla_map=nabla))
    assert "lax-symmetry" in {axiom for axiom, _ in rep.failures}


# -- lambda / theta

def test_lambda_on_a_corolla_is_the_box(dual):
    C, G = dual
    rng = random.Random(3)
    f = random_label(C, rng, [A, A], [A, A, A])
    K = gc.corolla([A, A], [A, A, A], f)
    D = G.D
    want = D.compose_all(G.delta_n([A, A, A]), G(f), G.nabla(A, A))
    assert fr.lambda_(G)(K) == want


def test_lambda_of_genus_one_graph(dual):
    C, G = dual
    i = C.identity(AA)
    verts = {0: Vertex((AA,), (A, A), i), 1: Vertex((A, A), (AA,), i)}
    K = ColoredDigraph(verts, [Edge(0, 0, 1, 0), Edge(0, 1, 1, 1)], [(0, 0)], [(1, 0)])
    L = fr.lambda_(G)
    assert L(K) == G.D.compose(G.nabla(A, A), G.delta(A, A))


def test_lambda_order_independence_on_small_graphs(dual):
    C, G = dual
    L = fr.lambda_(G)
    graphs = list(gc.all_digraphs([A], 3, 2, leaf_orders="fixed"))
    for n, K in enumerate(graphs[::7]):
        K = labelled(C, K, n)
        values = {L(K, o) for o in gc.all_topological_orders(K)}
        assert len(values) == 1


def test_lambda_rejects_bad_order(dual):
    C, G = dual
    i = C.identity(A)
    K = ColoredDigraph({0: Vertex((A,), (A,), i), 1: Vertex((A,), (A,), i)},
                       [Edge(0, 0, 1, 0)], [(0, 0)], [(1, 0)])
    with pytest.raises(gc.GraphError):
        fr.lambda_(G)(K, [1, 0])


def test_lambda_refuses_non_frobenius(dual):
    with pytest.raises(fr.NotFrobenius):
        fr.lambda_(fr.zero_coproduct(dual[1]))


def test_theta_after_lambda_is_identity(dual, graded):
    for _, G in (dual, graded):
        assert fr.compare_frobenius(fr.theta(fr.lambda_(G)), G) == []


def test_lambda_invariant_under_contraction(dual):
    C, G = dual
    L = fr.lambda_(G)
    E = ev.PropEnvelope(mc.UnderlyingDioperad(C))
    rng = random.Random(5)
    graphs = [K for K in gc.all_digraphs([A], 4, 3, leaf_orders="fixed")
              if gc.contractible_pairs(K)]
    for K in rng.sample(graphs, 40):
        K = gc.relabel_vertices(labelled(C, K, rng.randrange(10 ** 6)),
                                lambda v, x: UOp(x.ins, x.outs, x.label))
        u, w = rng.choice(gc.contractible_pairs(K))
        assert L(E.contract(K, u, w)) == L(K)


# -- separable correspondence

def test_psi_phi_round_trip_on_split_pair(split):
    C, G = split
    P = fr.psi(G)
    assert fr.compare_frobenius(fr.phi(P), G) == []
    assert fr.functoriality_failures(P, fr.split_merge_pairs(C)) == []


def test_psi_is_a_functor_on_random_composites(split):
    C, G = split
    P = fr.psi(G)
    env = P.env
    i = C.identity(A)
    # envelope words are words of colors, and the colors are words of C
    f = env.tensor(env.elementary(UOp((A,), (A, A), C.hom_basis(A, AA)[0])), env.identity((A,)))
    g = env.elementary(UOp((A, A, A), (A,), C.hom_basis(("A",) * 3, A)[0]))
    h = env.tensor(env.identity((A,)), env.elementary(UOp((A,), (A,), i)))
    pairs = [(g, f), (f, env.identity((A, A))), (h, env.identity((A, A)))]
    assert fr.functoriality_failures(P, pairs) == []


def test_psi_refuses_non_separable(dual):
    C, G = dual
    with pytest.raises(fr.NotSeparable):
        fr.psi(G)
    P = fr.psi(G, check=False)
    bad = fr.functoriality_failures(P, fr.split_merge_pairs(C))
    assert bad
    merge, split_ = bad[0]
    assert P(P.env.compose(merge, split_)) == G.D.identity(P.obj(merge.tgt))


def test_identity_instance_round_trips(dual):
    C, _ = dual
    Id = fr.identity_frobenius(C)
    assert fr.compare_frobenius(fr.phi(fr.psi(Id)), Id) == []


# -- twisted correspondence

@pytest.mark.parametrize("d", [0, 1])
def test_dioperad_map_round_trip(d):
    C = mc.module_category(mc.dual_numbers(d), bound=3)
    G = fr.forgetful_frobenius(C)
    F = fr.to_dioperad_map(G)
    assert F.target.d == d
    back = fr.from_dioperad_map(F, C, G.D, d)
    assert (back.k, back.d) == (G.k, G.d)
    assert fr.compare_frobenius(back, G) == []


def test_image_exponent_is_outputs_minus_one(graded):
    C, G = graded
    F = fr.to_dioperad_map(G)
    op = UOp((A,), (A, A), C.hom_basis(A, AA)[0])
    img = F(op)
    assert img.exponent == 1 and img.op.degree == op.degree + 1
    # the unit word of A-mod is A itself, so (1;0)-operations have degree 0
    counit = F(UOp((A,), ((),), C.hom_basis(A, ())[0]))
    assert counit.exponent == 0
    eps = F(UOp((A,), (), C.hom_basis(A, ())[0]))
    assert eps.exponent == -1 and eps.op.degree == -1


def test_dioperad_map_preserves_composition(graded):
    C, G = graded
    F = fr.to_dioperad_map(G)
    U, T = F.source, F.target
    a = UOp((A,), (A, A), C.hom_basis(A, AA, 1)[0])
    b = UOp((A, A), (A,), C.hom_basis(AA, A)[0])
    for j in range(2):
        for i in range(2):
            lhs = F(U.compose_edge(a, j, b, i))
            rhs = T.compose_edge(F(a), j, F(b), i)
            assert T.equal(lhs, rhs)


def test_wrong_exponent_is_rejected(graded):
    C, G = graded
    F = fr.to_dioperad_map(G)
    shifted = dp.DioperadMorphism(F.source, F.target, F.color_map,
                                  lambda op: dp.TwOp(F(op).op, F(op).exponent + 1))
    with pytest.raises(fr.DegreeMismatch):
        fr.from_dioperad_map(shifted, C, G.D, 1).nabla(A, A)


# -- Frobenius natural transformations

def _diag(D, w, scale):
    n = D.identity(w).mat.shape[0]
    return mc.Arrow(w, w, Mat.from_entries(n, n, {(i, i): scale(i) for i in range(n)}))


def _conjugate(G, phi, phi_inv):
    """G with every structure map transported along the isomorphisms phi."""
    D = G.D
    return fr.FrobeniusData(
        G.C, D, G.on_obj,
        lambda f: D.compose_all(phi(f.tgt), G(f), phi_inv(f.src)),
        lambda x, y: D.compose_all(phi(x + y), G.nabla(x, y), D.tensor(phi_inv(x), phi_inv(y))),
        D.compose(phi(()), G.nabla0),
        lambda x, y: D.compose_all(D.tensor(phi(x), phi(y)), G.delta(x, y), phi_inv(x + y)),
        D.compose(G.delta0, phi_inv(())), k=G.k, d=G.d)


def test_identity_transformation_is_frobenius(dual):
    _, G = dual
    t = fr.FrobNatTransformation(G, G, lambda x: G.D.identity(G.obj(x)))
    assert fr.check_frob_nat(t) == []


def test_transport_along_isomorphisms_is_frobenius(graded):
    _, G = graded
    D = G.D
    phi = lambda x: _diag(D, G.obj(x), lambda i: i + 1)
    phi_inv = lambda x: _diag(D, G.obj(x), lambda i: Fraction(1, i + 1))
    H = _conjugate(G, phi, phi_inv)
    assert fr.check_frobenius(H, bound=2).ok
    assert fr.check_frob_nat(fr.FrobNatTransformation(G, H, phi)) == []
    # into G itself: x -> 2x is an algebra automorphism of Q[x]/x^2, so
    # the lax side commutes, but the coproduct and counit do not
    bad = {axiom for axiom, _ in fr.check_frob_nat(fr.FrobNatTransformation(G, G, phi))}
    assert bad == {"comonoidal", "counit"}


def test_scalar_transformation_is_not_monoidal(dual):
    _, G = dual
    t = fr.FrobNatTransformation(G, G, lambda x: G.D.identity(G.obj(x)).scale(2))
    bad = fr.check_frob_nat(t)
    assert ("unit", ()) in bad and ("monoidal", ((), ())) in bad
