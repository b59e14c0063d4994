import random
from itertools import permutations

import pytest

from diop import dioperad as dp
from diop import envelope as ev
from diop import graphcore as gc
from diop import moncat as mc
from diop.dioperad import FrobOp
from diop.envelope import EnvMorphism, Part
from diop.graphcore import ColoredDigraph, Edge, Vertex

FROB = dp.FrobDioperad()
X = "x"
FROB_SIG = [((X, X), (X,), "mu"), ((), (X,), "eta"), ((X,), (X, X), "delta"), ((X,), (), "eps")]


def frob_labelled(g):
    return gc.relabel_vertices(g, lambda v, x: FROB.generator_op(x.label))


def frob_graphs(n):
    return [frob_labelled(g) for g in gc.enumerate_connected(FROB_SIG, n)]


def genus_oracle(g):
    """Connected Frobenius composites are classified by their boundary and
    their number of independent cycles."""
    return len(g.inputs), len(g.outputs), gc.first_betti_number(g)


def triangle():
    """delta -> delta, both feeding one product: a single cycle."""
    d, m = FrobOp(1, 2), FrobOp(2, 1)
    verts = {0: Vertex((X,), (X, X), d), 1: Vertex((X,), (X, X), d), 2: Vertex((X, X), (X,), m)}
    edges = [Edge(0, 0, 1, 0), Edge(0, 1, 2, 0), Edge(1, 0, 2, 1)]
    return ColoredDigraph(verts, edges, [(0, 0)], [(1, 1), (2, 0)])


# -- properadic envelope

def test_identity_corolla_is_identity():
    E = ev.PropEnvelope(FROB)
    m = E.corolla(FrobOp(2, 1))
    i = E.identity(X)
    assert E.compose_edge(i, 0, m, 1) == m
    assert E.compose_edge(m, 0, i, 0) == m


def test_two_edge_graft_is_irreducible():
    E = ev.PropEnvelope(FROB)
    d, m = E.corolla(FrobOp(1, 2)), E.corolla(FrobOp(2, 1))
    c = E.compose_multi(d, m, [(0, 0), (1, 1)])
    assert gc.contractible_pairs(c.rep) == []
    nf = ev.env_normal_form(c)
    assert len(nf.vertices) == 2 and len(nf.edges) == 2
    assert c != E.identity(X)      # genus one, not the identity


def test_one_edge_graft_is_composite_corolla():
    E = ev.PropEnvelope(FROB)
    d, m = E.corolla(FrobOp(1, 2)), E.corolla(FrobOp(2, 1))
    c = E.compose_multi(d, m, [(0, 1)])
    assert c == E.corolla(FROB.compose_edge(FrobOp(1, 2), 0, FrobOp(2, 1), 1))


SIG = {"f": (("a",), ("a", "b")), "g": (("b", "a"), ("a",)), "h": (("a",), ("a",))}


def test_simply_connected_contracts_to_compose_graph():
    F = dp.FreeDioperad(SIG)
    E = ev.PropEnvelope(F)
    sig = [(i, o, n) for n, (i, o) in SIG.items()]
    for g in gc.enumerate_connected(sig, 4, simply_connected=True):
        labelled = gc.relabel_vertices(g, lambda v, x: F.generator(x.label))
        nf = E.normal_form(labelled)
        assert len(nf.vertices) == 1
        (only,) = nf.vertices.values()
        # read the label in the order of the graph's leaves
        got = F.act(only.label, [q for _, q in nf.inputs], [p for _, p in nf.outputs])
        oracle = dp.compose_graph(F, labelled, {v: x.label for v, x in labelled.vertices.items()})
        assert F.equal(got, oracle)


def test_genus_one_two_vertex_is_fixed_point():
    E = ev.PropEnvelope(FROB)
    d, m = E.corolla(FrobOp(1, 2)), E.corolla(FrobOp(2, 1))
    nf = ev.env_normal_form(E.compose_multi(d, m, [(0, 0), (1, 1)]))
    assert E.normal_form(nf).key() == nf.key()


def test_plain_contraction_is_not_confluent_but_normal_form_is():
    E = ev.PropEnvelope(FROB)
    g = triangle()
    ends = E.irreducibles(g)
    assert len(ends) == 2          # the two different two-vertex graphs
    assert len({E.normal_key(E._graphs[k]) for k in ends}) == 1


def _all_reduction_ends(E, g):
    pairs = gc.contractible_pairs(g)
    if not pairs:
        return [g]
    out = []
    for u, w in pairs:
        out += _all_reduction_ends(E, E.contract(g, u, w))
    return out


def test_tree_plus_edge_all_contraction_orders_agree():
    # a four-vertex tree with one extra edge closing a cycle
    E = ev.PropEnvelope(FROB)
    found = 0
    for g in frob_graphs(4):
        if len(g.vertices) == 4 and gc.first_betti_number(g) == 1:
            ends = _all_reduction_ends(E, g)
            assert len({E.normal_key(h) for h in ends}) == 1
            found += 1
    assert found > 20


def test_classes_match_genus_classification_up_to_four_vertices():
    E = ev.PropEnvelope(FROB)
    by_key, by_inv = {}, {}
    for g in frob_graphs(4):
        k, inv = E.normal_key(g), genus_oracle(g)
        assert by_key.setdefault(k, inv) == inv
        assert by_inv.setdefault(inv, k) == k
    assert E.stats.bounded == 0


def _random_tree_subset(rng, g):
    """A connected, simply-connected, convex vertex subset of size >= 2."""
    for _ in range(50):
        S = {rng.choice(list(g.vertices))}
        for _ in range(rng.randint(1, 3)):
            nbrs = [w for v in S for w in g.successors(v) | g.predecessors(v) if w not in S]
            if nbrs:
                S.add(rng.choice(nbrs))
        if len(S) < 2 or not gc.is_convex(g, S):
            continue
        sub = gc.collapse(g, sorted(S, key=repr))[1]
        if gc.is_simply_connected(sub):
            return S
    return None


def test_contraction_invariance_random_subtrees():
    E = ev.PropEnvelope(FROB)
    rng = random.Random(4)
    graphs = [g for g in frob_graphs(5) if len(g.vertices) == 5]
    done = 0
    for g in rng.sample(graphs, 200):
        S = _random_tree_subset(rng, g)
        if S is None:
            continue
        q, part = gc.collapse(g, sorted(S, key=repr), new_id="s")
        lab = dp.compose_graph(FROB, part, {v: x.label for v, x in part.vertices.items()})
        q = gc.relabel_vertices(q, lambda v, x: lab if v == "s" else x.label)
        assert E.normal_key(q) == E.normal_key(g)
        done += 1
    assert done > 100


def test_act_and_leaf_orders():
    E = ev.PropEnvelope(FROB)
    c = E.compose_multi(E.corolla(FrobOp(1, 2)), E.corolla(FrobOp(2, 2)), [(0, 0), (1, 1)])
    swapped = E.act(c, None, [1, 0])
    assert E.profile(swapped) == E.profile(c)
    # Frobenius composites of genus one are symmetric in their outputs
    assert swapped == c


# -- evaluation in a properad

def _frob_linear(alg):
    C = mc.vect_category({"A": alg.degrees})
    U = mc.UnderlyingDioperad(C)
    Up = mc.UnderlyingProperad(C)
    w = ("A",)
    arrows = mc.frobenius_algebra_arrows(C, w, alg)
    prof = {"mu": ((w, w), (w,)), "eta": ((), (w,)), "delta": ((w,), (w, w)), "eps": ((w,), ())}
    psi = dp.from_generators(FROB, U, {X: w}, {k: U.make(*prof[k], arrows[k]) for k in prof})
    return C, Up, psi


def test_evaluation_independent_of_convex_order():
    C, Up, psi = _frob_linear(mc.dual_numbers(0))
    for g in frob_graphs(4)[::7]:
        shape = ColoredDigraph({v: Vertex(tuple((("A",),) * len(x.ins)), tuple((("A",),) * len(x.outs)))
                                for v, x in g.vertices.items()}, g.edges, g.inputs, g.outputs)
        labels = {v: psi(x.label) for v, x in g.vertices.items()}
        values = {ev.evaluate_graph(Up, shape, labels, o).arrow.mat for o in ev.convex_orders(g)}
        assert len(values) == 1


def test_evaluation_respects_class_identification():
    # both two-vertex reductions of the triangle evaluate alike
    C, Up, psi = _frob_linear(mc.dual_numbers(0))
    Ed = ev.PropEnvelope(FROB)
    phi = ev.extend_to_envelope(Ed, psi, Up)
    ends = [Ed._graphs[k] for k in Ed.irreducibles(triangle())]
    vals = [phi(ev.EnvelopeOpClass(Ed, h)) for h in ends + [triangle()]]
    assert all(v == vals[0] for v in vals)


# -- symmetric monoidal envelope

def test_elementary_composite_is_properadic_composite():
    E = ev.full_envelope(FROB)
    Ed = E.P
    d, m = Ed.corolla(FrobOp(1, 2)), Ed.corolla(FrobOp(2, 1))
    f, g = E.elementary(d), E.elementary(m)
    h = E.compose(g, f)
    assert len(h.parts) == 1
    assert h.parts[0].op == Ed.compose_multi(d, m, [(0, 0), (1, 1)])


def test_tensor_of_elementary_has_two_parts():
    E = ev.full_envelope(FROB)
    a, b = E.unit(FrobOp(2, 1)), E.unit(FrobOp(0, 1))
    t = E.tensor(a, b)
    assert len(t.parts) == 2 and t.src == (X, X) and t.tgt == (X, X)
    assert t.parts[1] == Part((), (1,), b.parts[0].op)


def test_check_rejects_bad_partition():
    E = ev.full_envelope(FROB)
    op = E.P.corolla(FrobOp(1, 1))
    with pytest.raises(ValueError):
        E.check(EnvMorphism((X,), (X,), (Part((0,), (), op),)))
    with pytest.raises(ValueError):
        E.check(EnvMorphism((X,), (), (Part((0,), (), op),)))


def test_hom_count_single_color_bound_three():
    # identity, genus-one cylinder, counit-then-unit, identity beside a sphere
    E = ev.full_envelope(FROB, bound=3)
    homs = E.hom((X,), (X,))
    assert len(homs) == 4
    assert sorted(len(f.parts) for f in homs) == [1, 1, 2, 2]


def test_no_generators_gives_permutations_only():
    O = dp.FreeDioperad({}, colors=[X])
    E = ev.full_envelope(O, bound=3)
    homs = E.hom((X, X), (X, X))
    perms = {E.key(E.permute((X, X), p)) for p in permutations(range(2))}
    assert {E.key(f) for f in homs} == perms


def test_monoidal_axioms_on_small_homs():
    E = ev.full_envelope(FROB, bound=2)
    words = [(), (X,), (X, X)]
    ms = [f for a in words for b in words if len(a) + len(b) <= 3 for f in E.hom(a, b)]
    assert len(ms) > 10
    assert ev.check_axioms(E, ms, cap=250) == []


def test_associativity_word_length_three():
    E = ev.full_envelope(FROB, bound=2)
    words = [(X,), (X, X), (X, X, X)]
    rng = random.Random(2)
    homs = {(a, b): E.hom(a, b, 2) for a in words for b in words}
    assert all(homs.values())
    for _ in range(60):
        a, b, c, d = (rng.choice(words) for _ in range(4))
        f, g, h = rng.choice(homs[a, b]), rng.choice(homs[b, c]), rng.choice(homs[c, d])
        assert E.equal(E.compose(h, E.compose(g, f)), E.compose(E.compose(h, g), f))


def test_unit_map_preserves_composition():
    E = ev.full_envelope(FROB)
    U = ev.EnvelopeUnderlying(E)
    gens = [FROB.generator_op(n) for n in FROB.GENERATORS]

    def as_uop(f):
        return U.make([(c,) for c in f.src], [(c,) for c in f.tgt], f)

    for a in gens:
        for b in gens:
            for j in range(a.n):
                for i in range(b.m):
                    lhs = U.compose_edge(as_uop(E.unit(a)), j, as_uop(E.unit(b)), i)
                    rhs = as_uop(E.unit(FROB.compose_edge(a, j, b, i)))
                    assert U.equal(lhs, rhs)


# -- translators

def _functor(alg):
    C, Up, psi = _frob_linear(alg)
    E = ev.full_envelope(FROB, bound=3)
    phi = ev.extend_to_envelope(E.P, psi, Up)
    return C, Up, E, phi


def test_gamma_after_upsilon_is_identity():
    C, Up, E, phi = _functor(mc.dual_numbers(0))
    back = ev.gamma(ev.upsilon(E, C, phi), Up)
    for b in [((X,), (X,)), ((X, X), (X,)), ((X,), (X, X)), ((), ())]:
        for c, _ in E.classes(*b, 3).values():
            assert Up.equal(back(c), phi(c))


def test_upsilon_independent_of_part_order():
    C, Up, E, phi = _functor(mc.dual_numbers(0))
    fwd = ev.upsilon(E, C, phi)
    rev = ev.upsilon(E, C, phi, order=lambda parts: list(reversed(range(len(parts)))))
    words = [(X,), (X, X)]
    n2 = 0
    for a in words:
        for b in words:
            for f in E.hom(a, b, 3):
                assert fwd(f) == rev(f)
                n2 += len(f.parts) == 2
    assert n2 > 3


def test_upsilon_after_gamma_on_strict_functor():
    C, Up, E, phi = _functor(mc.dual_numbers(0))
    F = ev.upsilon(E, C, phi)
    G = ev.upsilon(E, C, ev.gamma(F, Up))
    for f in E.hom((X, X), (X,), 3) + E.hom((X,), (X, X), 2):
        assert G(f) == F(f)


def test_upsilon_is_a_functor():
    C, Up, E, phi = _functor(mc.dual_numbers(0))
    F = ev.upsilon(E, C, phi)
    rng = random.Random(9)
    words = [(X,), (X, X)]
    homs = {(a, b): E.hom(a, b, 2) for a in words for b in words}
    for _ in range(40):
        a, b, c = (rng.choice(words) for _ in range(3))
        f, g = rng.choice(homs[a, b]), rng.choice(homs[b, c])
        assert F(E.compose(g, f)) == C.compose(F(g), F(f))
        assert F(E.tensor(f, g)) == C.tensor(F(f), F(g))


def test_restriction_separates_algebras():
    # different Frobenius algebras give functors that differ on generators
    seen = {}
    for name, alg in [("dual", mc.dual_numbers(0)), ("split", mc.split_pair())]:
        C, Up, E, phi = _functor(alg)
        F = ev.upsilon(E, C, phi)
        seen[name] = F(E.unit(FrobOp(1, 0))).mat
    assert seen["dual"] != seen["split"]
