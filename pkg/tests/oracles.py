"""Independent reference implementations used only by the tests."""
from itertools import permutations, product


def brute_force_canonical(g):
    """Minimum encoding over all type-preserving vertex relabelings.

    Shares no code with the traversal-based canonical form: it simply
    tries every bijection that maps vertices to vertices of the same
    (ins, outs, label) type.
    """
    by_type = {}
    for v, x in g.vertices.items():
        by_type.setdefault((x.ins, x.outs, repr(x.label)), []).append(v)
    types = sorted(by_type)
    blocks = [by_type[t] for t in types]
    best = None
    for perms in product(*(permutations(b) for b in blocks)):
        num = {}
        for block in perms:
            for v in block:
                num[v] = len(num)
        enc = (tuple(types), tuple(len(b) for b in blocks),
               tuple(sorted((num[e.src], e.out_port, num[e.tgt], e.in_port) for e in g.edges)),
               tuple((num[v], q) for v, q in g.inputs),
               tuple((num[v], p) for v, p in g.outputs))
        if best is None or enc < best:
            best = enc
    return best


def spanning_forest_betti(g):
    """First Betti number via union-find over the undirected multigraph."""
    parent = {v: v for v in g.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    cycles = 0
    for e in g.edges:
        a, b = find(e.src), find(e.tgt)
        if a == b:
            cycles += 1
        else:
            parent[a] = b
    ncomp = len({find(v) for v in g.vertices})
    return cycles, ncomp


def natural_transformation_dim(C, D, F, G, universe):
    """dim Nat(F, G) on the full subcategory spanned by ``universe``,
    computed with sympy: unknown matrices theta_x, one equation
    ``G(u) theta_x = theta_y F(u)`` per basis morphism u: x -> y."""
    import sympy

    def to_sym(m):
        return sympy.Matrix(m.nrows, m.ncols, lambda i, j: sympy.Rational(m[i, j].numerator,
                                                                           m[i, j].denominator))
    offsets, shapes, n = {}, {}, 0
    for x in universe:
        r, c = D.dim(G.obj(x)), D.dim(F.obj(x))
        offsets[x], shapes[x] = n, (r, c)
        n += r * c
    rows = []
    for x in universe:
        for y in universe:
            for u in C.hom_basis(x, y):
                Gu, Fu = to_sym(G.mor(u).mat), to_sym(F.mor(u).mat)
                (rx, cx), (ry, cy) = shapes[x], shapes[y]
                for i in range(ry):
                    for j in range(cx):
                        row = [0] * n
                        for s in range(rx):       # (G(u) theta_x)_{ij}
                            row[offsets[x] + s * cx + j] += Gu[i, s]
                        for s in range(cy):       # (theta_y F(u))_{ij}
                            row[offsets[y] + i * cy + s] -= Fu[s, j]
                        rows.append(row)
    if not rows:
        return n
    return n - sympy.Matrix(rows).rank()
