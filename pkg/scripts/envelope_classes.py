"""Count properadic-envelope classes of connected Frob graphs by size and
compare the partition with the (inputs, outputs, cycles) classification.

    python3 scripts/envelope_classes.py [--max-vertices 4]
"""

import argparse
from collections import Counter

from diop import dioperad as dp
from diop import envelope as ev
from diop import graphcore as gc

X = "x"
SIG = [((X, X), (X,), "mu"), ((), (X,), "eta"), ((X,), (X, X), "delta"), ((X,), (), "eps")]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-vertices", type=int, default=4)
    args = ap.parse_args()
    O = dp.FrobDioperad()
    E = ev.PropEnvelope(O)
    graphs = [gc.relabel_vertices(g, lambda v, x: O.generator_op(x.label))
              for g in gc.enumerate_connected(SIG, args.max_vertices)]
    by_size = Counter(len(g.vertices) for g in graphs)
    classes, mismatches = {}, 0
    for g in graphs:
        inv = (len(g.inputs), len(g.outputs), gc.first_betti_number(g))
        if classes.setdefault(E.normal_key(g), inv) != inv:
            mismatches += 1
    invariants = set(classes.values())
    print("graphs by vertex count:", dict(sorted(by_size.items())))
    print(f"envelope classes: {len(classes)}   (inputs, outputs, cycles) classes: {len(invariants)}")
    print(f"partition mismatches: {mismatches}   normal-form states explored: {E.stats.states}"
          f"   bounded explorations: {E.stats.bounded}")
    genus = Counter(c for _, _, c in invariants)
    print("classes by number of cycles:", dict(sorted(genus.items())))


if __name__ == "__main__":
    main()
