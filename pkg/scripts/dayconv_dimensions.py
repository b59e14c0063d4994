"""Dimensions of spaces of natural operations in the convolution dioperad
of the one-generator rigid instance, next to the dimension of the
decorated operations (maps between the decorations of x |-> x P).

    python3 scripts/dayconv_dimensions.py [--max-arity 2] [--universe-size 2]

Each row: biprofile, unknowns, limit dimension, equalizer dimension,
decorated dimension.  With three universe words, arity 2 takes about a
minute per biprofile.
"""

import argparse
import time
from itertools import product

from diop import dayconv as dc
from diop import moncat as mc


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-arity", type=int, default=2)
    ap.add_argument("--universe-size", type=int, default=2, choices=[2, 3])
    args = ap.parse_args()
    C = mc.vect_category({"V": (0, 0)}, bound=8)
    universe = [(), ("V",), ("V*",)][:args.universe_size]
    conv = dc.ConvolutionDioperad(C, C, [dc.identity_functor(C), dc.shift_functor(C, ("V",), "T")],
                                  universe=universe, cap=3)
    print(f"{'biprofile':22} {'unknowns':>8} {'limit':>6} {'dim':>4} {'decorated':>9} {'time':>6}")
    for n in range(args.max_arity + 1):
        for m in range(args.max_arity + 1 - n):
            for s, t in product(product(conv.colors, repeat=n), product(conv.colors, repeat=m)):
                start = time.perf_counter()
                sp = dc.natural_operations(conv, list(s), list(t))
                P = sum((conv.functor(x).obj(()) for x in s), ())
                Q = sum((conv.functor(x).obj(()) for x in t), ())
                prof = f"({','.join(s)};{','.join(t)})"
                print(f"{prof:22} {len(sp.variables):>8} {sp.limit_dim:>6} {sp.dim:>4} "
                      f"{C.hom_dim(P, Q):>9} {time.perf_counter() - start:5.1f}s", flush=True)


if __name__ == "__main__":
    main()
