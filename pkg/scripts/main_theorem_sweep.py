"""Run the full duality-context verification on every bundled context and
on the fault-injected variants; print one row per context.

    python3 scripts/main_theorem_sweep.py [--bound 3]
"""

import argparse
import time

from diop import duality as du
from diop import moncat as mc


def contexts(bound):
    yield "identity (d=0)", du.identity_context(mc.module_category(mc.dual_numbers(0), bound=bound), bound=bound)
    for name, alg in [("dual numbers (d=0)", mc.dual_numbers(0)), ("dual numbers (d=1)", mc.dual_numbers(1)),
                      ("split pair", mc.split_pair())]:
        yield name, du.frobenius_algebra_context(alg, bound=bound)
    base = du.frobenius_algebra_context(mc.dual_numbers(1), bound=bound)
    yield "fault: orientation x2 at A", du.scaled_orientation_at(base, ("A",), 2)
    yield "fault: zero orientation", du.zero_orientation(base)
    yield "fault: counit x3 at A", du.scaled_counit_at(base, ("A",), 3)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--bound", type=int, default=3)
    args = ap.parse_args()
    print(f"{'context':30} {'result':6} {'frobenius checks':>16} {'separable':>9} {'time':>6}  witness")
    for name, ctx in contexts(args.bound):
        t = time.perf_counter()
        rep = du.verify_main_theorem(ctx)
        dt = time.perf_counter() - t
        checks = rep.frobenius.checked["frobenius"] if rep.frobenius else 0
        sep = rep.frobenius.separable if rep.frobenius else "-"
        print(f"{name:30} {'pass' if rep.ok else 'FAIL':6} {checks:>16} {str(sep):>9} {dt:5.1f}s  "
              f"{'' if rep.ok else rep.witness()}")


if __name__ == "__main__":
    main()
