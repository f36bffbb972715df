"""Truncation-order convergence of the Rayleigh solver.

    python3 scripts/convergence_study.py --lattice hex --f 0.8 --rho 1 --orders 2 4 8 16 24
"""

import argparse

from effcond.lattice import build_sum_table, make_lattice
from effcond.rayleigh import CompositeParams, convergence_study


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lattice", default="hexagonal")
    ap.add_argument("--aspect", type=float)
    ap.add_argument("--f", type=float, default=0.8)
    ap.add_argument("--rho", type=float, default=1.0)
    ap.add_argument("--orders", type=int, nargs="+", default=[2, 4, 8, 12, 16, 24])
    ap.add_argument("--method", choices=["direct", "iterative"], default="direct")
    args = ap.parse_args()

    lattice = make_lattice(args.lattice, args.aspect)
    sums = build_sum_table(lattice, 2 * max(args.orders) + 2)
    params = CompositeParams.from_rho(args.f, args.rho)
    previous = None
    print(f"{'L':>4} {'sigma11':>22} {'sigma22':>22} {'change':>10} {'residual':>10}")
    for entry in convergence_study(sums, params, args.orders, args.method):
        if not entry.ok:
            print(f"{entry.order:>4} failed: {entry.error}")
            continue
        s11 = entry.tensor.sigma11
        change = "" if previous is None else f"{abs(s11 - previous):10.3g}"
        print(f"{entry.order:>4} {s11:22.15f} {entry.tensor.sigma22:22.15f} {change:>10} "
              f"{entry.residual:10.3g}")
        previous = s11


if __name__ == "__main__":
    main()
