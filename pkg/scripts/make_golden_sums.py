"""Regenerate the frozen lattice-sum fixtures in tests/data/.

    python3 scripts/make_golden_sums.py [--max-order 26] [--tol 1e-13]
"""

import argparse
from pathlib import Path

from effcond.lattice import build_sum_table, make_lattice, write_sum_table

FIXTURES = {
    "golden_sums_square.txt": ("square", None),
    "golden_sums_hexagonal.txt": ("hexagonal", None),
    "golden_sums_rect2.txt": ("rectangular", 2.0),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-order", type=int, default=26)
    ap.add_argument("--tol", type=float, default=1e-13)
    ap.add_argument("--out-dir", default=str(Path(__file__).resolve().parent.parent / "tests" / "data"))
    args = ap.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, (kind, aspect) in FIXTURES.items():
        table = build_sum_table(make_lattice(kind, aspect), args.max_order, args.tol)
        write_sum_table(table, out / name)
        print(f"wrote {out / name}")


if __name__ == "__main__":
    main()
