"""Write the data behind the hexagonal comparison figures as CSV files.

Two sweeps over f for perfectly conducting disks (rho = 1):

* ``fig_matched_contrast.csv``: matched contrast formula against the
  Perrins-McPhedran fit and the truncated Rayleigh solver;
* ``fig_matched_perfect.csv``: matched formula for perfect conductors,
  the Keller law and the Perrins-McPhedran fit, close to touching.

Each CSV gets a companion ``*_plot.py`` script.
"""

import argparse
from pathlib import Path

from effcond.cli import SweepConfig, run_sweep, write_csv, write_plot_script


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", default="figures")
    ap.add_argument("--steps", type=int, default=200)
    ap.add_argument("--truncation", type=int, default=16)
    args = ap.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    configs = {
        "fig_matched_contrast.csv": SweepConfig(
            command="sweep", lattice="hexagonal", rho=1.0,
            methods=("solver", "matched-contrast", "perrins", "cma"),
            f_min=0.0, f_max=0.9, steps=args.steps, truncation=args.truncation),
        "fig_matched_perfect.csv": SweepConfig(
            command="sweep", lattice="hexagonal", rho=1.0,
            methods=("matched-perfect", "keller", "perrins"),
            f_min=0.8, f_max=0.9068, steps=args.steps),
    }
    for name, cfg in configs.items():
        rows = run_sweep(cfg)
        write_csv(rows, out / name)
        script = write_plot_script(out / name)
        failed = sum(r.status != "ok" for r in rows)
        print(f"{out / name}: {len(rows)} rows, {failed} failed; plot with python3 {script}")


if __name__ == "__main__":
    main()
