"""Command-line front end.

Subcommands::

    effcond sums        --lattice hex --max-order 12
    effcond solve       --lattice square --f 0.5 --sigma inf --truncation 12
    effcond series      --lattice hex --order 26 [--output coeffs.csv]
    effcond closed-form --formula keller --f 0.85
    effcond compare     --lattice hex --rho 1 --f-min 0 --f-max 0.9 --steps 90 \\
                        --methods series,perrins,matched-perfect
    effcond sweep       ... --output sweep.csv

Exit codes: 0 success, 1 usage or I/O error, 2 at least one failed computation.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import closed_forms as cf
from .errors import ConvergenceError, DomainError, EffcondError, PoleError, SingularSystemError
from .lattice import LatticeKind, build_sum_table, make_lattice, write_sum_table
from .rayleigh import (DEFAULT_ITER_TOL, DEFAULT_MAX_ITER, DEFAULT_TRUNCATION, CompositeParams,
                       solve_composite)
from .series import (DEFAULT_SERIES_ORDER, evaluate, expand_effective_series, required_sum_order,
                     sigma22_series, truncation_estimate, write_coefficients)

METHODS = ("solver", "series", "cma", "perrins", "keller", "matched-perfect", "matched-contrast")
CSV_HEADER = ("f", "method", "sigma11", "sigma12", "sigma22", "order", "residual", "status")
EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _sigma_value(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity", "+inf"):
        return math.inf
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid conductivity ratio {text!r}") from None
    if value < 0 or math.isnan(value):
        raise argparse.ArgumentTypeError("conductivity ratio must be >= 0")
    return value


def _methods_value(text: str) -> tuple[str, ...]:
    names = tuple(m.strip() for m in text.split(",") if m.strip())
    bad = [m for m in names if m not in METHODS]
    if bad or not names:
        raise argparse.ArgumentTypeError(
            f"unknown method(s) {','.join(bad) or text!r}; choose from {','.join(METHODS)}")
    return names


def _fmt(x: float) -> str:
    return "inf" if math.isinf(x) else repr(float(x))


@dataclass(frozen=True)
class SweepConfig:
    command: str = "compare"
    lattice: str = "hexagonal"
    aspect: float | None = None
    angle: float | None = None
    methods: tuple[str, ...] = ("series",)
    sigma: float | None = None
    rho: float | None = None
    f_min: float = 0.0
    f_max: float = 0.5
    steps: int = 10
    truncation: int = DEFAULT_TRUNCATION
    order: int = DEFAULT_SERIES_ORDER
    tol: float = 1e-12
    iter_tol: float = DEFAULT_ITER_TOL
    solver_method: str = "direct"
    output: str | None = None

    @property
    def contrast(self) -> float:
        if self.rho is not None:
            return self.rho
        return CompositeParams.contrast(self.sigma)

    def grid(self) -> np.ndarray:
        return np.linspace(self.f_min, self.f_max, self.steps + 1)

    def validate(self) -> None:
        if (self.sigma is None) == (self.rho is None):
            raise UsageError("give exactly one of --sigma or --rho")
        if self.rho is not None and not -1.0 <= self.rho <= 1.0:
            raise UsageError("--rho must lie in [-1, 1]")
        if not self.methods:
            raise UsageError("method set must be nonempty")
        if self.steps < 1:
            raise UsageError("--steps must be >= 1")
        if self.truncation < 0 or not 0 <= self.order <= 40:
            raise UsageError("--truncation must be >= 0 and --order in 0..40")
        lattice = make_lattice(self.lattice, self.aspect, self.angle)
        if not 0.0 <= self.f_min <= self.f_max < lattice.touching_fraction:
            raise UsageError(
                f"need 0 <= f-min <= f-max < {lattice.touching_fraction:.10g} "
                f"(touching bound of the {lattice.describe()} lattice)")

    def to_argv(self) -> list[str]:
        # --flag=value keeps negative numbers such as -1e-05 from reading as options
        argv = [self.command, f"--lattice={self.lattice}"]
        if self.aspect is not None:
            argv.append(f"--aspect={_fmt(self.aspect)}")
        if self.angle is not None:
            argv.append(f"--angle={_fmt(self.angle)}")
        argv.append("--methods=" + ",".join(self.methods))
        if self.sigma is not None:
            argv.append(f"--sigma={_fmt(self.sigma)}")
        else:
            argv.append(f"--rho={_fmt(self.rho)}")
        argv += [f"--f-min={_fmt(self.f_min)}", f"--f-max={_fmt(self.f_max)}",
                 f"--steps={self.steps}", f"--truncation={self.truncation}",
                 f"--order={self.order}", f"--tol={_fmt(self.tol)}",
                 f"--iter-tol={_fmt(self.iter_tol)}", f"--method={self.solver_method}"]
        if self.output is not None:
            argv.append(f"--output={self.output}")
        return argv


@dataclass(frozen=True)
class ResultRow:
    f: float
    method: str
    sigma11: float | None = None
    sigma12: float | None = None
    sigma22: float | None = None
    order: int | None = None
    residual: float | None = None
    status: str = "ok"

    def __post_init__(self):
        if self.status != "ok" and any(
                v is not None for v in (self.sigma11, self.sigma12, self.sigma22, self.residual)):
            raise ValueError("failed rows carry no numeric results")


def _lattice_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lattice", default="hexagonal",
                   choices=["square", "hex", "hexagonal", "rectangular", "rect", "general"])
    p.add_argument("--aspect", type=float, help="aspect for rectangular/general lattices")
    p.add_argument("--angle", type=float, help="angle between periods (general lattices)")


def _contrast_args(p: argparse.ArgumentParser, required: bool) -> None:
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--sigma", type=_sigma_value, help="inclusion/matrix conductivity ratio ('inf' allowed)")
    g.add_argument("--rho", type=float, help="contrast (sigma-1)/(sigma+1)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="effcond", description="Effective conductivity of doubly periodic disk arrays.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("sums", help="lattice sums table")
    _lattice_args(p)
    p.add_argument("--max-order", type=int, default=12)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--output", "-o")

    p = sub.add_parser("solve", help="truncated Rayleigh system")
    _lattice_args(p)
    p.add_argument("--f", type=float, required=True)
    _contrast_args(p, required=True)
    p.add_argument("--truncation", "-L", type=int, default=DEFAULT_TRUNCATION)
    p.add_argument("--method", choices=["direct", "iterative"], default="direct")
    p.add_argument("--tol", type=float, default=1e-12, help="lattice-sum tolerance")
    p.add_argument("--iter-tol", type=float, default=DEFAULT_ITER_TOL)
    p.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)

    p = sub.add_parser("series", help="contrast/concentration series coefficients")
    _lattice_args(p)
    p.add_argument("--order", "-N", type=int, default=DEFAULT_SERIES_ORDER)
    p.add_argument("--component", choices=["11", "22"], default="11")
    p.add_argument("--f", type=float, help="also evaluate at this concentration")
    _contrast_args(p, required=False)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--output", "-o")

    p = sub.add_parser("closed-form", help="closed-form / matched formulas")
    p.add_argument("--formula", required=True, choices=[f.value for f in cf.FormulaId])
    p.add_argument("--f", type=float, required=True)
    _contrast_args(p, required=False)

    for name in ("compare", "sweep"):
        p = sub.add_parser(name, help="method comparison over an f grid" if name == "compare"
                           else "parameter sweep written to CSV")
        _lattice_args(p)
        p.add_argument("--methods", type=_methods_value, default=("series",))
        _contrast_args(p, required=True)
        p.add_argument("--f-min", type=float, default=0.0)
        p.add_argument("--f-max", type=float, required=True)
        p.add_argument("--steps", type=int, default=10)
        p.add_argument("--truncation", "-L", type=int, default=DEFAULT_TRUNCATION)
        p.add_argument("--order", "-N", type=int, default=DEFAULT_SERIES_ORDER)
        p.add_argument("--tol", type=float, default=1e-12)
        p.add_argument("--iter-tol", type=float, default=DEFAULT_ITER_TOL)
        p.add_argument("--method", choices=["direct", "iterative"], default="direct")
        p.add_argument("--output", "-o", required=(name == "sweep"))
    return parser


def _canonical_lattice(name: str) -> str:
    return LatticeKind.parse(name).value


def parse_args(argv):
    """Parse ``argv``; compare/sweep yield a :class:`SweepConfig`, others a namespace.

    Invalid input raises ``SystemExit(1)``.
    """
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        make_lattice(ns.lattice, ns.aspect, ns.angle) if hasattr(ns, "lattice") else None
    except ValueError as exc:
        parser.error(str(exc))
    if ns.command not in ("compare", "sweep"):
        if hasattr(ns, "rho"):
            try:
                ns.contrast = _contrast_of(ns, default=1.0)
            except UsageError as exc:
                parser.error(str(exc))
        return ns
    cfg = SweepConfig(
        command=ns.command, lattice=_canonical_lattice(ns.lattice), aspect=ns.aspect,
        angle=ns.angle, methods=tuple(ns.methods), sigma=ns.sigma, rho=ns.rho,
        f_min=ns.f_min, f_max=ns.f_max, steps=ns.steps, truncation=ns.truncation,
        order=ns.order, tol=ns.tol, iter_tol=ns.iter_tol, solver_method=ns.method,
        output=ns.output)
    try:
        cfg.validate()
    except (UsageError, ValueError) as exc:
        parser.error(str(exc))
    return cfg


def _status_for(exc: Exception) -> str:
    if isinstance(exc, (DomainError, PoleError)):
        return "domain-error"
    return "convergence-failure"


class _Evaluator:
    """Per-sweep caches: lattice sums and series are built once."""

    def __init__(self, cfg: SweepConfig):
        self.cfg = cfg
        self.lattice = make_lattice(cfg.lattice, cfg.aspect, cfg.angle)
        self.rho = cfg.contrast
        order = 2
        if "solver" in cfg.methods:
            order = max(order, 2 * cfg.truncation + 2)
        if "series" in cfg.methods:
            order = max(order, required_sum_order(cfg.order))
        self.sums = build_sum_table(self.lattice, order, cfg.tol)
        self.series = None
        if "series" in cfg.methods:
            self.series = (expand_effective_series(self.sums, cfg.order),
                           sigma22_series(self.sums, cfg.order))

    def row(self, f: float, method: str) -> ResultRow:
        try:
            return self._compute(f, method)
        except EffcondError as exc:
            return ResultRow(f, method, status=_status_for(exc))

    def _compute(self, f: float, method: str) -> ResultRow:
        cfg, rho = self.cfg, self.rho
        if method == "solver":
            params = CompositeParams.from_rho(f, rho)
            tensor, res = solve_composite(self.sums, params, cfg.truncation, cfg.solver_method,
                                          tol=cfg.iter_tol)
            return ResultRow(f, method, tensor.sigma11, tensor.sigma12, tensor.sigma22,
                             cfg.truncation, res)
        if method == "series":
            p11, p22 = self.series
            z11, z22 = evaluate(p11, rho, f), evaluate(p22, rho, f)
            est = max(truncation_estimate(p11, rho, f), truncation_estimate(p22, rho, f))
            return ResultRow(f, method, z11.real, -z11.imag + 0.0, z22.real, cfg.order, est)
        fid = cf.FormulaId.parse(method)
        if fid.hexagonal_only and self.lattice.kind is not LatticeKind.HEXAGONAL:
            raise DomainError(f"{method} applies to the hexagonal lattice only")
        value = cf.evaluate_formula(fid, f, rho)
        return ResultRow(f, method, value, 0.0, value)


def run_sweep(config: SweepConfig) -> list[ResultRow]:
    """Rows ordered f-major, method-minor; failures are recorded, never raised."""
    ev = _Evaluator(config)
    return [ev.row(float(f), m) for f in config.grid() for m in config.methods]


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, int):
        return str(x)
    return f"{x:.17g}"


def write_csv(rows, path) -> None:
    try:
        with open(path, "w", newline="", encoding="ascii") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_HEADER)
            for r in rows:
                w.writerow([_cell(r.f), r.method, _cell(r.sigma11), _cell(r.sigma12),
                            _cell(r.sigma22), _cell(r.order), _cell(r.residual), r.status])
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc.strerror or exc}") from exc


PLOT_TEMPLATE = '''"""Plot sigma11(f) per method from {csv_name}."""
import csv
import matplotlib.pyplot as plt

curves = {{}}
with open({csv_name!r}) as fh:
    for row in csv.DictReader(fh):
        if row["status"] == "ok":
            curves.setdefault(row["method"], []).append((float(row["f"]), float(row["sigma11"])))

for method, pts in curves.items():
    xs, ys = zip(*pts)
    plt.plot(xs, ys, label=method)
plt.xlabel("f")
plt.ylabel("sigma_e")
plt.yscale("log")
plt.legend()
plt.savefig({png_name!r}, dpi=150)
'''


def write_plot_script(csv_path) -> Path:
    csv_path = Path(csv_path)
    script = csv_path.with_name(csv_path.stem + "_plot.py")
    script.write_text(PLOT_TEMPLATE.format(csv_name=csv_path.name, png_name=csv_path.stem + ".png"))
    return script


def _format_table(rows) -> str:
    lines = [f"{'f':>10} {'method':>17} {'sigma11':>14} {'sigma12':>11} {'sigma22':>14}  status"]
    for r in rows:
        if r.status == "ok":
            lines.append(f"{r.f:10.6f} {r.method:>17} {r.sigma11:14.8g} {r.sigma12:11.3g} "
                         f"{r.sigma22:14.8g}  ok")
        else:
            lines.append(f"{r.f:10.6f} {r.method:>17} {'':>14} {'':>11} {'':>14}  {r.status}")
    return "\n".join(lines)


def _contrast_of(ns, default=None):
    if ns.rho is not None:
        if not -1.0 <= ns.rho <= 1.0:
            raise UsageError("--rho must lie in [-1, 1]")
        return ns.rho
    if ns.sigma is not None:
        return CompositeParams.contrast(ns.sigma)
    return default


def _cmd_sums(ns) -> int:
    lattice = make_lattice(ns.lattice, ns.aspect, ns.angle)
    table = build_sum_table(lattice, ns.max_order, ns.tol)
    if ns.output:
        write_sum_table(table, ns.output)
    for m in range(2, table.max_order + 1):
        v = table[m]
        print(f"{m} {v.real:.17g} {v.imag:.17g} {table.errors[m]:.3g}")
    return EXIT_OK


def _cmd_solve(ns) -> int:
    lattice = make_lattice(ns.lattice, ns.aspect, ns.angle)
    rho = _contrast_of(ns)
    params = CompositeParams.from_rho(ns.f, rho)
    sums = build_sum_table(lattice, 2 * ns.truncation + 2, ns.tol)
    tensor, res = solve_composite(sums, params, ns.truncation, ns.method, ns.iter_tol, ns.max_iter)
    print(f"lattice={lattice.describe()} f={ns.f:g} rho={rho:g} L={ns.truncation}")
    print(f"sigma11 = {tensor.sigma11:.17g}")
    print(f"sigma12 = {tensor.sigma12:.17g}")
    print(f"sigma22 = {tensor.sigma22:.17g}")
    print(f"residual = {res:.3g}")
    return EXIT_OK


def _cmd_series(ns) -> int:
    lattice = make_lattice(ns.lattice, ns.aspect, ns.angle)
    sums = build_sum_table(lattice, required_sum_order(ns.order), ns.tol)
    poly = expand_effective_series(sums, ns.order) if ns.component == "11" \
        else sigma22_series(sums, ns.order)
    if ns.output:
        write_coefficients(poly, ns.output)
    else:
        print("j,k,re,im")
        for j, k, c in poly.rows():
            print(f"{j},{k},{c.real:.17g},{c.imag:.17g}")
    if ns.f is not None:
        rho = _contrast_of(ns, default=1.0)
        z = evaluate(poly, rho, ns.f)
        print(f"# value at f={ns.f:g} rho={rho:g}: {z.real:.17g} {z.imag:+.17g}i", file=sys.stderr)
    return EXIT_OK


def _cmd_closed_form(ns) -> int:
    rho = _contrast_of(ns, default=1.0)
    value = cf.evaluate_formula(ns.formula, ns.f, rho)
    print(f"{value:.17g}")
    return EXIT_OK


def _cmd_grid(cfg: SweepConfig) -> int:
    rows = run_sweep(cfg)
    if cfg.output:
        write_csv(rows, cfg.output)
        write_plot_script(cfg.output)
    if cfg.command == "compare":
        print(_format_table(rows))
    else:
        failed = sum(r.status != "ok" for r in rows)
        print(f"wrote {len(rows)} rows to {cfg.output} ({failed} failed)")
    return EXIT_FAILED if any(r.status != "ok" for r in rows) else EXIT_OK


def main(argv=None) -> int:
    try:
        parsed = parse_args(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if isinstance(parsed, SweepConfig):
            return _cmd_grid(parsed)
        handler = {"sums": _cmd_sums, "solve": _cmd_solve, "series": _cmd_series,
                   "closed-form": _cmd_closed_form}[parsed.command]
        return handler(parsed)
    except UsageError as exc:
        print(f"effcond: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"effcond: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, PoleError, ConvergenceError, SingularSystemError) as exc:
        print(f"effcond: {_status_for(exc)}: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except ValueError as exc:
        print(f"effcond: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
