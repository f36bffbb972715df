import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from effcond.cli import (CSV_HEADER, METHODS, ResultRow, SweepConfig, main, parse_args, run_sweep,
                         write_csv)
from effcond.lattice import make_lattice

HEADER_LINE = b"f,method,sigma11,sigma12,sigma22,order,residual,status\n"


def test_solve_sigma_inf_maps_to_rho_one():
    ns = parse_args("solve --lattice square --f 0.5 --sigma inf --truncation 12".split())
    assert ns.command == "solve" and ns.contrast == 1.0 and ns.truncation == 12


def test_compare_grid_cardinality():
    cfg = parse_args("compare --lattice hex --rho 1 --f-min 0 --f-max 0.9 --steps 90 "
                     "--methods series,perrins,matched-perfect".split())
    assert isinstance(cfg, SweepConfig) and cfg.lattice == "hexagonal"
    rows = run_sweep(cfg)
    assert len(rows) == 91 * 3
    assert [r.method for r in rows[:3]] == ["series", "perrins", "matched-perfect"]
    assert rows[0].f == 0.0 and rows[-1].f == pytest.approx(0.9)
    assert all(r.status == "ok" for r in rows)


@pytest.mark.parametrize("argv", [
    "solve --f 0.5 --sigma 2 --rho 0.3",
    "solve --f 0.5",
    "solve --f 0.5 --rho 1 --unknown",
    "compare --rho 1 --f-max 0.95",
    "compare --rho 1 --f-max 0.5 --f-min 0.6",
    "compare --rho 1 --f-max 0.5 --steps 0",
    "compare --rho 1 --f-max 0.5 --methods bogus",
    "compare --rho 1.5 --f-max 0.5",
    "compare --sigma -1 --f-max 0.5",
    "sums --lattice rect",
    "frobnicate",
])
def test_usage_errors_exit_one(argv, capsys):
    assert main(argv.split()) == 1
    assert "error" in capsys.readouterr().err


def test_keller_beyond_threshold_exits_two(capsys):
    assert main("closed-form --formula keller --f 0.95".split()) == 2
    assert "domain-error" in capsys.readouterr().err


def test_closed_form_and_solve_ok(capsys):
    assert main("closed-form --formula cma --f 0.5 --rho 1".split()) == 0
    assert float(capsys.readouterr().out) == pytest.approx(3.0)
    assert main("solve --lattice square --f 0.5 --sigma inf".split()) == 0
    assert "sigma11 = 3.08019782" in capsys.readouterr().out


def test_sums_and_series_commands(tmp_path, capsys):
    assert main(["sums", "--lattice", "square", "--max-order", "4"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("2 3.14159265358979")
    out = tmp_path / "c.csv"
    assert main(["series", "--lattice", "hex", "--order", "8", "-o", str(out)]) == 0
    assert out.read_text().startswith("j,k,re,im\n")


def test_rho_zero_sweep_is_trivial():
    cfg = SweepConfig(lattice="square", rho=0.0, methods=("solver", "series", "cma"),
                      f_max=0.7, steps=7)
    for row in run_sweep(cfg):
        assert row.status == "ok"
        assert (row.sigma11, row.sigma12, row.sigma22) == (1.0, 0.0, 1.0)


def test_solver_series_agree_square():
    cfg = SweepConfig(lattice="square", rho=0.5, methods=("solver", "series"), f_max=0.5, steps=10)
    rows = run_sweep(cfg)
    for solver, series in zip(rows[::2], rows[1::2]):
        assert abs(solver.sigma11 - series.sigma11) < 1e-5


def test_failures_are_isolated(tmp_path):
    out = tmp_path / "s.csv"
    code = main(["sweep", "--lattice", "square", "--rho", "0.5", "--f-max", "0.5", "--steps", "2",
                 "--methods", "solver,perrins,keller", "-o", str(out)])
    assert code == 2
    lines = out.read_text().splitlines()
    assert len(lines) == 1 + 3 * 3
    assert lines[3] == "0,keller,,,,,,domain-error"
    assert lines[1].endswith(",ok")
    assert (tmp_path / "s_plot.py").exists()


def test_perfect_conductor_formula_needs_rho_one():
    rows = run_sweep(SweepConfig(lattice="hexagonal", rho=0.5, methods=("keller", "matched-perfect",
                                                                        "matched-contrast"),
                                 f_min=0.5, f_max=0.5, steps=1))
    assert [r.status for r in rows[:3]] == ["domain-error", "domain-error", "ok"]


def test_unwritable_output(capsys):
    assert main(["sweep", "--rho", "1", "--f-max", "0.5", "-o", "/nonexistent-dir/x.csv"]) == 1
    assert "/nonexistent-dir/x.csv" in capsys.readouterr().err


def test_csv_empty_and_single(tmp_path):
    write_csv([], tmp_path / "e.csv")
    assert (tmp_path / "e.csv").read_bytes() == HEADER_LINE
    write_csv([ResultRow(0.1, "cma", 1.0 / 3.0, 0.0, 1.0 / 3.0)], tmp_path / "o.csv")
    data = (tmp_path / "o.csv").read_bytes()
    assert data == HEADER_LINE + b"0.10000000000000001,cma,0.33333333333333331,0,0.33333333333333331,,,ok\n"
    assert ",".join(CSV_HEADER).encode() + b"\n" == HEADER_LINE


def test_failed_row_invariant():
    with pytest.raises(ValueError):
        ResultRow(0.1, "keller", 2.0, status="domain-error")


def test_sweep_is_deterministic(tmp_path):
    cfg = SweepConfig(lattice="hexagonal", sigma=math.inf, methods=("solver", "series", "perrins"),
                      f_max=0.8, steps=8, truncation=8)
    write_csv(run_sweep(cfg), tmp_path / "a.csv")
    write_csv(run_sweep(cfg), tmp_path / "b.csv")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


finite = dict(allow_nan=False, allow_infinity=False)


@st.composite
def configs(draw):
    kind = draw(st.sampled_from(["square", "hexagonal", "rectangular", "general"]))
    aspect = draw(st.floats(0.5, 2.0, **finite)) if kind in ("rectangular", "general") else None
    angle = draw(st.floats(0.8, 2.3, **finite)) if kind == "general" else None
    methods = tuple(draw(st.lists(st.sampled_from(METHODS), min_size=1, max_size=4, unique=True)))
    if draw(st.booleans()):
        contrast = {"sigma": draw(st.one_of(st.just(math.inf), st.floats(0.0, 1e6, **finite)))}
    else:
        contrast = {"rho": draw(st.floats(-1.0, 1.0, **finite))}
    bound = make_lattice(kind, aspect, angle).touching_fraction
    f_max = draw(st.floats(0.0, 0.99 * bound, **finite))
    f_min = draw(st.floats(0.0, f_max, **finite))
    return SweepConfig(
        command=draw(st.sampled_from(["compare", "sweep"])), lattice=kind, aspect=aspect,
        angle=angle, methods=methods, f_min=f_min, f_max=f_max,
        steps=draw(st.integers(1, 500)), truncation=draw(st.integers(0, 30)),
        order=draw(st.integers(0, 40)), tol=draw(st.floats(1e-15, 1e-6, **finite)),
        iter_tol=draw(st.floats(1e-15, 1e-6, **finite)),
        solver_method=draw(st.sampled_from(["direct", "iterative"])),
        output=draw(st.one_of(st.none(), st.just("out.csv"))), **contrast)


@settings(max_examples=60, deadline=None)
@given(configs())
def test_config_round_trip(cfg):
    if cfg.command == "sweep" and cfg.output is None:
        cfg = SweepConfig(**{**cfg.__dict__, "output": "sweep.csv"})
    assert parse_args(cfg.to_argv()) == cfg


@settings(max_examples=20, deadline=None)
@given(st.floats(0.0, 0.5), st.integers(1, 5))
def test_rows_cover_grid(f_max, steps):
    cfg = SweepConfig(lattice="hexagonal", rho=1.0, methods=("cma", "perrins"), f_max=f_max,
                      steps=steps)
    rows = run_sweep(cfg)
    assert len(rows) == 2 * (steps + 1)
    assert [r.f for r in rows[::2]] == sorted(r.f for r in rows[::2])
