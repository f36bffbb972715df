"""Acceptance gate: one test per criterion, each at its stated tolerance.

The terminal summary prints a PASS/FAIL line per criterion.
"""

import math
import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from effcond.cli import SweepConfig, run_sweep
from effcond.closed_forms import (F_C_HEX, keller_hex, matched_contrast_hex, matched_perfect_hex,
                                  perrins_taylor_coefficients)
from effcond.lattice import build_sum_table, lattice_sum, make_lattice
from effcond.rayleigh import CompositeParams, solve_composite
from effcond.series import evaluate, expand_effective_series, required_sum_order
from oracles import HEX_CONTRAST_PRINTED, HEX_SERIES_PRINTED, chain_series


def timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


@pytest.mark.criterion(1, "S_2 = pi for square and hexagonal lattices")
def test_criterion_01_s2_equals_pi():
    for kind in ("square", "hexagonal"):
        value, elapsed = timed(lattice_sum, make_lattice(kind), 2)
        assert abs(value - math.pi) < 1e-6, kind
        assert elapsed < 5.0, kind


@pytest.mark.criterion(2, "rectangular S_2(a) + S_2(1/a) = 2 pi")
def test_criterion_02_rectangular_duality():
    t0 = time.perf_counter()
    for a in (2.0, 4.0):
        s = lattice_sum(make_lattice("rect", a), 2) + lattice_sum(make_lattice("rect", 1 / a), 2)
        assert abs(s - 2 * math.pi) < 2e-6, a
    assert time.perf_counter() - t0 < 10.0


@pytest.mark.criterion(3, "hexagonal series coefficients through f^26")
def test_criterion_03_hexagonal_series():
    def run():
        sums = build_sum_table(make_lattice("hexagonal"), required_sum_order(26))
        return expand_effective_series(sums, 26).at_rho(1.0).real

    coeffs, elapsed = timed(run)
    assert np.all(np.abs(coeffs[1:7] - 2.0) < 1e-10)
    assert abs(coeffs[7] - 2.1508443464271876) < 1e-8
    assert np.max(np.abs(coeffs - np.array(HEX_SERIES_PRINTED))) < 1e-6
    assert elapsed < 60.0


@pytest.mark.criterion(4, "contrast series c_{7,3} .. c_{11,7}")
def test_criterion_04_contrast_series():
    poly = expand_effective_series(build_sum_table(make_lattice("hexagonal"), 12), 12)
    for (j, k), value in HEX_CONTRAST_PRINTED.items():
        assert abs(poly.coeff(j, k) - value) < 5e-6, (j, k)


@pytest.mark.criterion(5, "first 12 Perrins-McPhedran Taylor coefficients match the series")
def test_criterion_05_perrins_taylor():
    series = np.array(HEX_SERIES_PRINTED[:13])
    computed = expand_effective_series(build_sum_table(make_lattice("hexagonal"), 12), 12)
    computed = computed.at_rho(1.0).real
    perrins = perrins_taylor_coefficients(12)
    assert np.max(np.abs(computed - series)) < 1e-12
    diff = np.abs(perrins[1:13] - computed[1:13])
    worst = int(np.argmax(diff)) + 1
    assert np.all(diff < 1e-6), f"f^{worst}: |perrins - series| = {diff[worst - 1]:.3g}"


@pytest.mark.criterion(6, "solver (L=12) vs series (N=12), square, rho=0.5")
def test_criterion_06_solver_vs_series():
    t0 = time.perf_counter()
    sums = build_sum_table(make_lattice("square"), 26)
    poly = expand_effective_series(sums, 12)
    for f in (0.1, 0.3, 0.5):
        tensor, _ = solve_composite(sums, CompositeParams.from_rho(f, 0.5), 12)
        s = evaluate(poly, 0.5, f).real
        assert abs(tensor.sigma11 - s) / tensor.sigma11 < 1e-5, f
    assert time.perf_counter() - t0 < 5.0


SQUARE_26 = build_sum_table(make_lattice("square"), 26)
HEX_26 = build_sum_table(make_lattice("hexagonal"), 26)


@pytest.mark.criterion(7, "Keller-Dykhne duality, series and solver")
@settings(max_examples=40, deadline=None)
@given(st.floats(0.0, 0.5), st.floats(-1.0, 1.0))
def test_criterion_07_duality(f, rho):
    for sums, N in ((HEX_26, 26), (SQUARE_26, 12)):
        poly = expand_effective_series(sums, N)
        product = (poly * poly.dual()).coeffs
        assert np.max(np.abs(product[1:])) < 1e-9
        plus, _ = solve_composite(sums, CompositeParams.from_rho(f, rho), 12)
        minus, _ = solve_composite(sums, CompositeParams.from_rho(f, -rho), 12)
        assert abs(plus.sigma11 * minus.sigma11 - 1.0) < 1e-4


@pytest.mark.criterion(8, "matched-asymptotics endpoints")
def test_criterion_08_matched_endpoints():
    assert abs(matched_perfect_hex(0.0) - 1.0) < 1e-3
    f = F_C_HEX - 1e-5
    assert abs(matched_perfect_hex(f) / keller_hex(f) - 1.0) < 1e-2
    for rho in (-1.0, -0.3, 0.5, 1.0):
        assert matched_contrast_hex(0.0, rho) == 1.0


@pytest.mark.criterion(9, "near-threshold figure content (ordering and divergence)")
def test_criterion_09_figure_content():
    cfg = SweepConfig(lattice="hexagonal", rho=1.0,
                      methods=("matched-contrast", "perrins", "matched-perfect"),
                      f_min=0.8, f_max=F_C_HEX - 1e-6, steps=200)
    rows = run_sweep(cfg)
    assert all(r.status == "ok" for r in rows)
    contrast = np.array([r.sigma11 for r in rows[0::3]])
    perrins = np.array([r.sigma11 for r in rows[1::3]])
    perfect = np.array([r.sigma11 for r in rows[2::3]])
    fs = np.array([r.f for r in rows[0::3]])

    diverging = perfect[-1] > 1e3 and np.all(np.diff(perfect) > 0)
    bounded = perrins.max() < 100.0
    below = fs[contrast <= perrins]
    problems = []
    if not (diverging and bounded):
        problems.append(f"matched-perfect end {perfect[-1]:.4g}, perrins max {perrins.max():.4g}")
    if below.size:
        problems.append(f"matched-contrast <= perrins at {below.size} of {fs.size} points, "
                        f"f in [{below.min():.4f}, {below.max():.4f}]")
    assert not problems, "; ".join(problems)


@pytest.mark.criterion(10, "chain enumeration equals DP for N <= 10")
def test_criterion_10_dp_oracle():
    t0 = time.perf_counter()
    for kind in ("square", "hexagonal"):
        sums = build_sum_table(make_lattice(kind), 12)
        for N in range(11):
            dp = expand_effective_series(sums, N).coeffs
            assert np.max(np.abs(dp - chain_series(sums, N))) < 1e-12, (kind, N)
    assert time.perf_counter() - t0 < 10.0
