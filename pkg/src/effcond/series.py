"""Double series of the effective conductivity in contrast and concentration.

``sigma11 - i sigma12`` is expanded as ``sum c[j, k] rho**k f**j``.  Beyond
the terms ``1 + 2 rho f`` every contribution comes from a chain of indices
``1 -> m_1 -> ... -> m_k -> 1``: each step ``m -> m'`` carries the weight
``s(m, m') = C(2m+2m'-3, 2m-1) * S_{2(m+m'-1)}`` and each visited index
``m'`` raises the f-exponent by ``2m'-1``.  Chains are summed by dynamic
programming over (current index, f-exponent), one depth per power of rho.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .lattice import Lattice, LatticeSumTable, build_sum_table, make_lattice

DEFAULT_SERIES_ORDER = 26
MAX_SERIES_ORDER = 40


@dataclass(frozen=True)
class BiPolynomial:
    """Truncated series in (rho, f); ``coeffs[j, k]`` multiplies ``rho**k f**j``."""

    coeffs: np.ndarray
    lattice: Lattice | None = None
    component: str = "11"

    @property
    def order_f(self) -> int:
        return self.coeffs.shape[0] - 1

    def coeff(self, j: int, k: int) -> complex:
        if j > self.order_f or k > self.order_f:
            return 0j
        return complex(self.coeffs[j, k])

    def at_rho(self, rho: float) -> np.ndarray:
        """Coefficients of f**0 .. f**N with rho substituted."""
        powers = rho ** np.arange(self.order_f + 1)
        return self.coeffs @ powers

    def dual(self) -> BiPolynomial:
        """Same series with rho replaced by -rho."""
        signs = (-1.0) ** np.arange(self.order_f + 1)
        return BiPolynomial(self.coeffs * signs[None, :], self.lattice, self.component)

    def __mul__(self, other: BiPolynomial) -> BiPolynomial:
        n = min(self.order_f, other.order_f)
        out = np.zeros((n + 1, n + 1), dtype=complex)
        a, b = self.coeffs, other.coeffs
        for j1 in range(n + 1):
            for j2 in range(n + 1 - j1):
                # rho-degree never exceeds f-degree, so k1 + k2 <= n
                for k1 in range(j1 + 1):
                    if a[j1, k1] == 0:
                        continue
                    out[j1 + j2, k1:k1 + j2 + 1] += a[j1, k1] * b[j2, :j2 + 1]
        return BiPolynomial(out, self.lattice, self.component)

    def rows(self):
        """``(j, k, coefficient)`` for every ``0 <= k <= j <= N``."""
        for j in range(self.order_f + 1):
            for k in range(j + 1):
                yield j, k, complex(self.coeffs[j, k])


def chain_weight(sums: LatticeSumTable, m_from: int, m_to: int) -> complex:
    """s_{m_to}^{(m_from)} = (2a+2b-3)! / ((2a-1)! (2b-2)!) * S_{2(a+b-1)}."""
    if m_from < 1 or m_to < 1:
        raise ValueError("chain indices start at 1")
    order = 2 * (m_from + m_to - 1)
    sums.require(order, f"chain weight s_{m_to}^({m_from})")
    s = sums[order]
    if s == 0:
        return 0j
    return math.comb(2 * m_from + 2 * m_to - 3, 2 * m_from - 1) * s


def required_sum_order(order_f: int) -> int:
    """Largest lattice-sum order touched by the expansion up to f**order_f."""
    if order_f < 2:
        return 2
    # step from/to index 1: S_{2m}, 2m - 1 <= N - 2; inner step: m + m' <= N/2
    return max(2, 2 * ((order_f - 1) // 2), 2 * (order_f // 2 - 1))


def expand_effective_series(sums: LatticeSumTable, order_f: int = DEFAULT_SERIES_ORDER) -> BiPolynomial:
    """Series of ``sigma11 - i sigma12`` truncated at f**order_f.

    Weights at odd chain depth are conjugated, matching the conjugate-linear
    structure of the Rayleigh system; for lattices with real sums this is
    the plain product of weights.
    """
    N = int(order_f)
    if N < 0 or N > MAX_SERIES_ORDER:
        raise ValueError(f"series order must lie in 0..{MAX_SERIES_ORDER}")
    sums.require(required_sum_order(N), f"series order N={N}")

    C = np.zeros((N + 1, N + 1), dtype=complex)
    C[0, 0] = 1.0
    if N >= 1:
        C[1, 1] = 2.0
    if N < 2:
        return BiPolynomial(C, sums.lattice, "22" if sums.quarter_turn else "11")

    mmax = max(1, (N - 1) // 2)
    top = required_sum_order(N)
    W = np.zeros((mmax + 1, mmax + 1), dtype=complex)
    for a in range(1, mmax + 1):
        for b in range(1, mmax + 1):
            # steps needing a higher order cannot fit in the exponent budget
            if 2 * (a + b - 1) <= top:
                W[a, b] = chain_weight(sums, a, b)
    step_scale = np.array([0.0] + [math.pi ** -(2 * b - 1) for b in range(1, mmax + 1)])

    # state[m, e]: summed chain weights ending at index m with f-exponent e (excluding the leading f**2)
    state = np.zeros((mmax + 1, N - 1), dtype=complex)
    state[1, 0] = 1.0
    depth = 0
    while state.any():
        weights = W if depth % 2 == 0 else W.conj()
        # close the chain back to index 1
        closing = (weights[:, 1][:, None] * state).sum(axis=0)
        C[2:, depth + 2] += 2.0 / math.pi * closing
        nxt = np.zeros_like(state)
        for b in range(1, mmax + 1):
            shift = 2 * b - 1
            if shift > N - 2:
                break
            incoming = (weights[:, b][:, None] * state[:, : N - 1 - shift]).sum(axis=0)
            nxt[b, shift:] += incoming * step_scale[b]
        state = nxt
        depth += 1
    return BiPolynomial(C, sums.lattice, "22" if sums.quarter_turn else "11")


def sigma22_series(sums: LatticeSumTable, order_f: int = DEFAULT_SERIES_ORDER) -> BiPolynomial:
    """Series for sigma22: the sigma11 series of the quarter-turned lattice sums."""
    return expand_effective_series(sums.quarter_turned(), order_f)


def evaluate(poly: BiPolynomial, rho: float, f: float) -> complex:
    if poly.lattice is not None and f >= poly.lattice.touching_fraction:
        warnings.warn(f"f={f:g} is at or beyond the touching bound; series evaluated anyway",
                      RuntimeWarning, stacklevel=2)
    total = 0j
    for row in poly.coeffs[::-1]:
        inner = 0j
        for c in row[::-1]:
            inner = inner * rho + c
        total = total * f + inner
    return total


def truncation_estimate(poly: BiPolynomial, rho: float, f: float) -> float:
    """Magnitude of the last retained f-order, a rough truncation error."""
    N = poly.order_f
    return float(abs(poly.at_rho(rho)[N]) * f**N)


def hexagonal_coefficients(N: int = DEFAULT_SERIES_ORDER, tolerance: float = 1e-13) -> np.ndarray:
    """Real coefficients of f**0 .. f**N for perfectly conducting disks on the hexagonal lattice."""
    if N < 0 or N > MAX_SERIES_ORDER:
        raise ValueError(f"N must lie in 0..{MAX_SERIES_ORDER}")
    sums = build_sum_table(make_lattice("hexagonal"), required_sum_order(N), tolerance)
    return expand_effective_series(sums, N).at_rho(1.0).real


def write_coefficients(poly: BiPolynomial, path) -> None:
    """CSV with header ``j,k,re,im``, one row per ``0 <= k <= j <= N``."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["j", "k", "re", "im"])
        for j, k, c in poly.rows():
            w.writerow([j, k, f"{c.real:.17g}", f"{c.imag:.17g}"])


def read_coefficients(path) -> BiPolynomial:
    with open(Path(path), newline="") as fh:
        rows = [(int(r["j"]), int(r["k"]), complex(float(r["re"]), float(r["im"])))
                for r in csv.DictReader(fh)]
    n = max(j for j, _, _ in rows)
    C = np.zeros((n + 1, n + 1), dtype=complex)
    for j, k, c in rows:
        C[j, k] = c
    return BiPolynomial(C)
