"""Closed-form and matched-asymptotic effective conductivity formulas.

All decimal coefficients are kept verbatim, as printed in the literature, in
the constant tables below; nothing here is refitted.  The hexagonal formulas
are valid on ``0 <= f < f_c`` with ``f_c = pi / sqrt(12)`` (touching disks).
"""

from __future__ import annotations

import math
from enum import Enum

import numpy as np

from .errors import DomainError, PoleError

F_C_HEX = math.pi / math.sqrt(12.0)

# Perrins, McKenzie & McPhedran (1979) hexagonal-array fit
PERRINS_F6 = 0.075422
PERRINS_F12_INNER = 1.060283
PERRINS_F12 = 0.000076

# Keller-type percolation law, 3**(1/4) pi**(3/2) / sqrt(2)
KELLER_HEX_AMPLITUDE = 3.0**0.25 * math.pi**1.5 / math.sqrt(2.0)

# matched formula for perfectly conducting disks: alpha(f) * F(f) / G(f)
# alpha(f) in powers of d = (f_c - f)**(1/2): d**-1, d**0, d**1, d**2
MATCHED_ALPHA = (4.82231, -5.79784, 2.13365, -0.328432)
# F and G ascending in f, f**0 .. f**13
MATCHED_F = (1.49313, 1.30576, 0.383574, 0.467713, 0.471121, 0.510435, 0.256682,
             0.434917, 0.813868, 0.961464, 0.317194, 0.377055, -1.2022, -0.931575)
MATCHED_G = (1.49313, 1.30576, 0.383574, 0.394949, 0.4479, 0.5034, 0.3033,
             0.2715, 0.7328, 0.827239, 0.25509, 0.239752, -1.26489, -1.0)

# matched contrast formula sigma*(f, rho) U(f, rho) / W(f, rho) with W(f, rho) = U(f, -rho)
CONTRAST_U0 = 26.4332
CONTRAST_U1 = 11.8598
CONTRAST_U3 = (2.10888, 1.99365)          # rho**3 (f**3, f**7)
CONTRAST_U5 = (0.457218, 1.59231)         # rho**5 (f**5, f**9)
CONTRAST_U7 = (-0.232667, 1.44959)        # rho**7 (f**7, f**11)
CONTRAST_U9 = -0.660339                   # rho**9 f**9
CONTRAST_U11 = -1.0                       # rho**11 f**11


class FormulaId(str, Enum):
    CMA = "cma"
    PERRINS_HEX = "perrins"
    KELLER_HEX = "keller"
    MATCHED_PERFECT_HEX = "matched-perfect"
    MATCHED_CONTRAST_HEX = "matched-contrast"

    @classmethod
    def parse(cls, name) -> FormulaId:
        if isinstance(name, FormulaId):
            return name
        key = name.strip().lower().replace("_", "-")
        aliases = {"perrins-hex": "perrins", "perrins-mcphedran": "perrins",
                   "keller-hex": "keller", "clausius-mossotti": "cma",
                   "matched-perfect-hex": "matched-perfect",
                   "matched-contrast-hex": "matched-contrast"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise ValueError(f"unknown formula {name!r}") from None

    @property
    def hexagonal_only(self) -> bool:
        return self is not FormulaId.CMA

    @property
    def perfect_conductor_only(self) -> bool:
        return self in (FormulaId.KELLER_HEX, FormulaId.MATCHED_PERFECT_HEX)


def _check_hex_f(f: float) -> None:
    if not 0.0 <= f < F_C_HEX:
        raise DomainError(f"f={f:g} outside [0, f_c) with f_c={F_C_HEX:.6f}")


def _check_rho(rho: float) -> None:
    if not -1.0 <= rho <= 1.0:
        raise DomainError(f"contrast rho={rho:g} outside [-1, 1]")


def clausius_mossotti(f: float, rho: float) -> float:
    if f < 0:
        raise DomainError("f must be nonnegative")
    _check_rho(rho)
    den = 1.0 - f * rho
    if den == 0:
        raise PoleError("Clausius-Mossotti pole at rho*f = 1")
    return (1.0 + f * rho) / den


def perrins_mcphedran_hex(f: float, rho: float = 1.0) -> float:
    if f < 0:
        raise DomainError("f must be nonnegative")
    _check_rho(rho)
    r2 = rho * rho
    inner = 1.0 - PERRINS_F12_INNER * r2 * f**12
    if inner == 0:
        raise PoleError("Perrins-McPhedran inner denominator vanishes")
    den = 1.0 - f * rho - PERRINS_F6 * r2 * f**6 / inner - PERRINS_F12 * r2 * f**12
    if den == 0:
        raise PoleError("Perrins-McPhedran denominator vanishes")
    return 1.0 + 2.0 * f * rho / den


def keller_hex(f: float) -> float:
    _check_hex_f(f)
    return KELLER_HEX_AMPLITUDE / math.sqrt(F_C_HEX - f)


def matched_alpha(f: float) -> float:
    d = math.sqrt(F_C_HEX - f)
    a_m1, a0, a1, a2 = MATCHED_ALPHA
    return a_m1 / d + a0 + a1 * d + a2 * d * d


def _poly(coeffs, x: float) -> float:
    return float(np.polynomial.polynomial.polyval(x, coeffs))


def matched_perfect_hex(f: float) -> float:
    _check_hex_f(f)
    g = _poly(MATCHED_G, f)
    if g == 0:
        raise PoleError(f"G(f) vanishes at f={f:g}")
    return matched_alpha(f) * _poly(MATCHED_F, f) / g


def contrast_u(f: float, rho: float) -> float:
    x = rho * f
    return (CONTRAST_U11 * x**11 + CONTRAST_U9 * x**9
            + rho**7 * (CONTRAST_U7[1] * f**4 + CONTRAST_U7[0]) * f**7
            + rho**5 * (CONTRAST_U5[1] * f**9 + CONTRAST_U5[0] * f**5)
            + rho**3 * (CONTRAST_U3[1] * f**7 + CONTRAST_U3[0] * f**3)
            + CONTRAST_U1 * x + CONTRAST_U0)


def contrast_w(f: float, rho: float) -> float:
    return contrast_u(f, -rho)


def matched_contrast_hex(f: float, rho: float) -> float:
    _check_hex_f(f)
    _check_rho(rho)
    x = rho * f / F_C_HEX
    if abs(x) >= 1.0:
        raise DomainError(f"|rho*f| must stay below f_c, got {rho * f:g}")
    w = contrast_w(f, rho)
    if w == 0:
        raise PoleError(f"W(f, rho) vanishes at f={f:g}, rho={rho:g}")
    star = math.sqrt((1.0 + x) / (1.0 - x))
    return star * contrast_u(f, rho) / w


def evaluate_formula(formula, f: float, rho: float = 1.0) -> float:
    """Dispatch on :class:`FormulaId`; perfect-conductor laws require ``rho == 1``."""
    fid = FormulaId.parse(formula)
    if fid.perfect_conductor_only and rho != 1.0:
        raise DomainError(f"{fid.value} holds only for perfectly conducting disks (rho = 1)")
    if fid is FormulaId.CMA:
        return clausius_mossotti(f, rho)
    if fid is FormulaId.PERRINS_HEX:
        return perrins_mcphedran_hex(f, rho)
    if fid is FormulaId.KELLER_HEX:
        return keller_hex(f)
    if fid is FormulaId.MATCHED_PERFECT_HEX:
        return matched_perfect_hex(f)
    return matched_contrast_hex(f, rho)


def _series_reciprocal(a: np.ndarray) -> np.ndarray:
    n = len(a)
    out = np.zeros(n)
    out[0] = 1.0 / a[0]
    for j in range(1, n):
        out[j] = -np.dot(a[1:j + 1], out[j - 1::-1][:j]) / a[0]
    return out


def perrins_taylor_coefficients(n: int, rho: float = 1.0) -> np.ndarray:
    """Taylor coefficients f**0 .. f**n of the Perrins-McPhedran formula."""
    size = n + 1
    r2 = rho * rho
    inner = np.zeros(size)
    inner[0] = 1.0
    if size > 12:
        inner[12] = -PERRINS_F12_INNER * r2
    inv_inner = _series_reciprocal(inner)
    den = np.zeros(size)
    den[0] = 1.0
    if size > 1:
        den[1] = -rho
    for j in range(size - 6):
        den[j + 6] -= PERRINS_F6 * r2 * inv_inner[j]
    if size > 12:
        den[12] -= PERRINS_F12 * r2
    frac = _series_reciprocal(den)
    out = np.zeros(size)
    out[0] = 1.0
    out[1:] = 2.0 * rho * frac[:-1]
    return out
