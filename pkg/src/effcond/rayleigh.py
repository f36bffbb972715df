"""Truncated R-linear Rayleigh system for one disk per cell.

The Taylor coefficients ``alpha_l`` of the complex flux inside the disk
satisfy

    alpha_l = rho * sum_m K[l, m] * conj(alpha_m) + g_l,
    K[l, m] = (-1)**m * C(l+m+1, l) * S_{l+m+2} * r0**(2(m+1)),

with forcing ``g = e_0`` (the constant term of the functional equation).
The effective tensor follows from ``sigma11 - i sigma12 = 1 + 2 rho f alpha_0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError, EffcondError, SingularSystemError
from .lattice import Lattice, LatticeSumTable, build_sum_table

DEFAULT_TRUNCATION = 12
DEFAULT_ITER_TOL = 1e-12
DEFAULT_MAX_ITER = 10_000
TOUCHING_GUARD = 1e-9


@dataclass(frozen=True)
class CompositeParams:
    """Disk radius, concentration and contrast of the composite.

    Build with :meth:`from_sigma` or :meth:`from_rho`; ``sigma`` may be
    ``math.inf`` (perfect conductor, ``rho = 1``).
    """

    r0: float
    f: float
    sigma: float
    rho: float

    def __post_init__(self):
        if self.r0 < 0 or self.f < 0:
            raise ValueError("radius and concentration must be nonnegative")
        if abs(self.f - math.pi * self.r0**2) > 1e-12 * max(1.0, self.f):
            raise ValueError("f must equal pi * r0**2")
        if not -1.0 <= self.rho <= 1.0:
            raise ValueError(f"contrast must lie in [-1, 1], got {self.rho!r}")

    @staticmethod
    def contrast(sigma: float) -> float:
        if sigma < 0:
            raise ValueError("conductivity ratio must be nonnegative")
        if math.isinf(sigma):
            return 1.0
        return (sigma - 1.0) / (sigma + 1.0)

    @staticmethod
    def ratio(rho: float) -> float:
        if rho == 1.0:
            return math.inf
        return (1.0 + rho) / (1.0 - rho)

    @classmethod
    def from_sigma(cls, f: float, sigma: float) -> CompositeParams:
        return cls(math.sqrt(f / math.pi), f, float(sigma), cls.contrast(sigma))

    @classmethod
    def from_rho(cls, f: float, rho: float) -> CompositeParams:
        return cls(math.sqrt(f / math.pi), f, cls.ratio(rho), float(rho))

    def check_geometry(self, lattice: Lattice) -> None:
        bound = lattice.touching_fraction
        if self.f > bound - TOUCHING_GUARD:
            raise DomainError(
                f"concentration {self.f:g} at or beyond the touching bound "
                f"{bound:.10g} of the {lattice.describe()} lattice")


@dataclass(frozen=True)
class TruncatedSystem:
    order: int
    coupling: np.ndarray
    rho: float
    forcing: np.ndarray
    f: float = 0.0
    quarter_turn: bool = False

    @property
    def size(self) -> int:
        return self.order + 1

    def defect(self, alpha: np.ndarray) -> float:
        """Max row defect of the conjugate-linear relation."""
        lhs = alpha - self.rho * (self.coupling @ np.conj(alpha)) - self.forcing
        return float(np.max(np.abs(lhs)))


@dataclass(frozen=True)
class FluxCoefficients:
    alpha: np.ndarray
    residual: float
    iterations: int | None = None
    quarter_turn: bool = False


@dataclass(frozen=True)
class EffectiveTensor:
    sigma11: float
    sigma12: float
    sigma22: float

    def as_matrix(self) -> np.ndarray:
        return np.array([[self.sigma11, self.sigma12], [self.sigma12, self.sigma22]])


def build_truncated_system(sums: LatticeSumTable, params: CompositeParams, L: int,
                           forcing=None) -> TruncatedSystem:
    """Assemble the ``(L+1) x (L+1)`` coupling matrix.

    ``forcing`` defaults to the unit vector ``e_0``; any complex vector of
    length ``L+1`` may be supplied instead.
    """
    if L < 0:
        raise ValueError("truncation order must be >= 0")
    sums.require(2 * L + 2, f"truncation L={L}")
    params.check_geometry(sums.lattice)

    r2 = params.f / math.pi
    K = np.zeros((L + 1, L + 1), dtype=complex)
    for l in range(L + 1):
        for m in range(L + 1):
            s = sums[l + m + 2]
            if s == 0:
                continue
            # exact integer binomial before scaling
            K[l, m] = (-1) ** m * math.comb(l + m + 1, l) * s * r2 ** (m + 1)

    if forcing is None:
        g = np.zeros(L + 1, dtype=complex)
        g[0] = 1.0
    else:
        g = np.asarray(forcing, dtype=complex)
        if g.shape != (L + 1,):
            raise ValueError(f"forcing must have length {L + 1}")
    K.setflags(write=False)
    g.setflags(write=False)
    return TruncatedSystem(L, K, params.rho, g, params.f, sums.quarter_turn)


def _realify(system: TruncatedSystem) -> tuple[np.ndarray, np.ndarray]:
    # interleaved (Re a_0, Im a_0, Re a_1, ...); K conj(a) = (Px + Qy) + i(Qx - Py)
    n = system.size
    P, Q = system.coupling.real, system.coupling.imag
    rho = system.rho
    A = np.empty((2 * n, 2 * n))
    A[0::2, 0::2] = np.eye(n) - rho * P
    A[0::2, 1::2] = -rho * Q
    A[1::2, 0::2] = -rho * Q
    A[1::2, 1::2] = np.eye(n) + rho * P
    b = np.empty(2 * n)
    b[0::2] = system.forcing.real
    b[1::2] = system.forcing.imag
    return A, b


def solve_direct(system: TruncatedSystem) -> FluxCoefficients:
    A, b = _realify(system)
    try:
        x = np.linalg.solve(A, b)
    except np.linalg.LinAlgError:
        x = None
    if x is None or not np.all(np.isfinite(x)) or np.linalg.cond(A) > 1e14:
        raise SingularSystemError(
            f"singular realified system (rho={system.rho:g}, f={system.f:g}, L={system.order})",
            rho=system.rho, f=system.f, order=system.order)
    alpha = x[0::2] + 1j * x[1::2]
    return FluxCoefficients(alpha, system.defect(alpha), None, system.quarter_turn)


def solve_iterative(system: TruncatedSystem, max_iter: int = DEFAULT_MAX_ITER,
                    tol: float = DEFAULT_ITER_TOL) -> FluxCoefficients:
    """Successive approximations ``alpha <- rho K conj(alpha) + g``.

    Starts from ``alpha = g`` and stops once two successive iterates differ
    by less than ``tol`` in max norm.
    """
    if abs(system.rho) > 1:
        raise ValueError("successive approximations need |rho| <= 1")
    K, g, rho = system.coupling, system.forcing, system.rho
    alpha = g.copy()
    step = math.inf
    for n in range(1, max_iter + 1):
        nxt = rho * (K @ np.conj(alpha)) + g
        step = float(np.max(np.abs(nxt - alpha)))
        alpha = nxt
        if step < tol:
            return FluxCoefficients(alpha, system.defect(alpha), n, system.quarter_turn)
    raise ConvergenceError(
        f"successive approximations did not converge in {max_iter} steps "
        f"(last step {step:.3g})", best=alpha, accuracy=system.defect(alpha))


def effective_tensor(sums: LatticeSumTable, params: CompositeParams,
                     coeffs_11: FluxCoefficients, coeffs_22: FluxCoefficients) -> EffectiveTensor:
    if coeffs_11.quarter_turn == coeffs_22.quarter_turn:
        raise ValueError("coeffs_22 must come from the quarter-turned sum table")
    scale = 2.0 * params.rho * params.f
    z11 = 1.0 + scale * coeffs_11.alpha[0]
    z22 = 1.0 + scale * coeffs_22.alpha[0]
    # + 0.0 folds -0.0 into 0.0
    return EffectiveTensor(float(z11.real), float(-z11.imag) + 0.0, float(z22.real))


def solve_composite(sums: LatticeSumTable, params: CompositeParams,
                    L: int = DEFAULT_TRUNCATION, method: str = "direct",
                    tol: float = DEFAULT_ITER_TOL,
                    max_iter: int = DEFAULT_MAX_ITER) -> tuple[EffectiveTensor, float]:
    """Solve both field directions and return the tensor and max residual."""
    if method not in ("direct", "iterative"):
        raise ValueError(f"unknown solver method {method!r}")
    coeffs = []
    for table in (sums, sums.quarter_turned()):
        system = build_truncated_system(table, params, L)
        if method == "direct":
            coeffs.append(solve_direct(system))
        else:
            coeffs.append(solve_iterative(system, max_iter, tol))
    tensor = effective_tensor(sums, params, coeffs[0], coeffs[1])
    return tensor, max(c.residual for c in coeffs)


@dataclass(frozen=True)
class StudyEntry:
    order: int
    tensor: EffectiveTensor | None
    residual: float | None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


def convergence_study(sums: LatticeSumTable, params: CompositeParams,
                      orders, method: str = "direct") -> list[StudyEntry]:
    orders = list(orders)
    if not orders:
        raise ValueError("orders must be nonempty")
    if any(b <= a for a, b in zip(orders, orders[1:])):
        raise ValueError("orders must be strictly ascending")
    sums.require(2 * orders[-1] + 2, f"truncation L={orders[-1]}")
    out = []
    for L in orders:
        try:
            tensor, res = solve_composite(sums, params, L, method)
            out.append(StudyEntry(L, tensor, res))
        except EffcondError as exc:
            out.append(StudyEntry(L, None, None, f"{type(exc).__name__}: {exc}"))
    return out


def effective_conductivity(lattice: Lattice, f: float, rho: float,
                           L: int = DEFAULT_TRUNCATION) -> EffectiveTensor:
    """One-call convenience wrapper: builds the sum table and solves."""
    sums = build_sum_table(lattice, 2 * L + 2)
    return solve_composite(sums, CompositeParams.from_rho(f, rho), L)[0]
