"""Period lattices and Eisenstein-Rayleigh lattice sums.

A lattice is stored by its period pair ``(omega1, omega2)`` with ``omega1``
real and positive and the cell area normalized to one.  The sums

    S_m = sum_{P != 0} P**(-m),   P = m1*omega1 + m2*omega2,

are evaluated in the Eisenstein order: for each row ``m2`` the inner sum
over ``m1`` is carried to infinity first, then rows are accumulated.  The
inner limit is taken with an Euler-Maclaurin tail, so modest cutoffs give
the limit to rounding accuracy; rows decay exponentially in ``|m2|``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from types import MappingProxyType
from typing import Mapping, NamedTuple

import numpy as np

from .errors import ConvergenceError

MAX_CUTOFF = 100_000
DEFAULT_TOLERANCE = 1e-12

_INNER_START = 64
_OUTER_START = 8
# B_2, B_4, B_6, B_8
_BERNOULLI = (1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0)


class LatticeKind(str, Enum):
    SQUARE = "square"
    HEXAGONAL = "hexagonal"
    RECTANGULAR = "rectangular"
    GENERAL = "general"

    @classmethod
    def parse(cls, name: str | LatticeKind) -> LatticeKind:
        if isinstance(name, LatticeKind):
            return name
        key = name.strip().lower()
        if key in ("hex", "triangular"):
            key = "hexagonal"
        if key in ("rect",):
            key = "rectangular"
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown lattice kind {name!r}") from None


@dataclass(frozen=True)
class Lattice:
    """Area-normalized period pair.

    ``aspect`` and ``angle`` record the construction parameters for
    rectangular and general lattices (``None`` otherwise).
    """

    omega1: float
    omega2: complex
    kind: LatticeKind = LatticeKind.GENERAL
    aspect: float | None = None
    angle: float | None = None

    def __post_init__(self):
        if not self.omega1 > 0:
            raise ValueError("omega1 must be positive")
        if not self.omega2.imag > 0:
            raise ValueError("omega2 must have positive imaginary part")
        if abs(self.area - 1.0) > 1e-12:
            raise ValueError(f"cell area must be 1, got {self.area!r}")

    @property
    def area(self) -> float:
        return self.omega1 * self.omega2.imag

    @property
    def tau(self) -> complex:
        return self.omega2 / self.omega1

    @property
    def min_distance(self) -> float:
        """Length of the shortest nonzero lattice vector."""
        best = math.inf
        for m2 in range(-4, 5):
            for m1 in range(-4, 5):
                if m1 or m2:
                    best = min(best, abs(m1 * self.omega1 + m2 * self.omega2))
        return best

    @property
    def touching_fraction(self) -> float:
        """Concentration at which neighbouring disks touch."""
        return math.pi * self.min_distance**2 / 4.0

    @property
    def is_real_symmetric(self) -> bool:
        """True when the lattice is mirror-symmetric about the real axis."""
        return self.kind in (LatticeKind.SQUARE, LatticeKind.HEXAGONAL, LatticeKind.RECTANGULAR)

    def forced_zero(self, m: int) -> bool:
        """Whether S_m vanishes by symmetry for this lattice."""
        if m % 2:
            return True
        if m < 3:
            return False
        if self.kind is LatticeKind.SQUARE:
            return m % 4 != 0
        if self.kind is LatticeKind.HEXAGONAL:
            return m % 6 != 0
        return False

    def describe(self) -> str:
        if self.kind is LatticeKind.RECTANGULAR:
            return f"rectangular(aspect={self.aspect:g})"
        if self.kind is LatticeKind.GENERAL:
            return f"general(aspect={self.aspect:g}, angle={self.angle:g})"
        return self.kind.value


def make_lattice(kind, aspect: float | None = None, angle: float | None = None) -> Lattice:
    """Build an area-one lattice of the given kind.

    ``rectangular`` with aspect ``a`` has periods ``sqrt(a)`` and
    ``i/sqrt(a)``.  ``general`` takes the same aspect ``a = omega1/Im(omega2)``
    convention plus the angle between the periods (default ``pi/2``), so
    ``general(a, pi/2)`` is ``rectangular(a)``.
    """
    kind = LatticeKind.parse(kind)
    needs_aspect = kind in (LatticeKind.RECTANGULAR, LatticeKind.GENERAL)
    if needs_aspect and aspect is None:
        raise ValueError(f"{kind.value} lattice requires an aspect")
    if not needs_aspect and aspect is not None:
        raise ValueError(f"{kind.value} lattice takes no aspect")
    if aspect is not None and not aspect > 0:
        raise ValueError(f"aspect must be positive, got {aspect!r}")
    if angle is not None and kind is not LatticeKind.GENERAL:
        raise ValueError("angle applies only to general lattices")

    if kind is LatticeKind.SQUARE:
        return Lattice(1.0, 1j, kind)
    if kind is LatticeKind.HEXAGONAL:
        w1 = math.sqrt(2.0 / math.sqrt(3.0))
        return Lattice(w1, complex(w1 * 0.5, w1 * math.sqrt(3.0) / 2.0), kind)
    if kind is LatticeKind.RECTANGULAR:
        s = math.sqrt(aspect)
        return Lattice(s, 1j / s, kind, aspect=float(aspect))

    theta = math.pi / 2 if angle is None else float(angle)
    if not 0.0 < theta < math.pi:
        raise ValueError(f"angle must lie in (0, pi), got {angle!r}")
    # Im(omega2) = omega1/aspect and area omega1*Im(omega2) = 1
    w1 = math.sqrt(aspect)
    im2 = 1.0 / w1
    w2 = complex(im2 / math.tan(theta), im2)
    if theta == math.pi / 2:
        w2 = complex(0.0, im2)
    return Lattice(w1, w2, kind, aspect=float(aspect), angle=theta)


class SumEstimate(NamedTuple):
    value: complex
    error: float


def _em_tail(a: float, c: complex, m: int, cutoff: int) -> complex:
    """Euler-Maclaurin value of sum_{k > cutoff} (a*k + c)**(-m)."""
    z = a * cutoff + c
    total = z ** (1 - m) / (a * (m - 1)) - 0.5 * z ** (-m)
    for j, b in enumerate(_BERNOULLI, start=1):
        n = 2 * j - 1
        falling = 1.0
        for i in range(n):
            falling *= -m - i
        total -= b / math.factorial(2 * j) * falling * a**n * z ** (-m - n)
    return total


def _row_sum(omega1: float, c: complex, m: int, cutoff: int, tail: bool) -> complex:
    k = np.arange(-cutoff, cutoff + 1, dtype=float)
    pts = k * omega1 + c
    if c == 0:
        pts = pts[k != 0]
    total = complex(np.sum(pts ** (-m)))
    if tail:
        total += _em_tail(omega1, c, m, cutoff) + _em_tail(-omega1, c, m, cutoff)
    return total


def _iterated_sum(lattice: Lattice, m: int, inner: int, outer: int, tail: bool = True) -> complex:
    total = 0j
    # small rows last to limit cancellation against the dominant m2 = 0 row
    for m2 in sorted(range(-outer, outer + 1), key=lambda j: -abs(j)):
        total += _row_sum(lattice.omega1, m2 * lattice.omega2, m, inner, tail)
    return total


def eisenstein_s2(lattice: Lattice, inner_cutoff: int, outer_cutoff: int,
                  tail_correction: bool = True) -> SumEstimate:
    """Iterated partial sum of P**-2, rows ``|m2| <= outer_cutoff``.

    The error estimate is the change observed when both cutoffs are doubled.
    With ``tail_correction=False`` the inner sums are plain truncations.
    """
    if outer_cutoff < 1 or inner_cutoff < outer_cutoff:
        raise ValueError("need inner_cutoff >= outer_cutoff >= 1")
    value = _iterated_sum(lattice, 2, inner_cutoff, outer_cutoff, tail_correction)
    finer = _iterated_sum(lattice, 2, 2 * inner_cutoff, 2 * outer_cutoff, tail_correction)
    return SumEstimate(value, abs(finer - value))


def _converged_sum(lattice: Lattice, m: int, tolerance: float, max_cutoff: int) -> SumEstimate:
    inner, outer = _INNER_START, _OUTER_START
    prev = _iterated_sum(lattice, m, inner, outer)
    err = math.inf
    while 2 * inner <= max_cutoff:
        inner, outer = 2 * inner, 2 * outer
        cur = _iterated_sum(lattice, m, inner, outer)
        err = abs(cur - prev)
        if err <= tolerance * max(1.0, abs(cur)):
            return SumEstimate(cur, err)
        prev = cur
    raise ConvergenceError(
        f"S_{m} on {lattice.describe()} did not reach tolerance {tolerance:g} "
        f"within cutoff {max_cutoff}", best=prev, accuracy=err)


def _clean(lattice: Lattice, value: complex) -> complex:
    if lattice.is_real_symmetric:
        return complex(value.real, 0.0)
    return value


def lattice_sum(lattice: Lattice, m: int, tolerance: float = DEFAULT_TOLERANCE,
                max_cutoff: int = MAX_CUTOFF) -> complex:
    """S_m for ``m >= 2``.

    Odd orders and orders killed by the lattice's rotation symmetry are
    returned as exact zeros.  ``tolerance`` is absolute for ``|S_m| <= 1``
    and relative above that.
    """
    return _lattice_sum_estimate(lattice, m, tolerance, max_cutoff).value


def _lattice_sum_estimate(lattice, m, tolerance, max_cutoff) -> SumEstimate:
    if m < 2:
        raise ValueError(f"lattice sums start at m = 2, got {m}")
    if not tolerance > 0:
        raise ValueError("tolerance must be positive")
    if lattice.forced_zero(m):
        return SumEstimate(0j, 0.0)
    est = _converged_sum(lattice, m, tolerance, max_cutoff)
    return SumEstimate(_clean(lattice, est.value), est.error)


def _min_shell_norm(lattice: Lattice) -> float:
    """min |t1*omega1 + t2*omega2| over the boundary max(|t1|, |t2|) = 1."""
    w1, w2 = lattice.omega1, lattice.omega2

    def side(fixed: complex, moving: complex) -> float:
        # min over t in [-1, 1] of |fixed + t*moving|
        t = -(fixed.real * moving.real + fixed.imag * moving.imag) / abs(moving) ** 2
        t = min(1.0, max(-1.0, t))
        return abs(fixed + t * moving)

    return min(side(complex(w1), w2), side(w2, complex(w1)))


def shell_sum(lattice: Lattice, m: int, cutoff: int) -> SumEstimate:
    """Brute-force sum over square shells ``max(|m1|, |m2|) <= cutoff``.

    Only for absolutely convergent orders ``m >= 3``.  The returned error is
    the rigorous tail bound ``8 c**-m N**(2-m) / (m-2)`` with ``c`` the
    smallest lattice-vector length per unit shell index.
    """
    if m < 3:
        raise ValueError("shell summation needs m >= 3")
    k = np.arange(-cutoff, cutoff + 1, dtype=float)
    total = 0j
    for m2 in range(-cutoff, cutoff + 1):
        pts = k * lattice.omega1 + m2 * lattice.omega2
        if m2 == 0:
            pts = pts[k != 0]
        total += complex(np.sum(pts ** (-m)))
    c = _min_shell_norm(lattice)
    bound = 8.0 * c ** (-m) * float(cutoff) ** (2 - m) / (m - 2)
    return SumEstimate(total, bound)


@dataclass(frozen=True)
class LatticeSumTable:
    """Cached S_2..S_max_order for one lattice.

    ``quarter_turn`` marks the companion table used for the sigma22
    component: the sums of the lattice turned by 90 degrees,
    S_2 -> 2*pi - S_2 and S_m -> (-1)**(m/2) * S_m for m >= 4.
    """

    lattice: Lattice
    max_order: int
    tolerance: float
    values: Mapping[int, complex]
    errors: Mapping[int, float] = field(default_factory=dict)
    quarter_turn: bool = False

    def __getitem__(self, m: int) -> complex:
        if m < 2 or m > self.max_order:
            raise ValueError(
                f"lattice sum S_{m} not in table (orders 2..{self.max_order}); "
                f"build the table with max_order >= {m}")
        return self.values[m]

    def require(self, order: int, what: str = "") -> None:
        if order > self.max_order:
            suffix = f" for {what}" if what else ""
            raise ValueError(
                f"sum table order {self.max_order} too small{suffix}: "
                f"need max_order >= {order}")

    def quarter_turned(self) -> LatticeSumTable:
        values = {}
        for m, v in self.values.items():
            if m == 2:
                values[m] = 2.0 * math.pi - v
            elif m % 2 == 0:
                values[m] = v * (-1) ** (m // 2)
            else:
                values[m] = v
        return LatticeSumTable(self.lattice, self.max_order, self.tolerance,
                               MappingProxyType(values), self.errors,
                               quarter_turn=not self.quarter_turn)


def build_sum_table(lattice: Lattice, max_order: int,
                    tolerance: float = DEFAULT_TOLERANCE,
                    max_cutoff: int = MAX_CUTOFF) -> LatticeSumTable:
    if max_order < 2:
        raise ValueError("max_order must be >= 2")
    values, errors = {}, {}
    for m in range(2, max_order + 1):
        est = _lattice_sum_estimate(lattice, m, tolerance, max_cutoff)
        values[m], errors[m] = est.value, est.error
    return LatticeSumTable(lattice, max_order, tolerance,
                           MappingProxyType(values), MappingProxyType(errors))


def write_sum_table(table: LatticeSumTable, path) -> None:
    """Plain-text fixture: one ``order real imag accuracy`` line per order."""
    lines = [f"# {table.lattice.describe()} tolerance={table.tolerance:g}"]
    for m in range(2, table.max_order + 1):
        v = table.values[m]
        lines.append(f"{m} {v.real:.17g} {v.imag:.17g} {table.errors.get(m, 0.0):.3g}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_sum_table(path) -> dict[int, SumEstimate]:
    out = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        order, re, im, acc = line.split()
        out[int(order)] = SumEstimate(complex(float(re), float(im)), float(acc))
    return out


def square_s4_closed_form() -> float:
    """Gamma(1/4)**8 / (960 pi**2), the square-lattice S_4 (for checks)."""
    return math.gamma(0.25) ** 8 / (960.0 * math.pi**2)


def row_sum_closed_form(lattice: Lattice, m2: int) -> complex:
    """Row ``m2 != 0`` of S_2 in closed form, (pi/w1)**2 / sin(pi*m2*w2/w1)**2."""
    x = m2 * lattice.omega2 / lattice.omega1
    return (math.pi / lattice.omega1) ** 2 / cmath.sin(math.pi * x) ** 2
