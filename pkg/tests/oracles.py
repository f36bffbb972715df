"""Independent reference implementations used only by the tests."""

from __future__ import annotations

import math

import numpy as np

# hexagonal array, perfectly conducting disks: coefficients of f**0 .. f**26
HEX_SERIES_PRINTED = (
    1.0, 2.0, 2.0, 2.0, 2.0, 2.0, 2.0,
    2.1508443464271876, 2.301688692854377, 2.452533039281566, 2.6033773857087543,
    2.754221732135944, 2.9050660785631326, 3.0674404324522926, 3.2411917947659736,
    3.426320165504177, 3.6228255446669055, 3.8307079322541555, 4.049967328265928,
    4.441422739726373, 4.845994396051242, 5.264540375940583, 5.69791875809444,
    6.146987621212864, 6.6126050439959, 7.135044602470776, 7.700073986554016,
)

# hexagonal contrast series: (j, k) -> printed coefficient of rho**k f**j
HEX_CONTRAST_PRINTED = {(7, 3): 0.150844, (8, 4): 0.301688, (9, 5): 0.452532,
                        (10, 6): 0.603376, (11, 7): 0.75422}

# Gamma(1/4)**8 / (960 pi**2)
SQUARE_S4 = math.gamma(0.25) ** 8 / (960.0 * math.pi**2)


def chain_series(sums, N: int) -> np.ndarray:
    """Enumerate every index chain 1 -> m_1 -> ... -> m_k -> 1 explicitly.

    Returns ``C[j, k]``, the coefficient of ``rho**k f**j``.  Step weights are
    taken straight from the binomial formula; the weight of the i-th step is
    conjugated when i is odd.
    """
    C = np.zeros((N + 1, N + 1), dtype=complex)
    C[0, 0] = 1.0
    if N >= 1:
        C[1, 1] = 2.0

    def weight(a, b, depth):
        w = math.comb(2 * a + 2 * b - 3, 2 * a - 1) * complex(sums[2 * (a + b - 1)])
        return w.conjugate() if depth % 2 else w

    def walk(current, exponent, depth, product):
        # close back to index 1
        if 2 + exponent <= N:
            C[2 + exponent, depth + 2] += 2.0 / math.pi * product * weight(current, 1, depth)
        b = 1
        while exponent + 2 * b - 1 <= N - 2:
            w = weight(current, b, depth) * math.pi ** -(2 * b - 1)
            if w != 0:
                walk(b, exponent + 2 * b - 1, depth + 1, product * w)
            b += 1

    if N >= 2:
        walk(1, 0, 0, 1.0 + 0j)
    return C


def truncated_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product of two power series in f with coefficients ``a``, ``b``."""
    n = min(len(a), len(b))
    return np.array([sum(a[i] * b[j - i] for i in range(j + 1)) for j in range(n)])
