"""Effective conductivity of doubly periodic arrays of disks.

Lattice sums, the truncated Rayleigh system, the contrast/concentration
series, closed-form comparison formulas and a command-line front end.
"""

from .closed_forms import (F_C_HEX, FormulaId, clausius_mossotti, evaluate_formula, keller_hex,
                           matched_contrast_hex, matched_perfect_hex, perrins_mcphedran_hex,
                           perrins_taylor_coefficients)
from .errors import (ConvergenceError, DomainError, EffcondError, PoleError,
                     SingularSystemError)
from .lattice import (Lattice, LatticeKind, LatticeSumTable, build_sum_table, eisenstein_s2,
                      lattice_sum, make_lattice, read_sum_table, shell_sum, write_sum_table)
from .rayleigh import (CompositeParams, EffectiveTensor, FluxCoefficients, TruncatedSystem,
                       build_truncated_system, convergence_study, effective_conductivity,
                       effective_tensor, solve_composite, solve_direct, solve_iterative)
from .series import (BiPolynomial, evaluate, expand_effective_series, hexagonal_coefficients,
                     read_coefficients, required_sum_order, sigma22_series, truncation_estimate,
                     write_coefficients)

__version__ = "0.1.0"
