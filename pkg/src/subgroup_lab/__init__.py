"""Exact computations with multiplicative subgroups of prime fields.

Energies, the collinear-triple count T, character expansions over a
subgroup, operator spectra, shifted-subgroup intersections and exhaustive
searches for sumset decompositions and difference covers.
"""

from .collinear import (
    TReport,
    dual_energy_sum,
    error_budget,
    main_term,
    t_bounds_report,
    t_quantity,
    t_star,
)
from .energy import (
    CountVector,
    cf_eval,
    corr_add,
    corr_mult,
    energy_add,
    energy_bound_cs,
    energy_mult,
)
from .errors import SubgroupLabError
from .fields import (
    Coset,
    FpSet,
    PrimeField,
    Subgroup,
    format_set,
    make_field,
    parse_set,
    subgroup_of_order,
    subgroups,
    sumset,
    transform,
)
from .harness import ExperimentConfig, Report, primes_in_range, run_suite, scan_primes
from .records import CheckRecord
from .search import (
    difference_cover_search,
    find_decompositions,
    gamma_closure,
    mitkin_sum,
    perfect_difference_check,
    shift_intersection,
)
from .spectral import (
    CharBasis,
    OperatorSpec,
    average_action_identity,
    char_basis,
    coeffs,
    operator_spectrum,
    t_via_chars,
)

__version__ = "0.1.0"

__all__ = [
    "CharBasis",
    "CheckRecord",
    "Coset",
    "CountVector",
    "ExperimentConfig",
    "FpSet",
    "OperatorSpec",
    "PrimeField",
    "Report",
    "Subgroup",
    "SubgroupLabError",
    "TReport",
    "average_action_identity",
    "cf_eval",
    "char_basis",
    "coeffs",
    "corr_add",
    "corr_mult",
    "difference_cover_search",
    "dual_energy_sum",
    "energy_add",
    "energy_bound_cs",
    "energy_mult",
    "error_budget",
    "find_decompositions",
    "format_set",
    "gamma_closure",
    "main_term",
    "make_field",
    "mitkin_sum",
    "operator_spectrum",
    "parse_set",
    "perfect_difference_check",
    "primes_in_range",
    "run_suite",
    "scan_primes",
    "shift_intersection",
    "subgroup_of_order",
    "subgroups",
    "sumset",
    "t_bounds_report",
    "t_quantity",
    "t_star",
    "t_via_chars",
    "transform",
]
