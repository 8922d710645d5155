"""Spectral completeness of odd moduli for the quarter-Cantor measure."""

from .classify import (
    Classification,
    FilterOutcome,
    PrimitiveCache,
    advisory_report,
    bounded_exponent_reduction,
    classify,
    family_filter,
    gmembership_filter,
    is_primitive,
    order_bound_filter,
    prime_power_filter,
    product_lemma_filter,
)
from .cycles import (
    CycleInventory,
    ExtremeCycle,
    coset_cycle_test,
    cycle_point_count_bound,
    find_cycles,
    step,
    validate_cycle,
)
from .errors import DomainError, InconsistencyError
from .modmath import (
    Coset,
    FactoredInteger,
    OrderRecord,
    factorize,
    group_of_4,
    is_prime,
    order_by_formula,
    order_of_4,
    simplicity_index,
    totient,
)
from .numerics import SpectrumTruncation, TruncatedTransform, gram_matrix, mu_hat
from .sieve import (
    ConjectureReport,
    PrimitiveRecord,
    SieveReport,
    infinitude_witness,
    prime_order_table,
    scan_conjectures,
    sieve_primitives,
)

__version__ = "0.1.0"

__all__ = [
    "Classification",
    "ConjectureReport",
    "Coset",
    "CycleInventory",
    "DomainError",
    "ExtremeCycle",
    "FactoredInteger",
    "FilterOutcome",
    "InconsistencyError",
    "OrderRecord",
    "PrimitiveCache",
    "PrimitiveRecord",
    "SieveReport",
    "SpectrumTruncation",
    "TruncatedTransform",
    "advisory_report",
    "bounded_exponent_reduction",
    "classify",
    "coset_cycle_test",
    "cycle_point_count_bound",
    "factorize",
    "family_filter",
    "find_cycles",
    "gmembership_filter",
    "gram_matrix",
    "group_of_4",
    "infinitude_witness",
    "is_prime",
    "is_primitive",
    "mu_hat",
    "order_bound_filter",
    "order_by_formula",
    "order_of_4",
    "prime_order_table",
    "prime_power_filter",
    "product_lemma_filter",
    "scan_conjectures",
    "sieve_primitives",
    "simplicity_index",
    "step",
    "totient",
    "validate_cycle",
]
