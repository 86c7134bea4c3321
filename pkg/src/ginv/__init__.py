"""Exact tables and identity checks for the Dirichlet inverse of omega(n) + 1,
with the analytic and distributional reports built on them."""

from .coreseq import CoreTables, build_core
from .errors import (
    CapacityError,
    DomainError,
    GinvError,
    LimitMismatchError,
    RangeError,
    ZeroLeadingValueError,
)
from .sieve import BasicTables, FactorSieve, build_factor_sieve, factorize
from .summatory import SummatorySet, build_summatory

__all__ = [
    "BasicTables", "CapacityError", "CoreTables", "DomainError", "FactorSieve", "GinvError",
    "LimitMismatchError", "RangeError", "SummatorySet", "ZeroLeadingValueError",
    "build_core", "build_factor_sieve", "build_summatory", "factorize",
]

__version__ = "0.1.0"
