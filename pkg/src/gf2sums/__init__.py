"""Exact Kloosterman sums and Goethals-system solution counts over GF(2^m)."""

from .field import (
    DEFAULT_POLYS,
    FieldError,
    FieldSpec,
    QuadraticRoots,
    ReduciblePolynomialError,
    RootKind,
    ZeroInverseError,
    make_field,
)
from .ksum import (
    CostGuardError,
    KloostermanTable,
    kloosterman,
    kloosterman_table,
    kloosterman_table_fast,
    kloosterman_table_naive,
    residue_mod,
)

__all__ = [
    "DEFAULT_POLYS",
    "CostGuardError",
    "FieldError",
    "FieldSpec",
    "KloostermanTable",
    "QuadraticRoots",
    "ReduciblePolynomialError",
    "RootKind",
    "ZeroInverseError",
    "kloosterman",
    "kloosterman_table",
    "kloosterman_table_fast",
    "kloosterman_table_naive",
    "make_field",
    "residue_mod",
]
