"""Groebner bases, syzygies and Koszul homology over Laurent rings."""

from .core import (
    AffineContext,
    BudgetExceeded,
    GrobnerBasis,
    buchberger_certificate,
    groebner_basis,
    laurent_to_affine,
)
from .field import QQ, PrimeField, parse_field
from .koszul import HomologyDescriptor, ModulePresentation, koszul_homology, syzygy_module

__all__ = [
    "AffineContext",
    "BudgetExceeded",
    "GrobnerBasis",
    "buchberger_certificate",
    "groebner_basis",
    "laurent_to_affine",
    "QQ",
    "PrimeField",
    "parse_field",
    "HomologyDescriptor",
    "ModulePresentation",
    "koszul_homology",
    "syzygy_module",
]
