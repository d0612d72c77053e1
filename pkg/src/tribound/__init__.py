"""Triangular-set decomposition, subgroup constructions and degree-bound calculus."""

from .polynomial import Polynomial, VariableOrder, class_of, initial, prem, pseudo_divide
from .triangular import (
    QuasiComponent,
    TriangularRepresentation,
    TriangularSet,
    is_triangular,
    rep_contains,
    representation_product,
    representation_restrict,
    restrict,
)
from .decomposition import DecompositionTask, decompose, membership_radical

__all__ = [
    "Polynomial",
    "VariableOrder",
    "class_of",
    "initial",
    "prem",
    "pseudo_divide",
    "QuasiComponent",
    "TriangularRepresentation",
    "TriangularSet",
    "is_triangular",
    "rep_contains",
    "representation_product",
    "representation_restrict",
    "restrict",
    "DecompositionTask",
    "decompose",
    "membership_radical",
]
