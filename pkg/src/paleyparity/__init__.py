"""Parity of induced subgraphs of Paley graphs and tournaments, with the
matching MDS self-dual GRS code constructions."""

__version__ = "0.1.0"

from .errors import ParityError
from .ffield import FiniteField, field_of_order, make_field
from .paley import ParityClass, PaleyStructure, build_paley

__all__ = [
    "FiniteField",
    "PaleyStructure",
    "ParityClass",
    "ParityError",
    "__version__",
    "build_paley",
    "field_of_order",
    "make_field",
]
