"""Restricted sumsets A (+)_R B over the integers and prime fields."""
from .core import (
    IntegerSet,
    ModulusError,
    Relation,
    RelationConstraint,
    ResidueSet,
    degree_profile,
    dilate,
    iterated_span,
    restricted_sumset,
    sumset,
)
from .search import max_avoiding_set, min_restricted_sumset, scan_conjectures

__all__ = [
    "IntegerSet",
    "ModulusError",
    "Relation",
    "RelationConstraint",
    "ResidueSet",
    "degree_profile",
    "dilate",
    "iterated_span",
    "max_avoiding_set",
    "min_restricted_sumset",
    "restricted_sumset",
    "scan_conjectures",
    "sumset",
]
