"""Exact computations in the completed infinity-gon model of graded MCM modules
over C[x,y]/(x^2) with deg x = 1 and deg y = -1."""

from infgon.arcs import NEG_INF, Arc, IdealType, PolyQuot, arc, arc_to_module, cross, module_to_arc, shift, syzygy
from infgon.homext import (
    DomainError,
    ExchangeSequence,
    Morphism,
    compose,
    exchange_sequences,
    ext1_dim,
    hom_basis,
    hom_dim,
    stable_hom_dim,
)
from infgon.mutation import approximations, apply_schedule, exchange_graph, flip, is_mutable, mutate_subcategory
from infgon.triangulation import ArcSetDescriptor, classify, is_cluster_tilting, is_maximal_rigid, validate

__version__ = "0.1.0"

__all__ = [
    "NEG_INF",
    "Arc",
    "ArcSetDescriptor",
    "DomainError",
    "ExchangeSequence",
    "IdealType",
    "Morphism",
    "PolyQuot",
    "apply_schedule",
    "approximations",
    "arc",
    "arc_to_module",
    "classify",
    "compose",
    "cross",
    "exchange_graph",
    "exchange_sequences",
    "ext1_dim",
    "flip",
    "hom_basis",
    "hom_dim",
    "is_cluster_tilting",
    "is_maximal_rigid",
    "is_mutable",
    "module_to_arc",
    "mutate_subcategory",
    "shift",
    "stable_hom_dim",
    "syzygy",
    "validate",
]
