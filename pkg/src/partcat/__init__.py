"""Exact calculus of partition categories and their Weingarten integration."""

from .partitions import (
    DEFAULT_LEG_BOUND,
    LegBoundError,
    ParseError,
    Partition,
    ShapeMismatchError,
    all_shapes,
    enumerate_all,
    enumerate_partitions,
    parse,
)
from .categories import (
    BASE_FAMILIES,
    CategoryId,
    EH,
    EO,
    NC_FAMILIES,
    NC_OF,
    NCB,
    NCB2,
    NCH,
    NCO,
    NCS,
    NCS2,
    PB,
    PB2,
    PH,
    PO,
    PS,
    PS2,
    axioms_hold,
    category_table,
    eh_loc,
    eh_s,
    enumerate_category,
    generate,
    half_commutation,
    k_cubic,
    member,
    parse_category,
    s_mixing,
    special_partition,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
