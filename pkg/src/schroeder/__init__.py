"""Exact computation on the Schröder monoids of isotone, order-decreasing partial maps."""

from .core import (
    BlockForm,
    Family,
    MapError,
    MonoidSpec,
    PartialMap,
    compose,
    format_map,
    from_block_form,
    is_member,
    make_partial_map,
    parse_map,
    to_block_form,
)
from .enumeration import ElementStore, closure, enumerate_family, family_elements
from .factorize import decompose_to_idempotents, height_descent, idempotent_factorization
from .green import classify, eggbox_render
from .rank import brute_min_rank, closed_rank, schroeder_number, verify_rank

__version__ = "0.1.0"

__all__ = [
    "BlockForm",
    "ElementStore",
    "Family",
    "MapError",
    "MonoidSpec",
    "PartialMap",
    "brute_min_rank",
    "classify",
    "closed_rank",
    "closure",
    "compose",
    "decompose_to_idempotents",
    "eggbox_render",
    "enumerate_family",
    "family_elements",
    "format_map",
    "from_block_form",
    "height_descent",
    "idempotent_factorization",
    "is_member",
    "make_partial_map",
    "parse_map",
    "schroeder_number",
    "to_block_form",
    "verify_rank",
]
