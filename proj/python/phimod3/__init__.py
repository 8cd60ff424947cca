"""Filtered (phi, Gal(K/Q3))-module classification for p = 3."""

from ._phimod3 import (
    ParseError,
    SingularCurve,
    Unclassifiable,
    canonical_module_text,
    classify_text,
    ec_info,
    fields,
    k0_roundtrip,
    verify_table,
)

__all__ = [
    "ParseError",
    "SingularCurve",
    "Unclassifiable",
    "canonical_module_text",
    "classify_text",
    "ec_info",
    "fields",
    "k0_roundtrip",
    "verify_table",
]
