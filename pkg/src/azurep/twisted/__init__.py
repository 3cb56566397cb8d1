"""Twisted quiver representations over central simple algebras."""

from .counting import GroupoidCount, groupoid_count
from .endo import (
    DimVecAzumaya,
    PeirceData,
    dimvec_from_idempotents,
    endo_algebra,
    endo_then_peirce,
    peirce_decompose,
    peirce_then_endo,
)
from .modules import (
    RightModule,
    direct_sum,
    hom_space,
    inner_twist_isomorphism,
    regular_module,
    row_module,
    semilinear_space,
    twist,
)
from .reps import (
    TwistedIso,
    TwistedRep,
    automorphism_to_tuple,
    block_iso,
    conjugate_twisted,
    dictionary_roundtrip,
    identity_iso,
    iso_to_automorphism,
    module_obstruction,
    twist_identification,
    twisted_to_algebra_map,
    twisting_iso,
)

__all__ = [
    "GroupoidCount", "groupoid_count", "DimVecAzumaya", "PeirceData", "dimvec_from_idempotents",
    "endo_algebra", "endo_then_peirce", "peirce_decompose", "peirce_then_endo", "RightModule",
    "direct_sum", "hom_space", "inner_twist_isomorphism", "regular_module", "row_module",
    "semilinear_space", "twist", "TwistedIso", "TwistedRep", "automorphism_to_tuple", "block_iso",
    "conjugate_twisted", "dictionary_roundtrip", "identity_iso", "iso_to_automorphism",
    "module_obstruction", "twist_identification", "twisted_to_algebra_map", "twisting_iso",
]
