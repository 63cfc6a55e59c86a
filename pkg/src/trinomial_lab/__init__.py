"""Rigidity, flexibility and LND witnesses for trinomial hypersurfaces and varieties."""

from .algebra import Poly, VariableSpace
from .classify import ClassificationReport, classify, classify_hypersurface, classify_variety, ml_invariant
from .derivations import (
    Derivation,
    Grading,
    LndCertificate,
    exp_automorphism,
    extend_and_check,
    fine_grading,
    homogeneous_parts,
    nu_degree,
    verify_lnd,
)
from .lnd import (
    catalog_witnesses,
    descend_nod,
    lift_suspension,
    variety_witness,
    witness_case1,
    witness_case2,
    witness_delta_pm,
    witness_gamma,
)
from .oracle import search_lnd
from .orbits import NotCovered, OrbitPath, orbit_path
from .quotient import PresentedRing
from .varieties import (
    SuspensionSpec,
    TrinomialHypersurface,
    TrinomialVariety,
    canonical_form,
    descriptor_from_json,
    is_factorial,
    suspend,
)

__all__ = [
    "ClassificationReport",
    "Derivation",
    "Grading",
    "LndCertificate",
    "NotCovered",
    "OrbitPath",
    "Poly",
    "PresentedRing",
    "SuspensionSpec",
    "TrinomialHypersurface",
    "TrinomialVariety",
    "VariableSpace",
    "canonical_form",
    "catalog_witnesses",
    "classify",
    "classify_hypersurface",
    "classify_variety",
    "descend_nod",
    "descriptor_from_json",
    "exp_automorphism",
    "extend_and_check",
    "fine_grading",
    "homogeneous_parts",
    "is_factorial",
    "lift_suspension",
    "ml_invariant",
    "nu_degree",
    "orbit_path",
    "search_lnd",
    "suspend",
    "variety_witness",
    "verify_lnd",
    "witness_case1",
    "witness_case2",
    "witness_delta_pm",
    "witness_gamma",
]
