"""
Core mathematics for minimal Stinespring representations.

Pure, side-effect-free functions over immutable values: the dense matrix
kernel, the algebra Mₙ(ℂ) with its CP maps, free Hilbert C*-modules with
their φ-maps, and the dilation constructions built on top of them.
"""

__all__ = [
    "TolerancePolicy",
    "DEFAULT_TOLERANCE",
    "MatrixAlgebra",
    "CPMap",
    "KrausSet",
    "FreeModule",
    "ModuleElement",
    "PhiMap",
    "StinespringRep",
    "ModuleRep",
    "RepresentationPair",
    "EquivalenceWitness",
    "VerificationReport",
    "is_completely_positive",
    "kraus_decomposition",
    "schur_map",
    "verify_phi_map",
    "gen_cp_map",
    "gen_phi_map",
    "minimal_stinespring",
    "minimal_stinespring_gram",
    "induce_module_rep",
    "construct_minimal_pair",
    "verify_representation",
    "minimality_check",
    "stinespring_equivalence",
    "unitary_equivalence",
    "asadi_condition_check",
]

from .numerics import DEFAULT_TOLERANCE, TolerancePolicy
from .cstar_algebra import (
    CPMap,
    KrausSet,
    MatrixAlgebra,
    is_completely_positive,
    kraus_decomposition,
    schur_map,
)
from .hilbert_module import (
    FreeModule,
    ModuleElement,
    PhiMap,
    gen_cp_map,
    gen_phi_map,
    verify_phi_map,
)
from .dilation import (
    EquivalenceWitness,
    ModuleRep,
    RepresentationPair,
    StinespringRep,
    VerificationReport,
    asadi_condition_check,
    construct_minimal_pair,
    induce_module_rep,
    minimal_stinespring,
    minimal_stinespring_gram,
    minimality_check,
    stinespring_equivalence,
    unitary_equivalence,
    verify_representation,
)
