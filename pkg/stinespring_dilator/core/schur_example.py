"""Built-in example: a Schur multiplier on M₂(ℂ) and a φ-map on E = M₂ ⊕ M₂.

φ(a) = D ∘ a with D = [[1, 1/2], [1/2, 1]] is unital and CP with Choi rank 2.
With σ = diag(1, −1),

    Φ(a ⊕ b) = [(√3/2)·a; (√3/2)·b; (1/2)·aσ; (1/2)·bσ]   (8 x 2)

is a φ-map into B(ℂ², ℂ⁸). A hand-written minimal representation is
K₁ = ℂ⁴, ρ(a) = I₂ ⊗ a, V = [(√3/2)·I₂; (1/2)·σ],
K₂ = ℂ⁸, Ψ(a ⊕ b) = [[a, 0], [b, 0], [0, a], [0, b]], W = I₈.
"""
from __future__ import annotations

import numpy as np

from .cstar_algebra import CPMap, matrix_units, schur_map
from .dilation import ModuleRep, RepresentationPair, StinespringRep
from .hilbert_module import FreeModule, PhiMap
from .numerics import kron

SCHUR_D = np.array([[1.0, 0.5], [0.5, 1.0]], dtype=np.complex128)
SIGMA = np.diag([1.0, -1.0]).astype(np.complex128)
H2_DIM = 8
K = 2


def schur_phi() -> CPMap:
    return schur_map(SCHUR_D)


def _phi_block(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    c = np.sqrt(3.0) / 2
    return np.vstack([c * a, c * b, 0.5 * a @ SIGMA, 0.5 * b @ SIGMA])


def schur_phi_map() -> PhiMap:
    """The 8 x 2 φ-map of the example, stored on the scalar basis of M₂ ⊕ M₂."""
    phi = schur_phi()
    module = FreeModule(phi.algebra, K)
    images = []
    for x in module.basis():
        a, b = x.components
        images.append(_phi_block(a, b))
    return PhiMap(module, phi, H2_DIM, tuple(images))


def schur_explicit_pair() -> RepresentationPair:
    """The hand-written minimal representation (W = I₈)."""
    phi = schur_phi()
    rho_images = tuple(kron(np.eye(2), unit) for unit in matrix_units(phi.algebra))
    v = np.vstack([np.sqrt(3.0) / 2 * np.eye(2), 0.5 * SIGMA])
    stinespring = StinespringRep(4, rho_images, v)

    module = FreeModule(phi.algebra, K)
    zero = np.zeros((2, 2))
    psi_images = []
    for x in module.basis():
        a, b = x.components
        psi_images.append(np.block([[a, zero], [b, zero], [zero, a], [zero, b]]))
    module_rep = ModuleRep(H2_DIM, tuple(psi_images), np.eye(H2_DIM))
    return RepresentationPair(stinespring, module_rep)
