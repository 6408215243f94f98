"""Free Hilbert C*-modules E = Aᵏ over A = Mₙ(ℂ) and φ-maps E → B(H₁, H₂).

The inner product is ⟨x, y⟩ = Σ_i x_i*·y_i (conjugate linear in the first
slot) and the right action is componentwise multiplication. A φ-map is
stored on the scalar basis ``δ_i ⊗ E_pq`` of E, flattened as
``i·n² + p·n + q``; it is linear but in general not A-linear, so the scalar
basis is the only unambiguous finite description.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, NamedTuple, Tuple

import numpy as np

from ..errors import (
    DimensionTooSmall,
    InvalidRank,
    ModuleMismatch,
    ShapeMismatch,
)
from .cstar_algebra import (
    CPMap,
    MatrixAlgebra,
    apply_cp,
    choi_rank,
    kraus_map,
    matrix_units,
)
from .numerics import (
    DEFAULT_TOLERANCE,
    CMatrix,
    TolerancePolicy,
    as_cmatrix,
    dagger,
    freeze,
    kron,
    operator_norm,
    random_isometry,
)

logger = logging.getLogger(__name__)

# Redraws allowed before a numerically degenerate random draw is treated as an error
_MAX_DRAWS = 16


@dataclass(frozen=True)
class FreeModule:
    """E = Aᵏ."""

    algebra: MatrixAlgebra
    k: int

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise ValueError(f"module rank k must be a positive integer, got {self.k!r}")

    @property
    def n(self) -> int:
        return self.algebra.n

    @property
    def basis_size(self) -> int:
        return self.k * self.algebra.dim

    def basis_index(self, i: int, p: int, q: int) -> int:
        return i * self.algebra.dim + p * self.n + q

    def basis_label(self, b: int) -> Tuple[int, int, int]:
        i, rest = divmod(b, self.algebra.dim)
        p, q = divmod(rest, self.n)
        return i, p, q

    def basis_element(self, b: int) -> "ModuleElement":
        i, p, q = self.basis_label(b)
        components = [np.zeros((self.n, self.n), dtype=np.complex128) for _ in range(self.k)]
        components[i][p, q] = 1.0
        return ModuleElement(self, tuple(components))

    def basis(self) -> List["ModuleElement"]:
        return [self.basis_element(b) for b in range(self.basis_size)]

    def zero(self) -> "ModuleElement":
        return ModuleElement(self, tuple(np.zeros((self.n, self.n)) for _ in range(self.k)))

    def element(self, *components: CMatrix) -> "ModuleElement":
        return ModuleElement(self, tuple(components))


@dataclass(frozen=True, eq=False)
class ModuleElement:
    """x = (x₁, …, x_k) with each x_i an n x n matrix."""

    module: FreeModule
    components: Tuple[CMatrix, ...] = field(repr=False)

    def __post_init__(self):
        comps = tuple(as_cmatrix(c, f"components[{i}]") for i, c in enumerate(self.components))
        if len(comps) != self.module.k:
            raise ShapeMismatch(f"expected {self.module.k} components, got {len(comps)}")
        n = self.module.n
        for i, c in enumerate(comps):
            if c.shape != (n, n):
                raise ShapeMismatch(f"components[{i}] must be {n}x{n}, got {c.shape}")
        object.__setattr__(self, 'components', comps)

    def coefficients(self) -> np.ndarray:
        """Coordinates on the scalar basis δ_i ⊗ E_pq."""
        return np.concatenate([c.reshape(-1) for c in self.components])

    def __add__(self, other: "ModuleElement") -> "ModuleElement":
        _require_same_module(self, other)
        return ModuleElement(self.module,
                             tuple(a + b for a, b in zip(self.components, other.components)))

    def scaled(self, c: complex) -> "ModuleElement":
        return ModuleElement(self.module, tuple(c * a for a in self.components))


@dataclass(frozen=True, eq=False)
class PhiMap:
    """Φ: E → B(H₁, H₂) on the scalar basis, together with its base map φ."""

    module: FreeModule
    phi: CPMap
    h2_dim: int
    basis_images: Tuple[CMatrix, ...] = field(repr=False)

    def __post_init__(self):
        if self.phi.algebra != self.module.algebra:
            raise ModuleMismatch("φ and E must live over the same algebra")
        if int(self.h2_dim) != self.h2_dim or self.h2_dim < 1:
            raise ValueError(f"h2_dim must be a positive integer, got {self.h2_dim!r}")
        images = tuple(as_cmatrix(m, f"Phi[{b}]") for b, m in enumerate(self.basis_images))
        if len(images) != self.module.basis_size:
            raise ShapeMismatch(
                f"expected {self.module.basis_size} basis images, got {len(images)}"
            )
        for b, m in enumerate(images):
            if m.shape != (self.h2_dim, self.h1_dim):
                raise ShapeMismatch(
                    f"Phi[{b}] must be {self.h2_dim}x{self.h1_dim}, got {m.shape}"
                )
        object.__setattr__(self, 'basis_images', images)

    @property
    def h1_dim(self) -> int:
        return self.phi.h1_dim

    def __call__(self, x: ModuleElement) -> CMatrix:
        return apply_phi(self, x)

    def with_image(self, b: int, image: CMatrix) -> "PhiMap":
        """Copy with the b-th basis image replaced."""
        images = list(self.basis_images)
        images[b] = image
        return PhiMap(self.module, self.phi, self.h2_dim, tuple(images))


class PhiMapVerdict(NamedTuple):
    verdict: bool
    max_residual: float


class PhiMorphismVerdict(NamedTuple):
    phi_is_morphism: bool
    module_law_residual: float


def _require_same_module(x: ModuleElement, y: ModuleElement) -> None:
    if x.module != y.module:
        raise ModuleMismatch(f"elements live over different modules: {x.module} vs {y.module}")


def inner_product(x: ModuleElement, y: ModuleElement) -> CMatrix:
    """⟨x, y⟩ = Σ_i x_i*·y_i."""
    _require_same_module(x, y)
    out = np.zeros((x.module.n, x.module.n), dtype=np.complex128)
    for xi, yi in zip(x.components, y.components):
        out += dagger(xi) @ yi
    return out


def module_action(x: ModuleElement, a: CMatrix) -> ModuleElement:
    """Right action x·a = (x₁a, …, x_k a)."""
    a = np.asarray(a, dtype=np.complex128)
    n = x.module.n
    if a.shape != (n, n):
        raise ShapeMismatch(f"algebra element must be {n}x{n}, got {a.shape}")
    return ModuleElement(x.module, tuple(xi @ a for xi in x.components))


def module_norm(x: ModuleElement) -> float:
    """‖x‖ = ‖⟨x, x⟩‖^{1/2}."""
    return float(np.sqrt(operator_norm(inner_product(x, x))))


def apply_phi(phi_map: PhiMap, x: ModuleElement) -> CMatrix:
    """Linear extension of Φ from the scalar basis."""
    if x.module != phi_map.module:
        raise ModuleMismatch("element does not belong to the module of Φ")
    return np.tensordot(x.coefficients(), np.stack(phi_map.basis_images), axes=1)


def verify_phi_map(phi_map: PhiMap, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> PhiMapVerdict:
    """Exhaustive check of Φ(x_b)*·Φ(x_c) = φ(⟨x_b, x_c⟩) over all basis pairs.

    The threshold is ``atol·scale`` with scale the largest of 1, ‖Φ(x_b)‖² and
    ‖φ(E_pq)‖.
    """
    basis = phi_map.module.basis()
    images = phi_map.basis_images
    worst = 0.0
    for b, xb in enumerate(basis):
        for c, xc in enumerate(basis):
            lhs = dagger(images[b]) @ images[c]
            rhs = apply_cp(phi_map.phi, inner_product(xb, xc))
            worst = max(worst, operator_norm(lhs - rhs))

    scale = max(
        [1.0]
        + [operator_norm(m) ** 2 for m in images]
        + [operator_norm(m) for m in phi_map.phi.images]
    )
    verdict = worst <= tol.atol * scale
    logger.debug("φ-map check: max residual %.3e (scale %.3g) -> %s", worst, scale, verdict)
    return PhiMapVerdict(bool(verdict), float(worst))


def phi_morphism_check(phi_map: PhiMap,
                       tol: TolerancePolicy = DEFAULT_TOLERANCE) -> PhiMorphismVerdict:
    """Is Φ a φ-morphism?

    φ must be a nondegenerate *-homomorphism (for a unital algebra: φ(1) = 1)
    and Φ must satisfy Φ(x·a) = Φ(x)·φ(a); the module-law residual is
    reported over all basis elements and matrix units either way.
    """
    phi = phi_map.phi
    algebra = phi.algebra
    n = algebra.n
    hom_residual = 0.0
    for p in range(n):
        for q in range(n):
            hom_residual = max(hom_residual,
                               operator_norm(dagger(phi.image(p, q)) - phi.image(q, p)))
            for r in range(n):
                for s in range(n):
                    expected = phi.image(p, s) if q == r else np.zeros_like(phi.image(p, s))
                    hom_residual = max(hom_residual,
                                       operator_norm(phi.image(p, q) @ phi.image(r, s) - expected))
    one = apply_cp(phi, algebra.identity())
    hom_residual = max(hom_residual, operator_norm(one - np.eye(phi.h1_dim)))

    law_residual = 0.0
    units = matrix_units(algebra)
    for b, xb in enumerate(phi_map.module.basis()):
        for u, unit in enumerate(units):
            lhs = apply_phi(phi_map, module_action(xb, unit))
            rhs = phi_map.basis_images[b] @ phi.images[u]
            law_residual = max(law_residual, operator_norm(lhs - rhs))

    is_morphism = hom_residual <= tol.atol and law_residual <= tol.atol
    return PhiMorphismVerdict(bool(is_morphism), float(law_residual))


def gen_cp_map(n: int, h1_dim: int, r: int, seed: int,
               tol: TolerancePolicy = DEFAULT_TOLERANCE) -> CPMap:
    """Random CP map with Choi rank r.

    Draws r Kraus operators (h1_dim x n) with i.i.d. standard complex Gaussian
    entries from ``numpy.random.default_rng(seed)``; a draw whose numerical
    Choi rank falls below r is discarded and redrawn from the same stream.
    """
    if r < 1 or r > n * h1_dim:
        raise InvalidRank(f"Kraus rank r must satisfy 1 ≤ r ≤ n·h1 = {n * h1_dim}, got {r}")
    algebra = MatrixAlgebra(n)
    rng = np.random.default_rng(seed)
    for attempt in range(_MAX_DRAWS):
        ops = [
            (rng.standard_normal((h1_dim, n)) + 1j * rng.standard_normal((h1_dim, n))) / np.sqrt(2)
            for _ in range(r)
        ]
        phi = kraus_map(algebra, ops)
        rank = choi_rank(phi, tol)
        if rank == r:
            return phi
        logger.warning("Degenerate draw (Choi rank %d < %d, attempt %d); redrawing",
                       rank, r, attempt + 1)
    raise InvalidRank(f"could not draw a CP map of Choi rank {r} in {_MAX_DRAWS} attempts")


def gen_phi_map(phi: CPMap, k: int, h2_dim: int, seed: int,
                tol: TolerancePolicy = DEFAULT_TOLERANCE) -> PhiMap:
    """Random φ-map on E = Aᵏ built through a minimal dilation of φ.

    With (ρ, V, K₁) minimal, K₂′ = ℂᵏ ⊗ K₁ and Ψ₀(x) = Σ_i T_i·ρ(x_i) where T_i
    embeds K₁ as the i-th block, Ψ₀(x)*Ψ₀(y) = ρ(⟨x, y⟩). A seeded random
    isometry J: K₂′ → H₂ then gives Φ(x) = J·Ψ₀(x)·V, a φ-map by construction.
    """
    from .dilation import minimal_stinespring

    module = FreeModule(phi.algebra, k)
    rep = minimal_stinespring(phi, tol)
    needed = k * rep.k1_dim
    if h2_dim < needed:
        raise DimensionTooSmall(
            f"h2_dim must satisfy h2 ≥ n·r·k = {needed}, got {h2_dim}"
        )

    rng = np.random.default_rng(seed)
    j = random_isometry(h2_dim, needed, rng)
    images = []
    for b in range(module.basis_size):
        i, p, q = module.basis_label(b)
        block = np.zeros((k, 1), dtype=np.complex128)
        block[i, 0] = 1.0
        psi0 = kron(block, rep.rho_images[phi.algebra.unit_index(p, q)])
        images.append(freeze(j @ psi0 @ rep.V))
    logger.debug("Generated φ-map: k = %d, h2 = %d, dilation rank %d", k, h2_dim, needed)
    return PhiMap(module, phi, h2_dim, tuple(images))
