"""The matrix algebra Mₙ(ℂ), completely positive maps on it and Choi–Kraus machinery.

A map φ: Mₙ(ℂ) → B(H₁) is stored by its images on the matrix units
``E_pq`` (flattened index ``p·n + q``); the Choi matrix
``C = Σ_pq E_pq ⊗ φ(E_pq)`` is derived on demand. Complete positivity is
decided by positivity of ``C``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, NamedTuple, Sequence, Tuple

import numpy as np

from ..errors import NonSquare, NotCompletelyPositive, NotHermitian, ShapeMismatch
from .numerics import (
    DEFAULT_TOLERANCE,
    CMatrix,
    TolerancePolicy,
    as_cmatrix,
    dagger,
    freeze,
    hermitian_eig,
    operator_norm,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MatrixAlgebra:
    """A = Mₙ(ℂ)."""

    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"matrix algebra size must be a positive integer, got {self.n!r}")

    @property
    def dim(self) -> int:
        return self.n * self.n

    def unit(self, p: int, q: int) -> CMatrix:
        e = np.zeros((self.n, self.n), dtype=np.complex128)
        e[p, q] = 1.0
        return e

    def identity(self) -> CMatrix:
        return np.eye(self.n, dtype=np.complex128)

    def unit_index(self, p: int, q: int) -> int:
        return p * self.n + q


def matrix_units(algebra: MatrixAlgebra) -> List[CMatrix]:
    """All n² matrix units, ``E_pq`` at position ``p·n + q``."""
    n = algebra.n
    return [algebra.unit(p, q) for p in range(n) for q in range(n)]


@dataclass(frozen=True, eq=False)
class CPMap:
    """A linear map φ: Mₙ(ℂ) → B(H₁) given by its images on matrix units.

    The name reflects the intended use; positivity is not enforced at
    construction, ``is_completely_positive`` decides it.
    """

    algebra: MatrixAlgebra
    h1_dim: int
    images: Tuple[CMatrix, ...] = field(repr=False)

    def __post_init__(self):
        if int(self.h1_dim) != self.h1_dim or self.h1_dim < 1:
            raise ValueError(f"h1_dim must be a positive integer, got {self.h1_dim!r}")
        images = tuple(as_cmatrix(m, f"images[{i}]") for i, m in enumerate(self.images))
        if len(images) != self.algebra.dim:
            raise ShapeMismatch(
                f"expected {self.algebra.dim} matrix-unit images, got {len(images)}"
            )
        for i, m in enumerate(images):
            if m.shape != (self.h1_dim, self.h1_dim):
                raise ShapeMismatch(
                    f"images[{i}] must be {self.h1_dim}x{self.h1_dim}, got {m.shape}"
                )
        object.__setattr__(self, 'images', images)

    @property
    def n(self) -> int:
        return self.algebra.n

    def image(self, p: int, q: int) -> CMatrix:
        return self.images[self.algebra.unit_index(p, q)]

    def __call__(self, a: CMatrix) -> CMatrix:
        return apply_cp(self, a)


@dataclass(frozen=True, eq=False)
class KrausSet:
    """Kraus operators K_s: ℂⁿ → H₁ with φ(a) = Σ_s K_s·a·K_s*."""

    operators: Tuple[CMatrix, ...] = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, 'operators', tuple(freeze(k) for k in self.operators))

    @property
    def r(self) -> int:
        return len(self.operators)

    def apply(self, a: CMatrix) -> CMatrix:
        a = np.asarray(a, dtype=np.complex128)
        if not self.operators:
            raise ShapeMismatch("an empty Kraus set has no output dimension")
        out = np.zeros((self.operators[0].shape[0],) * 2, dtype=np.complex128)
        for k in self.operators:
            out += k @ a @ dagger(k)
        return out

    def reconstruction_residual(self, phi: CPMap) -> float:
        """max over matrix units of ‖Σ K_s E_pq K_s* − φ(E_pq)‖."""
        worst = 0.0
        for unit, img in zip(matrix_units(phi.algebra), phi.images):
            approx = self.apply(unit) if self.operators else np.zeros_like(img)
            worst = max(worst, operator_norm(approx - img))
        return worst


class PositivityVerdict(NamedTuple):
    verdict: bool
    min_eigenvalue: float


def choi_of(phi: CPMap) -> CMatrix:
    """Choi matrix Σ_pq E_pq ⊗ φ(E_pq): block (p, q) is φ(E_pq)."""
    n, h = phi.n, phi.h1_dim
    choi = np.zeros((n * h, n * h), dtype=np.complex128)
    for p in range(n):
        for q in range(n):
            choi[p * h:(p + 1) * h, q * h:(q + 1) * h] = phi.image(p, q)
    return choi


def cp_map_from_choi(algebra: MatrixAlgebra, h1_dim: int, choi: CMatrix) -> CPMap:
    """Inverse of ``choi_of``: read the images back off the Choi blocks."""
    n, h = algebra.n, h1_dim
    choi = np.asarray(choi, dtype=np.complex128)
    if choi.shape != (n * h, n * h):
        raise ShapeMismatch(f"Choi matrix must be {n * h}x{n * h}, got {choi.shape}")
    images = [choi[p * h:(p + 1) * h, q * h:(q + 1) * h] for p in range(n) for q in range(n)]
    return CPMap(algebra, h1_dim, tuple(images))


def hermiticity_residual(phi: CPMap) -> float:
    """max over (p, q) of ‖φ(E_qp) − φ(E_pq)*‖."""
    n = phi.n
    return max(
        operator_norm(phi.image(q, p) - dagger(phi.image(p, q)))
        for p in range(n) for q in range(n)
    )


def choi_spectrum(phi: CPMap, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> np.ndarray:
    """Ascending eigenvalues of the Hermitian part of the Choi matrix."""
    choi = choi_of(phi)
    return hermitian_eig((choi + dagger(choi)) / 2, tol).eigenvalues


def is_completely_positive(phi: CPMap,
                           tol: TolerancePolicy = DEFAULT_TOLERANCE) -> PositivityVerdict:
    """Choi criterion: λ_min(C) ≥ −psd_rtol·max(1, λ_max).

    A non-Hermitian Choi matrix cannot be positive; it is reported as not CP
    with the spectrum of its Hermitian part.
    """
    choi = choi_of(phi)
    try:
        eigenvalues = hermitian_eig(choi, tol).eigenvalues
        hermitian = True
    except NotHermitian as e:
        logger.warning("Choi matrix is not Hermitian (%s); map cannot be CP", e)
        eigenvalues = hermitian_eig((choi + dagger(choi)) / 2, tol).eigenvalues
        hermitian = False

    lam_min = float(eigenvalues[0])
    lam_max = float(np.max(np.abs(eigenvalues)))
    verdict = hermitian and lam_min >= -tol.psd_rtol * max(1.0, lam_max)
    logger.debug("CP check: λ_min = %.3e, λ_max = %.3e, verdict %s", lam_min, lam_max, verdict)
    return PositivityVerdict(bool(verdict), lam_min)


def choi_rank(phi: CPMap, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> int:
    """Number of Choi eigenvalues above ``rank_rtol·λ_max``."""
    eigenvalues = choi_spectrum(phi, tol)
    lam_max = float(eigenvalues[-1])
    if lam_max <= 0.0:
        return 0
    return int(np.count_nonzero(eigenvalues > tol.rank_rtol * lam_max))


def kraus_decomposition(phi: CPMap, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> KrausSet:
    """Minimal Kraus set from the Choi eigendecomposition.

    For an eigenpair (λ, v) of C with v indexed by ``p·h1 + i``, the Kraus
    operator is ``K[i, p] = √λ·v[p·h1 + i]``. Operators are ordered by
    decreasing eigenvalue; the count equals the numerical Choi rank.
    """
    verdict = is_completely_positive(phi, tol)
    if not verdict.verdict:
        raise NotCompletelyPositive(
            f"Choi matrix has eigenvalue {verdict.min_eigenvalue:.6g} < 0"
        )

    eigenvalues, eigenvectors = hermitian_eig(choi_of(phi), tol)
    lam_max = float(eigenvalues[-1])
    n, h = phi.n, phi.h1_dim
    operators = []
    if lam_max > 0.0:
        for idx in range(len(eigenvalues) - 1, -1, -1):
            lam = float(eigenvalues[idx])
            if lam <= tol.rank_rtol * lam_max:
                break
            operators.append(np.sqrt(lam) * eigenvectors[:, idx].reshape(n, h).T)

    kraus = KrausSet(tuple(operators))
    logger.debug("Kraus decomposition: r = %d (n = %d, h1 = %d)", kraus.r, n, h)
    return kraus


def kraus_map(algebra: MatrixAlgebra, operators: Sequence[CMatrix]) -> CPMap:
    """The CP map a ↦ Σ_s K_s·a·K_s* for K_s of shape h1 x n."""
    ops = [as_cmatrix(k, f"ops[{i}]") for i, k in enumerate(operators)]
    if not ops:
        raise ShapeMismatch("at least one Kraus operator is required")
    h1 = ops[0].shape[0]
    for i, k in enumerate(ops):
        if k.shape != (h1, algebra.n):
            raise ShapeMismatch(f"ops[{i}] must be {h1}x{algebra.n}, got {k.shape}")
    kraus = KrausSet(tuple(ops))
    return CPMap(algebra, h1, tuple(kraus.apply(unit) for unit in matrix_units(algebra)))


def schur_map(d: CMatrix) -> CPMap:
    """Schur multiplier a ↦ D ∘ a, so φ(E_pq) = D_pq·E_pq."""
    d = as_cmatrix(d, "D")
    if d.shape[0] != d.shape[1]:
        raise NonSquare(f"Schur multiplier must be square, got shape {d.shape}")
    algebra = MatrixAlgebra(d.shape[0])
    images = tuple(d[p, q] * algebra.unit(p, q) for p in range(algebra.n) for q in range(algebra.n))
    return CPMap(algebra, algebra.n, images)


def identity_map(algebra: MatrixAlgebra) -> CPMap:
    return CPMap(algebra, algebra.n, tuple(matrix_units(algebra)))


def transpose_map(algebra: MatrixAlgebra) -> CPMap:
    """E_pq ↦ E_qp: positive but not completely positive for n ≥ 2."""
    n = algebra.n
    return CPMap(algebra, n, tuple(algebra.unit(q, p) for p in range(n) for q in range(n)))


def apply_cp(phi: CPMap, a: CMatrix) -> CMatrix:
    """Linear extension φ(a) = Σ_pq a_pq·φ(E_pq)."""
    a = np.asarray(a, dtype=np.complex128)
    if a.shape != (phi.n, phi.n):
        raise ShapeMismatch(f"argument must be {phi.n}x{phi.n}, got {a.shape}")
    return np.tensordot(a.reshape(-1), np.stack(phi.images), axes=1)


def is_unital(phi: CPMap, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> bool:
    """φ(1) = 1 within ``atol``."""
    one = apply_cp(phi, phi.algebra.identity())
    return operator_norm(one - np.eye(phi.h1_dim)) <= tol.atol
