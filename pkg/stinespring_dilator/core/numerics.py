"""Dense complex-matrix kernel.

Every construction in the package reduces to a handful of decompositions on
small dense matrices: Hermitian eigendecomposition, orthonormal ranges,
minimal-norm least squares, spectral norms and Kronecker products. They all
live here so the tolerance handling is decided in one place.

All functions are pure; matrices are ``numpy.ndarray`` of dtype complex128.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Iterable, NamedTuple

import numpy as np
import scipy.linalg

from ..errors import NonFiniteEntries, NonSquare, NotHermitian, ShapeMismatch

logger = logging.getLogger(__name__)

CMatrix = np.ndarray


@dataclass(frozen=True)
class TolerancePolicy:
    """Floating-point tolerances used by every rank, positivity and residual decision.

    ``rank_rtol`` is relative to the largest singular value, ``psd_rtol`` to the
    largest eigenvalue magnitude. ``atol`` bounds residuals of identities.
    """

    atol: float = 1e-9
    rank_rtol: float = 1e-10
    psd_rtol: float = 1e-10

    def __post_init__(self):
        for name in ('atol', 'rank_rtol', 'psd_rtol'):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise ValueError(f"Tolerance '{name}' must be a finite non-negative number, "
                                 f"got {value!r}")

    @classmethod
    def from_config(cls, config: Any) -> "TolerancePolicy":
        """Build a policy from a ``Config`` (or any object with ``get``)."""
        section = config.get('tolerance') or {}
        defaults = cls()
        return cls(
            atol=float(section.get('atol', defaults.atol)),
            rank_rtol=float(section.get('rank_rtol', defaults.rank_rtol)),
            psd_rtol=float(section.get('psd_rtol', defaults.psd_rtol)),
        )


DEFAULT_TOLERANCE = TolerancePolicy()


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: CMatrix


class RangeBasis(NamedTuple):
    basis: CMatrix
    rank: int


class LeastSquares(NamedTuple):
    x: CMatrix
    residual: float


def as_cmatrix(data: Any, name: str = "matrix") -> CMatrix:
    """Coerce ``data`` into a read-only 2-D complex128 array.

    Raises ``ShapeMismatch`` for anything that is not 2-D and
    ``NonFiniteEntries`` when NaN or Inf is present.
    """
    m = np.array(data, dtype=np.complex128)
    if m.ndim != 2:
        raise ShapeMismatch(f"{name} must be 2-D, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NonFiniteEntries(f"{name} contains NaN or Inf entries")
    m.setflags(write=False)
    return m


def freeze(m: np.ndarray) -> CMatrix:
    """Return a read-only complex128 copy of ``m``."""
    out = np.array(m, dtype=np.complex128)
    out.setflags(write=False)
    return out


def dagger(m: CMatrix) -> CMatrix:
    return m.conj().T


def hstack_columns(blocks: Iterable[CMatrix], rows: int) -> CMatrix:
    """Concatenate column blocks; an empty family yields a ``rows x 0`` matrix."""
    blocks = list(blocks)
    if not blocks:
        return np.zeros((rows, 0), dtype=np.complex128)
    return np.hstack(blocks)


def operator_norm(m: CMatrix) -> float:
    """Spectral norm (largest singular value); 0 for empty matrices."""
    m = np.asarray(m)
    if m.size == 0:
        return 0.0
    return float(scipy.linalg.svdvals(m)[0])


def residual(a: CMatrix, b: CMatrix) -> float:
    """Spectral-norm distance between two equally shaped matrices."""
    return operator_norm(np.asarray(a) - np.asarray(b))


def kron(a: CMatrix, b: CMatrix) -> CMatrix:
    """Kronecker product with lexicographic (left factor major) index flattening."""
    return np.kron(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128))


def hermitian_eig(m: CMatrix, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    The symmetry check is ``‖M − M*‖ ≤ atol·max(1, ‖M‖)``; the decomposition is
    taken on the Hermitian part so round-off asymmetry never leaks into the
    eigenvectors.
    """
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NonSquare(f"hermitian_eig needs a square matrix, got shape {m.shape}")
    if m.shape[0] == 0:
        return EigenDecomposition(np.zeros(0), np.zeros((0, 0), dtype=np.complex128))

    scale = max(1.0, operator_norm(m))
    asymmetry = operator_norm(m - dagger(m))
    if asymmetry > tol.atol * scale:
        raise NotHermitian(f"matrix is not Hermitian: ‖M − M*‖ = {asymmetry:.3e}")

    eigenvalues, eigenvectors = scipy.linalg.eigh((m + dagger(m)) / 2)
    return EigenDecomposition(np.asarray(eigenvalues, dtype=float), eigenvectors)


def orthonormal_range(columns: CMatrix, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> RangeBasis:
    """Orthonormal basis of the column span.

    Rank counts singular values above ``rank_rtol·σ_max``; an all-zero (or
    column-free) input has rank 0 and a ``rows x 0`` basis.
    """
    columns = np.asarray(columns, dtype=np.complex128)
    rows = columns.shape[0]
    if columns.size == 0:
        return RangeBasis(np.zeros((rows, 0), dtype=np.complex128), 0)

    u, s, _ = scipy.linalg.svd(columns, full_matrices=False)
    if s[0] == 0.0:
        return RangeBasis(np.zeros((rows, 0), dtype=np.complex128), 0)
    rank = int(np.count_nonzero(s > tol.rank_rtol * s[0]))
    return RangeBasis(u[:, :rank], rank)


def pseudo_solve(s: CMatrix, t: CMatrix, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> LeastSquares:
    """Minimal-norm least-squares solution of ``X·S = T``.

    ``X = T·S⁺`` where the pseudo-inverse discards singular values below
    ``rank_rtol·σ_max``. The Frobenius residual ``‖X·S − T‖`` is returned with
    it; callers use it as a well-definedness certificate.
    """
    s = np.asarray(s, dtype=np.complex128)
    t = np.asarray(t, dtype=np.complex128)
    if s.ndim != 2 or t.ndim != 2 or s.shape[1] != t.shape[1]:
        raise ShapeMismatch(
            f"pseudo_solve needs equal column counts, got S {s.shape} and T {t.shape}"
        )

    x = np.zeros((t.shape[0], s.shape[0]), dtype=np.complex128)
    if s.size and t.size:
        u, sv, vh = scipy.linalg.svd(s, full_matrices=False)
        if sv[0] > 0.0:
            keep = sv > tol.rank_rtol * sv[0]
            s_pinv = dagger(vh[keep]) @ np.diag(1.0 / sv[keep]) @ dagger(u[:, keep])
            x = t @ s_pinv

    res = float(np.linalg.norm(x @ s - t)) if t.size else 0.0
    logger.debug("pseudo_solve: S %s, T %s, residual %.3e", s.shape, t.shape, res)
    return LeastSquares(x, res)


def random_unitary(dim: int, rng: np.random.Generator) -> CMatrix:
    """Haar-distributed unitary via QR of a complex Gaussian matrix."""
    return random_isometry(dim, dim, rng)


def random_isometry(rows: int, cols: int, rng: np.random.Generator) -> CMatrix:
    """Random ``rows x cols`` isometry (orthonormal columns), ``rows ≥ cols``."""
    if cols > rows:
        raise ShapeMismatch(f"an isometry {cols} -> {rows} cannot exist")
    if cols == 0:
        return np.zeros((rows, 0), dtype=np.complex128)
    z = (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)
    q, r = scipy.linalg.qr(z, mode='economic')
    # fix the phase so the distribution is Haar and the result deterministic in the seed
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases
