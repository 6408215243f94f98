"""Minimal Stinespring representations for (φ, Φ) and their unitary equivalence.

Step I dilates the CP map φ to (ρ, V, K₁); the primary route goes through a
minimal Kraus set (K₁ = ℂⁿ ⊗ ℂʳ, ρ(a) = a ⊗ I_r) and a second route through
the Gram matrix on A ⊗ H₁ serves as an independent oracle. Step II induces
(Ψ, W, K₂) from a φ-map Φ: K₂ is the span of the columns of Φ(E), W the
co-isometry onto it, and Ψ(x) is defined on the spanning family
{ρ(a)Vh} by Ψ(x)ρ(a)Vh = Φ(x·a)h.

Operators that are only prescribed on a spanning family (Ψ, U₁, U₂) are
computed by minimal-norm least squares; the residual is the numerical
certificate that the prescription is well defined.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Tuple

import numpy as np

from ..errors import (
    IllConditioned,
    NotAPhiMap,
    NotCompletelyPositive,
    NotEquivalent,
    NotMinimal,
    ShapeMismatch,
)
from .cstar_algebra import (
    CPMap,
    MatrixAlgebra,
    apply_cp,
    is_completely_positive,
    kraus_decomposition,
    matrix_units,
)
from .hilbert_module import (
    ModuleElement,
    PhiMap,
    inner_product,
    module_action,
    module_norm,
)
from .numerics import (
    DEFAULT_TOLERANCE,
    CMatrix,
    TolerancePolicy,
    as_cmatrix,
    dagger,
    freeze,
    hermitian_eig,
    hstack_columns,
    kron,
    operator_norm,
    orthonormal_range,
    pseudo_solve,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class StinespringRep:
    """(ρ, V, K₁) with ρ stored on matrix units and V: H₁ → K₁."""

    k1_dim: int
    rho_images: Tuple[CMatrix, ...] = field(repr=False)
    V: CMatrix = field(repr=False)

    def __post_init__(self):
        images = tuple(as_cmatrix(m, f"rho[{u}]") for u, m in enumerate(self.rho_images))
        n = int(round(np.sqrt(len(images))))
        if n < 1 or n * n != len(images):
            raise ShapeMismatch(f"ρ needs n² images for some n ≥ 1, got {len(images)}")
        for u, m in enumerate(images):
            if m.shape != (self.k1_dim, self.k1_dim):
                raise ShapeMismatch(f"rho[{u}] must be {self.k1_dim}x{self.k1_dim}, got {m.shape}")
        v = as_cmatrix(self.V, "V")
        if v.shape[0] != self.k1_dim:
            raise ShapeMismatch(f"V must have {self.k1_dim} rows, got {v.shape}")
        object.__setattr__(self, 'rho_images', images)
        object.__setattr__(self, 'V', v)

    @property
    def algebra(self) -> MatrixAlgebra:
        return MatrixAlgebra(int(round(np.sqrt(len(self.rho_images)))))

    @property
    def h1_dim(self) -> int:
        return self.V.shape[1]

    def rho(self, a: CMatrix) -> CMatrix:
        a = np.asarray(a, dtype=np.complex128)
        return np.tensordot(a.reshape(-1), np.stack(self.rho_images), axes=1)


@dataclass(frozen=True, eq=False)
class ModuleRep:
    """(Ψ, W, K₂) with Ψ stored on the scalar basis of E and W: H₂ → K₂.

    ``well_defined_residual`` and ``norm_identity_residual`` carry the
    certificates computed by ``induce_module_rep`` (0 for representations read
    from elsewhere).
    """

    k2_dim: int
    psi_images: Tuple[CMatrix, ...] = field(repr=False)
    W: CMatrix = field(repr=False)
    well_defined_residual: float = 0.0
    norm_identity_residual: float = 0.0

    def __post_init__(self):
        if self.k2_dim < 0:
            raise ShapeMismatch(f"k2_dim must be non-negative, got {self.k2_dim}")
        images = tuple(freeze(np.asarray(m, dtype=np.complex128)) for m in self.psi_images)
        for b, m in enumerate(images):
            if m.ndim != 2 or m.shape[0] != self.k2_dim:
                raise ShapeMismatch(f"psi[{b}] must have {self.k2_dim} rows, got {m.shape}")
        w = freeze(np.asarray(self.W, dtype=np.complex128))
        if w.ndim != 2 or w.shape[0] != self.k2_dim:
            raise ShapeMismatch(f"W must have {self.k2_dim} rows, got {w.shape}")
        object.__setattr__(self, 'psi_images', images)
        object.__setattr__(self, 'W', w)

    @property
    def h2_dim(self) -> int:
        return self.W.shape[1]

    def psi(self, x: ModuleElement) -> CMatrix:
        """Linear extension of Ψ from the scalar basis."""
        return np.tensordot(x.coefficients(), np.stack(self.psi_images), axes=1)


@dataclass(frozen=True, eq=False)
class RepresentationPair:
    """((ρ, V, K₁), (Ψ, W, K₂))."""

    stinespring: StinespringRep
    module_rep: ModuleRep

    def __post_init__(self):
        k1 = self.stinespring.k1_dim
        for b, m in enumerate(self.module_rep.psi_images):
            if m.shape[1] != k1:
                raise ShapeMismatch(f"psi[{b}] must have k1_dim = {k1} columns, got {m.shape}")

    @property
    def k1_dim(self) -> int:
        return self.stinespring.k1_dim

    @property
    def k2_dim(self) -> int:
        return self.module_rep.k2_dim


@dataclass(frozen=True, eq=False)
class EquivalenceWitness:
    """Unitaries U₁: K₁ → K₁′ and (optionally) U₂: K₂ → K₂′ with their residuals."""

    U1: CMatrix = field(repr=False)
    U2: Optional[CMatrix] = field(repr=False, default=None)
    residuals: Dict[str, float] = field(default_factory=dict)

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)


@dataclass
class VerificationReport:
    """Residuals of every representation identity plus the overall verdict."""

    residuals: Dict[str, float] = field(default_factory=dict)
    diagnostics: Dict[str, float] = field(default_factory=dict)
    scale: float = 1.0
    verdict: bool = False
    problems: List[str] = field(default_factory=list)

    def failed(self, atol: float) -> List[str]:
        return [name for name, value in self.residuals.items() if value > atol * self.scale]


class MinimalityVerdict(NamedTuple):
    minimal_k1: bool
    minimal_k2: bool


class AsadiVerdict(NamedTuple):
    possible: Optional[bool]
    max_rank_bound: int


def _condition(s: CMatrix) -> float:
    """Ratio of extreme non-zero singular values (1 for empty input)."""
    if s.size == 0:
        return 1.0
    sv = np.linalg.svd(s, compute_uv=False)
    sv = sv[sv > 0]
    return float(sv[0] / sv[-1]) if sv.size else 1.0


def stinespring_columns(rep: StinespringRep) -> CMatrix:
    """The spanning family {ρ(E_pq)·V·f_β}, columns ordered by (p, q, β)."""
    return hstack_columns((m @ rep.V for m in rep.rho_images), rep.k1_dim)


def module_columns(pair: RepresentationPair) -> CMatrix:
    """The spanning family {Ψ(x_b)·V·f_β}, columns ordered by (b, β)."""
    v = pair.stinespring.V
    return hstack_columns((m @ v for m in pair.module_rep.psi_images), pair.k2_dim)


def minimal_stinespring(phi: CPMap, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> StinespringRep:
    """Minimal Stinespring representation through a minimal Kraus set.

    K₁ = ℂⁿ ⊗ ℂʳ, ρ(a) = a ⊗ I_r and V·h = Σ_s (K_s*·h) ⊗ e_s, so that
    V*ρ(a)V = Σ_s K_s a K_s* = φ(a). Linear independence of the Kraus
    operators makes {ρ(E_pq)Vf_β} span K₁.
    """
    kraus = kraus_decomposition(phi, tol)
    n, r, h1 = phi.n, kraus.r, phi.h1_dim
    rho_images = tuple(kron(unit, np.eye(r)) for unit in matrix_units(phi.algebra))
    if r:
        v = np.stack([dagger(k) for k in kraus.operators], axis=1).reshape(n * r, h1)
    else:
        v = np.zeros((0, h1), dtype=np.complex128)
    logger.debug("Kraus-route dilation: r = %d, k1_dim = %d", r, n * r)
    return StinespringRep(n * r, rho_images, v)


def minimal_stinespring_gram(phi: CPMap,
                             tol: TolerancePolicy = DEFAULT_TOLERANCE) -> StinespringRep:
    """Minimal Stinespring representation through the Gram matrix on A ⊗ H₁.

    ⟨E_pq ⊗ f_β, E_p′q′ ⊗ f_β′⟩ = δ_pp′·φ(E_qq′)[β, β′]. Factoring the Gram
    matrix G = X*X on its numerical range gives the images X of the
    elementary tensors in K₁; ρ(E_rs) is the operator with ρ(E_rs)X = X·M_rs,
    M_rs the left-multiplication permutation, and V f_β = Σ_p X(E_pp ⊗ f_β).
    """
    verdict = is_completely_positive(phi, tol)
    if not verdict.verdict:
        raise NotCompletelyPositive(
            f"Choi matrix has eigenvalue {verdict.min_eigenvalue:.6g} < 0"
        )

    n, h1 = phi.n, phi.h1_dim
    size = n * n * h1

    def index(p: int, q: int, beta: int) -> int:
        return (p * n + q) * h1 + beta

    gram = np.zeros((size, size), dtype=np.complex128)
    for p in range(n):
        for q in range(n):
            for q2 in range(n):
                block = phi.image(q, q2)
                rows = slice(index(p, q, 0), index(p, q, 0) + h1)
                cols = slice(index(p, q2, 0), index(p, q2, 0) + h1)
                gram[rows, cols] = block

    eigenvalues, eigenvectors = hermitian_eig(gram, tol)
    lam_max = float(eigenvalues[-1])
    if lam_max <= 0.0:
        logger.debug("Gram-route dilation of the zero map: k1_dim = 0")
        zero = np.zeros((0, 0), dtype=np.complex128)
        return StinespringRep(0, tuple(zero for _ in range(n * n)),
                              np.zeros((0, h1), dtype=np.complex128))

    cutoff = tol.rank_rtol * lam_max
    keep = eigenvalues > cutoff
    dropped = eigenvalues[~keep]
    if dropped.size:
        gap = (float(eigenvalues[keep].min()) - max(float(dropped.max()), 0.0)) / lam_max
        if gap < tol.rank_rtol:
            raise IllConditioned(
                f"Gram spectrum has relative gap {gap:.3e} at the rank cutoff"
            )

    x = np.sqrt(eigenvalues[keep])[:, None] * dagger(eigenvectors[:, keep])
    k1 = x.shape[0]

    rho_images = []
    for r in range(n):
        for s in range(n):
            shift = np.zeros((size, size), dtype=np.complex128)
            for q in range(n):
                for beta in range(h1):
                    shift[index(r, q, beta), index(s, q, beta)] = 1.0
            rho_images.append(pseudo_solve(x, x @ shift, tol).x)

    v = np.column_stack([
        sum(x[:, index(p, p, beta)] for p in range(n)) for beta in range(h1)
    ])
    logger.debug("Gram-route dilation: rank %d of %d", k1, size)
    return StinespringRep(k1, tuple(rho_images), v)


def induce_module_rep(phi_map: PhiMap, rep: StinespringRep,
                      tol: TolerancePolicy = DEFAULT_TOLERANCE) -> ModuleRep:
    """Step II: (Ψ, W, K₂) from a φ-map and a minimal (ρ, V, K₁).

    K₂ is the orthonormal range of all columns of Φ(E); W = B* for that
    basis B, so W* is the inclusion and WW* = I. Each Ψ(x_b) solves
    X·S = T with S = {ρ(E_pq)Vf_β} and T = {W·Φ(x_b·E_pq)f_β}. The
    prescription is certified twice: by the least-squares residual and by
    the norm identity T*T = S*ρ(⟨x_b, x_b⟩)S, which is what makes Ψ(x_b)
    well defined on the span.
    """
    algebra = phi_map.module.algebra
    if rep.algebra != algebra or rep.h1_dim != phi_map.h1_dim:
        raise ShapeMismatch("Stinespring representation does not match the φ-map's spaces")

    s = stinespring_columns(rep)
    span_rank = orthonormal_range(s, tol).rank
    if span_rank < rep.k1_dim:
        raise NotMinimal(f"ρ(A)VH₁ spans only {span_rank} of k1_dim = {rep.k1_dim}")

    basis, k2 = orthonormal_range(hstack_columns(phi_map.basis_images, phi_map.h2_dim), tol)
    w = dagger(basis)

    units = matrix_units(algebra)
    cond = _condition(s)
    s_norm = operator_norm(s)
    psi_images = []
    worst_ls = 0.0
    worst_norm = 0.0
    for b, xb in enumerate(phi_map.module.basis()):
        t = hstack_columns(
            (w @ phi_map(module_action(xb, unit)) for unit in units), k2
        )
        solved = pseudo_solve(s, t, tol)
        t_norm = operator_norm(t)
        gram_gap = operator_norm(dagger(t) @ t - dagger(s) @ rep.rho(inner_product(xb, xb)) @ s)

        ls_bound = tol.atol * max(1.0, float(np.linalg.norm(t))) * max(1.0, cond)
        norm_bound = tol.atol * max(1.0, s_norm ** 2, t_norm ** 2)
        worst_ls = max(worst_ls, solved.residual)
        worst_norm = max(worst_norm, gram_gap)
        if solved.residual > ls_bound or gram_gap > norm_bound:
            raise NotAPhiMap(
                f"Ψ(x_{b}) is not well defined: least-squares residual {solved.residual:.3e}, "
                f"norm-identity residual {gram_gap:.3e}"
            )
        psi_images.append(solved.x)

    logger.debug("Induced module representation: k2_dim = %d (h2 = %d), residuals %.3e / %.3e",
                 k2, phi_map.h2_dim, worst_ls, worst_norm)
    return ModuleRep(k2, tuple(psi_images), w, worst_ls, worst_norm)


def construct_minimal_pair(phi_map: PhiMap, tol: TolerancePolicy = DEFAULT_TOLERANCE,
                           route: str = "kraus") -> RepresentationPair:
    """Both steps in one call; ``route`` is ``"kraus"`` or ``"gram"``."""
    if route == "kraus":
        rep = minimal_stinespring(phi_map.phi, tol)
    elif route == "gram":
        rep = minimal_stinespring_gram(phi_map.phi, tol)
    else:
        raise ValueError(f"unknown dilation route {route!r}")
    return RepresentationPair(rep, induce_module_rep(phi_map, rep, tol))


def _pair_shape_problems(phi: CPMap, phi_map: PhiMap, pair: RepresentationPair) -> List[str]:
    problems = []
    rep, mod = pair.stinespring, pair.module_rep
    if rep.algebra != phi.algebra:
        problems.append(f"ρ is defined on M_{rep.algebra.n}, φ on M_{phi.n}")
    if rep.h1_dim != phi.h1_dim:
        problems.append(f"V has {rep.h1_dim} columns, H₁ has dimension {phi.h1_dim}")
    if len(mod.psi_images) != phi_map.module.basis_size:
        problems.append(f"Ψ has {len(mod.psi_images)} basis images, "
                        f"E has {phi_map.module.basis_size} basis elements")
    if mod.h2_dim != phi_map.h2_dim:
        problems.append(f"W has {mod.h2_dim} columns, H₂ has dimension {phi_map.h2_dim}")
    return problems


def verify_representation(phi: CPMap, phi_map: PhiMap, pair: RepresentationPair,
                          tol: TolerancePolicy = DEFAULT_TOLERANCE) -> VerificationReport:
    """Residuals of every identity a Stinespring representation of (φ, Φ) must satisfy.

    Never raises; shape inconsistencies are reported as problems with a
    failing verdict.
    """
    problems = _pair_shape_problems(phi, phi_map, pair)
    if problems:
        return VerificationReport(problems=problems, verdict=False)

    rep, mod = pair.stinespring, pair.module_rep
    n, k1 = phi.n, rep.k1_dim
    units = matrix_units(phi.algebra)
    v = rep.V

    hom = 0.0
    for p in range(n):
        for q in range(n):
            rho_pq = rep.rho_images[p * n + q]
            hom = max(hom, operator_norm(dagger(rho_pq) - rep.rho_images[q * n + p]))
            for r in range(n):
                for s in range(n):
                    target = rep.rho_images[p * n + s] if q == r else 0.0
                    hom = max(hom, operator_norm(rho_pq @ rep.rho_images[r * n + s] - target))

    unital = operator_norm(rep.rho(phi.algebra.identity()) - np.eye(k1))

    phi_rec = max(
        operator_norm(dagger(v) @ rho_u @ v - img)
        for rho_u, img in zip(rep.rho_images, phi.images)
    )

    basis = phi_map.module.basis()
    psi = mod.psi_images
    psi_morphism = 0.0
    for b, xb in enumerate(basis):
        for c, xc in enumerate(basis):
            psi_morphism = max(psi_morphism, operator_norm(
                dagger(psi[b]) @ psi[c] - rep.rho(inner_product(xb, xc))
            ))

    big_phi_rec = max(
        operator_norm(dagger(mod.W) @ psi[b] @ v - phi_map.basis_images[b])
        for b in range(len(basis))
    )

    phi_one = operator_norm(apply_cp(phi, phi.algebra.identity()))
    v_norm_sq = operator_norm(v) ** 2
    norm_identity = abs(v_norm_sq - phi_one)

    module_law = 0.0
    contractivity = 0.0
    for b, xb in enumerate(basis):
        for u, unit in enumerate(units):
            module_law = max(module_law, operator_norm(
                mod.psi(module_action(xb, unit)) - psi[b] @ rep.rho_images[u]
            ))
        contractivity = max(contractivity, operator_norm(psi[b]) - module_norm(xb))

    coisometry = operator_norm(mod.W @ dagger(mod.W) - np.eye(mod.k2_dim))

    scale = max(
        [1.0, phi_one, v_norm_sq]
        + [operator_norm(m) ** 2 for m in phi_map.basis_images]
    )
    report = VerificationReport(
        residuals={
            'rho_homomorphism': hom,
            'phi_reconstruction': phi_rec,
            'psi_rho_morphism': psi_morphism,
            'Phi_reconstruction': big_phi_rec,
            'rho_unital': unital,
            'norm_identity': norm_identity,
            'psi_module_law': module_law,
        },
        diagnostics={
            'w_coisometry': coisometry,
            'psi_contractivity_excess': max(0.0, contractivity),
            'v_norm_squared': v_norm_sq,
            'phi_one_norm': phi_one,
        },
        scale=scale,
    )
    report.verdict = not report.failed(tol.atol)
    logger.debug("Representation check: verdict %s, failed %s",
                 report.verdict, report.failed(tol.atol))
    return report


def minimality_check(pair: RepresentationPair, h1_dim: int,
                     tol: TolerancePolicy = DEFAULT_TOLERANCE) -> MinimalityVerdict:
    """K₁ = [ρ(A)VH₁] and K₂ = [Ψ(E)VH₁], decided by numerical rank."""
    if pair.stinespring.h1_dim != h1_dim:
        raise ShapeMismatch(f"V has {pair.stinespring.h1_dim} columns, expected {h1_dim}")
    rank_k1 = orthonormal_range(stinespring_columns(pair.stinespring), tol).rank
    rank_k2 = orthonormal_range(module_columns(pair), tol).rank
    return MinimalityVerdict(rank_k1 == pair.k1_dim, rank_k2 == pair.k2_dim)


def _unitarity(u: CMatrix) -> float:
    if u.size == 0:
        return 0.0
    return max(operator_norm(dagger(u) @ u - np.eye(u.shape[1])),
               operator_norm(u @ dagger(u) - np.eye(u.shape[0])))


def _certify(residuals: Dict[str, float], bound: float, what: str) -> None:
    failing = {name: value for name, value in residuals.items() if value > bound}
    if failing:
        detail = ", ".join(f"{name} = {value:.3e}" for name, value in sorted(failing.items()))
        raise NotEquivalent(f"{what} fails certification (bound {bound:.3e}): {detail}")


def stinespring_equivalence(rep_a: StinespringRep, rep_b: StinespringRep, h1_dim: int,
                            tol: TolerancePolicy = DEFAULT_TOLERANCE) -> EquivalenceWitness:
    """Unitary U₁ with U₁V = V′ and U₁ρ(a) = ρ′(a)U₁ for two minimal (ρ, V, K₁).

    U₁ is prescribed on the spanning family by U₁ρ(a)Vh = ρ′(a)V′h.
    """
    for label, rep in (("first", rep_a), ("second", rep_b)):
        if rep.h1_dim != h1_dim:
            raise ShapeMismatch(f"{label} representation has V with {rep.h1_dim} columns, "
                                f"expected {h1_dim}")
        rank = orthonormal_range(stinespring_columns(rep), tol).rank
        if rank != rep.k1_dim:
            raise NotMinimal(f"{label} Stinespring representation spans {rank} "
                             f"of k1_dim = {rep.k1_dim}")
    if rep_a.algebra != rep_b.algebra:
        raise NotEquivalent("representations are defined on different algebras")
    if rep_a.k1_dim != rep_b.k1_dim:
        raise NotEquivalent(f"K₁ dimensions differ: {rep_a.k1_dim} vs {rep_b.k1_dim}")

    s_a = stinespring_columns(rep_a)
    s_b = stinespring_columns(rep_b)
    solved = pseudo_solve(s_a, s_b, tol)
    u1 = solved.x
    residuals = {
        'U1_solve': solved.residual,
        'U1_unitarity': _unitarity(u1),
        'U1_V': operator_norm(u1 @ rep_a.V - rep_b.V),
        'U1_rho': max(
            operator_norm(u1 @ ra - rb @ u1)
            for ra, rb in zip(rep_a.rho_images, rep_b.rho_images)
        ),
    }
    scale = max(1.0, _condition(s_a)) * max(1.0, operator_norm(rep_a.V) ** 2,
                                            operator_norm(rep_b.V) ** 2)
    _certify(residuals, tol.atol * scale, "U₁")
    return EquivalenceWitness(freeze(u1), None, residuals)


def unitary_equivalence(pair_a: RepresentationPair, pair_b: RepresentationPair,
                        tol: TolerancePolicy = DEFAULT_TOLERANCE) -> EquivalenceWitness:
    """Intertwining unitaries (U₁, U₂) between two minimal representations of (φ, Φ).

    U₂ is prescribed by U₂Ψ(x)Vh = Ψ′(x)V′h; the witness carries residuals
    for U₁V = V′, U₁ρ(a) = ρ′(a)U₁, U₂W = W′ and U₂Ψ(x) = Ψ′(x)U₁.
    """
    h1 = pair_a.stinespring.h1_dim
    for label, pair in (("first", pair_a), ("second", pair_b)):
        if pair.stinespring.h1_dim != h1:
            raise NotEquivalent("representations act on different H₁")
        minimal = minimality_check(pair, h1, tol)
        if not (minimal.minimal_k1 and minimal.minimal_k2):
            raise NotMinimal(f"{label} representation is not minimal "
                             f"(K₁ minimal: {minimal.minimal_k1}, K₂ minimal: {minimal.minimal_k2})")

    witness = stinespring_equivalence(pair_a.stinespring, pair_b.stinespring, h1, tol)
    u1 = witness.U1

    mod_a, mod_b = pair_a.module_rep, pair_b.module_rep
    if len(mod_a.psi_images) != len(mod_b.psi_images):
        raise NotEquivalent("representations are defined on different modules")
    if mod_a.k2_dim != mod_b.k2_dim:
        raise NotEquivalent(f"K₂ dimensions differ: {mod_a.k2_dim} vs {mod_b.k2_dim}")
    if mod_a.h2_dim != mod_b.h2_dim:
        raise NotEquivalent("representations act on different H₂")

    m_a = module_columns(pair_a)
    m_b = module_columns(pair_b)
    solved = pseudo_solve(m_a, m_b, tol)
    u2 = solved.x
    residuals = dict(witness.residuals)
    residuals.update({
        'U2_solve': solved.residual,
        'U2_unitarity': _unitarity(u2),
        'U2_W': operator_norm(u2 @ mod_a.W - mod_b.W),
        'U2_psi': max(
            (operator_norm(u2 @ pa - pb @ u1) for pa, pb in zip(mod_a.psi_images, mod_b.psi_images)),
            default=0.0,
        ),
    })
    scale = max(1.0, _condition(m_a)) * max(
        [1.0, operator_norm(pair_a.stinespring.V) ** 2, operator_norm(pair_b.stinespring.V) ** 2]
        + [operator_norm(m) ** 2 for m in mod_a.psi_images]
    )
    _certify({k: v for k, v in residuals.items() if k.startswith('U2')}, tol.atol * scale, "U₂")
    logger.debug("Equivalence witness: max residual %.3e", max(residuals.values()))
    return EquivalenceWitness(u1, freeze(u2), residuals)


def asadi_condition_check(phi_map: PhiMap) -> AsadiVerdict:
    """Can some x₀ ∈ E satisfy Φ(x₀)Φ(x₀)* = I_{H₂}?

    rank Φ(x₀)Φ(x₀)* ≤ min(h1, h2), so the identity of H₂ is out of reach
    whenever h2 > h1. Otherwise the answer is left open (``None``); no search
    for x₀ is attempted.
    """
    bound = min(phi_map.h1_dim, phi_map.h2_dim)
    possible: Optional[bool] = False if phi_map.h2_dim > phi_map.h1_dim else None
    return AsadiVerdict(possible, bound)
