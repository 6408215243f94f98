"""Business logic layer for the command-line front end.

Each ``run_*`` function performs one command and returns a ``CommandResult``
(exit code plus report dict). Nothing here parses arguments or prints
payloads; mathematical and input errors propagate as exceptions from
``errors`` and are mapped to exit codes by the CLI.

Exit codes: 0 success, 1 input/parse error, 2 mathematical failure.
"""
from __future__ import annotations

import logging
import os
from typing import Any, Dict, NamedTuple, Optional

import numpy as np

from .core.cstar_algebra import (
    choi_rank,
    choi_spectrum,
    hermiticity_residual,
    is_completely_positive,
)
from .core.dilation import (
    asadi_condition_check,
    construct_minimal_pair,
    minimality_check,
    unitary_equivalence,
    verify_representation,
)
from .core.hilbert_module import gen_cp_map, gen_phi_map, verify_phi_map
from .core.numerics import DEFAULT_TOLERANCE, TolerancePolicy, operator_norm
from .core.schur_example import SCHUR_D, schur_explicit_pair, schur_phi_map
from .errors import NotAPhiMap, NotCompletelyPositive, NotEquivalent
from .services import reports
from .services.instances import (
    Instance,
    check_dimensions,
    instance_from_maps,
    load_instance,
    load_representation,
    serialize_instance,
    serialize_representation,
    write_json,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_MATH_FAILURE = 2

# Choi spectrum of the built-in example, ascending
SCHUR_CHOI_EIGENVALUES = (0.0, 0.0, 0.5, 1.5)


class CommandResult(NamedTuple):
    exit_code: int
    report: Dict[str, Any]


def _check_instance(instance: Instance, tol: TolerancePolicy) -> Dict[str, Any]:
    positivity = is_completely_positive(instance.phi, tol)
    spectrum = choi_spectrum(instance.phi, tol)
    rank = choi_rank(instance.phi, tol) if positivity.verdict else 0
    phi_verdict = verify_phi_map(instance.phi_map, tol) if positivity.verdict else None
    if not positivity.verdict:
        logger.info("φ is not completely positive (min Choi eigenvalue %.6g)",
                    positivity.min_eigenvalue)
    elif not phi_verdict.verdict:  # type: ignore[union-attr]
        logger.info("Φ is not a φ-map (max residual %.3e)",
                    phi_verdict.max_residual)  # type: ignore[union-attr]
    return reports.check_report(instance, positivity, spectrum, rank, phi_verdict,
                                hermiticity_residual(instance.phi))


def run_check(instance_path: str, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> CommandResult:
    """Complete positivity of φ and the φ-map identity for Φ."""
    instance = load_instance(instance_path)
    report = _check_instance(instance, tol)
    return CommandResult(EXIT_OK if report["verdict"] else EXIT_MATH_FAILURE, report)


def _dilate(instance: Instance, tol: TolerancePolicy):
    positivity = is_completely_positive(instance.phi, tol)
    if not positivity.verdict:
        raise NotCompletelyPositive(
            f"Choi matrix has eigenvalue {positivity.min_eigenvalue:.6g} < 0"
        )
    phi_verdict = verify_phi_map(instance.phi_map, tol)
    if not phi_verdict.verdict:
        raise NotAPhiMap(f"φ-map identity fails with residual {phi_verdict.max_residual:.3e}")

    pair = construct_minimal_pair(instance.phi_map, tol)
    verification = verify_representation(instance.phi, instance.phi_map, pair, tol)
    minimality = minimality_check(pair, instance.h1_dim, tol)
    report = reports.dilate_report(instance, pair, choi_rank(instance.phi, tol),
                                   verification, minimality)
    return pair, report


def run_dilate(instance_path: str, out_path: str,
               tol: TolerancePolicy = DEFAULT_TOLERANCE, indent: Optional[int] = 2) -> CommandResult:
    """Construct the minimal pair, verify it and write it together with the report."""
    instance = load_instance(instance_path)
    pair, report = _dilate(instance, tol)
    write_json(reports.dilate_output(instance, pair, report), out_path, indent)
    logger.info("Wrote representation (k1_dim = %d, k2_dim = %d) to %s",
                pair.k1_dim, pair.k2_dim, out_path)
    return CommandResult(EXIT_OK if report["verdict"] else EXIT_MATH_FAILURE, report)


def run_equiv(instance_path: str, rep_a_path: str, rep_b_path: str,
              tol: TolerancePolicy = DEFAULT_TOLERANCE, out_path: Optional[str] = None,
              indent: Optional[int] = 2) -> CommandResult:
    """Intertwining unitaries between two representations of the same instance."""
    instance = load_instance(instance_path)
    pairs = []
    for label, path in (("A", rep_a_path), ("B", rep_b_path)):
        pair, dims = load_representation(path)
        check_dimensions(dims, instance, f"representation {label}")
        verification = verify_representation(instance.phi, instance.phi_map, pair, tol)
        if not verification.verdict:
            raise NotEquivalent(
                f"representation {label} does not represent the instance "
                f"(failing identities: {', '.join(verification.failed(tol.atol)) or 'shapes'})"
            )
        pairs.append(pair)

    witness = unitary_equivalence(pairs[0], pairs[1], tol)
    report = reports.equivalence_report(pairs[0], witness)
    if out_path:
        write_json(report["witness"], out_path, indent)
    return CommandResult(EXIT_OK, report)


def run_demo(tol: TolerancePolicy = DEFAULT_TOLERANCE,
             export_dir: Optional[str] = None, indent: Optional[int] = 2) -> CommandResult:
    """End-to-end run of the built-in Schur-multiplier example."""
    phi_map = schur_phi_map()
    phi = phi_map.phi
    instance = instance_from_maps(phi_map)
    explicit = schur_explicit_pair()
    stages = []

    check = _check_instance(instance, tol)
    spectrum = np.array(check["completely_positive"]["choi_eigenvalues"])
    spectrum_ok = bool(np.allclose(spectrum, SCHUR_CHOI_EIGENVALUES, atol=1e-12))
    stages.append(reports.stage(
        "φ is completely positive and Φ is a φ-map",
        check["verdict"] and spectrum_ok,
        {"choi_eigenvalues": check["completely_positive"]["choi_eigenvalues"],
         "phi_map_residual": check.get("phi_map", {}).get("max_residual", 0.0)},
    ))

    constructed = None
    try:
        constructed, dilate = _dilate(instance, tol)
        v_norm_sq = dilate["verification"]["diagnostics"]["v_norm_squared"]
        phi_one = dilate["verification"]["diagnostics"]["phi_one_norm"]
        stages.append(reports.stage(
            "minimal dilation constructed",
            dilate["verdict"] and constructed.k1_dim == 4 and constructed.k2_dim == 8,
            {"k1_dim": constructed.k1_dim, "k2_dim": constructed.k2_dim},
            [f"‖V‖² = ‖φ(1)‖ = {phi_one:.6g}" if abs(v_norm_sq - phi_one) <= tol.atol
             else f"‖V‖² = {v_norm_sq:.6g} but ‖φ(1)‖ = {phi_one:.6g}"],
        ))
    except (NotCompletelyPositive, NotAPhiMap) as e:
        stages.append(reports.stage("minimal dilation constructed", False, notes=[str(e)]))

    verification = verify_representation(phi, phi_map, explicit, tol)
    minimality = minimality_check(explicit, phi.h1_dim, tol)
    stages.append(reports.stage(
        "explicit representation verifies",
        verification.verdict and all(minimality),
        {"max_residual": max(verification.residuals.values(), default=0.0),
         "minimal": all(minimality)},
    ))

    if constructed is not None:
        try:
            witness = unitary_equivalence(explicit, constructed, tol)
            stages.append(reports.stage(
                "explicit and constructed representations are unitarily equivalent", True,
                {"max_residual": witness.max_residual},
            ))
        except (NotEquivalent, NotAPhiMap) as e:
            stages.append(reports.stage(
                "explicit and constructed representations are unitarily equivalent", False,
                notes=[str(e)],
            ))
    else:
        stages.append(reports.stage(
            "explicit and constructed representations are unitarily equivalent", False,
            notes=["no constructed representation"],
        ))

    asadi = asadi_condition_check(phi_map)
    if asadi.possible is False:
        note = (f"x₀ condition impossible: rank ≤ {asadi.max_rank_bound} "
                f"< {phi_map.h2_dim}")
    else:
        note = f"x₀ condition inconclusive: rank bound {asadi.max_rank_bound}"
    stages.append(reports.stage(
        "no x₀ with Φ(x₀)Φ(x₀)* = I", asadi.possible is False,
        {"max_rank_bound": asadi.max_rank_bound}, [note],
    ))

    if export_dir:
        write_json(serialize_instance(instance_with_schur_kind()),
                   os.path.join(export_dir, "schur_instance.json"), indent)
        write_json(serialize_representation(explicit, phi_map),
                   os.path.join(export_dir, "schur_explicit_pair.json"), indent)
        logger.info("Exported the example instance and explicit pair to %s", export_dir)

    passed = all(s["passed"] for s in stages)
    report = {"command": "demo-asadi", "verdict": passed, "stages": stages,
              "phi_one_norm": operator_norm(phi(phi.algebra.identity()))}
    return CommandResult(EXIT_OK if passed else EXIT_MATH_FAILURE, report)


def instance_with_schur_kind() -> Instance:
    """The built-in instance with φ stored by its multiplier D."""
    phi_map = schur_phi_map()
    return Instance("schur", (SCHUR_D,), phi_map.phi, phi_map)


def run_gen(n: int, k: int, h1: int, h2: int, r: int, seed: int, out_path: str,
            tol: TolerancePolicy = DEFAULT_TOLERANCE, indent: Optional[int] = 2) -> CommandResult:
    """Seeded random valid instance; φ from ``seed``, Φ from ``seed + 1``."""
    phi = gen_cp_map(n, h1, r, seed, tol)
    phi_map = gen_phi_map(phi, k, h2, seed + 1, tol)
    instance = instance_from_maps(phi_map)
    write_json(serialize_instance(instance), out_path, indent)
    logger.info("Wrote instance n=%d k=%d h1=%d h2=%d r=%d seed=%d to %s",
                n, k, h1, h2, r, seed, out_path)
    report = {
        "command": "gen",
        "verdict": True,
        "dimensions": {"n": n, "k": k, "h1_dim": h1, "h2_dim": h2, "r": r},
        "seed": seed,
        "out": out_path,
    }
    return CommandResult(EXIT_OK, report)
