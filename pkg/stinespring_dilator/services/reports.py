"""Report assembly and rendering.

Reports are plain dicts so they serialize straight to JSON; ``render_human``
turns the same dict into an indented text view for ``--human``.
"""
from __future__ import annotations

import json
import logging
from typing import Any, Dict, List, Optional

import numpy as np

from ..core.cstar_algebra import PositivityVerdict
from ..core.dilation import (
    EquivalenceWitness,
    MinimalityVerdict,
    RepresentationPair,
    VerificationReport,
)
from ..core.hilbert_module import PhiMapVerdict
from ..errors import InstanceFormatError
from .instances import Instance, serialize_representation, serialize_witness

logger = logging.getLogger(__name__)


def _finite(value: float) -> float:
    value = float(value)
    if not np.isfinite(value):
        raise ValueError(f"report value must be finite, got {value!r}")
    return value


def _dimensions(instance: Instance, **extra: int) -> Dict[str, int]:
    dims = {"n": instance.n, "k": instance.k, "h1_dim": instance.h1_dim,
            "h2_dim": instance.h2_dim}
    dims.update(extra)
    return dims


def check_report(instance: Instance, positivity: PositivityVerdict, spectrum: np.ndarray,
                 choi_rank: int, phi_verdict: Optional[PhiMapVerdict],
                 hermiticity: float) -> Dict[str, Any]:
    """Report for ``check``; ``phi_verdict`` is None when φ already failed."""
    report: Dict[str, Any] = {
        "command": "check",
        "verdict": bool(positivity.verdict and phi_verdict is not None and phi_verdict.verdict),
        "dimensions": _dimensions(instance, choi_rank=choi_rank),
        "completely_positive": {
            "verdict": positivity.verdict,
            "min_eigenvalue": _finite(positivity.min_eigenvalue),
            "choi_eigenvalues": [_finite(x) for x in spectrum],
            "hermiticity_residual": _finite(hermiticity),
        },
    }
    if phi_verdict is not None:
        report["phi_map"] = {
            "verdict": phi_verdict.verdict,
            "max_residual": _finite(phi_verdict.max_residual),
        }
    return report


def verification_section(verification: VerificationReport) -> Dict[str, Any]:
    section: Dict[str, Any] = {
        "verdict": verification.verdict,
        "scale": _finite(verification.scale),
        "residuals": {k: _finite(v) for k, v in verification.residuals.items()},
        "diagnostics": {k: _finite(v) for k, v in verification.diagnostics.items()},
    }
    if verification.problems:
        section["problems"] = list(verification.problems)
    return section


def minimality_section(minimality: MinimalityVerdict) -> Dict[str, bool]:
    return {"minimal_k1": minimality.minimal_k1, "minimal_k2": minimality.minimal_k2}


def dilate_report(instance: Instance, pair: RepresentationPair, choi_rank: int,
                  verification: VerificationReport,
                  minimality: MinimalityVerdict) -> Dict[str, Any]:
    return {
        "command": "dilate",
        "verdict": bool(verification.verdict and all(minimality)),
        "dimensions": _dimensions(instance, k1_dim=pair.k1_dim, k2_dim=pair.k2_dim,
                                  choi_rank=choi_rank),
        "verification": verification_section(verification),
        "minimality": minimality_section(minimality),
        "certificates": {
            "well_defined_residual": _finite(pair.module_rep.well_defined_residual),
            "norm_identity_residual": _finite(pair.module_rep.norm_identity_residual),
        },
    }


def dilate_output(instance: Instance, pair: RepresentationPair,
                  report: Dict[str, Any]) -> Dict[str, Any]:
    """The ``dilate --out`` payload: the representation and its report."""
    return {
        "representation": serialize_representation(pair, instance.phi_map),
        "report": report,
    }


def equivalence_report(pair_a: RepresentationPair,
                       witness: EquivalenceWitness) -> Dict[str, Any]:
    return {
        "command": "equiv",
        "verdict": True,
        "dimensions": {"k1_dim": pair_a.k1_dim, "k2_dim": pair_a.k2_dim},
        "residuals": {k: _finite(v) for k, v in witness.residuals.items()},
        "witness": serialize_witness(witness),
    }


def error_report(command: str, error: BaseException) -> Dict[str, Any]:
    detail: Dict[str, Any] = {"type": type(error).__name__, "message": str(error)}
    if isinstance(error, InstanceFormatError) and error.field:
        detail["field"] = error.field
    return {"command": command, "verdict": False, "error": detail}


def stage(name: str, passed: bool, details: Optional[Dict[str, Any]] = None,
          notes: Optional[List[str]] = None) -> Dict[str, Any]:
    return {"name": name, "passed": bool(passed), "details": details or {},
            "notes": list(notes or [])}


def _format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return f"{value:.6g}" if value == 0 or 1e-4 <= abs(value) < 1e6 else f"{value:.3e}"
    if isinstance(value, list) and all(isinstance(v, float) for v in value):
        return "[" + ", ".join(_format_value(v) for v in value) + "]"
    return str(value)


def _render_mapping(data: Dict[str, Any], depth: int, lines: List[str]) -> None:
    pad = "  " * depth
    for key, value in data.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            _render_mapping(value, depth + 1, lines)
        elif isinstance(value, list) and value and isinstance(value[0], list):
            lines.append(f"{pad}{key}: <{len(value)} x {len(value[0])} matrix>")
        else:
            lines.append(f"{pad}{key}: {_format_value(value)}")


def render_human(report: Dict[str, Any]) -> str:
    """Indented text view of a report; demo stages get PASS/FAIL lines."""
    lines: List[str] = []
    command = report.get("command", "report")
    verdict = report.get("verdict")
    lines.append(f"{command}: {'PASS' if verdict else 'FAIL'}")
    for item in report.get("stages", []):
        lines.append(f"[{'PASS' if item['passed'] else 'FAIL'}] {item['name']}")
        for note in item.get("notes", []):
            lines.append(f"    {note}")
        _render_mapping(item.get("details", {}), 2, lines)
    rest = {k: v for k, v in report.items() if k not in ("command", "verdict", "stages")}
    _render_mapping(rest, 1, lines)
    return "\n".join(lines) + "\n"


def format_report(report: Dict[str, Any], human: bool = False, indent: Optional[int] = 2) -> str:
    if human:
        return render_human(report)
    return json.dumps(report, indent=indent, ensure_ascii=False) + "\n"
