"""Instance, representation and witness files.

All files are UTF-8 JSON. A complex scalar is a ``[re, im]`` pair and a matrix
is a list of rows. Parsing happens in two passes: a strict ``jsonschema``
validation (unknown keys are rejected) and a shape pass against the declared
dimensions. Both raise ``InstanceFormatError`` naming the offending field.
"""
from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from jsonschema import Draft7Validator
from jsonschema.exceptions import best_match

from ..core.cstar_algebra import CPMap, MatrixAlgebra, kraus_map, schur_map
from ..core.dilation import EquivalenceWitness, ModuleRep, RepresentationPair, StinespringRep
from ..core.hilbert_module import FreeModule, PhiMap
from ..core.numerics import CMatrix
from ..errors import DilationError, InstanceFormatError

logger = logging.getLogger(__name__)

PHI_KINDS = ("schur", "images", "kraus")

_COMPLEX = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_MATRIX = {"type": "array", "items": {"type": "array", "items": _COMPLEX}}
_MATRIX_LIST = {"type": "array", "items": _MATRIX}
_DIM = {"type": "integer", "minimum": 1}
_SIZE = {"type": "integer", "minimum": 0}


def _phi_variant(kind: str, key: str, schema: Dict[str, Any]) -> Dict[str, Any]:
    return {
        "type": "object",
        "additionalProperties": False,
        "required": ["kind", key],
        "properties": {"kind": {"const": kind}, key: schema},
    }


INSTANCE_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "additionalProperties": False,
    "required": ["n", "k", "h1_dim", "h2_dim", "phi", "Phi"],
    "properties": {
        "n": _DIM,
        "k": _DIM,
        "h1_dim": _DIM,
        "h2_dim": _DIM,
        "phi": {
            "oneOf": [
                _phi_variant("schur", "D", _MATRIX),
                _phi_variant("images", "images", _MATRIX_LIST),
                _phi_variant("kraus", "ops", _MATRIX_LIST),
            ]
        },
        "Phi": _MATRIX_LIST,
    },
}

REPRESENTATION_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "additionalProperties": False,
    "required": ["n", "k", "h1_dim", "h2_dim", "k1_dim", "k2_dim", "rho", "V", "Psi", "W"],
    "properties": {
        "n": _DIM,
        "k": _DIM,
        "h1_dim": _DIM,
        "h2_dim": _DIM,
        "k1_dim": _SIZE,
        "k2_dim": _SIZE,
        "rho": _MATRIX_LIST,
        "V": _MATRIX,
        "Psi": _MATRIX_LIST,
        "W": _MATRIX,
    },
}


@dataclass(frozen=True, eq=False)
class Instance:
    """A parsed instance: the pair (φ, Φ) plus the form φ was given in."""

    phi_kind: str
    phi_data: Tuple[CMatrix, ...] = field(repr=False)
    phi: CPMap = field(repr=False)
    phi_map: PhiMap = field(repr=False)

    @property
    def n(self) -> int:
        return self.phi.n

    @property
    def k(self) -> int:
        return self.phi_map.module.k

    @property
    def h1_dim(self) -> int:
        return self.phi.h1_dim

    @property
    def h2_dim(self) -> int:
        return self.phi_map.h2_dim


def _field_path(path: Iterable[Any]) -> Optional[str]:
    out = ""
    for part in path:
        out += f"[{part}]" if isinstance(part, int) else (f".{part}" if out else str(part))
    return out or None


def _validate(data: Any, schema: Dict[str, Any], what: str) -> None:
    error = best_match(Draft7Validator(schema).iter_errors(data))
    if error is not None:
        raise InstanceFormatError(f"invalid {what}: {error.message}", _field_path(error.path))


def encode_matrix(m: CMatrix) -> List[List[List[float]]]:
    m = np.asarray(m, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def decode_matrix(data: Sequence[Any], shape: Tuple[int, int], name: str) -> CMatrix:
    """Decode a ``[re, im]`` matrix and check it against ``shape``.

    An empty list decodes to a matrix with no rows; its column count is taken
    from ``shape`` since JSON cannot carry it.
    """
    rows, cols = shape
    if len(data) != rows:
        raise InstanceFormatError(f"expected {rows} rows, got {len(data)}", name)
    for i, row in enumerate(data):
        if len(row) != cols:
            raise InstanceFormatError(f"expected {cols} columns, got {len(row)}", f"{name}[{i}]")
    if rows == 0 or cols == 0:
        return np.zeros((rows, cols), dtype=np.complex128)
    arr = np.array(data, dtype=float)
    m = arr[..., 0] + 1j * arr[..., 1]
    if not np.all(np.isfinite(m)):
        raise InstanceFormatError("non-finite entry", name)
    return m


def _decode_list(data: Sequence[Any], count: Optional[int], shape: Tuple[int, int],
                 name: str) -> Tuple[CMatrix, ...]:
    if count is not None and len(data) != count:
        raise InstanceFormatError(f"expected {count} matrices, got {len(data)}", name)
    return tuple(decode_matrix(m, shape, f"{name}[{i}]") for i, m in enumerate(data))


def _build_phi(kind: str, matrices: Tuple[CMatrix, ...], n: int, h1: int) -> CPMap:
    algebra = MatrixAlgebra(n)
    if kind == "schur":
        if h1 != n:
            raise InstanceFormatError(f"a Schur map needs h1_dim = n = {n}, got {h1}", "h1_dim")
        return schur_map(matrices[0])
    if kind == "kraus":
        return kraus_map(algebra, matrices)
    return CPMap(algebra, h1, matrices)


def parse_instance(data: Any) -> Instance:
    _validate(data, INSTANCE_SCHEMA, "instance")
    n, k, h1, h2 = data["n"], data["k"], data["h1_dim"], data["h2_dim"]
    phi_data = data["phi"]
    kind = phi_data["kind"]
    if kind == "schur":
        matrices: Tuple[CMatrix, ...] = (decode_matrix(phi_data["D"], (n, n), "phi.D"),)
    elif kind == "images":
        matrices = _decode_list(phi_data["images"], n * n, (h1, h1), "phi.images")
    else:
        if not phi_data["ops"]:
            raise InstanceFormatError("at least one Kraus operator is required", "phi.ops")
        matrices = _decode_list(phi_data["ops"], None, (h1, n), "phi.ops")

    phi_images = _decode_list(data["Phi"], k * n * n, (h2, h1), "Phi")
    try:
        phi = _build_phi(kind, matrices, n, h1)
        phi_map = PhiMap(FreeModule(phi.algebra, k), phi, h2, phi_images)
    except InstanceFormatError:
        raise
    except (DilationError, ValueError) as e:
        raise InstanceFormatError(str(e), "phi") from e
    logger.debug("Parsed instance: n=%d k=%d h1=%d h2=%d phi=%s", n, k, h1, h2, kind)
    return Instance(kind, matrices, phi, phi_map)


def instance_from_maps(phi_map: PhiMap) -> Instance:
    """Wrap an in-memory (φ, Φ) as an instance with φ stored by images."""
    return Instance("images", phi_map.phi.images, phi_map.phi, phi_map)


def serialize_instance(instance: Instance) -> Dict[str, Any]:
    if instance.phi_kind == "schur":
        phi: Dict[str, Any] = {"kind": "schur", "D": encode_matrix(instance.phi_data[0])}
    elif instance.phi_kind == "kraus":
        phi = {"kind": "kraus", "ops": [encode_matrix(m) for m in instance.phi_data]}
    else:
        phi = {"kind": "images", "images": [encode_matrix(m) for m in instance.phi_data]}
    return {
        "n": instance.n,
        "k": instance.k,
        "h1_dim": instance.h1_dim,
        "h2_dim": instance.h2_dim,
        "phi": phi,
        "Phi": [encode_matrix(m) for m in instance.phi_map.basis_images],
    }


def parse_representation(data: Any) -> Tuple[RepresentationPair, Dict[str, int]]:
    """Parse a representation object, or a ``dilate`` output wrapping one.

    Returns the pair and its declared dimensions (n, k, h1_dim, h2_dim).
    """
    if isinstance(data, dict) and "representation" in data:
        data = data["representation"]
    _validate(data, REPRESENTATION_SCHEMA, "representation")
    n, k, h1, h2 = data["n"], data["k"], data["h1_dim"], data["h2_dim"]
    k1, k2 = data["k1_dim"], data["k2_dim"]
    rho = _decode_list(data["rho"], n * n, (k1, k1), "rho")
    v = decode_matrix(data["V"], (k1, h1), "V")
    psi = _decode_list(data["Psi"], k * n * n, (k2, k1), "Psi")
    w = decode_matrix(data["W"], (k2, h2), "W")
    pair = RepresentationPair(StinespringRep(k1, rho, v), ModuleRep(k2, psi, w))
    dims = {"n": n, "k": k, "h1_dim": h1, "h2_dim": h2}
    return pair, dims


def check_dimensions(dims: Dict[str, int], instance: Instance, name: str) -> None:
    """A representation must live on the same spaces as the instance."""
    for key in ("n", "k", "h1_dim", "h2_dim"):
        expected = getattr(instance, key)
        if dims[key] != expected:
            raise InstanceFormatError(
                f"declares {key} = {dims[key]}, the instance has {expected}", f"{name}.{key}"
            )


def serialize_representation(pair: RepresentationPair, phi_map: PhiMap) -> Dict[str, Any]:
    rep, mod = pair.stinespring, pair.module_rep
    return {
        "n": phi_map.module.n,
        "k": phi_map.module.k,
        "h1_dim": phi_map.h1_dim,
        "h2_dim": phi_map.h2_dim,
        "k1_dim": rep.k1_dim,
        "k2_dim": mod.k2_dim,
        "rho": [encode_matrix(m) for m in rep.rho_images],
        "V": encode_matrix(rep.V),
        "Psi": [encode_matrix(m) for m in mod.psi_images],
        "W": encode_matrix(mod.W),
    }


def serialize_witness(witness: EquivalenceWitness) -> Dict[str, Any]:
    return {
        "U1": encode_matrix(witness.U1),
        "U2": encode_matrix(witness.U2) if witness.U2 is not None else None,
        "residuals": {name: float(value) for name, value in witness.residuals.items()},
    }


def load_json(path: str) -> Any:
    """Read a JSON file; malformed text becomes ``InstanceFormatError``."""
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InstanceFormatError(f"{os.path.basename(path)} is not valid JSON: {e}") from e


def load_instance(path: str) -> Instance:
    return parse_instance(load_json(path))


def load_representation(path: str) -> Tuple[RepresentationPair, Dict[str, int]]:
    return parse_representation(load_json(path))


def write_json(data: Any, path: str, indent: Optional[int] = 2) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=indent, ensure_ascii=False)
        f.write("\n")
    logger.debug("Wrote %s", path)
