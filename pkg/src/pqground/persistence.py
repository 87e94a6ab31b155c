"""Reading and writing result files.

Profile JSON layout:

    {"meta": {...}, "r": [...], "u": [...], "du": [...],
     "quadrature": {"gauss_points": n, "u": [...], "du": [...]},
     "norms": {"grad_<e>": ..., ...}}

Floats are written with their shortest round-trip representation and keys
are sorted, so identical runs give identical files.
"""

import csv
import hashlib
import json
from collections.abc import Sequence
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel

from pqground.errors import ArtifactError, DomainError
from pqground.radial import Profile, RadialGrid, grad_norm
from pqground.schemas import ScanRow, SweepRow


PROFILE_FORMAT_VERSION = 1


def config_hash(model: BaseModel) -> str:
    """sha256 of a config section's canonical JSON."""
    canonical = json.dumps(model.model_dump(mode="json", by_alias=True), sort_keys=True)
    return hashlib.sha256(canonical.encode()).hexdigest()


def _floats(values: np.ndarray) -> list[float]:
    return [float(v) for v in values]


def profile_document(profile: Profile, meta: dict[str, Any] | None = None) -> dict[str, Any]:
    grid = profile.grid
    header: dict[str, Any] = {
        "format": PROFILE_FORMAT_VERSION,
        "N": grid.dim,
        "R_max": grid.r_max,
        "M": grid.resolution,
        "u0": profile.u0,
        "exponents": list(profile.exponents),
    }
    header.update({k: v for k, v in profile.meta.items() if isinstance(v, str | int | float)})
    header.update(meta or {})
    return {
        "meta": header,
        "r": _floats(grid.nodes),
        "u": _floats(profile.u),
        "du": _floats(profile.du),
        "quadrature": {
            "gauss_points": grid.gauss_points,
            "u": _floats(profile.u_q),
            "du": _floats(profile.du_q),
        },
        "norms": {f"grad_{e:g}": grad_norm(profile, e) for e in profile.exponents},
    }


def write_profile_json(path: Path, profile: Profile, meta: dict[str, Any] | None = None) -> Path:
    """Write a profile, its quadrature samples and its gradient norms."""
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(profile_document(profile, meta), sort_keys=True, indent=1) + "\n")
    return path


def read_profile_json(path: Path) -> Profile:
    """Rebuild a profile from its stored node and quadrature samples.

    Raises:
        ArtifactError: If the file is missing or malformed.
    """
    if not path.exists():
        raise ArtifactError(f"Profile file not found: {path}", details={"path": str(path)})
    try:
        doc = json.loads(path.read_text())
        meta = doc["meta"]
        grid = RadialGrid(
            np.asarray(doc["r"], dtype=np.float64),
            int(meta["N"]),
            gauss_points=int(doc["quadrature"]["gauss_points"]),
        )
        return Profile(
            grid=grid,
            u=np.asarray(doc["u"], dtype=np.float64),
            du=np.asarray(doc["du"], dtype=np.float64),
            u_q=np.asarray(doc["quadrature"]["u"], dtype=np.float64),
            du_q=np.asarray(doc["quadrature"]["du"], dtype=np.float64),
            exponents=tuple(float(e) for e in meta.get("exponents", ())),
            meta=meta,
        )
    except (json.JSONDecodeError, KeyError, TypeError, ValueError, DomainError) as e:
        raise ArtifactError(f"Malformed profile file {path}: {e}", details={"path": str(path)}) from e


def write_profile_csv(path: Path, profile: Profile) -> Path:
    """Node samples as r,u,du."""
    path.parent.mkdir(parents=True, exist_ok=True)
    table = np.column_stack((profile.grid.nodes, profile.u, profile.du))
    np.savetxt(path, table, delimiter=",", header="r,u,du", comments="", fmt="%.17g")
    return path


def write_model_json(path: Path, model: BaseModel) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(model.model_dump_json(indent=2) + "\n")
    return path


def write_models_json(path: Path, models: Sequence[BaseModel]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = [m.model_dump(mode="json") for m in models]
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path


def _write_rows(path: Path, fields: list[str], rows: Sequence[BaseModel]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=fields)
        writer.writeheader()
        for row in rows:
            writer.writerow(row.model_dump())
    return path


def write_scan_csv(path: Path, rows: Sequence[ScanRow]) -> Path:
    """Scan table: u0, outcome, event radius."""
    return _write_rows(path, list(ScanRow.model_fields), rows)


def write_sweep_csv(path: Path, rows: Sequence[SweepRow]) -> Path:
    """One line per sweep cell; an empty sweep gives a header-only file."""
    return _write_rows(path, list(SweepRow.model_fields), rows)
