"""Utility functions for the pqground CLI."""

import importlib.resources
from importlib.resources import as_file
from pathlib import Path
from typing import Any

import yaml
from pydantic import ValidationError

from pqground.errors import ConfigError
from pqground.schemas import SolveConfig


def get_presets_path() -> Path:
    """Get the path to the bundled presets."""
    # Running from a source checkout
    source_path = Path(__file__).parent / "presets"
    if source_path.exists():
        return source_path

    try:
        ref = importlib.resources.files("pqground").joinpath("presets")
        with as_file(ref) as p:
            return Path(p)
    except (TypeError, FileNotFoundError):
        pass

    raise FileNotFoundError(
        "Could not find the presets directory. Make sure pqground is installed correctly."
    )


def _location(error: dict[str, Any]) -> str:
    return ".".join(str(part) for part in error["loc"]) or "<root>"


def parse_config(data: Any, source: str) -> SolveConfig:
    """Validate raw YAML data into a SolveConfig.

    Raises:
        ConfigError: With the dotted location of the first invalid field.
    """
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"{source}: the top level must be a mapping", details={"location": "<root>"})
    try:
        return SolveConfig.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        location = _location(dict(first))
        raise ConfigError(
            f"{source}: {location}: {first['msg']}",
            details={"location": location, "errors": e.error_count()},
        ) from e


def load_config(ref: str | Path) -> SolveConfig:
    """Load a run configuration from a YAML path or a preset name.

    Raises:
        ConfigError: If the file is missing, is not valid YAML, or fails validation.
    """
    path = Path(ref)
    if not path.exists() and path.suffix == "":
        from pqground.registry import PresetRegistry

        registry = PresetRegistry(get_presets_path())
        if registry.exists(str(ref)):
            return registry.get(str(ref))
    if not path.exists():
        raise ConfigError(f"Config file not found: {ref}", details={"path": str(ref)})

    try:
        with path.open() as f:
            data = yaml.safe_load(f)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        where = f" at line {mark.line + 1}, column {mark.column + 1}" if mark is not None else ""
        raise ConfigError(
            f"{path}: invalid YAML{where}",
            details={"line": mark.line + 1 if mark is not None else None},
        ) from e

    return parse_config(data, str(path))


def parse_scan(text: str) -> tuple[float, float, int]:
    """Parse a `lo:hi:n` scan range.

    Raises:
        ConfigError: If the text is not three colon-separated numbers.
    """
    parts = text.split(":")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except (IndexError, ValueError) as e:
        raise ConfigError(f"--scan expects lo:hi:n, got '{text}'", details={"location": "--scan"}) from e
    if len(parts) != 3:
        raise ConfigError(f"--scan expects lo:hi:n, got '{text}'", details={"location": "--scan"})
    return lo, hi, count


def apply_overrides(
    config: SolveConfig,
    resolution: int | None = None,
    rtol: float | None = None,
    scan: str | None = None,
    fmt: str | None = None,
) -> SolveConfig:
    """Apply command-line overrides and re-validate the affected sections.

    Raises:
        ConfigError: If an override is invalid.
    """
    shooting: dict[str, Any] = config.shooting.model_dump()
    if resolution is not None:
        shooting["resolution"] = resolution
    if rtol is not None:
        shooting["rtol"] = rtol
    if scan is not None:
        shooting["scan_lo"], shooting["scan_hi"], shooting["scan_count"] = parse_scan(scan)
    output: dict[str, Any] = config.output.model_dump()
    if fmt is not None:
        output["format"] = fmt
    data = config.model_dump(by_alias=True)
    data["shooting"] = shooting
    data["output"] = output
    return parse_config(data, "command line")
