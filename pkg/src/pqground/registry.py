"""Registry of the run presets shipped with pqground."""

import contextlib
from pathlib import Path

import yaml
from pydantic import ValidationError

from pqground.errors import ConfigError
from pqground.schemas import SolveConfig


class PresetRegistry:
    """Discovers and loads preset run configurations from a directory of YAML files."""

    def __init__(self, presets_dir: Path):
        """Initialize the registry with a presets directory.

        Args:
            presets_dir: Directory containing `<name>.yaml` presets.
        """
        self.presets_dir = presets_dir
        self._cache: dict[str, SolveConfig] = {}

    def list_available(self) -> list[SolveConfig]:
        """List all valid presets, sorted by file name.

        Returns:
            List of SolveConfig objects; invalid files are skipped.
        """
        presets: list[SolveConfig] = []

        if not self.presets_dir.exists():
            return presets

        for path in sorted(self.presets_dir.glob("*.yaml")):
            with contextlib.suppress(ConfigError):
                presets.append(self.get(path.stem))

        return presets

    def exists(self, name: str) -> bool:
        """Check if a preset exists."""
        return self.get_path(name).exists()

    def get(self, name: str) -> SolveConfig:
        """Get a preset configuration by name.

        Args:
            name: Name of the preset, without the .yaml suffix.

        Returns:
            The validated SolveConfig.

        Raises:
            ConfigError: If the preset doesn't exist or is invalid.
        """
        if name in self._cache:
            return self._cache[name]

        path = self.get_path(name)
        if not path.exists():
            raise ConfigError(f"Preset '{name}' not found", details={"preset": name})

        with path.open() as f:
            data = yaml.safe_load(f) or {}

        try:
            config = SolveConfig.model_validate(data)
        except ValidationError as e:
            raise ConfigError(f"Invalid preset '{name}': {e}", details={"preset": name}) from e

        self._cache[name] = config
        return config

    def get_path(self, name: str) -> Path:
        """Get the path of a preset file."""
        return self.presets_dir / f"{name}.yaml"
