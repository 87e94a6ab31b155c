"""Tests for pqground.utils module."""

from pathlib import Path

import pytest

from pqground.errors import ConfigError
from pqground.utils import apply_overrides, get_presets_path, load_config, parse_config, parse_scan


class TestGetPresetsPath:
    """Tests for get_presets_path function."""

    def test_returns_path(self, presets_path: Path) -> None:
        """Verify get_presets_path returns a directory with the bundled presets."""
        result = get_presets_path()
        assert result.is_dir()
        assert sorted(p.name for p in result.glob("*.yaml")) == sorted(p.name for p in presets_path.glob("*.yaml"))

    def test_contains_presets(self) -> None:
        """Verify the path contains the classical preset."""
        assert (get_presets_path() / "classical_soliton.yaml").exists()


class TestLoadConfig:
    """Tests for load_config and parse_config."""

    def test_load_by_preset_name(self) -> None:
        """Verify a bare name resolves to a bundled preset."""
        config = load_config("bi_k2_alpha7")
        assert config.name == "bi_k2_alpha7"
        assert config.operator.kind == "bi"

    def test_load_by_path(self, temp_dir: Path) -> None:
        """Verify a YAML path is loaded and validated."""
        path = temp_dir / "run.yaml"
        path.write_text("name: custom\noperator:\n  N: 4\n")
        config = load_config(path)
        assert config.name == "custom"
        assert config.operator.dim == 4

    def test_empty_file_uses_defaults(self, temp_dir: Path) -> None:
        """Verify an empty YAML file gives the default config."""
        path = temp_dir / "empty.yaml"
        path.write_text("")
        assert load_config(path).name == "run"

    def test_missing_file(self, temp_dir: Path) -> None:
        """Verify a missing file raises ConfigError."""
        with pytest.raises(ConfigError, match="not found"):
            load_config(temp_dir / "missing.yaml")

    def test_unknown_preset(self) -> None:
        """Verify an unknown preset name raises ConfigError."""
        with pytest.raises(ConfigError, match="not found"):
            load_config("no_such_preset")

    def test_invalid_yaml_reports_line(self, temp_dir: Path) -> None:
        """Verify a YAML syntax error carries its line number."""
        path = temp_dir / "broken.yaml"
        path.write_text("name: broken\noperator: [unclosed\n")
        with pytest.raises(ConfigError, match="invalid YAML at line") as exc_info:
            load_config(path)
        assert exc_info.value.details["line"] >= 2

    def test_validation_error_location(self) -> None:
        """Verify the first invalid field is named by its dotted location."""
        with pytest.raises(ConfigError, match="shooting.resolution") as exc_info:
            parse_config({"shooting": {"resolution": 8}}, "inline")
        assert exc_info.value.details["location"] == "shooting.resolution"

    def test_top_level_must_be_mapping(self) -> None:
        """Verify a list document is rejected."""
        with pytest.raises(ConfigError, match="mapping"):
            parse_config([1, 2], "inline")


class TestParseScan:
    """Tests for parse_scan function."""

    def test_parses_range(self) -> None:
        """Verify lo:hi:n parses to floats and a count."""
        assert parse_scan("0.5:20:16") == (0.5, 20.0, 16)

    @pytest.mark.parametrize("text", ["1:2", "a:b:c", "1:2:3.5", "1:2:3:4"])
    def test_rejects_malformed(self, text: str) -> None:
        """Verify malformed ranges raise ConfigError."""
        with pytest.raises(ConfigError, match="lo:hi:n"):
            parse_scan(text)


class TestApplyOverrides:
    """Tests for apply_overrides function."""

    def test_no_overrides(self) -> None:
        """Verify the config is unchanged without overrides."""
        config = load_config("classical_soliton")
        assert apply_overrides(config) == config

    def test_overrides_applied(self) -> None:
        """Verify resolution, rtol, scan and format overrides."""
        config = apply_overrides(
            load_config("classical_soliton"), resolution=512, rtol=1e-8, scan="1:8:6", fmt="csv"
        )
        assert config.shooting.resolution == 512
        assert config.shooting.rtol == 1e-8
        assert (config.shooting.scan_lo, config.shooting.scan_hi, config.shooting.scan_count) == (1.0, 8.0, 6)
        assert config.output.format == "csv"
        assert config.operator.dim == 3

    def test_invalid_override(self) -> None:
        """Verify an override that fails validation raises ConfigError."""
        with pytest.raises(ConfigError, match="shooting"):
            apply_overrides(load_config("classical_soliton"), scan="9:1:4")
