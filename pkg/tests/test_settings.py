"""Tests for pqground.settings and pqground.log modules."""

from collections.abc import Generator
from pathlib import Path

import pytest
import structlog
from pydantic import ValidationError

from pqground.log import configure_logging
from pqground.settings import Settings, get_settings, resolve_output_dir


@pytest.fixture
def clean_settings(monkeypatch: pytest.MonkeyPatch, temp_dir: Path) -> Generator[None, None, None]:
    """Clear PQGROUND_* variables, run from an empty directory and reset the cache."""
    for name in ("PQGROUND_OUTPUT_DIR", "PQGROUND_LOG_LEVEL", "PQGROUND_LOG_JSON", "PQGROUND_WORKERS"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.chdir(temp_dir)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.mark.usefixtures("clean_settings")
class TestSettings:
    """Tests for Settings and get_settings."""

    def test_defaults(self) -> None:
        """Verify the defaults without environment variables."""
        settings = Settings()
        assert settings.output_dir is None
        assert settings.log_level == "WARNING"
        assert settings.workers == 1

    def test_environment(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Verify PQGROUND_* variables are read and the level is upper-cased."""
        monkeypatch.setenv("PQGROUND_LOG_LEVEL", "debug")
        monkeypatch.setenv("PQGROUND_WORKERS", "4")
        settings = Settings()
        assert settings.log_level == "DEBUG"
        assert settings.workers == 4

    def test_rejects_unknown_level(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Verify an unknown log level fails validation."""
        monkeypatch.setenv("PQGROUND_LOG_LEVEL", "chatty")
        with pytest.raises(ValidationError):
            Settings()

    def test_cached(self) -> None:
        """Verify get_settings returns one instance."""
        assert get_settings() is get_settings()


@pytest.mark.usefixtures("clean_settings")
class TestResolveOutputDir:
    """Tests for resolve_output_dir precedence."""

    def test_flag_wins(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Verify --out beats the environment and the config."""
        monkeypatch.setenv("PQGROUND_OUTPUT_DIR", "/env")
        assert resolve_output_dir(Path("/flag"), Path("/config")) == Path("/flag")

    def test_environment_before_config(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Verify PQGROUND_OUTPUT_DIR beats the config directory."""
        monkeypatch.setenv("PQGROUND_OUTPUT_DIR", "/env")
        assert resolve_output_dir(None, Path("/config")) == Path("/env")

    def test_config_then_default(self) -> None:
        """Verify the config directory, then results."""
        assert resolve_output_dir(None, Path("/config")) == Path("/config")
        assert resolve_output_dir(None, None) == Path("results")


class TestConfigureLogging:
    """Tests for configure_logging."""

    def test_json_lines_on_stderr(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Verify JSON output goes to stderr with the event name."""
        configure_logging(level="INFO", json_output=True)
        structlog.get_logger().info("bracket_found", u0_low=4.0)
        captured = capsys.readouterr()
        assert captured.out == ""
        assert '"event": "bracket_found"' in captured.err
        assert '"u0_low": 4.0' in captured.err

    def test_level_filters(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Verify events below the configured level are dropped."""
        configure_logging(level="WARNING")
        structlog.get_logger().info("shot_classified")
        assert capsys.readouterr().err == ""
