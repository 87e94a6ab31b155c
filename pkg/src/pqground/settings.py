"""Process settings loaded from the environment using pydantic-settings."""

from functools import lru_cache
from pathlib import Path

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Settings read from PQGROUND_* environment variables or a .env file."""

    model_config = SettingsConfigDict(
        env_prefix="PQGROUND_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    output_dir: Path | None = Field(
        None, description="Overrides the output directory of every run"
    )
    log_level: str = Field("WARNING", description="Logging level name")
    log_json: bool = Field(False, description="Emit JSON log lines")
    workers: int = Field(1, ge=1, description="Default worker count for sweeps")

    @field_validator("log_level")
    @classmethod
    def normalize_level(cls, v: str) -> str:
        """Upper-case the level name and reject unknown levels."""
        level = v.upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"Unknown log level: {v}")
        return level


@lru_cache
def get_settings() -> Settings:
    """Return the cached process settings."""
    return Settings()


def resolve_output_dir(flag: Path | None, configured: Path | None) -> Path:
    """Pick the output directory: flag, then environment, then config, then default."""
    if flag is not None:
        return flag
    env_dir = get_settings().output_dir
    if env_dir is not None:
        return env_dir
    if configured is not None:
        return configured
    return Path("results")
