"""
Configuration management for instanton-calculus.

Settings are loaded from YAML configuration files and environment variables.
"""

import logging
from pathlib import Path
from typing import Any, Literal

import yaml
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

logger = logging.getLogger(__name__)

OutputFormat = Literal["human", "tsv", "json"]


class Settings(BaseSettings):
    """
    Application settings for instanton-calculus.

    Settings are loaded in the following order of precedence (highest to lowest):
    1. Environment variables (e.g., INSTANTON_CALCULUS_DATABASE_PATH)
    2. .env file (if found)
    3. YAML configuration file (if provided)
    4. Default values
    """

    model_config = SettingsConfigDict(
        env_prefix="INSTANTON_CALCULUS_",
        env_file=".env",
        extra="ignore",
        populate_by_name=True,
    )

    # --- Knot database ---
    database_path: Path | None = Field(
        default=None,
        description="Knot database JSON file (unset = packaged seed database)",
    )

    # --- Inference ---
    nu_bound: int = Field(
        default=99,
        ge=1,
        description="Bound on |nu-sharp| and other unknown integers during inference",
    )

    # --- Parity sweep ---
    jobs: int = Field(default=1, ge=1, description="Worker processes for verify-parity")
    h_max: int = Field(default=12, ge=1, description="Default largest h of the sweep")
    k_max: int = Field(default=5, ge=1, description="Default largest index-set size")

    # --- Output ---
    output_format: OutputFormat = Field(
        default="human",
        description="Report format: human, tsv or json",
    )
    verbose: bool = Field(
        default=False,
        description="Enable verbose logging",
    )

    @field_validator("database_path", mode="before")
    @classmethod
    def expand_user_path(cls, v: str | Path | None) -> Path | None:
        """Expand ~ in the database path."""
        if v is None or v == "":
            return None
        return Path(v).expanduser()


def load_settings(config_file: Path | None = None) -> Settings:
    """Load settings from a YAML file, environment variables, and defaults.

    Args:
        config_file: Path to YAML configuration file

    Returns:
        Settings instance

    Raises:
        FileNotFoundError: If config_file doesn't exist
        ValueError: If configuration is invalid
    """
    if config_file:
        if not config_file.exists():
            raise FileNotFoundError(f"Configuration file not found: {config_file}")

        logger.debug(f"Loading configuration from {config_file}")
        with open(config_file, encoding="utf-8") as f:
            yaml_data = yaml.safe_load(f)

        if yaml_data is None:
            yaml_data = {}
        if not isinstance(yaml_data, dict):
            raise ValueError(f"Configuration file must contain a mapping: {config_file}")

        # Resolve database_path relative to config file if not absolute
        if yaml_data.get("database_path"):
            db_path = Path(yaml_data["database_path"]).expanduser()
            if not db_path.is_absolute():
                db_path = config_file.parent / db_path
            yaml_data["database_path"] = str(db_path.resolve())

        return _with_env_precedence(yaml_data)

    return Settings()


def _with_env_precedence(yaml_data: dict[str, Any]) -> Settings:
    # Init kwargs beat the environment in pydantic-settings; drop YAML keys
    # that the environment also sets.
    env_set = Settings().model_fields_set
    return Settings(**{k: v for k, v in yaml_data.items() if k not in env_set})


def load_settings_from_dict(data: dict[str, Any]) -> Settings:
    """Create Settings from a pre-built dictionary.

    Unlike ``load_settings`` which reads a YAML file, this takes an already-
    resolved dict. ``database_path`` should be absolute.
    """
    return Settings(**data)
