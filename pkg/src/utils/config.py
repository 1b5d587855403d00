"""Configuration management for zooc."""

import os
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Type

import yaml
from pydantic import AliasChoices, Field, ValidationError, field_validator
from pydantic.fields import FieldInfo
from pydantic_settings import (
    BaseSettings,
    PydanticBaseSettingsSource,
    SettingsConfigDict,
)

from ..core.errors import ConfigError


DEFAULT_CONFIG_FILE = "~/.zooc.json"


class Settings(BaseSettings):
    """Settings loaded from flags, environment variables and the config file.

    Precedence, highest first: constructor kwargs (CLI flags), environment
    variables, ``.env``, the config file (``ZOOC_CONFIG`` or ``~/.zooc.json``),
    field defaults.
    """

    model_config = SettingsConfigDict(
        env_prefix="ZOOC_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        populate_by_name=True,
        extra="ignore",
    )

    # Application
    app_name: str = Field(default="zooc")
    app_version: str = Field(default="0.1.0")
    log_level: str = Field(default="WARNING")
    log_json: bool = Field(default=False)

    # Package store
    store_root: Path = Field(
        default=Path("~/.zooc/store"),
        validation_alias=AliasChoices("store_root", "ZOOC_STORE"),
    )
    ttl_seconds: int = Field(
        default=600,
        validation_alias=AliasChoices("ttl_seconds", "ZOOC_TTL"),
    )
    remote_kind: str = Field(default="none")  # none, dir, http
    remote_url: Optional[str] = Field(default=None)
    remote_timeout: float = Field(default=10.0)
    remote_retry_attempts: int = Field(default=3)

    # Publishing / serving
    publish_dir: Path = Field(default=Path("build"))
    serve_host: str = Field(default="127.0.0.1")
    serve_port: int = Field(default=8080)

    # Discovery registry
    registry_url: Optional[str] = Field(
        default=None,
        validation_alias=AliasChoices("registry_url", "ZOOC_REGISTRY"),
    )
    registry_host: str = Field(default="127.0.0.1")
    registry_port: int = Field(default=8500)
    registry_backend: str = Field(default="file")  # file, redis
    registry_path: Optional[Path] = Field(default=None)
    redis_host: str = Field(default="localhost")
    redis_port: int = Field(default=6379)
    redis_db: int = Field(default=0)
    redis_password: Optional[str] = Field(default=None)

    # Benchmarks
    bench_trials: int = Field(default=10)
    bench_warmup: int = Field(default=3)

    # Gradient descent defaults
    gd_step_size: float = Field(default=0.01)
    gd_tol: float = Field(default=1e-8)
    gd_max_iters: int = Field(default=1_000_000)
    gd_fd_step: float = Field(default=1e-6)

    @field_validator("ttl_seconds")
    @classmethod
    def _positive_ttl(cls, value: int) -> int:
        if value <= 0:
            raise ValueError("ttl_seconds must be positive")
        return value

    @field_validator("remote_kind")
    @classmethod
    def _known_remote(cls, value: str) -> str:
        if value not in ("none", "dir", "http"):
            raise ValueError(f"unknown remote kind {value!r}")
        return value

    @field_validator("registry_backend")
    @classmethod
    def _known_backend(cls, value: str) -> str:
        if value not in ("file", "redis"):
            raise ValueError(f"unknown registry backend {value!r}")
        return value

    @field_validator("store_root", "publish_dir", "registry_path")
    @classmethod
    def _expand(cls, value: Optional[Path]) -> Optional[Path]:
        return value.expanduser() if value is not None else None

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: Type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> Tuple[PydanticBaseSettingsSource, ...]:
        config_file = os.getenv("ZOOC_CONFIG", DEFAULT_CONFIG_FILE)
        return (
            init_settings,
            env_settings,
            dotenv_settings,
            ConfigFileSource(settings_cls, config_file),
        )

    @property
    def registry_log_path(self) -> Path:
        """Append-log file backing the local discovery registry."""
        return self.registry_path or self.store_root / "registry.log"

    def ensure_store_root(self) -> Path:
        """Create the store root if needed.

        Raises:
            ConfigError: If the directory cannot be created
        """
        try:
            self.store_root.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise ConfigError(f"store root {self.store_root} is not creatable: {e}") from e
        return self.store_root


class ConfigFileSource(PydanticBaseSettingsSource):
    """Settings source reading a flattened YAML/JSON config file."""

    def __init__(self, settings_cls: Type[BaseSettings], config_file: str):
        super().__init__(settings_cls)
        self.config_file = config_file
        self.values = _flatten_dict(load_yaml_config(config_file))

    def get_field_value(self, field: FieldInfo, field_name: str) -> Tuple[Any, str, bool]:
        return self.values.get(field_name), field_name, False

    def __call__(self) -> Dict[str, Any]:
        fields = self.settings_cls.model_fields
        return {key: value for key, value in self.values.items() if key in fields}


# Global settings instance
_settings: Optional[Settings] = None


def load_yaml_config(config_file: str) -> dict:
    """Load configuration from a YAML (or JSON) file.

    Args:
        config_file: Path to the config file, ``~`` is expanded

    Returns:
        Configuration dictionary, empty when the file does not exist

    Raises:
        ConfigError: If the file exists but is not a mapping
    """
    config_path = Path(config_file).expanduser()
    if not config_path.exists():
        return {}

    with open(config_path, "r", encoding="utf-8") as f:
        try:
            config = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigError(f"cannot parse config file {config_path}: {e}") from e

    if config is None:
        return {}
    if not isinstance(config, dict):
        raise ConfigError(f"config file {config_path} must contain a mapping")
    return config


def get_config(**overrides: Any) -> Settings:
    """Get the process-wide configuration.

    The first call builds the settings; passing overrides always rebuilds
    them so that CLI flags win over every other source.

    Args:
        **overrides: Field values taking precedence over all other sources

    Returns:
        Settings instance

    Raises:
        ConfigError: If a source holds an invalid value
    """
    global _settings

    overrides = {key: value for key, value in overrides.items() if value is not None}
    if _settings is None or overrides:
        try:
            _settings = Settings(**overrides)
        except ValidationError as e:
            raise ConfigError(f"invalid configuration: {e}") from e

    return _settings


def _flatten_dict(d: dict, parent_key: str = "", sep: str = "_") -> dict:
    """Flatten nested dictionary.

    Args:
        d: Dictionary to flatten
        parent_key: Parent key prefix
        sep: Separator character

    Returns:
        Flattened dictionary
    """
    items = []
    for k, v in d.items():
        new_key = f"{parent_key}{sep}{k}" if parent_key else k
        if isinstance(v, dict):
            items.extend(_flatten_dict(v, new_key, sep=sep).items())
        else:
            items.append((new_key, v))
    return dict(items)


def reload_config() -> Settings:
    """Reload configuration from environment and files."""
    global _settings
    _settings = None
    return get_config()
