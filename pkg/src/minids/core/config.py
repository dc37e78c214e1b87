"""
Layered configuration for the solver, the experiment harness and the CLI.

Layers are applied lowest first; a later layer replaces individual keys of an
earlier one and leaves its other keys alone:

    built-in DEFAULTS
    user file      $XDG_CONFIG_HOME/minids/config.yaml (~/.config/minids/config.yaml)
    project file   .minids.yaml in the working directory
    environment    MINIDS_THREADS, MINIDS_LOG_LEVEL, MINIDS_DIMACS_DIR
    CLI overrides  nested dict built by the click layer

An explicit ``--config FILE`` replaces both the user and the project file.
"""

import copy
import logging
import os
from pathlib import Path
from typing import Any

import yaml

logger = logging.getLogger(__name__)

PROJECT_FILE = ".minids.yaml"


class Config:
    """
    Merged configuration with dot-path access.

    Attributes:
        config_file: Explicit file, or None to search the user and project files
        cli_overrides: Highest-priority layer
        sources: Names of the layers that contributed, lowest first
    """

    DEFAULTS: dict[str, dict[str, Any]] = {
        "solver": {
            "k": 2,
            "delta": 64,
            "nu": 3,
            "time_limit": 10.0,
            "max_iterations": None,
            "init": "greedy",
            "plateau_gate": None,
            "seed": 0,
        },
        "harness": {
            "threads": 1,
            "runs_per_cell": 10,
            "time_limit": 30.0,
        },
        "logging": {
            "level": "WARNING",
            "file": None,
        },
        "instances": {
            "dimacs_dir": "tests/data/dimacs",
        },
    }

    # Environment variable -> (dotted key, converter)
    ENV_MAPPINGS: dict[str, tuple[str, type]] = {
        "MINIDS_THREADS": ("harness.threads", int),
        "MINIDS_LOG_LEVEL": ("logging.level", str),
        "MINIDS_DIMACS_DIR": ("instances.dimacs_dir", str),
    }

    PATH_KEYS = ("instances.dimacs_dir", "logging.file")

    def __init__(self, config_file: str | Path | None = None, cli_overrides: dict | None = None):
        """
        Build the merged configuration

        Args:
            config_file: Optional file used instead of the user and project files
            cli_overrides: Optional nested dict applied last
        """
        self.config_file = Path(config_file) if config_file else None
        self.cli_overrides = cli_overrides or {}
        self.sources: list[str] = []
        self._config: dict[str, Any] = {}
        self._build()

    def _build(self) -> None:
        self._config = copy.deepcopy(self.DEFAULTS)
        self.sources = ["defaults"]

        for path in self._candidate_files():
            layer = self._read_file(path)
            if layer:
                self._apply(layer, str(path))

        env_layer: dict[str, Any] = {}
        for env_var, (key, convert) in self.ENV_MAPPINGS.items():
            raw = os.environ.get(env_var)
            if not raw:
                continue
            try:
                _set_path(env_layer, key, convert(raw))
            except ValueError:
                logger.warning(f"Ignoring {env_var}={raw!r}: expected {convert.__name__}")
        if env_layer:
            self._apply(env_layer, "environment")

        if self.cli_overrides:
            self._apply(self.cli_overrides, "cli")

        for key in self.PATH_KEYS:
            value = self.get(key)
            if value:
                self.set(key, str(Path(value).expanduser()))
        logger.debug(f"Configuration layers: {', '.join(self.sources)}")

    def _candidate_files(self) -> list[Path]:
        if self.config_file is not None:
            if not self.config_file.exists():
                logger.warning(f"Config file not found: {self.config_file}")
                return []
            return [self.config_file]
        candidates = [self._user_file(), Path(PROJECT_FILE)]
        return [path for path in candidates if path.exists()]

    @staticmethod
    def _user_file() -> Path:
        base = os.environ.get("XDG_CONFIG_HOME")
        root = Path(base) if base else Path.home() / ".config"
        return root / "minids" / "config.yaml"

    @staticmethod
    def _read_file(path: Path) -> dict[str, Any]:
        try:
            data = yaml.safe_load(path.read_text(encoding="utf-8"))
        except (OSError, yaml.YAMLError) as e:
            logger.error(f"Cannot read config file {path}: {e}")
            return {}
        if data is None:
            return {}
        if not isinstance(data, dict):
            logger.error(f"Config file {path} must hold a mapping, got {type(data).__name__}")
            return {}
        logger.info(f"Loaded config from {path}")
        return data

    def _apply(self, layer: dict[str, Any], source: str) -> None:
        for section, values in layer.items():
            if section not in self.DEFAULTS:
                logger.warning(f"Unknown config section {section!r} in {source}")
            elif isinstance(values, dict):
                unknown = set(values) - set(self.DEFAULTS[section])
                if unknown:
                    logger.warning(f"Unknown {section} key(s) {sorted(unknown)} in {source}")
        _merge(self._config, layer)
        self.sources.append(source)

    def get(self, key: str, default: Any = None) -> Any:
        """
        Look up a dotted key such as ``"solver.delta"``

        Args:
            key: Dotted key path
            default: Returned when any part of the path is missing

        Returns:
            The configured value or ``default``
        """
        node: Any = self._config
        for part in key.split("."):
            if not isinstance(node, dict) or part not in node:
                return default
            node = node[part]
        return node

    def get_section(self, section: str) -> dict:
        """Whole section as a dict ({} when absent)."""
        return self._config.get(section, {})

    def set(self, key: str, value: Any) -> None:
        """Set a dotted key, creating intermediate sections."""
        _set_path(self._config, key, value)

    def to_dict(self) -> dict:
        """Independent copy of the merged configuration."""
        return copy.deepcopy(self._config)

    def save(self, path: Path | str) -> None:
        """
        Write the merged configuration as YAML

        Args:
            path: Destination file; parent directories are created
        """
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(yaml.safe_dump(self._config, sort_keys=False), encoding="utf-8")
        logger.info(f"Configuration saved to {path}")


def _merge(base: dict, update: dict) -> None:
    for key, value in update.items():
        current = base.get(key)
        if isinstance(current, dict) and isinstance(value, dict):
            _merge(current, value)
        else:
            base[key] = copy.deepcopy(value)


def _set_path(tree: dict, key: str, value: Any) -> None:
    *parents, leaf = key.split(".")
    for part in parents:
        tree = tree.setdefault(part, {})
    tree[leaf] = value


_global_config: Config | None = None


def get_config() -> Config:
    """Process-wide configuration, built on first use."""
    global _global_config
    if _global_config is None:
        _global_config = Config()
    return _global_config


def set_config(config: Config) -> None:
    """Install ``config`` as the process-wide configuration."""
    global _global_config
    _global_config = config


def reset_config() -> None:
    """Forget the process-wide configuration."""
    global _global_config
    _global_config = None
