"""
Settings profile loader.

Profiles are YAML files under configs/ holding the search and size budgets
used by graph construction, coloring, codebook search and simulation.
"""

from __future__ import annotations

import logging
import os
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml

from ..exceptions import ProfileConfigError, ProfileNotFoundError

logger = logging.getLogger(__name__)

# Default profiles directory
PROFILES_DIR = Path(__file__).parent / "configs"

DEFAULT_PROFILE = "default"

THREADS_ENV = "FICODER_THREADS"

_SETTING_KEYS = (
    "vertex_budget",
    "node_budget",
    "clique_budget",
    "subspace_budget",
    "simulation_budget",
    "linearity_limit",
    "codebook_limit",
    "workers",
)


class ProfileConfig:
    """
    Parsed settings profile.
    """

    def __init__(
        self,
        name: str,
        description: str = "",
        version: str = "1.0.0",
        settings: Optional[Dict[str, Any]] = None,
    ):
        self.name = name
        self.description = description
        self.version = version
        self.settings = dict(settings or {})
        self._check()

    def _check(self) -> None:
        unknown = sorted(set(self.settings) - set(_SETTING_KEYS))
        if unknown:
            raise ProfileConfigError(f"profile '{self.name}': unknown settings {unknown}")
        for key in _SETTING_KEYS:
            if key not in self.settings:
                raise ProfileConfigError(f"profile '{self.name}': missing setting '{key}'")
            value = self.settings[key]
            if isinstance(value, bool) or not isinstance(value, int):
                raise ProfileConfigError(f"profile '{self.name}': '{key}' must be an integer")
            minimum = 0 if key == "workers" else 1
            if value < minimum:
                raise ProfileConfigError(f"profile '{self.name}': '{key}' must be >= {minimum}")

    def __getattr__(self, key: str) -> int:
        settings = self.__dict__.get("settings", {})
        if key in settings:
            return settings[key]
        raise AttributeError(key)

    def with_overrides(self, **overrides: Optional[int]) -> "ProfileConfig":
        """Copy with non-None overrides applied (e.g. a --budget flag)."""
        settings = dict(self.settings)
        settings.update({k: v for k, v in overrides.items() if v is not None})
        return ProfileConfig(self.name, self.description, self.version, settings)

    @property
    def worker_count(self) -> int:
        """Configured workers, capped by the FICODER_THREADS environment variable."""
        workers = self.settings["workers"] or (os.cpu_count() or 1)
        cap = os.environ.get(THREADS_ENV)
        if cap:
            try:
                workers = min(workers, max(1, int(cap)))
            except ValueError:
                logger.warning("ignoring non-integer %s=%r", THREADS_ENV, cap)
        return max(1, workers)

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, **self.settings}


def load_profile_config(profile_name: str) -> ProfileConfig:
    """
    Load a profile configuration from YAML file.

    Raises:
        ProfileNotFoundError: If profile doesn't exist
        ProfileConfigError: If profile config is invalid
    """
    config_path = PROFILES_DIR / f"{profile_name}.yaml"

    if not config_path.exists():
        raise ProfileNotFoundError(profile_name)

    try:
        with open(config_path) as f:
            data = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ProfileConfigError(f"Invalid YAML in profile config: {e}")

    if not isinstance(data, dict):
        raise ProfileConfigError("Profile config must be a dictionary")

    return ProfileConfig(
        name=data.get("name", profile_name),
        description=data.get("description", ""),
        version=data.get("version", "1.0.0"),
        settings=data.get("settings", {}),
    )


@lru_cache(maxsize=1)
def default_settings() -> ProfileConfig:
    """The default profile, loaded once."""
    return load_profile_config(DEFAULT_PROFILE)


def get_available_profiles() -> List[str]:
    if not PROFILES_DIR.exists():
        return []
    return sorted(p.stem for p in PROFILES_DIR.glob("*.yaml"))
