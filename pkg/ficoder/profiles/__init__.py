"""
Settings profiles.

Profiles hold the size and search budgets, loaded from YAML configs.
"""

from ficoder.profiles.profile_loader import (
    load_profile_config,
    get_available_profiles,
    default_settings,
    ProfileConfig,
)

__all__ = ["load_profile_config", "get_available_profiles", "default_settings", "ProfileConfig"]
