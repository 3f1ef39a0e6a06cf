"""
Tests for settings profiles.
"""

import pytest

from ficoder.exceptions import ProfileConfigError, ProfileNotFoundError
from ficoder.profiles import ProfileConfig, get_available_profiles, load_profile_config
from ficoder.profiles.profile_loader import THREADS_ENV


def make_settings(**changes):
    settings = load_profile_config("default").settings
    settings.update(changes)
    return settings


class TestLoadProfileConfig:
    """Tests for loading bundled profiles."""

    def test_available_profiles(self):
        assert get_available_profiles() == ["default", "quick"]

    def test_default_profile(self):
        config = load_profile_config("default")
        assert config.name == "default"
        assert config.vertex_budget == 1048576
        assert config.codebook_limit == 4096

    def test_quick_profile_is_smaller(self):
        default = load_profile_config("default")
        quick = load_profile_config("quick")
        assert quick.node_budget < default.node_budget
        assert quick.codebook_limit == 1024
        assert quick.worker_count == 1

    def test_missing_profile(self):
        with pytest.raises(ProfileNotFoundError):
            load_profile_config("nonexistent")


class TestProfileConfig:
    """Tests for settings checks and overrides."""

    def test_unknown_setting(self):
        with pytest.raises(ProfileConfigError):
            ProfileConfig("custom", settings=make_settings(turbo=1))

    def test_missing_setting(self):
        settings = make_settings()
        del settings["node_budget"]
        with pytest.raises(ProfileConfigError):
            ProfileConfig("custom", settings=settings)

    @pytest.mark.parametrize("value", [0, -5, True, "10"])
    def test_bad_budget(self, value):
        with pytest.raises(ProfileConfigError):
            ProfileConfig("custom", settings=make_settings(node_budget=value))

    def test_overrides_skip_none(self):
        config = load_profile_config("default")
        changed = config.with_overrides(node_budget=5, clique_budget=None)
        assert changed.node_budget == 5
        assert changed.clique_budget == config.clique_budget
        assert config.node_budget == 10000000

    def test_unknown_attribute(self):
        with pytest.raises(AttributeError):
            load_profile_config("default").turbo

    def test_thread_cap(self, monkeypatch):
        monkeypatch.setenv(THREADS_ENV, "2")
        config = load_profile_config("default").with_overrides(workers=8)
        assert config.worker_count == 2

    def test_bad_thread_cap_is_ignored(self, monkeypatch):
        monkeypatch.setenv(THREADS_ENV, "many")
        config = load_profile_config("default").with_overrides(workers=3)
        assert config.worker_count == 3
