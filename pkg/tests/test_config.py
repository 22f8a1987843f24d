"""
Tests for settings loading and validation.

To run these tests:

    pytest tests/test_config.py -v
"""
import sys
from pathlib import Path

import pytest

# Add src directory to Python path for imports
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from config import Settings, load_env_settings, load_settings, load_settings_file
from validation import SettingsValidationError, SettingsValidator


@pytest.fixture
def settings_file(tmp_path):
    path = tmp_path / "settings.yaml"
    path.write_text("budget_nodes: 500\nseed: 3\nlog_level: info\n")
    return str(path)


class TestSettingsPrecedence:
    """Test how defaults, file, environment and flags combine."""

    def test_defaults(self):
        """Test that an empty environment gives the defaults."""
        assert load_settings(environ={}) == Settings()

    def test_file_values(self, settings_file):
        """Test values from the settings file."""
        settings = load_settings(settings_file, environ={})
        assert settings.budget_nodes == 500
        assert settings.seed == 3
        assert settings.log_level == "INFO"

    def test_environment_beats_file(self, settings_file):
        """Test that environment variables override the file."""
        settings = load_settings(settings_file, environ={"EVAKO_BUDGET_NODES": "700", "LOG_LEVEL": "debug"})
        assert settings.budget_nodes == 700
        assert settings.log_level == "DEBUG"
        assert settings.seed == 3

    def test_flags_beat_environment(self, settings_file):
        """Test that command-line values win and None values are ignored."""
        settings = load_settings(
            settings_file,
            overrides={"budget_nodes": 900, "seed": None},
            environ={"EVAKO_BUDGET_NODES": "700"},
        )
        assert settings.budget_nodes == 900
        assert settings.seed == 3

    def test_to_dict(self):
        """Test the settings mapping."""
        assert set(Settings().to_dict()) == {"budget_nodes", "trace_budget", "seed", "polynomial_bound", "log_level"}


class TestEnvironment:
    """Test environment variable parsing."""

    def test_integers_and_empty_values(self):
        """Test that empty variables are skipped."""
        found = load_env_settings({"EVAKO_SEED": "11", "EVAKO_TRACE_BUDGET": ""})
        assert found == {"seed": 11}

    def test_bad_integer(self):
        """Test a non-numeric budget."""
        with pytest.raises(SettingsValidationError, match="EVAKO_BUDGET_NODES"):
            load_env_settings({"EVAKO_BUDGET_NODES": "lots"})


class TestSettingsValidation:
    """Test rejected settings."""

    @pytest.mark.parametrize("settings", [
        {"budget_nodes": 0},
        {"trace_budget": -5},
        {"polynomial_bound": "40"},
        {"budget_nodes": True},
        {"seed": -1},
        {"log_level": "LOUD"},
    ])
    def test_invalid_values(self, settings):
        """Test each invalid value on its own."""
        with pytest.raises(SettingsValidationError):
            SettingsValidator(settings).validate()

    def test_unknown_key_suggests_known_ones(self):
        """Test that a misspelt key lists the known settings."""
        with pytest.raises(SettingsValidationError) as excinfo:
            SettingsValidator({"budget": 10}).validate()
        assert "Unknown setting 'budget'" in str(excinfo.value)
        assert "budget_nodes" in str(excinfo.value)

    def test_file_must_be_mapping(self, tmp_path):
        """Test a settings file holding a list."""
        path = tmp_path / "settings.yaml"
        path.write_text("- 1\n")
        with pytest.raises(SettingsValidationError, match="mapping"):
            load_settings(str(path), environ={})

    def test_invalid_file_value(self, tmp_path):
        """Test that file values are validated before merging."""
        path = tmp_path / "settings.yaml"
        path.write_text("budget_nodes: 0\n")
        with pytest.raises(SettingsValidationError):
            load_settings(str(path), environ={"EVAKO_BUDGET_NODES": "10"})

    def test_unreadable_file(self, tmp_path):
        """Test a missing settings file."""
        with pytest.raises(SettingsValidationError, match="Cannot load"):
            load_settings_file(str(tmp_path / "missing.yaml"))

    def test_empty_file(self, tmp_path):
        """Test that an empty file means no settings."""
        path = tmp_path / "settings.yaml"
        path.write_text("")
        assert load_settings_file(str(path)) == {}
