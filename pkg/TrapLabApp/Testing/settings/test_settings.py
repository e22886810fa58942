"""
Test suite for Django settings configuration: installed apps, simulation defaults and logging.
"""

from pathlib import Path

import pytest
from django.conf import settings
from django.test import override_settings

from apps.core.conf import DEFAULTS, setting


# =========================================================
# SETTINGS BASIC CONFIGURATION TESTS
# =========================================================

class TestSettingsBasicConfiguration:
    """Tests for basic Django settings configuration."""

    def test_base_dir_configuration(self):
        """BASE_DIR is the project directory holding manage.py."""
        from TrapLabApp.settings import BASE_DIR

        assert isinstance(BASE_DIR, Path)
        assert (BASE_DIR / "manage.py").exists()

    def test_installed_apps(self):
        """Only the core and harness apps plus DRF for validation."""
        assert settings.INSTALLED_APPS == ["rest_framework", "apps.core", "apps.harness"]

    def test_no_database(self):
        """The toolkit keeps no database."""
        assert settings.DATABASES == {} or list(settings.DATABASES) == ["default"]

    def test_secret_key_present(self):
        """A non-empty key keeps management commands usable."""
        assert isinstance(settings.SECRET_KEY, str) and settings.SECRET_KEY


# =========================================================
# SIMULATION DEFAULTS
# =========================================================

class TestSimulationDefaults:
    """Tests for the TRAPLAB_* settings."""

    @pytest.mark.parametrize("name", sorted(DEFAULTS))
    def test_settings_declare_every_default(self, name):
        """Every built-in default is also a project setting of the same type."""
        assert hasattr(settings, name)
        assert isinstance(getattr(settings, name), type(DEFAULTS[name]))

    def test_output_dir_is_path(self):
        """Reports go under a filesystem path."""
        assert isinstance(settings.TRAPLAB_OUTPUT_DIR, Path)

    @override_settings(TRAPLAB_RETRY_BUDGET=7)
    def test_override_reaches_setting(self):
        """setting() reads the live Django settings."""
        assert setting("TRAPLAB_RETRY_BUDGET") == 7


# =========================================================
# LOGGING CONFIGURATION
# =========================================================

class TestLoggingConfiguration:
    """Tests for the logging dictionary."""

    def test_apps_logger(self):
        """Project loggers write to the console without propagating."""
        apps_logger = settings.LOGGING["loggers"]["apps"]
        assert apps_logger["handlers"] == ["console"]
        assert apps_logger["propagate"] is False

    def test_verbose_formatter(self):
        """Console lines carry level, time and module."""
        fmt = settings.LOGGING["formatters"]["verbose"]["format"]
        assert "{levelname}" in fmt and "{module}" in fmt
