"""
Unit Tests for Runtime Settings

Tests verify:
1. Defaults when no ZEROFLUX_ variables are set
2. ZEROFLUX_-prefixed environment overrides, case-insensitive
3. Unknown ZEROFLUX_ variables are ignored
4. get_settings caches one instance

Run with: pytest tests/unit/test_settings.py -v
"""

import pytest

from zeroflux.config.settings import Settings, get_settings

FIELDS = ('log_level', 'log_dir', 'log_to_file', 'output_root', 'csv_float_format',
          'record_wall_time', 'max_workers')


@pytest.fixture
def clean_env(monkeypatch):
    for name in FIELDS:
        monkeypatch.delenv(f'ZEROFLUX_{name.upper()}', raising=False)
    return monkeypatch


class TestSettings:
    """pydantic-settings model with the ZEROFLUX_ prefix"""

    def test_defaults(self, clean_env):
        settings = Settings(_env_file=None)
        assert settings.log_level == 'INFO'
        assert settings.log_to_file is False
        assert settings.output_root == 'runs'
        assert settings.csv_float_format == '%.17g'
        assert settings.record_wall_time is True
        assert settings.max_workers == 1

    def test_environment_overrides(self, clean_env):
        clean_env.setenv('ZEROFLUX_MAX_WORKERS', '4')
        clean_env.setenv('ZEROFLUX_RECORD_WALL_TIME', 'false')
        clean_env.setenv('zeroflux_output_root', 'scratch')
        settings = Settings(_env_file=None)
        assert settings.max_workers == 4
        assert settings.record_wall_time is False
        assert settings.output_root == 'scratch'

    def test_unknown_variables_are_ignored(self, clean_env):
        clean_env.setenv('ZEROFLUX_ENVIRONMENT', 'production')
        settings = Settings(_env_file=None)
        assert set(settings.model_dump()) == set(FIELDS)

    def test_get_settings_is_cached(self):
        assert get_settings() is get_settings()
