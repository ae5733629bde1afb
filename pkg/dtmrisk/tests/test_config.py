"""Tests for environment-driven settings."""

from dtmrisk.config import Settings


class TestSettings:
    def test_defaults(self):
        settings = Settings()
        assert settings.quad_limit == 200
        assert settings.oracle_tolerance == 1e-6
        assert settings.log_level == "WARNING"

    def test_environment_override(self, monkeypatch):
        monkeypatch.setenv("DTM_QUAD_LIMIT", "321")
        monkeypatch.setenv("DTM_ORACLE_TOLERANCE", "1e-8")
        settings = Settings()
        assert settings.quad_limit == 321
        assert settings.oracle_tolerance == 1e-8
