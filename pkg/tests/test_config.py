import pytest
from pydantic import ValidationError

from config import Settings, get_settings, reload_settings


@pytest.fixture(autouse=True)
def fresh_settings():
    yield
    reload_settings()


def test_defaults():
    settings = Settings(_env_file=None)
    assert settings.nodes_real == 80
    assert settings.sample_chunk == 50_000
    assert settings.log_level == "WARNING"


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("PFKERNEL_NODES_REAL", "120")
    monkeypatch.setenv("PFKERNEL_SEED", "99")
    settings = reload_settings()
    assert settings.nodes_real == 120
    assert settings.seed == 99
    assert get_settings() is settings


def test_node_counts_are_validated(monkeypatch):
    monkeypatch.setenv("PFKERNEL_NODES_COMPLEX_IM", "4")
    with pytest.raises(ValidationError):
        reload_settings()
    with pytest.raises(ValidationError):
        Settings(PFKERNEL_SAMPLE_WORKERS=0)
