import pytest
from pydantic import ValidationError

from app.config import Settings


def test_environment_is_ignored(monkeypatch):
    monkeypatch.setenv("LOG_LEVEL", "DEBUG")
    monkeypatch.setenv("MAX_RULES", "7")
    config = Settings()
    assert config.log_level == "WARNING"
    assert config.max_rules == 100_000


def test_flags_are_kept():
    config = Settings(log_level="INFO", log_file="run.log", default_oracle_degree=4)
    assert (config.log_level, config.log_file, config.default_oracle_degree) == ("INFO", "run.log", 4)


def test_caps_must_be_positive():
    with pytest.raises(ValidationError):
        Settings(max_rules=0)
