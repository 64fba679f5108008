import pytest

from ltl4c.config import DEFAULT_BATCH_SIZE, Settings, load_settings
from ltl4c.errors import ConfigError


def test_defaults(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    settings = load_settings(environ={})
    assert settings == Settings()
    assert settings.batch_size == DEFAULT_BATCH_SIZE
    assert settings.output_format == "human"


def test_precedence(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    config = tmp_path / "ltl4c.env"
    config.write_text("LTL4C_THREADS=2\nLTL4C_BATCH_SIZE=10\nLTL4C_FORMAT=json-lines\n")
    environ = {"LTL4C_THREADS": "4", "LTL4C_BATCH_SIZE": "20"}
    settings = load_settings(str(config), environ, threads=8)
    assert settings.threads == 8
    assert settings.batch_size == 20
    assert settings.output_format == "json-lines"


def test_dotenv_in_working_directory(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / ".env").write_text("LTL4C_MINIMIZE=yes\nLTL4C_NUMERIC_KEYS=rid, socket\n")
    settings = load_settings(environ={})
    assert settings.minimize is True
    assert settings.numeric_keys == frozenset({"rid", "socket"})


def test_none_overrides_are_ignored(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert load_settings(environ={"LTL4C_SEED": "5"}, seed=None).seed == 5


@pytest.mark.parametrize("environ", [
    {"LTL4C_THREADS": "0"},
    {"LTL4C_THREADS": "many"},
    {"LTL4C_BATCH_LATENCY_MS": "-1"},
    {"LTL4C_FORMAT": "xml"},
    {"LTL4C_ON_MALFORMED": "ignore"},
    {"LTL4C_PRUNE": "perhaps"},
])
def test_invalid_values(tmp_path, monkeypatch, environ):
    monkeypatch.chdir(tmp_path)
    with pytest.raises(ConfigError):
        load_settings(environ=environ)


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError):
        load_settings(str(tmp_path / "missing.env"), environ={})


def test_with_overrides_rejects_unknown_settings():
    with pytest.raises(ConfigError):
        Settings().with_overrides(colour="blue")
