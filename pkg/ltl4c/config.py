"""
Configuration for the ltl4c monitor.
Values come from command-line flags, environment variables or a .env-style file, in that order.
"""

import os
from dataclasses import dataclass, field, fields, replace

from dotenv import dotenv_values

from ltl4c.errors import ConfigError

# Worker pool
DEFAULT_THREADS = 1
DEFAULT_CHUNK_SIZE = 4096  # Events per map task

# Online batching
DEFAULT_BATCH_SIZE = 65536
DEFAULT_BATCH_LATENCY_MS = 100

# Output and ingestion
DEFAULT_FORMAT = "human"
DEFAULT_ON_MALFORMED = "abort"
DEFAULT_SEED = 0

# Monitor synthesis
DEFAULT_STATE_CAP = 10_000
DEFAULT_MAX_ATOMS = 65_536

FORMATS = ("human", "json-lines")
MALFORMED_POLICIES = ("skip", "abort")

# Settings field -> environment variable
ENV_NAMES = {
    "threads": "LTL4C_THREADS",
    "batch_size": "LTL4C_BATCH_SIZE",
    "batch_latency_ms": "LTL4C_BATCH_LATENCY_MS",
    "output_format": "LTL4C_FORMAT",
    "on_malformed": "LTL4C_ON_MALFORMED",
    "seed": "LTL4C_SEED",
    "numeric_keys": "LTL4C_NUMERIC_KEYS",
    "state_cap": "LTL4C_STATE_CAP",
    "max_atoms": "LTL4C_MAX_ATOMS",
    "minimize": "LTL4C_MINIMIZE",
    "prune": "LTL4C_PRUNE",
    "chunk_size": "LTL4C_CHUNK_SIZE",
}


@dataclass(frozen=True)
class Settings:
    """Resolved runtime settings"""
    threads: int = DEFAULT_THREADS
    batch_size: int = DEFAULT_BATCH_SIZE
    batch_latency_ms: int = DEFAULT_BATCH_LATENCY_MS
    output_format: str = DEFAULT_FORMAT
    on_malformed: str = DEFAULT_ON_MALFORMED
    seed: int = DEFAULT_SEED
    numeric_keys: frozenset = field(default_factory=frozenset)
    state_cap: int = DEFAULT_STATE_CAP
    max_atoms: int = DEFAULT_MAX_ATOMS
    minimize: bool = False
    prune: bool = True
    chunk_size: int = DEFAULT_CHUNK_SIZE

    def with_overrides(self, **overrides):
        """Return a copy with every non-None override applied"""
        values = {}
        for name, value in overrides.items():
            if value is None:
                continue
            values[name] = _coerce(name, value)
        return replace(self, **values)


def _parse_bool(name, text):
    lowered = str(text).strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{name}: expected a boolean, got {text!r}")


def _parse_positive_int(name, text, minimum=1):
    try:
        value = int(text)
    except (TypeError, ValueError):
        raise ConfigError(f"{name}: expected an integer, got {text!r}") from None
    if value < minimum:
        raise ConfigError(f"{name}: must be >= {minimum}, got {value}")
    return value


def _coerce(name, value):
    """Convert a raw flag/env/file value into the Settings field type"""
    if name in ("threads", "batch_size", "state_cap", "max_atoms", "chunk_size"):
        return _parse_positive_int(name, value)
    if name in ("batch_latency_ms", "seed"):
        return _parse_positive_int(name, value, minimum=0)
    if name in ("minimize", "prune"):
        return value if isinstance(value, bool) else _parse_bool(name, value)
    if name == "output_format":
        if value not in FORMATS:
            raise ConfigError(f"output format must be one of {FORMATS}, got {value!r}")
        return value
    if name == "on_malformed":
        if value not in MALFORMED_POLICIES:
            raise ConfigError(f"on-malformed policy must be one of {MALFORMED_POLICIES}, got {value!r}")
        return value
    if name == "numeric_keys":
        if isinstance(value, str):
            value = [key.strip() for key in value.split(",")]
        return frozenset(key for key in value if key)
    raise ConfigError(f"unknown setting {name!r}")


def load_settings(config_file=None, environ=None, **overrides):
    """
    Resolve settings with precedence flags > environment > config file > defaults.

    When no config file is given, a .env file in the working directory is used if present.
    """
    if environ is None:
        environ = os.environ
    if config_file is None and os.path.exists(".env"):
        config_file = ".env"
    if config_file is not None and not os.path.exists(config_file):
        raise ConfigError(f"config file not found: {config_file}")

    file_values = dotenv_values(config_file) if config_file else {}
    layered = {}
    for setting in fields(Settings):
        env_name = ENV_NAMES[setting.name]
        if env_name in environ:
            layered[setting.name] = environ[env_name]
        elif file_values.get(env_name) is not None:
            layered[setting.name] = file_values[env_name]

    settings = Settings().with_overrides(**layered)
    return settings.with_overrides(**overrides)
