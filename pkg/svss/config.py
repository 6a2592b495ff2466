"""Configuration management for the svss CLI."""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass, field, replace
from enum import StrEnum
from pathlib import Path
from typing import Any

from dotenv import load_dotenv

from .errors import ConfigError

DEFAULT_HASH_ALGORITHM = "sha256"
DEFAULT_MIDHALF_RETRIES = 64
DEFAULT_MAX_SUBSETS = 10**6
DEFAULT_MAX_WORKERS = 1
DEFAULT_SCAN_LIMIT = 2**24
DEFAULT_POWER_LIMIT = 2**20
DEFAULT_FELDMAN_P_BITS = 2048
DEFAULT_SEARCH_BUDGET = 10**6

# Load environment variables from a local .env if present without overriding existing env
load_dotenv()


class FieldChoice(StrEnum):
    """How a verification field is derived from the share-domain bound q."""

    NEXT_PRIME = "next-prime"
    SAFE_PRIME_OF_VALUE = "safe-prime-of-value"
    SAFE_PRIME_OF_BITSIZE = "safe-prime-of-bitsize"
    BINARY_OF_BITSIZE = "binary-of-bitsize"
    MERSENNE = "mersenne"


@dataclass(slots=True)
class Settings:
    """Runtime settings resolved from environment variables and CLI options."""

    hash_algorithm: str = field(default=DEFAULT_HASH_ALGORITHM)
    field_choice: FieldChoice = field(default=FieldChoice.SAFE_PRIME_OF_BITSIZE)
    midhalf_retries: int = field(default=DEFAULT_MIDHALF_RETRIES)
    max_subsets: int = field(default=DEFAULT_MAX_SUBSETS)
    max_workers: int = field(default=DEFAULT_MAX_WORKERS)
    scan_limit: int = field(default=DEFAULT_SCAN_LIMIT)
    power_limit: int = field(default=DEFAULT_POWER_LIMIT)
    feldman_p_bits: int = field(default=DEFAULT_FELDMAN_P_BITS)
    search_budget: int = field(default=DEFAULT_SEARCH_BUDGET)
    hamming_floor: int | None = field(default=None)
    debug: bool = field(default=False)

    def with_overrides(self, **overrides: Any) -> Settings:
        """Return a copy with the non-None overrides applied."""

        applied = {key: value for key, value in overrides.items() if value is not None}
        return replace(self, **applied)

    def describe(self) -> dict[str, Any]:
        return {
            "hash_algorithm": self.hash_algorithm,
            "field_choice": str(self.field_choice),
            "midhalf_retries": self.midhalf_retries,
            "max_subsets": self.max_subsets,
            "max_workers": self.max_workers,
            "scan_limit": self.scan_limit,
            "power_limit": self.power_limit,
            "feldman_p_bits": self.feldman_p_bits,
            "search_budget": self.search_budget,
            "hamming_floor": self.hamming_floor,
        }


def _bool_from_env(value: str | None, default: bool) -> bool:
    if value is None:
        return default
    return value.strip().lower() in {"1", "true", "yes", "on"}


def _int_from_env(value: str | None, default: int, *, minimum: int = 1) -> int:
    if value is None:
        return default
    try:
        parsed = int(value, 0)
    except ValueError:
        return default
    return parsed if parsed >= minimum else default


def _optional_int_from_env(value: str | None) -> int | None:
    if value is None or not value.strip():
        return None
    try:
        return int(value, 0)
    except ValueError:
        return None


def parse_field_choice(value: str) -> FieldChoice:
    try:
        return FieldChoice(value.strip().lower())
    except ValueError as err:
        choices = ", ".join(choice.value for choice in FieldChoice)
        raise ConfigError(
            f"Unknown field choice {value!r}; expected one of: {choices}",
            context={"value": value},
        ) from err


def validate_hash_algorithm(name: str) -> str:
    normalized = name.strip().lower()
    if normalized not in hashlib.algorithms_available:
        raise ConfigError(
            f"Unknown hash algorithm {name!r}", context={"value": name}
        )
    return normalized


def load_settings(
    *,
    debug: bool = False,
    field_choice: str | None = None,
    max_workers: int | None = None,
) -> Settings:
    """Load runtime settings from the environment."""

    hash_algorithm = validate_hash_algorithm(
        os.getenv("SVSS_HASH_ALGORITHM", DEFAULT_HASH_ALGORITHM)
    )
    choice = parse_field_choice(
        field_choice or os.getenv("SVSS_FIELD_CHOICE", FieldChoice.SAFE_PRIME_OF_BITSIZE.value)
    )
    workers = max_workers or _int_from_env(os.getenv("SVSS_MAX_WORKERS"), DEFAULT_MAX_WORKERS)

    settings = Settings(
        hash_algorithm=hash_algorithm,
        field_choice=choice,
        midhalf_retries=_int_from_env(
            os.getenv("SVSS_MIDHALF_RETRIES"), DEFAULT_MIDHALF_RETRIES
        ),
        max_subsets=_int_from_env(os.getenv("SVSS_MAX_SUBSETS"), DEFAULT_MAX_SUBSETS),
        max_workers=workers,
        scan_limit=_int_from_env(os.getenv("SVSS_SCAN_LIMIT"), DEFAULT_SCAN_LIMIT),
        power_limit=_int_from_env(os.getenv("SVSS_POWER_LIMIT"), DEFAULT_POWER_LIMIT),
        feldman_p_bits=_int_from_env(
            os.getenv("SVSS_FELDMAN_P_BITS"), DEFAULT_FELDMAN_P_BITS, minimum=8
        ),
        search_budget=_int_from_env(os.getenv("SVSS_SEARCH_BUDGET"), DEFAULT_SEARCH_BUDGET),
        hamming_floor=_optional_int_from_env(os.getenv("SVSS_HAMMING_FLOOR")),
        debug=debug or _bool_from_env(os.getenv("SVSS_DEBUG"), False),
    )
    return settings


def ensure_out_dir(path: Path) -> Path:
    """Create the output directory for documents if needed."""

    path.mkdir(parents=True, exist_ok=True)
    return path
