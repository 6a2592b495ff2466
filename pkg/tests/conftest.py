from __future__ import annotations

import random
import sys
from pathlib import Path

import pytest
from typer.testing import CliRunner

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))


@pytest.fixture(autouse=True)
def clean_env(monkeypatch: pytest.MonkeyPatch) -> None:
    for name in (
        "SVSS_HASH_ALGORITHM",
        "SVSS_FIELD_CHOICE",
        "SVSS_MAX_WORKERS",
        "SVSS_MIDHALF_RETRIES",
        "SVSS_MAX_SUBSETS",
        "SVSS_SCAN_LIMIT",
        "SVSS_POWER_LIMIT",
        "SVSS_FELDMAN_P_BITS",
        "SVSS_SEARCH_BUDGET",
        "SVSS_HAMMING_FLOOR",
        "SVSS_DEBUG",
    ):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture()
def rng() -> random.Random:
    return random.Random(20240521)


@pytest.fixture()
def workdir(tmp_path: Path) -> Path:
    path = tmp_path / "svss_out"
    path.mkdir()
    return path


@pytest.fixture()
def cli_runner() -> CliRunner:
    return CliRunner()
