"""
Pytest configuration and fixtures.
"""

from pathlib import Path

import pytest

from instanton_calculus.domain.models import Database, KnotRecord
from instanton_calculus.repository.json_repo import load_seed_database, save_database


@pytest.fixture(autouse=True)
def _isolated_env(monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> None:
    """Keep user environment and .env files out of the tests."""
    for var in (
        "INSTANTON_CALCULUS_DATABASE_PATH",
        "INSTANTON_CALCULUS_NU_BOUND",
        "INSTANTON_CALCULUS_JOBS",
        "INSTANTON_CALCULUS_OUTPUT_FORMAT",
        "INSTANTON_CALCULUS_VERBOSE",
        "INSTANTON_CALCULUS_H_MAX",
        "INSTANTON_CALCULUS_K_MAX",
    ):
        monkeypatch.delenv(var, raising=False)
    monkeypatch.chdir(tmp_path)


@pytest.fixture
def seed_db() -> Database:
    """The packaged seed database."""
    return load_seed_database()


@pytest.fixture
def seed_records(seed_db: Database) -> dict[str, KnotRecord]:
    return seed_db.records


@pytest.fixture
def tmp_database(tmp_path: Path, seed_db: Database) -> Path:
    """A writable copy of the seed database."""
    path = tmp_path / "knots.json"
    save_database(seed_db, path)
    return path
