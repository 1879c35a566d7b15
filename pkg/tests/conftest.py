from __future__ import annotations

import os
from pathlib import Path

import pytest

from isobias.tu import load_dataset

DATA = Path(__file__).parent / "data"

# name -> list of (status, message) filled by the acceptance suite
ACCEPTANCE: dict[str, list[tuple[str, str]]] = {}


def external_data_dir() -> Path | None:
    """Directory holding further benchmark datasets (one sub-directory each), if configured."""
    root = os.environ.get("ISOBIAS_DATA")
    return Path(root) if root else None


def find_dataset(name: str) -> Path | None:
    for base in (DATA, external_data_dir()):
        if base is not None and (base / name / f"{name}_A.txt").exists():
            return base / name
    return None


@pytest.fixture(scope="session")
def mutag():
    return load_dataset(DATA / "MUTAG")


@pytest.fixture(scope="session")
def cuneiform():
    return load_dataset(DATA / "Cuneiform")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for name in sorted(ACCEPTANCE, key=lambda s: int(s.split()[0])):
        for status, msg in ACCEPTANCE[name]:
            tr.write_line(f"{status:<4} criterion {name}: {msg}")
