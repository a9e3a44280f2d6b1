import sys
from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parent.parent
CONTENT_DIR = REPO_ROOT / "content"


@pytest.fixture(scope="session")
def content_dir() -> Path:
    return CONTENT_DIR


@pytest.fixture(scope="session")
def graphs_dir() -> Path:
    return CONTENT_DIR / "graphs"


@pytest.fixture(scope="session")
def scenes_dir() -> Path:
    return CONTENT_DIR / "scenes"


@pytest.fixture(scope="session")
def traces_dir() -> Path:
    return CONTENT_DIR / "traces"


@pytest.fixture(scope="session")
def graph_corpus(graphs_dir) -> list:
    """Every shipped well-formed graph source, sorted for stable ordering."""
    return sorted(graphs_dir.glob("*.fg"))


@pytest.fixture(scope="session")
def invalid_graph_corpus(graphs_dir) -> list:
    return sorted((graphs_dir / "invalid").glob("*.fg"))
