"""Shared fixtures: canonical small graphs and real-dataset discovery."""

from __future__ import annotations

from pathlib import Path

import pytest

import oracles
from walkmem.graph import Graph

DATA_DIR = Path(__file__).resolve().parents[1] / "data"


def make_cycle(n: int) -> Graph:
    return Graph(n, oracles.cycle_edges(n), directed=False)


def make_complete(n: int) -> Graph:
    return Graph(n, oracles.complete_edges(n), directed=False)


def make_path(n: int) -> Graph:
    return Graph(n, oracles.path_edges(n), directed=False)


def make_star(n_leaves: int) -> Graph:
    return Graph(n_leaves + 1, oracles.star_edges(n_leaves), directed=False)


def make_lollipop() -> Graph:
    return Graph(4, oracles.lollipop_edges(), directed=False)


@pytest.fixture
def lollipop() -> Graph:
    return make_lollipop()


@pytest.fixture
def triangle() -> Graph:
    return make_complete(3)


def dataset_file(filename: str, source: str) -> Path:
    """Path of a real-network file under data/, or skip with instructions."""
    path = DATA_DIR / filename
    if not path.exists():
        pytest.skip(
            f"dataset file {path} not present; download it from {source} "
            f"and place it at that path (see data/README.md)")
    return path
