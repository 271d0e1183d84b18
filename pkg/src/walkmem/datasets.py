"""Registry and loader for the six benchmark networks.

Files are not downloaded automatically (licenses and moving URLs); users
place them under a data directory and the loader verifies an optional
sha256 before parsing. Every network is reduced to its largest (strongly)
connected component, matching the published node and link counts.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from .errors import ChecksumMismatchError, DatasetMissingError
from .graph import Graph, largest_component, load_edge_list

DEFAULT_DATA_DIR = "data"
_ENV_DATA_DIR = "WALKMEM_DATA"


@dataclass(frozen=True)
class DatasetSpec:
    """Where a benchmark network comes from and what to expect after
    largest-component extraction."""

    key: str
    title: str
    directed: bool
    source: str
    url: str
    filenames: tuple[str, ...]
    expected_nodes: int
    expected_links: int
    sha256: Optional[str] = None


REGISTRY: dict[str, DatasetSpec] = {spec.key: spec for spec in (
    DatasetSpec(
        key="internet",
        title="Internet (autonomous systems, 2000-01-02)",
        directed=False,
        source="SNAP",
        url="https://snap.stanford.edu/data/as-733.html",
        filenames=("as20000102.txt", "internet.txt"),
        expected_nodes=6474,
        expected_links=13233,
    ),
    DatasetSpec(
        key="wikipedia",
        title="Wikipedia (Wikispeedia article links)",
        directed=True,
        source="SNAP",
        url="https://snap.stanford.edu/data/wikispeedia.html",
        filenames=("links.tsv", "wikispeedia.tsv", "wikipedia.txt"),
        expected_nodes=4051,
        expected_links=119000,
    ),
    DatasetSpec(
        key="euroroad",
        title="Euroroad (international E-road network)",
        directed=False,
        source="KONECT",
        url="http://konect.cc/networks/subelj_euroroad/",
        filenames=("road.txt", "euroroad.txt", "out.subelj_euroroad_euroroad"),
        expected_nodes=1039,
        expected_links=1305,
    ),
    DatasetSpec(
        key="fb-pages",
        title="FB-Pages (Facebook food pages, mutual likes)",
        directed=False,
        source="Network Repository",
        url="https://networkrepository.com/fb-pages-food.php",
        filenames=("fb-pages-food.edges", "fb-pages.txt"),
        expected_nodes=620,
        expected_links=2102,
    ),
    DatasetSpec(
        key="bio-diseasome",
        title="Bio-diseasome (human disease network)",
        directed=False,
        source="Network Repository",
        url="https://networkrepository.com/bio-diseasome.php",
        filenames=("bio-diseasome.mtx", "bio-diseasome.txt"),
        expected_nodes=516,
        expected_links=1188,
    ),
    DatasetSpec(
        key="ca-netscience",
        title="CA-netscience (network-science co-authorship)",
        directed=False,
        source="Network Repository",
        url="https://networkrepository.com/ca-netscience.php",
        filenames=("ca-netscience.mtx", "ca-netscience.txt"),
        expected_nodes=379,
        expected_links=914,
    ),
)}


@dataclass(frozen=True)
class DatasetLoad:
    """A parsed benchmark network plus its provenance."""

    graph: Graph
    spec: DatasetSpec
    path: Path
    raw_nodes: int
    raw_links: int

    @property
    def matches_expected(self) -> bool:
        return (self.graph.n == self.spec.expected_nodes
                and self.graph.num_edges == self.spec.expected_links)


def data_directory(data_dir: Union[str, Path, None] = None) -> Path:
    """Resolve the dataset directory: explicit arg, then $WALKMEM_DATA,
    then ./data."""
    if data_dir is not None:
        return Path(data_dir)
    env = os.environ.get(_ENV_DATA_DIR)
    return Path(env) if env else Path(DEFAULT_DATA_DIR)


def locate(key: str, data_dir: Union[str, Path, None] = None) -> Path:
    """Path of the dataset file, searching the candidate filenames."""
    spec = _spec_for(key)
    base = data_directory(data_dir)
    for name in spec.filenames:
        candidate = base / name
        if candidate.is_file():
            return candidate
    raise DatasetMissingError(
        f"dataset {key!r} not found: expected one of "
        f"{', '.join(str(base / n) for n in spec.filenames)}; download "
        f"{spec.title} from {spec.source} ({spec.url}) and place it there")


def file_sha256(path: Union[str, Path]) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def verify_checksum(path: Union[str, Path], expected: str) -> None:
    actual = file_sha256(path)
    if actual != expected.lower():
        raise ChecksumMismatchError(
            f"{path}: sha256 {actual} does not match expected {expected}")


def load_dataset(key: str, data_dir: Union[str, Path, None] = None,
                 checksum: Optional[str] = None) -> DatasetLoad:
    """Load a registered network and reduce it to its largest component.

    checksum overrides any registry-pinned sha256; pass one to guard
    against silently drifted dataset versions.
    """
    spec = _spec_for(key)
    path = locate(key, data_dir)
    expected_hash = checksum if checksum is not None else spec.sha256
    if expected_hash:
        verify_checksum(path, expected_hash)
    loaded = load_edge_list(path.read_text(), directed=spec.directed)
    reduced = largest_component(loaded.graph)
    return DatasetLoad(graph=reduced, spec=spec, path=path,
                       raw_nodes=loaded.graph.n,
                       raw_links=loaded.graph.num_edges)


def available() -> tuple[str, ...]:
    """Registered dataset keys in registry order."""
    return tuple(REGISTRY)


def _spec_for(key: str) -> DatasetSpec:
    spec = REGISTRY.get(key)
    if spec is None:
        raise DatasetMissingError(
            f"unknown dataset {key!r}; registered keys: "
            f"{', '.join(REGISTRY)}")
    return spec
