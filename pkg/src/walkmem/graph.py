"""Graph representation, random-network generation, edge-list ingestion,
component extraction, and structural statistics.

Nodes are dense integers 0..N-1. Undirected edges are stored once but exposed
as both ordered arcs; all adjacency queries go through sorted CSR arrays so
arc ids are stable and deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from .errors import (
    DisconnectedGraphError,
    EdgeListParseError,
    EmptyGraphError,
    GenerationError,
)

_FAMILIES = ("ba", "ws", "er", "er-directed")
_GENERATION_RETRIES = 100


class Graph:
    """Immutable simple graph (directed or undirected) over nodes 0..N-1.

    The arc view enumerates ordered pairs (u, v): for undirected graphs each
    edge {u, v} appears as both (u, v) and (v, u). Arc ids are CSR positions
    of the out-adjacency, i.e. sorted by (tail, head).
    """

    __slots__ = ("n", "directed", "_out_indptr", "_out_indices",
                 "_in_indptr", "_in_indices", "_arc_tails")

    def __init__(self, n: int, arcs: Iterable[tuple[int, int]],
                 directed: bool = False):
        if n <= 0:
            raise EmptyGraphError("graph must have at least one node")
        self.n = int(n)
        self.directed = bool(directed)

        pairs = np.asarray(list(arcs), dtype=np.int64).reshape(-1, 2)
        if pairs.size and (pairs.min() < 0 or pairs.max() >= n):
            raise ValueError("arc endpoint out of range")
        if np.any(pairs[:, 0] == pairs[:, 1]):
            raise ValueError("self-loops are not allowed")
        if not directed and pairs.size:
            # store each undirected edge in both directions
            pairs = np.vstack([pairs, pairs[:, ::-1]])
        if pairs.size:
            keys = pairs[:, 0] * n + pairs[:, 1]
            if len(np.unique(keys)) != len(keys):
                raise ValueError("duplicate arcs are not allowed")
            order = np.argsort(keys, kind="stable")
            pairs = pairs[order]

        tails, heads = pairs[:, 0], pairs[:, 1]
        self._out_indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(self._out_indptr, tails + 1, 1)
        np.cumsum(self._out_indptr, out=self._out_indptr)
        self._out_indices = np.ascontiguousarray(heads)
        self._arc_tails = np.ascontiguousarray(tails)

        if directed:
            order_in = np.lexsort((tails, heads))
            self._in_indptr = np.zeros(n + 1, dtype=np.int64)
            np.add.at(self._in_indptr, heads + 1, 1)
            np.cumsum(self._in_indptr, out=self._in_indptr)
            self._in_indices = np.ascontiguousarray(tails[order_in])
        else:
            self._in_indptr = self._out_indptr
            self._in_indices = self._out_indices

    # -- basic accessors ---------------------------------------------------

    @property
    def num_arcs(self) -> int:
        """Number of ordered arcs (2L for undirected graphs)."""
        return len(self._out_indices)

    @property
    def num_edges(self) -> int:
        """L: undirected edge count, or directed arc count."""
        return self.num_arcs if self.directed else self.num_arcs // 2

    def out_neighbors(self, u: int) -> np.ndarray:
        return self._out_indices[self._out_indptr[u]:self._out_indptr[u + 1]]

    def in_neighbors(self, u: int) -> np.ndarray:
        return self._in_indices[self._in_indptr[u]:self._in_indptr[u + 1]]

    def out_degree(self, u: int) -> int:
        return int(self._out_indptr[u + 1] - self._out_indptr[u])

    def degrees(self, convention: str = "out") -> np.ndarray:
        """Degree vector. For undirected graphs all conventions coincide."""
        out = np.diff(self._out_indptr)
        if not self.directed or convention == "out":
            return out
        inn = np.diff(self._in_indptr)
        if convention == "in":
            return inn
        if convention == "total":
            return out + inn
        raise ValueError(f"unknown degree convention {convention!r}")

    def has_arc(self, u: int, v: int) -> bool:
        row = self.out_neighbors(u)
        i = np.searchsorted(row, v)
        return i < len(row) and row[i] == v

    def arc_index(self, u: int, v: int) -> int:
        """Dense arc-state id of (u, v); arcs are CSR positions."""
        row = self.out_neighbors(u)
        i = np.searchsorted(row, v)
        if i >= len(row) or row[i] != v:
            raise KeyError(f"no arc ({u}, {v})")
        return int(self._out_indptr[u] + i)

    def arcs(self) -> tuple[np.ndarray, np.ndarray]:
        """(tails, heads) arrays of the full arc view, in arc-id order."""
        return self._arc_tails, self._out_indices

    def out_indptr(self) -> np.ndarray:
        return self._out_indptr

    def out_csr(self) -> tuple[np.ndarray, np.ndarray]:
        """(indptr, indices) of the out-adjacency, rows sorted."""
        return self._out_indptr, self._out_indices

    def in_csr(self) -> tuple[np.ndarray, np.ndarray]:
        """(indptr, indices) of the in-adjacency, rows sorted."""
        return self._in_indptr, self._in_indices

    def adjacency(self) -> sp.csr_matrix:
        data = np.ones(self.num_arcs, dtype=np.int64)
        return sp.csr_matrix((data, self._out_indices.copy(),
                              self._out_indptr.copy()), shape=(self.n, self.n))

    def undirected_view(self) -> "Graph":
        """Projection dropping arc orientation (identity for undirected)."""
        if not self.directed:
            return self
        tails, heads = self.arcs()
        u = np.minimum(tails, heads)
        v = np.maximum(tails, heads)
        edges = set(zip(u.tolist(), v.tolist()))
        return Graph(self.n, sorted(edges), directed=False)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Graph)
                and self.n == other.n
                and self.directed == other.directed
                and np.array_equal(self._out_indptr, other._out_indptr)
                and np.array_equal(self._out_indices, other._out_indices))

    def __hash__(self):
        return hash((self.n, self.directed, self._out_indices.tobytes()))

    def __repr__(self):
        kind = "directed" if self.directed else "undirected"
        return f"Graph({kind}, N={self.n}, L={self.num_edges})"


def is_connected(g: Graph) -> bool:
    """Connectivity in the sense the solvers need: strong if directed."""
    if g.n == 1:
        return True
    if g.num_arcs == 0:
        return False
    ncomp, _ = csgraph.connected_components(
        g.adjacency(), directed=g.directed,
        connection="strong" if g.directed else "weak")
    return ncomp == 1


# -- edge-list ingestion ---------------------------------------------------

@dataclass(frozen=True)
class EdgeListLoad:
    """Result of parsing an edge-list file."""

    graph: Graph
    labels: tuple[str, ...]           # original label of each dense node id
    dropped_self_loops: int
    dropped_duplicates: int

    @property
    def dropped(self) -> int:
        return self.dropped_self_loops + self.dropped_duplicates


def load_edge_list(text: str, directed: bool) -> EdgeListLoad:
    """Parse edge-list text into a Graph with dense 0..N-1 node ids.

    Accepts plain edge lists (two whitespace- or comma-separated node tokens
    per line, '#' or '%' comments) and MatrixMarket coordinate files as
    distributed by the Network Repository. Node labels are arbitrary strings
    mapped to dense ids in first-seen order. Duplicate arcs and self-loops
    are dropped and counted.
    """
    lines = text.splitlines()
    mm_mode = False
    for line in lines:
        if line.strip():
            mm_mode = line.lstrip().startswith("%%MatrixMarket")
            break

    label_ids: dict[str, int] = {}

    def node_id(token: str) -> int:
        i = label_ids.get(token)
        if i is None:
            i = len(label_ids)
            label_ids[token] = i
        return i

    seen: set[tuple[int, int]] = set()
    arcs: list[tuple[int, int]] = []
    self_loops = 0
    duplicates = 0
    mm_dims_pending = mm_mode

    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith("%"):
            continue
        tokens = line.replace(",", " ").split()
        if mm_dims_pending:
            # first data line of a MatrixMarket file is the dimensions line
            mm_dims_pending = False
            if len(tokens) in (2, 3) and all(_is_int(t) for t in tokens):
                continue
        if mm_mode:
            if len(tokens) < 2:
                raise EdgeListParseError(
                    f"expected a coordinate entry, got {line!r}", lineno)
            tokens = tokens[:2]
        elif len(tokens) != 2:
            raise EdgeListParseError(
                f"expected two node tokens, got {len(tokens)} in {line!r}",
                lineno)
        u, v = node_id(tokens[0]), node_id(tokens[1])
        if u == v:
            self_loops += 1
            continue
        key = (u, v) if directed else (min(u, v), max(u, v))
        if key in seen:
            duplicates += 1
            continue
        seen.add(key)
        arcs.append(key)

    if not label_ids:
        raise EmptyGraphError("edge list contains no nodes")

    g = Graph(len(label_ids), arcs, directed=directed)
    labels = tuple(sorted(label_ids, key=label_ids.get))
    return EdgeListLoad(g, labels, self_loops, duplicates)


def _is_int(tok: str) -> bool:
    try:
        int(tok)
        return True
    except ValueError:
        return False


def largest_component(g: Graph) -> Graph:
    """Induced subgraph on the largest connected component, relabeled densely.

    Uses strong connectivity for directed graphs and ordinary connectivity
    for undirected ones. Ties are broken toward the component containing the
    smallest original node id. Relabeling preserves the order of original ids.
    """
    ncomp, labels = csgraph.connected_components(
        g.adjacency(), directed=g.directed,
        connection="strong" if g.directed else "weak")
    if ncomp == 1:
        return g
    sizes = np.bincount(labels, minlength=ncomp)
    best = sizes.max()
    # smallest node id whose component has maximal size
    winner = labels[np.flatnonzero(sizes[labels] == best)[0]]
    keep = np.flatnonzero(labels == winner)
    remap = -np.ones(g.n, dtype=np.int64)
    remap[keep] = np.arange(len(keep))
    tails, heads = g.arcs()
    mask = (remap[tails] >= 0) & (remap[heads] >= 0)
    sub = zip(remap[tails[mask]].tolist(), remap[heads[mask]].tolist())
    if not g.directed:
        sub = ((u, v) for u, v in sub if u < v)
    return Graph(len(keep), sub, directed=g.directed)


# -- random-network generation ----------------------------------------------

@dataclass(frozen=True)
class GeneratorSpec:
    """Which random-network family to generate, with its parameters.

    family "ba": preferential attachment, m edges per new node, complete
    seed graph on m+1 nodes. family "ws": ring lattice of even degree ws_k
    rewired with probability p_rew. family "er"/"er-directed": G(N, p) with
    p = avg_degree/(N-1) per (directed) pair, regenerated until (strongly)
    connected.
    """

    family: str
    n: int
    m: Optional[int] = None
    ws_k: Optional[int] = None
    p_rew: Optional[float] = None
    avg_degree: Optional[float] = None
    seed: int = 0

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.family == "ba":
            if self.m is None or self.m < 1:
                raise ValueError("ba requires attachment count m >= 1")
            if self.m + 1 > self.n:
                raise ValueError("ba requires n > m")
        elif self.family == "ws":
            k, p = self.ws_k, self.p_rew
            if k is None or k % 2 != 0 or k < 2 or k >= self.n:
                raise ValueError("ws requires even ring degree 2 <= k < n")
            if p is None or not 0.0 <= p <= 1.0:
                raise ValueError("ws requires rewiring probability in [0, 1]")
        else:
            if self.avg_degree is None or self.avg_degree <= 0:
                raise ValueError("er requires target average degree > 0")


def generate(spec: GeneratorSpec) -> Graph:
    """Generate a connected random network; deterministic per (spec, seed).

    Raises GenerationError if connectivity is not reached within the retry
    budget.
    """
    rng = np.random.default_rng(spec.seed)
    for _ in range(_GENERATION_RETRIES):
        if spec.family == "ba":
            g = _generate_ba(spec.n, spec.m, rng)
        elif spec.family == "ws":
            g = _generate_ws(spec.n, spec.ws_k, spec.p_rew, rng)
        else:
            g = _generate_er(spec.n, spec.avg_degree,
                             spec.family == "er-directed", rng)
        if is_connected(g):
            return g
    raise GenerationError(
        f"{spec.family} generation not connected after "
        f"{_GENERATION_RETRIES} attempts (spec={spec})")


def _generate_ba(n: int, m: int, rng: np.random.Generator) -> Graph:
    edges = [(i, j) for i in range(m + 1) for j in range(i + 1, m + 1)]
    deg = np.zeros(n, dtype=np.float64)
    deg[:m + 1] = m
    for v in range(m + 1, n):
        cum = np.cumsum(deg[:v])
        targets: set[int] = set()
        while len(targets) < m:
            t = int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))
            targets.add(min(t, v - 1))
        for t in sorted(targets):
            edges.append((t, v))
            deg[t] += 1
        deg[v] = m
    return Graph(n, edges, directed=False)


def _generate_ws(n: int, k: int, p_rew: float, rng: np.random.Generator) -> Graph:
    edge_set: set[tuple[int, int]] = set()
    for j in range(1, k // 2 + 1):
        for u in range(n):
            v = (u + j) % n
            edge_set.add((min(u, v), max(u, v)))
    # rewire the far endpoint of each ring edge, one distance class at a time
    for j in range(1, k // 2 + 1):
        for u in range(n):
            v = (u + j) % n
            key = (min(u, v), max(u, v))
            if rng.random() >= p_rew or key not in edge_set:
                continue
            for _ in range(_GENERATION_RETRIES):
                w = int(rng.integers(n))
                cand = (min(u, w), max(u, w))
                if w != u and cand not in edge_set:
                    edge_set.remove(key)
                    edge_set.add(cand)
                    break
    return Graph(n, sorted(edge_set), directed=False)


def _generate_er(n: int, avg_degree: float, directed: bool,
                 rng: np.random.Generator) -> Graph:
    p = min(avg_degree / (n - 1), 1.0)
    if directed:
        us, vs = np.divmod(np.arange(n * n), n)
        mask = us != vs
        us, vs = us[mask], vs[mask]
    else:
        us, vs = np.triu_indices(n, k=1)
    pick = rng.random(len(us)) < p
    return Graph(n, zip(us[pick].tolist(), vs[pick].tolist()), directed=directed)


# -- structural statistics ---------------------------------------------------

@dataclass(frozen=True)
class NetworkStats:
    """The seven per-network statistics reported for real networks."""

    name: str
    node_count: int
    link_count: int
    density: float
    avg_degree: float
    avg_clustering: float
    avg_path_length: float
    diameter: int

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "nodes": self.node_count,
            "links": self.link_count,
            "density": self.density,
            "avg_degree": self.avg_degree,
            "avg_clustering": self.avg_clustering,
            "avg_path_length": self.avg_path_length,
            "diameter": self.diameter,
        }


def network_stats(g: Graph, name: str = "") -> NetworkStats:
    """Compute density, mean degree, clustering, mean distance, and diameter.

    Requires a connected graph (strongly connected if directed); clustering
    of directed graphs is computed on the undirected projection. Distances
    come from all-pairs BFS, chunked to bound memory.
    """
    if not is_connected(g):
        raise DisconnectedGraphError(
            "network statistics require a connected graph "
            "(strongly connected if directed)")
    n, links = g.n, g.num_edges
    if g.directed:
        density = links / (n * (n - 1))
        avg_degree = links / n
    else:
        density = links / (n * (n - 1) / 2)
        avg_degree = 2 * links / n
    clustering = _average_clustering(g.undirected_view())
    total, diameter = _distance_totals(g)
    avg_path = total / (n * (n - 1)) if n > 1 else 0.0
    return NetworkStats(name, n, links, density, avg_degree,
                        clustering, avg_path, diameter)


def _average_clustering(g: Graph) -> float:
    neighbor_sets = [set(g.out_neighbors(u).tolist()) for u in range(g.n)]
    acc = 0.0
    for u in range(g.n):
        nu = neighbor_sets[u]
        k = len(nu)
        if k < 2:
            continue
        links = sum(len(nu & neighbor_sets[v]) for v in nu)
        acc += links / (k * (k - 1))   # links double-counts each triangle edge
    return acc / g.n


def _distance_totals(g: Graph, chunk: int = 256) -> tuple[float, int]:
    adj = g.adjacency()
    total = 0.0
    diameter = 0
    for start in range(0, g.n, chunk):
        idx = np.arange(start, min(start + chunk, g.n))
        d = csgraph.shortest_path(adj, method="D", directed=g.directed,
                                  unweighted=True, indices=idx)
        if np.isinf(d).any():
            raise DisconnectedGraphError("infinite distance encountered")
        total += d.sum()
        diameter = max(diameter, int(d.max()))
    return total, diameter


def two_hop_counts(g: Graph) -> sp.csr_matrix:
    """Matrix of length-2 walk counts b_uv (diagonal included), as A @ A."""
    a = g.adjacency()
    return (a @ a).tocsr()
