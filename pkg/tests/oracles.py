"""Slow, obviously-correct reference implementations used as test oracles.

Everything here works from first principles with python dicts and dense
numpy arrays, independent of the package internals: adjacency is a plain
dict of sorted neighbor lists, chains are dense matrices, and linear systems
go through numpy.linalg. Keep these naive; their only job is to be right.
"""

from __future__ import annotations

import numpy as np


def adjacency_dict(n: int, edges, directed: bool = False) -> dict[int, list[int]]:
    adj: dict[int, set[int]] = {u: set() for u in range(n)}
    for u, v in edges:
        adj[u].add(v)
        if not directed:
            adj[v].add(u)
    return {u: sorted(vs) for u, vs in adj.items()}


def dense_adjacency(adj: dict[int, list[int]]) -> np.ndarray:
    n = len(adj)
    a = np.zeros((n, n))
    for u, vs in adj.items():
        for v in vs:
            a[u, v] = 1.0
    return a


def brute_two_hop(adj: dict[int, list[int]]) -> np.ndarray:
    """Count length-2 walks u -> x -> v by direct enumeration."""
    n = len(adj)
    b = np.zeros((n, n), dtype=np.int64)
    for u in range(n):
        for x in adj[u]:
            for v in adj[x]:
                b[u, v] += 1
    return b


# -- naive transition kernels -------------------------------------------------
# Each returns {next_node: probability} for the walker at s having arrived
# from r (memoryless kernels ignore r). adj holds out-neighborhoods.

def k_uniform(adj, r, s, alpha=None, beta=None):
    nbrs = adj[s]
    return {t: 1.0 / len(nbrs) for t in nbrs}


def k_inverse_degree(adj, r, s, alpha=None, beta=None):
    nbrs = adj[s]
    w = {t: 1.0 / len(adj[t]) for t in nbrs}
    c = sum(w.values())
    return {t: wi / c for t, wi in w.items()}


def _forced_return(adj, r, s):
    if r not in adj[s]:
        raise ValueError(f"dead end at state ({r}, {s})")
    return {r: 1.0}


def k_forward(adj, r, s, alpha=None, beta=None):
    cand = [t for t in adj[s] if t != r]
    if not cand:
        return _forced_return(adj, r, s)
    return {t: 1.0 / len(cand) for t in cand}


def k_inverse_degree_memory(adj, r, s, alpha=None, beta=None):
    cand = [t for t in adj[s] if t != r]
    if not cand:
        return _forced_return(adj, r, s)
    w = {t: 1.0 / len(adj[t]) for t in cand}
    c = sum(w.values())
    return {t: wi / c for t, wi in w.items()}


def k_two_hop(adj, r, s, alpha=None, beta=None, b=None):
    if b is None:
        b = brute_two_hop(adj)
    nbrs = adj[s]
    w = {t: 1.0 / b[r, t] for t in nbrs}
    c = sum(w.values())
    return {t: wi / c for t, wi in w.items()}


def k_prudent(adj, r, s, alpha=10.0, beta=0.01):
    nbrs = adj[s]
    prev_nbrs = set(adj[r])
    common = [t for t in nbrs if t != r and t in prev_nbrs]
    fresh = [t for t in nbrs if t != r and t not in prev_nbrs]
    if not common and not fresh:
        return _forced_return(adj, r, s)
    c = beta + len(common) + alpha * len(fresh)
    out = {t: 1.0 / c for t in common}
    out.update({t: alpha / c for t in fresh})
    if r in nbrs:
        out[r] = beta / c
    return out


def k_prudent_inverse_degree(adj, r, s, alpha=10.0, beta=None):
    nbrs = adj[s]
    prev_nbrs = set(adj[r])
    common = [t for t in nbrs if t != r and t in prev_nbrs]
    fresh = [t for t in nbrs if t != r and t not in prev_nbrs]
    if not common and not fresh:
        return _forced_return(adj, r, s)
    w = {t: 1.0 / len(adj[t]) for t in common}
    w.update({t: alpha / len(adj[t]) for t in fresh})
    c = sum(w.values())
    return {t: wi / c for t, wi in w.items()}


NAIVE_MEMORYLESS = {"u-rw": k_uniform, "id-rw": k_inverse_degree}
NAIVE_MEMORY = {
    "f-rwm": k_forward,
    "id-rwm": k_inverse_degree_memory,
    "2h-rwm": k_two_hop,
    "p-rwm": k_prudent,
    "pid-rwm": k_prudent_inverse_degree,
}


# -- dense absorbing-chain passage times --------------------------------------

def naive_arc_mfpt(adj, kernel, a: int, z: int, initial: str = "uniform",
                   **kw) -> float:
    """Mean first passage time a -> z for a one-step-memory walk.

    States are ordered adjacent pairs; arcs into z absorb, arcs out of z are
    dropped. The first step from a is uniform over its neighbors ("uniform")
    or follows the memoryless restriction of the kernel ("kernel").
    """
    if a == z:
        return 0.0
    states = [(r, s) for r in adj for s in adj[r]]
    transient = [(r, s) for (r, s) in states if s != z and r != z]
    index = {st: i for i, st in enumerate(transient)}
    q = np.zeros((len(transient), len(transient)))
    for st in transient:
        r, s = st
        for t, p in kernel(adj, r, s, **kw).items():
            if t != z:
                q[index[st], index[(s, t)]] += p
    mu = np.linalg.solve(np.eye(len(transient)) - q, np.ones(len(transient)))

    def arc_time(b):
        return 0.0 if b == z else mu[index[(a, b)]]

    nbrs = adj[a]
    if initial == "uniform":
        return 1.0 + sum(arc_time(b) for b in nbrs) / len(nbrs)
    # "kernel": first step follows the memoryless restriction of the kernel
    first = kernel(adj, None, a, **kw)
    return 1.0 + sum(p * arc_time(b) for b, p in first.items())


def naive_node_mfpt(adj, kernel, a: int, z: int, **kw) -> float:
    """Mean first passage time for a memoryless walk on node states."""
    if a == z:
        return 0.0
    transient = [s for s in adj if s != z]
    index = {s: i for i, s in enumerate(transient)}
    q = np.zeros((len(transient), len(transient)))
    for s in transient:
        for t, p in kernel(adj, None, s, **kw).items():
            if t != z:
                q[index[s], index[t]] += p
    mu = np.linalg.solve(np.eye(len(transient)) - q, np.ones(len(transient)))
    return float(mu[index[a]])


def naive_gmfpt(adj, mfpt, z: int) -> float:
    n = len(adj)
    return sum(mfpt(a, z) for a in adj if a != z) / (n - 1)


def naive_grmfpt(adj, mfpt) -> float:
    n = len(adj)
    return sum(naive_gmfpt(adj, mfpt, z) for z in adj) / n


# -- stationary distributions --------------------------------------------------

def naive_stationary(p: np.ndarray) -> np.ndarray:
    """Solve pi P = pi, sum(pi) = 1 by least squares on the stacked system."""
    n = p.shape[0]
    a = np.vstack([p.T - np.eye(n), np.ones((1, n))])
    b = np.zeros(n + 1)
    b[-1] = 1.0
    pi, *_ = np.linalg.lstsq(a, b, rcond=None)
    return pi


def naive_arc_transition_matrix(adj, kernel, **kw):
    """Dense arc-state transition matrix and the state list, no absorption."""
    states = [(r, s) for r in adj for s in adj[r]]
    index = {st: i for i, st in enumerate(states)}
    p = np.zeros((len(states), len(states)))
    for st in states:
        r, s = st
        for t, prob in kernel(adj, r, s, **kw).items():
            p[index[st], index[(s, t)]] += prob
    return p, states


def naive_node_transition_matrix(adj, kernel, **kw):
    states = sorted(adj)
    p = np.zeros((len(states), len(states)))
    for s in states:
        for t, prob in kernel(adj, None, s, **kw).items():
            p[s, t] += prob
    return p, states


def naive_kl_from_uniform(occupation: np.ndarray) -> float:
    n = len(occupation)
    mask = occupation > 0
    return float(np.sum(occupation[mask] * np.log(occupation[mask] * n)))


# -- small-graph constructors ---------------------------------------------------

def cycle_edges(n):
    return [(i, (i + 1) % n) for i in range(n)]


def complete_edges(n):
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def path_edges(n):
    return [(i, i + 1) for i in range(n - 1)]


def star_edges(n_leaves):
    return [(0, i) for i in range(1, n_leaves + 1)]


def lollipop_edges():
    """Triangle {0,1,2} with a pendant node 3 attached to 2."""
    return [(0, 1), (0, 2), (1, 2), (2, 3)]


def random_connected_edges(rng: np.random.Generator, n: int,
                           extra: int) -> list[tuple[int, int]]:
    """Random spanning tree plus `extra` random chords."""
    edges = {(int(rng.integers(v)), v) for v in range(1, n)}
    for _ in range(extra):
        u, v = int(rng.integers(n)), int(rng.integers(n))
        if u != v:
            edges.add((min(u, v), max(u, v)))
    return sorted(edges)
