"""Markov-chain construction and exact passage-time solvers.

Memoryless walks live on node states; one-step-memory walks live on arc
states (ordered adjacent pairs). Mean first passage times come from
absorbing-chain solves of (I - Q) mu = 1, one sparse direct solve per
target, never via an explicit fundamental matrix. Stationary occupation
solves the left fixed-point equation as a linear system, which stays valid
for periodic chains.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.sparse import csgraph

from .errors import (
    ArcBudgetError,
    DeadEndError,
    DisconnectedGraphError,
    ReducibleChainError,
    SolverResidualError,
    StrategyUsageError,
    UnreachableTargetError,
)
from .graph import Graph, is_connected
from .report import MfptReport
from .strategies import StrategySpec, make_kernel

DEFAULT_ARC_BUDGET = 50_000

_ROW_SUM_TOL = 1e-12
_RESIDUAL_TOL = 1e-9
_STATIONARY_TOL = 1e-10


def _check_row_stochastic(matrix: sp.csr_matrix, what: str) -> None:
    row_sums = np.asarray(matrix.sum(axis=1)).ravel()
    worst = float(np.abs(row_sums - 1.0).max())
    if worst > _ROW_SUM_TOL:
        raise SolverResidualError(
            f"{what} rows deviate from stochasticity by {worst:.3e}")


@dataclass(frozen=True)
class NodeChain:
    """Row-stochastic N x N chain of a memoryless walk."""

    graph: Graph
    strategy: StrategySpec
    matrix: sp.csr_matrix

    @property
    def n_states(self) -> int:
        return self.graph.n

    def state_label(self, i: int) -> str:
        return str(i)


@dataclass(frozen=True)
class ArcChain:
    """Row-stochastic chain over arc states (previous, current).

    State ids are the graph's arc ids. lifted marks a chain built from a
    memoryless kernel copied onto arc states (p_{rs,st} := p_{st}), used for
    consistency checks against the node chain.
    """

    graph: Graph
    strategy: StrategySpec
    matrix: sp.csr_matrix
    lifted: bool = False

    @property
    def n_states(self) -> int:
        return self.graph.num_arcs

    def state_label(self, i: int) -> str:
        tails, heads = self.graph.arcs()
        return f"({tails[i]}, {heads[i]})"


Chain = Union[NodeChain, ArcChain]


def build_node_chain(g: Graph, strat: StrategySpec) -> NodeChain:
    """Chain whose row s is the memoryless kernel at s."""
    if strat.has_memory:
        raise StrategyUsageError(
            f"{strat.label} conditions on the previous node; "
            "build an arc chain instead")
    kernel = make_kernel(g, strat)
    rows, cols, data = [], [], []
    for s in range(g.n):
        d = kernel(-1, s)
        rows.append(np.full(len(d.nodes), s, dtype=np.int64))
        cols.append(d.nodes)
        data.append(d.probs)
    matrix = sp.csr_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
        shape=(g.n, g.n))
    _check_row_stochastic(matrix, "node chain")
    return NodeChain(g, strat, matrix)


def _assemble_arc_chain(g: Graph, strat: StrategySpec,
                        lifted: bool) -> ArcChain:
    kernel = make_kernel(g, strat)
    tails, heads = g.arcs()
    indptr = g.out_indptr()
    n_arcs = g.num_arcs
    rows, cols, data = [], [], []
    for arc_id in range(n_arcs):
        r, s = int(tails[arc_id]), int(heads[arc_id])
        try:
            d = kernel(r, s)
        except DeadEndError as exc:
            raise DeadEndError(exc.node, state=(r, s)) from None
        # next arc states (s, t): positions inside the out-row of s
        nbrs = g.out_neighbors(s)
        cols.append(indptr[s] + np.searchsorted(nbrs, d.nodes))
        rows.append(np.full(len(d.nodes), arc_id, dtype=np.int64))
        data.append(d.probs)
    matrix = sp.csr_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n_arcs, n_arcs))
    _check_row_stochastic(matrix, "arc chain")
    return ArcChain(g, strat, matrix, lifted=lifted)


def build_arc_chain(g: Graph, strat: StrategySpec) -> ArcChain:
    """Chain whose row (r, s) is the memory kernel at that arc state."""
    if not strat.has_memory:
        raise StrategyUsageError(
            f"{strat.label} is memoryless; build a node chain (or lift it "
            "explicitly with build_lifted_arc_chain)")
    return _assemble_arc_chain(g, strat, lifted=False)


def build_lifted_arc_chain(g: Graph, strat: StrategySpec) -> ArcChain:
    """Memoryless kernel copied onto arc states, for consistency checks."""
    if strat.has_memory:
        raise StrategyUsageError(f"{strat.label} already has memory")
    return _assemble_arc_chain(g, strat, lifted=True)


@dataclass(frozen=True)
class AbsorbingSystem:
    """Transient block Q of a chain with target z absorbed.

    For arc chains the transient states are arcs touching neither endpoint
    of z: arcs into z are absorbing, arcs out of z are dropped entirely.
    """

    target: int
    transient: np.ndarray      # chain state ids, increasing
    q: sp.csr_matrix


def absorbing_system(chain: Chain, z: int) -> AbsorbingSystem:
    if isinstance(chain, NodeChain):
        transient = np.flatnonzero(np.arange(chain.n_states) != z)
    else:
        tails, heads = chain.graph.arcs()
        transient = np.flatnonzero((tails != z) & (heads != z))
    q = chain.matrix[transient][:, transient].tocsr()
    return AbsorbingSystem(int(z), transient, q)


def _solve_mta(system: AbsorbingSystem, chain: Chain) -> np.ndarray:
    n_t = len(system.transient)
    if n_t == 0:
        return np.zeros(0)
    coeff = (sp.identity(n_t, format="csc") - system.q).tocsc()
    ones = np.ones(n_t)
    try:
        mu = spla.splu(coeff).solve(ones)
    except RuntimeError as exc:
        raise UnreachableTargetError(
            f"target {system.target} is unreachable under {chain.strategy.label}: "
            f"absorbing system is singular ({exc})") from None
    if not np.all(np.isfinite(mu)):
        raise UnreachableTargetError(
            f"target {system.target} is unreachable under "
            f"{chain.strategy.label}: non-finite mean times to absorption")
    residual = float(np.abs(coeff @ mu - ones).max())
    if residual > _RESIDUAL_TOL * float(np.abs(mu).max()):
        raise UnreachableTargetError(
            f"absorbing solve for target {system.target} failed its residual "
            f"check ({residual:.3e}); the target may be effectively "
            f"unreachable under {chain.strategy.label}")
    return mu


def mean_time_to_absorption(chain: Chain, z: int) -> np.ndarray:
    """Mean times to absorption at z, aligned with the transient state list."""
    return _solve_mta(absorbing_system(chain, z), chain)


def _scatter_mta(chain: Chain, system: AbsorbingSystem,
                 mu: np.ndarray) -> np.ndarray:
    full = np.zeros(chain.n_states)
    full[system.transient] = mu
    return full


def mfpt(g: Graph, chain: Chain, z: int,
         initial: Optional[str] = None) -> np.ndarray:
    """Mean first passage times to z from every start node (entry z is 0).

    Arc chains take a first step before the memory exists: uniform over the
    start's neighbors by default. initial="kernel" instead weights the first
    step by the memoryless kernel, which is the convention node chains imply;
    lifted arc chains default to it so the two pipelines agree. Node chains
    read mean absorption times directly.
    """
    system = absorbing_system(chain, z)
    mu = _solve_mta(system, chain)
    if isinstance(chain, NodeChain):
        m = _scatter_mta(chain, system, mu)
    else:
        mu_full = _scatter_mta(chain, system, mu)
        indptr = g.out_indptr()
        if initial is None:
            initial = "kernel" if chain.lifted else "uniform"
        if initial == "uniform":
            per_arc = mu_full
        elif initial == "kernel":
            kernel = make_kernel(g, chain.strategy)
            weights = np.empty(g.num_arcs)
            for a in range(g.n):
                d = kernel(-1, a)
                nbrs = g.out_neighbors(a)
                pos = indptr[a] + np.searchsorted(nbrs, d.nodes)
                weights[pos] = d.probs * len(nbrs)
            per_arc = mu_full * weights
        else:
            raise ValueError(f"unknown initial-step rule {initial!r}")
        degrees = np.diff(indptr)
        if degrees.min() == 0:
            raise DeadEndError(int(np.argmin(degrees)))
        m = 1.0 + np.add.reduceat(per_arc, indptr[:-1]) / degrees
        m[z] = 0.0
    return m


def gmfpt(m: np.ndarray, z: int) -> float:
    """Average of m over start nodes a != z (m[z] must be 0)."""
    return float(m.sum() / (len(m) - 1))


def grmfpt(g_vec: np.ndarray) -> float:
    """Average of per-target values g_z over all targets."""
    return float(np.mean(g_vec))


def arc_budget_check(g: Graph, budget: int = DEFAULT_ARC_BUDGET) -> None:
    if g.num_arcs > budget:
        raise ArcBudgetError(
            f"graph has {g.num_arcs} arc states, over the exact-solver "
            f"budget of {budget}; use the Monte Carlo simulator "
            "(estimate_grmfpt) for graphs this large, or raise the budget")


def build_chain(g: Graph, strat: StrategySpec,
                arc_budget: int = DEFAULT_ARC_BUDGET) -> Chain:
    """Node chain for memoryless strategies, arc chain (budget-guarded)
    otherwise."""
    if strat.has_memory:
        arc_budget_check(g, arc_budget)
        return build_arc_chain(g, strat)
    return build_node_chain(g, strat)


def compute_mfpt_report(g: Graph, strat: StrategySpec, *,
                        arc_budget: int = DEFAULT_ARC_BUDGET,
                        include_matrix: bool = True,
                        initial: Optional[str] = None) -> MfptReport:
    """Exact MFPT/GMFPT/GrMFPT over all targets of a connected graph.

    One absorbing solve per target; targets are processed in increasing
    order so the report is deterministic.
    """
    if not is_connected(g):
        raise DisconnectedGraphError(
            "exact passage times require a connected graph "
            "(strongly connected if directed)")
    chain = build_chain(g, strat, arc_budget)
    n = g.n
    matrix = np.zeros((n, n))
    g_vec = np.empty(n)
    for z in range(n):
        m = mfpt(g, chain, z, initial=initial)
        matrix[:, z] = m
        g_vec[z] = gmfpt(m, z)
    report = MfptReport(
        strategy=strat.label,
        method="exact",
        n_nodes=n,
        gmfpt_per_target=g_vec,
        grmfpt=grmfpt(g_vec),
        mfpt_matrix=matrix if include_matrix else None,
    )
    return report


# -- stationary occupation and KL divergence ------------------------------------

@dataclass(frozen=True)
class OccupationDistribution:
    """Stationary per-node occupation probabilities of a walk."""

    probs: np.ndarray
    strategy: str = ""

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=np.float64)
        if np.any(p < 0):
            raise ValueError("occupation probabilities must be nonnegative")
        if abs(float(p.sum()) - 1.0) > _STATIONARY_TOL:
            raise ValueError(
                f"occupation probabilities sum to {p.sum()}, not 1")
        object.__setattr__(self, "probs", p)

    def __len__(self) -> int:
        return len(self.probs)


def _require_irreducible(chain: Chain) -> None:
    ncomp, labels = csgraph.connected_components(
        chain.matrix, directed=True, connection="strong")
    if ncomp > 1:
        outside = int(np.flatnonzero(labels != labels[0])[0])
        raise ReducibleChainError(
            f"chain of {chain.strategy.label} is reducible: state "
            f"{chain.state_label(outside)} and state {chain.state_label(0)} "
            "belong to different communicating classes")


def stationary_occupation(chain: Chain) -> OccupationDistribution:
    """Node-level stationary occupation of an irreducible chain.

    Solves pi P = pi with the normalization sum(pi) = 1 as one linear
    system (the last balance equation is replaced by the normalization),
    so periodic chains are handled without power iteration. Arc chains are
    projected to nodes by summing over incoming-arc states.
    """
    _require_irreducible(chain)
    p = chain.matrix
    n = chain.n_states
    a = (p.T - sp.identity(n, format="csr")).tocoo()
    keep = a.row != n - 1
    rows = np.concatenate([a.row[keep], np.full(n, n - 1, dtype=np.int64)])
    cols = np.concatenate([a.col[keep], np.arange(n, dtype=np.int64)])
    data = np.concatenate([a.data[keep], np.ones(n)])
    coeff = sp.csc_matrix((data, (rows, cols)), shape=(n, n))
    rhs = np.zeros(n)
    rhs[-1] = 1.0
    try:
        pi = spla.splu(coeff).solve(rhs)
    except RuntimeError as exc:
        raise SolverResidualError(
            f"stationary solve failed: {exc}") from None
    if not np.all(np.isfinite(pi)):
        raise SolverResidualError("stationary solve returned non-finite values")
    residual = float(np.abs(pi @ p - pi).max())
    if residual > _STATIONARY_TOL:
        raise SolverResidualError(
            f"stationary distribution residual {residual:.3e} exceeds "
            f"{_STATIONARY_TOL}")
    pi = np.clip(pi, 0.0, None)
    pi /= pi.sum()
    if isinstance(chain, ArcChain):
        node_pi = np.zeros(chain.graph.n)
        _, heads = chain.graph.arcs()
        np.add.at(node_pi, heads, pi)
        pi = node_pi
    return OccupationDistribution(pi, strategy=chain.strategy.label)


def kl_from_uniform(occ: OccupationDistribution) -> float:
    """Kullback-Leibler divergence (natural log) of occ from uniform."""
    p = occ.probs
    if np.any(p == 0):
        raise ValueError(
            "occupation has zero entries; KL from uniform is undefined "
            "(the chain was not irreducible)")
    return float(np.sum(p * np.log(p * len(p))))
