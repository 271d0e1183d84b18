"""Seeded Monte Carlo estimation of passage times and occupation.

Heavy lifting happens in the compiled engine; this module prepares graph
arrays, derives per-trajectory counter-based seeds, and aggregates raw
first-passage samples into reports. A pure-Python walker (step,
first_passage_time) implements the same stream arithmetic as the engine,
draw for draw, and serves as its reference.

Memory walks take their first step uniformly over the start's neighbors
(the memory does not exist yet); memoryless walks follow their kernel from
the first step, matching the node-chain solver.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from . import _engine
from .errors import CensoringError, DeadEndError, DisconnectedGraphError
from .exact import DEFAULT_ARC_BUDGET, OccupationDistribution
from .graph import Graph, is_connected
from .report import MfptReport
from .strategies import StrategySpec, make_kernel

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_CACHE_ENTRY_CAP = 20_000_000   # cumulative-row entries, ~320 MB ceiling
_CENSOR_FRACTION = 0.01


def _scramble64(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """Counter-based uniform stream, bit-identical to the compiled engine."""

    def __init__(self, state: int):
        self.state = state & _MASK64

    @classmethod
    def for_trajectory(cls, master: int, index: int) -> "SplitMix64":
        mixed = _scramble64(((index + 1) * _GOLDEN) & _MASK64)
        return cls(_scramble64((master & _MASK64) ^ mixed))

    def random(self) -> float:
        self.state = (self.state + _GOLDEN) & _MASK64
        return (_scramble64(self.state) >> 11) * 2.0 ** -53


@dataclass(frozen=True)
class WalkState:
    """Walker position: previous node (None before the first move), current
    node, and steps taken so far."""

    node: int
    prev: Optional[int] = None
    steps: int = 0


@dataclass(frozen=True)
class SimConfig:
    """Monte Carlo protocol: every ordered pair x repetitions, or uniformly
    sampled ordered pairs with replacement."""

    mode: str = "all-pairs"
    repetitions: int = 10
    n_pairs: int = 100_000
    max_steps: Optional[int] = None      # default: 1000 * arc count
    seed: int = 0
    kernel_cache_budget: int = DEFAULT_ARC_BUDGET

    def __post_init__(self):
        if self.mode not in ("all-pairs", "sampled-pairs"):
            raise ValueError(f"unknown simulation mode {self.mode!r}")
        if self.repetitions < 1:
            raise ValueError("repetitions must be at least 1")
        if self.n_pairs < 1:
            raise ValueError("sampled-pairs count must be at least 1")
        if self.max_steps is not None and self.max_steps < 1:
            raise ValueError("max steps must be at least 1")


def default_max_steps(g: Graph) -> int:
    """1000 * N * <k>, i.e. 1000 arc traversals per stored arc."""
    return 1000 * g.num_arcs


def _sample(dist, u: float) -> int:
    """Index the cumulative distribution exactly like the engine does."""
    cum = np.cumsum(dist.probs)
    idx = int(np.searchsorted(cum, u, side="right"))
    if idx >= len(cum):
        idx = len(cum) - 1
    return int(dist.nodes[idx])


def step(g: Graph, strat: StrategySpec, state: WalkState, rng) -> WalkState:
    """Advance one step: uniform over neighbors on a memory walk's first
    move, the strategy kernel afterwards. rng needs a .random() method."""
    s = state.node
    nbrs = g.out_neighbors(s)
    if len(nbrs) == 0:
        raise DeadEndError(s)
    if strat.has_memory and state.prev is None:
        u = rng.random()
        j = min(int(u * len(nbrs)), len(nbrs) - 1)
        nxt = int(nbrs[j])
    else:
        kernel = make_kernel(g, strat)
        nxt = _sample(kernel(-1 if state.prev is None else state.prev, s),
                      rng.random())
    return WalkState(node=nxt, prev=s, steps=state.steps + 1)


def first_passage_time(g: Graph, strat: StrategySpec, a: int, z: int, rng,
                       max_steps: Optional[int] = None) -> Optional[int]:
    """Steps until a walker from a first reaches z; None when censored at
    max_steps. Pure-Python reference for the compiled engine."""
    if a == z:
        raise ValueError("first passage requires distinct start and target")
    if max_steps is None:
        max_steps = default_max_steps(g)
    kernel = make_kernel(g, strat)
    steps = 0
    prev = -1
    cur = a
    if strat.has_memory:
        nbrs = g.out_neighbors(a)
        if len(nbrs) == 0:
            raise DeadEndError(a)
        u = rng.random()
        prev, cur = a, int(nbrs[min(int(u * len(nbrs)), len(nbrs) - 1)])
        steps = 1
        if cur == z:
            return 1
    while steps < max_steps:
        nxt = _sample(kernel(prev, cur), rng.random())
        prev, cur = cur, nxt
        steps += 1
        if cur == z:
            return steps
    return None


# -- engine plumbing -----------------------------------------------------------

def _engine_arrays(g: Graph, spec: StrategySpec):
    out_indptr, out_indices = g.out_csr()
    in_indptr, in_indices = g.in_csr()
    degw = g.degrees(spec.degree_convention).astype(np.float64)
    return out_indptr, out_indices, in_indptr, in_indices, degw


def _build_cached_rows(g: Graph, spec: StrategySpec, arc_states: bool):
    """Cumulative kernel rows per state, in kernel emission order."""
    kernel = make_kernel(g, spec)
    indptr = g.out_indptr()
    if arc_states:
        tails, heads = g.arcs()
        states = zip(tails.tolist(), heads.tolist())
    else:
        states = ((-1, s) for s in range(g.n))
    cols_parts, cum_parts, lengths = [], [], []
    for r, s in states:
        d = kernel(r, s)
        if arc_states:
            nbrs = g.out_neighbors(s)
            cols_parts.append(indptr[s] + np.searchsorted(nbrs, d.nodes))
        else:
            cols_parts.append(d.nodes.astype(np.int64))
        cum = np.cumsum(d.probs)
        cum[-1] = 1.0
        cum_parts.append(cum)
        lengths.append(len(cum))
    row_indptr = np.zeros(len(lengths) + 1, dtype=np.int64)
    np.cumsum(lengths, out=row_indptr[1:])
    return (row_indptr, np.concatenate(cols_parts).astype(np.int64),
            np.concatenate(cum_parts))


def _arc_cache_entries(g: Graph) -> int:
    """Entries an arc-state row cache would hold: sum of in(s)*out(s)."""
    out_deg = g.degrees("out")
    in_deg = g.degrees("in") if g.directed else out_deg
    return int((in_deg.astype(np.int64) * out_deg).sum())


def _use_cache(g: Graph, spec: StrategySpec, budget: int) -> bool:
    if not spec.has_memory:
        return True
    return (g.num_arcs <= budget
            and _arc_cache_entries(g) <= _CACHE_ENTRY_CAP)


def _run_batch(g: Graph, spec: StrategySpec, pairs_a: np.ndarray,
               pairs_z: np.ndarray, seeds: np.ndarray, max_steps: int,
               cache_budget: int) -> np.ndarray:
    """Raw first-passage steps per trajectory; -1 marks censoring."""
    out = np.empty(len(pairs_a), dtype=np.int64)
    pairs_a = pairs_a.astype(np.int64)
    pairs_z = pairs_z.astype(np.int64)
    if _use_cache(g, spec, cache_budget):
        rows = _build_cached_rows(g, spec, arc_states=spec.has_memory)
        if spec.has_memory:
            out_indptr, out_indices = g.out_csr()
            _engine.fpt_batch_cached_arc(out_indptr, out_indices, *rows,
                                         pairs_a, pairs_z, seeds,
                                         max_steps, out)
        else:
            _engine.fpt_batch_cached_node(*rows, pairs_a, pairs_z, seeds,
                                          max_steps, out)
    else:
        arrays = _engine_arrays(g, spec)
        _engine.fpt_batch_uncached(*arrays, _engine.KIND_IDS[spec.kind],
                                   spec.alpha, spec.beta, pairs_a, pairs_z,
                                   seeds, max_steps, out)
    stuck = out <= _engine.DEAD_END
    if stuck.any():
        raise DeadEndError(int(-out[stuck][0] + _engine.DEAD_END))
    return out


def sample_first_passages(g: Graph, strat: StrategySpec, pairs_a, pairs_z,
                          master_seed: int, max_steps: int,
                          trajectory_indices=None,
                          cache_budget: int = DEFAULT_ARC_BUDGET) -> np.ndarray:
    """First-passage steps for explicit (start, target) pairs, -1 censored.

    Each trajectory i uses the stream derived from (master_seed,
    trajectory_indices[i]), so any subset can be recomputed in isolation.
    """
    pairs_a = np.asarray(pairs_a, dtype=np.int64)
    pairs_z = np.asarray(pairs_z, dtype=np.int64)
    if trajectory_indices is None:
        trajectory_indices = np.arange(len(pairs_a))
    seeds = _engine.trajectory_seeds(master_seed, trajectory_indices)
    return _run_batch(g, strat, pairs_a, pairs_z, seeds, max_steps,
                      cache_budget)


def _master_seed(cfg: SimConfig, rng) -> int:
    if rng is None:
        return cfg.seed
    if isinstance(rng, (int, np.integer)):
        return int(rng)
    if isinstance(rng, np.random.Generator):
        return int(rng.integers(0, 2 ** 63))
    raise TypeError("rng must be None, an integer seed, or a numpy Generator")


def estimate_grmfpt(g: Graph, strat: StrategySpec, cfg: SimConfig,
                    rng: Union[None, int, np.random.Generator] = None) -> MfptReport:
    """Monte Carlo MFPT aggregation following the configured protocol.

    all-pairs: every ordered pair, cfg.repetitions trajectories each,
    averaged into the per-pair matrix, then per-target means and their
    grand mean. sampled-pairs: uniform ordered pairs with replacement;
    the mean first-passage time over sampled pairs estimates the same
    grand mean, reported with its standard error.

    Censored trajectories are counted and excluded; more than 1% censored
    (or a pair with no surviving repetition) aborts with an error.
    """
    if not is_connected(g):
        raise DisconnectedGraphError(
            "simulation requires a connected graph "
            "(strongly connected if directed)")
    master = _master_seed(cfg, rng)
    max_steps = cfg.max_steps if cfg.max_steps is not None else default_max_steps(g)
    n = g.n
    if cfg.mode == "all-pairs":
        reps = cfg.repetitions
        zz, aa = np.divmod(np.arange(n * n, dtype=np.int64), n)
        valid = aa != zz
        zz, aa = zz[valid], aa[valid]
        pairs_a = np.repeat(aa, reps)
        pairs_z = np.repeat(zz, reps)
        # trajectory index (z, a, rep) -> (z*n + a)*reps + rep
        base = (pairs_z * n + pairs_a) * reps
        indices = base + np.tile(np.arange(reps, dtype=np.int64),
                                 len(zz))
        steps = sample_first_passages(g, strat, pairs_a, pairs_z, master,
                                      max_steps, indices,
                                      cfg.kernel_cache_budget)
        censored = int((steps < 0).sum())
        total = len(steps)
        _check_censoring(censored, total, max_steps)
        ok = (steps > 0).reshape(-1, reps)
        per_pair_counts = ok.sum(axis=1)
        if np.any(per_pair_counts == 0):
            raise CensoringError(
                "a start-target pair lost all its repetitions to the step "
                f"cap {max_steps}; increase max_steps")
        sums = np.where(ok, steps.reshape(-1, reps), 0).sum(axis=1)
        pair_means = sums / per_pair_counts
        matrix = np.zeros((n, n))
        matrix[aa, zz] = pair_means
        g_vec = matrix.sum(axis=0) / (n - 1)
        return MfptReport(
            strategy=strat.label, method="simulated", n_nodes=n,
            grmfpt=float(g_vec.mean()), gmfpt_per_target=g_vec,
            mfpt_matrix=matrix, repetitions=reps,
            total_trajectories=total, censored=censored, seed=master)
    # sampled-pairs: pair choice from a PCG stream, trajectories from the
    # counter scheme, both derived from the master seed alone
    pair_rng = np.random.default_rng(master)
    pairs_a = pair_rng.integers(0, n, size=cfg.n_pairs)
    pairs_z = pair_rng.integers(0, n, size=cfg.n_pairs)
    clash = pairs_a == pairs_z
    while clash.any():
        pairs_z[clash] = pair_rng.integers(0, n, size=int(clash.sum()))
        clash = pairs_a == pairs_z
    steps = sample_first_passages(g, strat, pairs_a, pairs_z, master,
                                  max_steps, np.arange(cfg.n_pairs),
                                  cfg.kernel_cache_budget)
    censored = int((steps < 0).sum())
    _check_censoring(censored, len(steps), max_steps)
    kept = steps[steps > 0].astype(np.float64)
    se = float(kept.std(ddof=1) / np.sqrt(len(kept))) if len(kept) > 1 else None
    return MfptReport(
        strategy=strat.label, method="simulated", n_nodes=n,
        grmfpt=float(kept.mean()), pairs_sampled=cfg.n_pairs,
        total_trajectories=len(steps), censored=censored,
        standard_error=se, seed=master)


def _check_censoring(censored: int, total: int, max_steps: int) -> None:
    if censored > _CENSOR_FRACTION * total:
        raise CensoringError(
            f"{censored} of {total} trajectories exceeded the step cap "
            f"{max_steps} (> {_CENSOR_FRACTION:.0%}); increase max_steps")


def empirical_occupation(g: Graph, strat: StrategySpec, burn_in: int,
                         samples: int, rng) -> OccupationDistribution:
    """Visit-frequency histogram along one long trajectory.

    The start node comes from the first draw of trajectory stream 0; the
    walk itself runs on trajectory stream 1.
    """
    if not is_connected(g):
        raise DisconnectedGraphError(
            "occupation sampling requires a connected graph")
    master = _master_seed(SimConfig(seed=0), rng)
    u = SplitMix64.for_trajectory(master, 0).random()
    start = min(int(u * g.n), g.n - 1)
    seed = _engine.trajectory_seeds(master, [1])[0]
    arrays = _engine_arrays(g, strat)
    counts = _engine.occupation_counts(
        *arrays, _engine.KIND_IDS[strat.kind], strat.alpha, strat.beta,
        start, burn_in, samples, seed)
    total = int(counts.sum())
    if total < samples:
        raise DeadEndError(start)
    return OccupationDistribution(counts / total, strategy=strat.label)
