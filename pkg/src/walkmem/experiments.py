"""Experiment runners: parameter sweeps over generated networks and the
real-network benchmark table.

Every cell of a sweep is identified by explicit coordinates (family,
parameter value, instance, strategy, method) and all randomness is derived
from the master seed and those coordinates through a keyed hash, so any
single row can be recomputed in isolation. Results are long-format rows
(one per cell and method) that serialize to CSV and to a JSON manifest
carrying the full configuration.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .datasets import REGISTRY, load_dataset
from .errors import ExperimentError, ReducibleChainError, WalkmemError
from .exact import (DEFAULT_ARC_BUDGET, build_chain, compute_mfpt_report,
                    kl_from_uniform, stationary_occupation)
from .graph import (GeneratorSpec, Graph, NetworkStats, generate,
                    largest_component, load_edge_list, network_stats)
from .report import MfptReport
from .simulate import SimConfig, estimate_grmfpt
from .strategies import STRATEGY_KINDS, StrategySpec

EXPERIMENT_KINDS = ("degree-sweep", "kl-sweep", "ws-rewire-sweep",
                    "real-table", "single")
_METHODS = ("exact", "simulate", "both", "auto")
GENERATED_FAMILIES = ("ba", "ws", "er", "er-directed")
DEFAULT_K_GRID = (2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0, 18.0, 20.0)
DEFAULT_P_GRID = (0.0, 0.05, 0.1, 0.2, 0.4, 0.6, 0.8, 1.0)
DEFAULT_STRATEGIES = tuple(StrategySpec(kind=k) for k in STRATEGY_KINDS)

_CSV_COLUMNS = ("family", "parameter", "value", "strategy", "method",
                "metric", "mean", "std", "instances", "error")


def derive_seed(master: int, *parts) -> int:
    """Deterministic 63-bit seed for the cell named by (master, parts).

    Hashes the unit-separated decimal/string forms with blake2b, so streams
    for different coordinates never collide by construction of the hash.
    """
    text = "\x1f".join(str(p) for p in (master, *parts))
    digest = hashlib.blake2b(text.encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big") >> 1


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a sweep needs: grids, strategies, instance count, method
    selection, simulation protocol, and the master seed."""

    kind: str
    families: tuple[str, ...] = GENERATED_FAMILIES
    n: int = 100
    k_grid: tuple[float, ...] = DEFAULT_K_GRID
    p_grid: tuple[float, ...] = DEFAULT_P_GRID
    ws_k_values: tuple[int, ...] = (4, 6)
    ws_p_rew: float = 0.2
    strategies: tuple[StrategySpec, ...] = DEFAULT_STRATEGIES
    instances: int = 10
    method: str = "both"
    sim: SimConfig = field(default_factory=SimConfig)
    datasets: tuple[str, ...] = tuple(REGISTRY)
    data_dir: Optional[str] = None
    spec: Optional[GeneratorSpec] = None
    edges_path: Optional[str] = None
    directed: bool = False
    arc_budget: int = DEFAULT_ARC_BUDGET
    seed: int = 0
    out: Optional[str] = None

    def __post_init__(self):
        if self.kind not in EXPERIMENT_KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}")
        if self.method not in _METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if not self.k_grid or not self.p_grid:
            raise ValueError("parameter grids must be nonempty")
        if self.instances < 1:
            raise ValueError("instances must be at least 1")
        if not self.strategies:
            raise ValueError("at least one strategy is required")
        if not self.families:
            raise ValueError("at least one family is required")

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "families": list(self.families),
            "n": self.n,
            "k_grid": list(self.k_grid),
            "p_grid": list(self.p_grid),
            "ws_k_values": list(self.ws_k_values),
            "ws_p_rew": self.ws_p_rew,
            "strategies": [s.label for s in self.strategies],
            "instances": self.instances,
            "method": self.method,
            "sim": {
                "mode": self.sim.mode,
                "repetitions": self.sim.repetitions,
                "n_pairs": self.sim.n_pairs,
                "max_steps": self.sim.max_steps,
                "seed": self.sim.seed,
            },
            "datasets": list(self.datasets),
            "data_dir": self.data_dir,
            "spec": None if self.spec is None else {
                "family": self.spec.family, "n": self.spec.n,
                "m": self.spec.m, "ws_k": self.spec.ws_k,
                "p_rew": self.spec.p_rew,
                "avg_degree": self.spec.avg_degree, "seed": self.spec.seed,
            },
            "edges_path": self.edges_path,
            "directed": self.directed,
            "arc_budget": self.arc_budget,
            "seed": self.seed,
            "out": self.out,
        }


@dataclass(frozen=True)
class SweepRow:
    """One aggregated cell: a (network, parameter value, strategy, method)
    combination with its mean metric and dispersion across instances."""

    family: str
    parameter: str
    value: Optional[float]
    strategy: str
    method: str
    metric: str
    mean: Optional[float]
    std: Optional[float]
    instances: int
    error: Optional[str] = None


@dataclass(frozen=True)
class SweepResult:
    """Rows of a finished sweep plus the configuration that produced them."""

    kind: str
    seed: int
    config: dict
    rows: tuple[SweepRow, ...]
    stats: dict[str, NetworkStats] = field(default_factory=dict)

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(_CSV_COLUMNS)
        for row in self.rows:
            writer.writerow([
                row.family, row.parameter, _cell(row.value), row.strategy,
                row.method, row.metric, _cell(row.mean), _cell(row.std),
                row.instances, row.error if row.error is not None else "",
            ])
        return buf.getvalue()

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "seed": self.seed,
            "config": self.config,
            "rows": [{
                "family": r.family, "parameter": r.parameter,
                "value": r.value, "strategy": r.strategy,
                "method": r.method, "metric": r.metric, "mean": r.mean,
                "std": r.std, "instances": r.instances, "error": r.error,
            } for r in self.rows],
            "stats": {k: s.to_json_dict() for k, s in self.stats.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    @classmethod
    def from_json_dict(cls, data: dict) -> "SweepResult":
        rows = tuple(SweepRow(**r) for r in data["rows"])
        stats = {k: NetworkStats(
            name=s["name"], node_count=s["nodes"], link_count=s["links"],
            density=s["density"], avg_degree=s["avg_degree"],
            avg_clustering=s["avg_clustering"],
            avg_path_length=s["avg_path_length"], diameter=s["diameter"])
            for k, s in data.get("stats", {}).items()}
        return cls(kind=data["kind"], seed=data["seed"],
                   config=data.get("config", {}), rows=rows, stats=stats)


def _cell(x: Optional[float]) -> str:
    return "" if x is None else repr(x)


def rows_from_csv_text(text: str) -> tuple[SweepRow, ...]:
    """Parse rows written by SweepResult.to_csv_text, losslessly."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != _CSV_COLUMNS:
        raise ValueError(f"unexpected CSV header {header}")
    rows = []
    for rec in reader:
        if not rec:
            continue
        rows.append(SweepRow(
            family=rec[0], parameter=rec[1],
            value=float(rec[2]) if rec[2] else None,
            strategy=rec[3], method=rec[4], metric=rec[5],
            mean=float(rec[6]) if rec[6] else None,
            std=float(rec[7]) if rec[7] else None,
            instances=int(rec[8]),
            error=rec[9] if rec[9] else None))
    return tuple(rows)


# -- generated-network cells -----------------------------------------------

def _family_spec(family: str, n: int, k: float, ws_p_rew: float,
                 seed: int) -> GeneratorSpec:
    if family == "ba":
        return GeneratorSpec(family="ba", n=n, m=max(1, round(k / 2)),
                             seed=seed)
    if family == "ws":
        return GeneratorSpec(family="ws", n=n, ws_k=int(k), p_rew=ws_p_rew,
                             seed=seed)
    if family in ("er", "er-directed"):
        return GeneratorSpec(family=family, n=n, avg_degree=float(k),
                             seed=seed)
    raise ValueError(f"unknown family {family!r}")


def _instance_graph(cfg: ExperimentConfig, family: str, value: float,
                    instance: int) -> Graph:
    seed = derive_seed(cfg.seed, "net", family, repr(float(value)), instance)
    if family.startswith("ws-k"):
        spec = GeneratorSpec(family="ws", n=cfg.n,
                             ws_k=int(family.removeprefix("ws-k")),
                             p_rew=float(value), seed=seed)
    else:
        spec = _family_spec(family, cfg.n, value, cfg.ws_p_rew, seed)
    return generate(spec)


def _cell_grmfpt(cfg: ExperimentConfig, family: str, value: float,
                 strategy: StrategySpec, method: str, instance: int,
                 g: Graph) -> float:
    if method == "simulated":
        sim_seed = derive_seed(cfg.seed, "sim", family, repr(float(value)),
                               instance, strategy.label)
        return estimate_grmfpt(g, strategy, cfg.sim, rng=sim_seed).grmfpt
    return compute_mfpt_report(
        g, strategy, arc_budget=cfg.arc_budget, include_matrix=False).grmfpt


def _aggregate(cfg: ExperimentConfig, family: str, parameter: str,
               value: float, strategy: StrategySpec, method: str,
               metric: str) -> SweepRow:
    """Mean/std of one metric over the configured instances."""
    method = "simulated" if method in ("simulate", "simulated") else "exact"
    samples = []
    for i in range(cfg.instances):
        try:
            g = _instance_graph(cfg, family, value, i)
            if metric == "grmfpt":
                samples.append(_cell_grmfpt(cfg, family, value, strategy,
                                            method, i, g))
            else:
                chain = build_chain(g, strategy, cfg.arc_budget)
                samples.append(kl_from_uniform(stationary_occupation(chain)))
        except ReducibleChainError as exc:
            if metric != "kl-divergence":
                raise
            return SweepRow(family=family, parameter=parameter,
                            value=float(value), strategy=strategy.label,
                            method=method, metric=metric, mean=None,
                            std=None, instances=cfg.instances,
                            error=str(exc))
        except WalkmemError as exc:
            raise ExperimentError(
                f"{type(exc).__name__} in cell family={family} "
                f"{parameter}={value:g} instance={i} strategy="
                f"{strategy.label} method={method}: {exc}") from exc
    mean = float(np.mean(samples))
    std = float(np.std(samples, ddof=1)) if len(samples) > 1 else 0.0
    return SweepRow(family=family, parameter=parameter, value=float(value),
                    strategy=strategy.label, method=method, metric=metric,
                    mean=mean, std=std, instances=cfg.instances)


def degree_cell(cfg: ExperimentConfig, family: str, k: float,
                strategy: StrategySpec, method: str) -> SweepRow:
    """One degree-sweep row, recomputable from its coordinates alone."""
    return _aggregate(cfg, family, "avg-degree", k, strategy, method,
                      "grmfpt")


def kl_cell(cfg: ExperimentConfig, family: str, k: float,
            strategy: StrategySpec) -> SweepRow:
    """One KL-sweep row; reducible chains mark the cell invalid."""
    return _aggregate(cfg, family, "avg-degree", k, strategy, "exact",
                      "kl-divergence")


def rewire_cell(cfg: ExperimentConfig, ws_k: int, p_rew: float,
                strategy: StrategySpec, method: str) -> SweepRow:
    """One rewiring-sweep row for the WS ring of degree ws_k."""
    return _aggregate(cfg, f"ws-k{ws_k}", "p-rew", p_rew, strategy, method,
                      "grmfpt")


def _sweep_methods(cfg: ExperimentConfig) -> tuple[str, ...]:
    if cfg.method in ("both", "auto"):
        return ("exact", "simulate")
    return (cfg.method,)


def run_degree_sweep(cfg: ExperimentConfig) -> SweepResult:
    """GrMFPT versus average degree for each family and strategy.

    WS networks use the configured rewiring probability (0.2 by default);
    the same instance graphs are shared by every strategy and method at a
    grid point because their seeds depend only on (family, value, index).
    """
    _require_kind(cfg, "degree-sweep")
    rows = [degree_cell(cfg, family, k, strategy, method)
            for family in cfg.families
            for k in cfg.k_grid
            for strategy in cfg.strategies
            for method in _sweep_methods(cfg)]
    return _result(cfg, rows)


def run_kl_sweep(cfg: ExperimentConfig) -> SweepResult:
    """Stationary-occupation KL divergence from uniform versus average
    degree. Always computed from the exact stationary solve; cells whose
    chain is reducible are reported with an error instead of a value."""
    _require_kind(cfg, "kl-sweep")
    rows = [kl_cell(cfg, family, k, strategy)
            for family in cfg.families
            for k in cfg.k_grid
            for strategy in cfg.strategies]
    return _result(cfg, rows)


def run_ws_rewire_sweep(cfg: ExperimentConfig) -> SweepResult:
    """GrMFPT versus WS rewiring probability at each configured ring
    degree."""
    _require_kind(cfg, "ws-rewire-sweep")
    rows = [rewire_cell(cfg, ws_k, p, strategy, method)
            for ws_k in cfg.ws_k_values
            for p in cfg.p_grid
            for strategy in cfg.strategies
            for method in _sweep_methods(cfg)]
    return _result(cfg, rows)


# -- real networks -----------------------------------------------------------

def _real_methods(cfg: ExperimentConfig, g: Graph) -> tuple[str, ...]:
    if cfg.method == "exact":
        return ("exact",)
    if cfg.method == "simulate":
        return ("simulate",)
    if g.num_arcs <= cfg.arc_budget:
        return ("exact", "simulate")
    return ("simulate",)


def real_network_rows(cfg: ExperimentConfig, name: str,
                      g: Graph) -> list[SweepRow]:
    """Table rows for one named network under the configured methods."""
    sim_cfg = replace(cfg.sim, mode="sampled-pairs")
    rows = []
    for strategy in cfg.strategies:
        for method in _real_methods(cfg, g):
            try:
                if method == "exact":
                    value = compute_mfpt_report(
                        g, strategy, arc_budget=cfg.arc_budget,
                        include_matrix=False).grmfpt
                    std = 0.0
                else:
                    rep = estimate_grmfpt(
                        g, strategy, sim_cfg,
                        rng=derive_seed(cfg.seed, "real", name,
                                        strategy.label))
                    value, std = rep.grmfpt, rep.standard_error
            except WalkmemError as exc:
                raise ExperimentError(
                    f"{type(exc).__name__} on network {name} strategy="
                    f"{strategy.label} method={method}: {exc}") from exc
            rows.append(SweepRow(
                family=name, parameter="dataset", value=None,
                strategy=strategy.label,
                method="exact" if method == "exact" else "simulated",
                metric="grmfpt", mean=value, std=std, instances=1))
    return rows


def run_real_table(cfg: ExperimentConfig) -> SweepResult:
    """GrMFPT per (network, strategy) on the registered benchmark files.

    Per network: the exact solver runs when the arc-state count fits the
    budget, and a sampled-pairs Monte Carlo estimate always runs (the
    simulated std column holds its standard error). Per-network summary
    statistics are attached to the result.
    """
    _require_kind(cfg, "real-table")
    rows: list[SweepRow] = []
    stats: dict[str, NetworkStats] = {}
    for key in cfg.datasets:
        g = load_dataset(key, cfg.data_dir).graph
        stats[key] = network_stats(g, name=key)
        rows.extend(real_network_rows(cfg, key, g))
    return _result(cfg, rows, stats)


def run_single(cfg: ExperimentConfig) -> list[MfptReport]:
    """Full MFPT report(s) for one network and one strategy.

    The network is either generated from cfg.spec or loaded from
    cfg.edges_path (reduced to its largest component). Returns one report
    per selected method; "auto" solves exactly only within the arc budget.
    """
    _require_kind(cfg, "single")
    if len(cfg.strategies) != 1:
        raise ValueError("single runs take exactly one strategy")
    strategy = cfg.strategies[0]
    g = _single_graph(cfg)
    if cfg.method in ("both", "auto"):
        methods = _real_methods(cfg, g) if cfg.method == "auto" \
            else ("exact", "simulate")
    else:
        methods = (cfg.method,)
    reports = []
    for method in methods:
        if method == "exact":
            reports.append(compute_mfpt_report(
                g, strategy, arc_budget=cfg.arc_budget))
        else:
            reports.append(estimate_grmfpt(
                g, strategy, cfg.sim,
                rng=derive_seed(cfg.seed, "single", strategy.label)))
    return reports


def _single_graph(cfg: ExperimentConfig) -> Graph:
    if (cfg.spec is None) == (cfg.edges_path is None):
        raise ValueError(
            "single runs need exactly one of a generator spec or an "
            "edge-list path")
    if cfg.spec is not None:
        return generate(cfg.spec)
    with open(cfg.edges_path) as fh:
        loaded = load_edge_list(fh.read(), directed=cfg.directed)
    return largest_component(loaded.graph)


def _require_kind(cfg: ExperimentConfig, kind: str) -> None:
    if cfg.kind != kind:
        raise ValueError(f"config kind is {cfg.kind!r}, expected {kind!r}")


def _result(cfg: ExperimentConfig, rows,
            stats: Optional[dict] = None) -> SweepResult:
    return SweepResult(kind=cfg.kind, seed=cfg.seed,
                       config=cfg.to_json_dict(), rows=tuple(rows),
                       stats=stats or {})
