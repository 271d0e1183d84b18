"""Mean first passage times for random walks with one-step memory.

Seven walk strategies (uniform and inverse-degree memoryless walks, plus
forward, inverse-degree, two-hop, persistent, and persistent inverse-degree
one-step-memory walks) on generated or real networks, with an exact
absorbing-chain solver, a reproducible Monte Carlo simulator, stationary
occupation analysis, and sweep/benchmark experiment runners.
"""

from .errors import (ArcBudgetError, CensoringError, ChecksumMismatchError,
                     DatasetMissingError, DeadEndError,
                     DisconnectedGraphError, EdgeListParseError,
                     EmptyGraphError, ExperimentError, GenerationError,
                     ReducibleChainError, SolverResidualError,
                     StrategyUsageError, UnreachableTargetError,
                     WalkmemError)
from .graph import (EdgeListLoad, GeneratorSpec, Graph, NetworkStats,
                    generate, is_connected, largest_component,
                    load_edge_list, network_stats)
from .strategies import (DEFAULT_ALPHA, DEFAULT_BETA, MEMORYLESS_KINDS,
                         STRATEGY_KINDS, StrategySpec,
                         TransitionDistribution, forward_memory_kernel,
                         inverse_degree_kernel, inverse_degree_memory_kernel,
                         make_kernel, memoryless_distribution,
                         parse_strategy, persistent_inverse_degree_kernel,
                         persistent_kernel, two_hop_memory_kernel,
                         uniform_kernel)
from .exact import (DEFAULT_ARC_BUDGET, ArcChain, NodeChain,
                    OccupationDistribution, arc_budget_check,
                    build_arc_chain, build_chain, build_lifted_arc_chain,
                    build_node_chain, compute_mfpt_report, gmfpt, grmfpt,
                    kl_from_uniform, mean_time_to_absorption, mfpt,
                    stationary_occupation)
from .report import MfptReport
from .simulate import (SimConfig, SplitMix64, WalkState, default_max_steps,
                       empirical_occupation, estimate_grmfpt,
                       first_passage_time, sample_first_passages, step)
from .datasets import (DatasetLoad, DatasetSpec, REGISTRY, available,
                       file_sha256, load_dataset, locate, verify_checksum)
from .experiments import (ExperimentConfig, SweepResult, SweepRow,
                          derive_seed, real_network_rows, rows_from_csv_text,
                          run_degree_sweep, run_kl_sweep, run_real_table,
                          run_single, run_ws_rewire_sweep)

__version__ = "0.1.0"

__all__ = [
    "ArcBudgetError", "ArcChain", "CensoringError", "ChecksumMismatchError",
    "DEFAULT_ALPHA", "DEFAULT_ARC_BUDGET", "DEFAULT_BETA", "DatasetLoad",
    "DatasetMissingError", "DatasetSpec", "DeadEndError",
    "DisconnectedGraphError", "EdgeListLoad", "EdgeListParseError",
    "EmptyGraphError", "ExperimentConfig", "ExperimentError",
    "GenerationError", "GeneratorSpec", "Graph", "MEMORYLESS_KINDS",
    "MfptReport", "NetworkStats", "NodeChain", "OccupationDistribution",
    "REGISTRY", "ReducibleChainError", "STRATEGY_KINDS", "SimConfig",
    "SolverResidualError", "SplitMix64", "StrategySpec",
    "StrategyUsageError", "SweepResult", "SweepRow",
    "TransitionDistribution", "UnreachableTargetError", "WalkState",
    "WalkmemError", "arc_budget_check", "available", "build_arc_chain",
    "build_chain", "build_lifted_arc_chain", "build_node_chain",
    "compute_mfpt_report", "default_max_steps", "derive_seed",
    "empirical_occupation", "estimate_grmfpt", "file_sha256",
    "first_passage_time", "forward_memory_kernel", "generate", "gmfpt",
    "grmfpt", "inverse_degree_kernel", "inverse_degree_memory_kernel",
    "is_connected", "kl_from_uniform", "largest_component", "load_dataset",
    "load_edge_list", "locate", "make_kernel", "mean_time_to_absorption",
    "memoryless_distribution", "mfpt", "network_stats", "parse_strategy",
    "persistent_inverse_degree_kernel", "persistent_kernel",
    "real_network_rows", "rows_from_csv_text", "run_degree_sweep",
    "run_kl_sweep", "run_real_table", "run_single", "run_ws_rewire_sweep",
    "sample_first_passages", "stationary_occupation", "step",
    "two_hop_memory_kernel", "uniform_kernel", "verify_checksum",
]
