"""Command-line interface.

Subcommands: sweep (degree / KL / WS-rewiring sweeps over generated
networks), real (benchmark table on dataset files), stats (summary
statistics of an edge list), single (one network, one strategy, full
report). Success exits 0; failures exit nonzero with a one-line JSON
object on stderr carrying an error code and message.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import WalkmemError
from .exact import DEFAULT_ARC_BUDGET
from .experiments import (ExperimentConfig, SweepResult, real_network_rows,
                          run_degree_sweep, run_kl_sweep, run_real_table,
                          run_single, run_ws_rewire_sweep)
from .graph import (GeneratorSpec, largest_component, load_edge_list,
                    network_stats)
from .simulate import SimConfig
from .strategies import STRATEGY_KINDS, parse_strategy


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _parse_grid(text: str) -> tuple[float, ...]:
    """Inclusive start:stop:step range, or a comma-separated list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise _UsageError(f"grid {text!r} is not start:stop:step")
        start, stop, step = (float(p) for p in parts)
        if step <= 0 or stop < start:
            raise _UsageError(f"grid {text!r} must ascend with positive step")
        values = np.arange(start, stop + step / 2, step)
        return tuple(float(v) for v in np.round(values, 10))
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise _UsageError(f"bad grid value in {text!r}: {exc}") from exc


def _split_strategies(text: str) -> list[str]:
    """Split a comma list while respecting parentheses in parameters."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def _parse_strategies(text: str):
    return tuple(parse_strategy(p) for p in _split_strategies(text))


def _build_parser() -> _Parser:
    parser = _Parser(prog="walkmem",
                     description="Mean first passage times of memory-biased "
                                 "random walks on networks.")
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="parameter sweeps over generated "
                                         "networks")
    sweep.add_argument("--family", default="ba,ws,er,er-directed",
                       help="comma list of ba, ws, er, er-directed")
    sweep.add_argument("--n", type=int, default=100)
    sweep.add_argument("--kgrid", default="2:20:2",
                       help="average-degree grid, start:stop:step or list")
    sweep.add_argument("--pgrid", default=None,
                       help="WS rewiring-probability grid; selects the "
                            "rewiring sweep")
    sweep.add_argument("--metric", choices=("grmfpt", "kl"),
                       default="grmfpt")
    sweep.add_argument("--ws-k", default="4,6",
                       help="ring degrees for the rewiring sweep")
    sweep.add_argument("--ws-prew", type=float, default=0.2,
                       help="WS rewiring probability in degree/KL sweeps")
    sweep.add_argument("--strategies", default=",".join(STRATEGY_KINDS))
    sweep.add_argument("--instances", type=int, default=10)
    sweep.add_argument("--method", choices=("exact", "simulate", "both"),
                       default="both")
    sweep.add_argument("--reps", type=int, default=10,
                       help="all-pairs repetitions per simulated estimate")
    sweep.add_argument("--max-steps", type=int, default=None)
    sweep.add_argument("--arc-budget", type=int, default=DEFAULT_ARC_BUDGET)
    sweep.add_argument("--seed", type=int, default=42)
    sweep.add_argument("--out", default=None)

    real = sub.add_parser("real", help="benchmark table on real networks")
    src = real.add_mutually_exclusive_group(required=True)
    src.add_argument("--edges", default=None,
                     help="edge-list file (reduced to its largest "
                          "component)")
    src.add_argument("--dataset", default=None,
                     help="comma list of registered dataset keys, or 'all'")
    real.add_argument("--directed", action="store_true")
    real.add_argument("--name", default=None,
                      help="network name for --edges rows")
    real.add_argument("--data-dir", default=None)
    real.add_argument("--strategies", default=",".join(STRATEGY_KINDS))
    real.add_argument("--method", choices=("auto", "exact", "simulate",
                                           "both"), default="auto")
    real.add_argument("--pairs", type=int, default=100_000,
                      help="sampled start-target pairs per estimate")
    real.add_argument("--max-steps", type=int, default=None)
    real.add_argument("--arc-budget", type=int, default=DEFAULT_ARC_BUDGET)
    real.add_argument("--seed", type=int, default=42)
    real.add_argument("--out", default=None)

    stats = sub.add_parser("stats", help="summary statistics of an edge "
                                         "list")
    stats.add_argument("--edges", required=True)
    stats.add_argument("--directed", action="store_true")
    stats.add_argument("--name", default=None)
    stats.add_argument("--out", default=None)

    single = sub.add_parser("single", help="one network, one strategy, "
                                           "full report")
    net = single.add_mutually_exclusive_group(required=True)
    net.add_argument("--edges", default=None)
    net.add_argument("--generate", default=None, metavar="FAMILY",
                     choices=("ba", "ws", "er", "er-directed"))
    single.add_argument("--directed", action="store_true")
    single.add_argument("--n", type=int, default=100)
    single.add_argument("--m", type=int, default=None, help="BA attachment")
    single.add_argument("--ring-k", type=int, default=None, help="WS ring "
                                                                 "degree")
    single.add_argument("--prew", type=float, default=None,
                        help="WS rewiring probability")
    single.add_argument("--avg-degree", type=float, default=None,
                        help="ER target average degree")
    single.add_argument("--net-seed", type=int, default=0)
    single.add_argument("--strategy", required=True)
    single.add_argument("--method", choices=("auto", "exact", "simulate",
                                             "both"), default="exact")
    single.add_argument("--mode", choices=("all-pairs", "sampled-pairs"),
                        default="all-pairs")
    single.add_argument("--reps", type=int, default=10)
    single.add_argument("--pairs", type=int, default=100_000)
    single.add_argument("--max-steps", type=int, default=None)
    single.add_argument("--arc-budget", type=int, default=DEFAULT_ARC_BUDGET)
    single.add_argument("--matrix", action="store_true",
                        help="include the per-pair matrix in JSON output")
    single.add_argument("--seed", type=int, default=42)
    single.add_argument("--out", default=None)
    return parser


def _write_sweep(result: SweepResult, out: Optional[str]) -> None:
    """CSV to stdout, or CSV + JSON manifest next to the requested path."""
    if out is None:
        sys.stdout.write(result.to_csv_text())
        return
    path = Path(out)
    if path.suffix == ".json":
        path.write_text(result.to_json())
        return
    path.write_text(result.to_csv_text())
    path.with_suffix(".json").write_text(result.to_json())


def _write_text(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _cmd_sweep(args) -> int:
    families = tuple(f.strip() for f in args.family.split(",") if f.strip())
    sim = SimConfig(mode="all-pairs", repetitions=args.reps,
                    max_steps=args.max_steps)
    common = dict(families=families, n=args.n,
                  strategies=_parse_strategies(args.strategies),
                  instances=args.instances, method=args.method, sim=sim,
                  ws_p_rew=args.ws_prew, arc_budget=args.arc_budget,
                  seed=args.seed, out=args.out)
    if args.pgrid is not None:
        if args.metric == "kl":
            raise _UsageError("KL sweeps run over --kgrid, not --pgrid")
        cfg = ExperimentConfig(
            kind="ws-rewire-sweep", p_grid=_parse_grid(args.pgrid),
            ws_k_values=tuple(int(k) for k in _parse_grid(args.ws_k)),
            **common)
        result = run_ws_rewire_sweep(cfg)
    elif args.metric == "kl":
        cfg = ExperimentConfig(kind="kl-sweep",
                               k_grid=_parse_grid(args.kgrid), **common)
        result = run_kl_sweep(cfg)
    else:
        cfg = ExperimentConfig(kind="degree-sweep",
                               k_grid=_parse_grid(args.kgrid), **common)
        result = run_degree_sweep(cfg)
    _write_sweep(result, args.out)
    return 0


def _cmd_real(args) -> int:
    sim = SimConfig(mode="sampled-pairs", n_pairs=args.pairs,
                    max_steps=args.max_steps)
    common = dict(strategies=_parse_strategies(args.strategies),
                  method=args.method, sim=sim, arc_budget=args.arc_budget,
                  data_dir=args.data_dir, seed=args.seed, out=args.out)
    if args.dataset is not None:
        cfg = ExperimentConfig(kind="real-table", **common)
        if args.dataset != "all":
            keys = tuple(k.strip() for k in args.dataset.split(","))
            cfg = ExperimentConfig(kind="real-table",
                                   **{**common, "datasets": keys})
        result = run_real_table(cfg)
    else:
        cfg = ExperimentConfig(kind="real-table", **common)
        name = args.name or Path(args.edges).stem
        with open(args.edges) as fh:
            loaded = load_edge_list(fh.read(), directed=args.directed)
        g = largest_component(loaded.graph)
        result = SweepResult(
            kind="real-table", seed=cfg.seed, config=cfg.to_json_dict(),
            rows=tuple(real_network_rows(cfg, name, g)),
            stats={name: network_stats(g, name=name)})
    _write_sweep(result, args.out)
    return 0


def _cmd_stats(args) -> int:
    with open(args.edges) as fh:
        loaded = load_edge_list(fh.read(), directed=args.directed)
    g = largest_component(loaded.graph)
    stats = network_stats(g, name=args.name or Path(args.edges).stem)
    payload = stats.to_json_dict()
    payload["raw_nodes"] = loaded.graph.n
    payload["raw_links"] = loaded.graph.num_edges
    payload["dropped_entries"] = loaded.dropped
    _write_text(json.dumps(payload, indent=2) + "\n", args.out)
    return 0


def _generator_spec(args) -> GeneratorSpec:
    return GeneratorSpec(family=args.generate, n=args.n, m=args.m,
                         ws_k=args.ring_k, p_rew=args.prew,
                         avg_degree=args.avg_degree, seed=args.net_seed)


def _cmd_single(args) -> int:
    sim = SimConfig(mode=args.mode, repetitions=args.reps,
                    n_pairs=args.pairs, max_steps=args.max_steps)
    cfg = ExperimentConfig(
        kind="single",
        strategies=(parse_strategy(args.strategy),),
        method=args.method, sim=sim, arc_budget=args.arc_budget,
        spec=None if args.generate is None else _generator_spec(args),
        edges_path=args.edges, directed=args.directed, seed=args.seed,
        out=args.out)
    reports = run_single(cfg)
    payload = [r.to_json_dict(include_matrix=args.matrix) for r in reports]
    _write_text(json.dumps(payload, indent=2) + "\n", args.out)
    return 0


_COMMANDS = {"sweep": _cmd_sweep, "real": _cmd_real, "stats": _cmd_stats,
             "single": _cmd_single}


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        _emit_error("usage", str(exc))
        return 2
    except (WalkmemError, ValueError) as exc:
        _emit_error(getattr(exc, "code", "error"), str(exc))
        return 1
    except OSError as exc:
        _emit_error("io-error", str(exc))
        return 1


def _emit_error(code: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": code, "message": message}) + "\n")


if __name__ == "__main__":
    sys.exit(main())
