"""Sweep runners: seed derivation, row contracts, serialization
round-trips, and per-row reproducibility from coordinates."""

import dataclasses

import numpy as np
import pytest

from walkmem.datasets import REGISTRY, DatasetSpec
from walkmem.errors import ExperimentError
from walkmem.exact import compute_mfpt_report
from walkmem.experiments import (DEFAULT_STRATEGIES, ExperimentConfig,
                                 SweepResult, SweepRow, degree_cell,
                                 derive_seed, kl_cell, real_network_rows,
                                 rewire_cell, rows_from_csv_text,
                                 run_degree_sweep, run_kl_sweep,
                                 run_real_table, run_single,
                                 run_ws_rewire_sweep)
from walkmem.graph import GeneratorSpec
from walkmem.simulate import SimConfig
from walkmem.strategies import StrategySpec

U_RW = StrategySpec(kind="u-rw")
F_RWM = StrategySpec(kind="f-rwm")
P_RWM = StrategySpec(kind="p-rwm")


class TestDeriveSeed:
    def test_deterministic(self):
        assert derive_seed(42, "er", 4.0, 0) == derive_seed(42, "er", 4.0, 0)

    def test_sensitive_to_every_part(self):
        base = derive_seed(42, "er", 4.0, 0)
        assert derive_seed(43, "er", 4.0, 0) != base
        assert derive_seed(42, "ba", 4.0, 0) != base
        assert derive_seed(42, "er", 4.5, 0) != base
        assert derive_seed(42, "er", 4.0, 1) != base

    def test_no_concatenation_collision(self):
        assert derive_seed(1, "ab", "c") != derive_seed(1, "a", "bc")

    def test_range_is_63_bit(self):
        seeds = [derive_seed(0, i) for i in range(1000)]
        assert all(0 <= s < 2 ** 63 for s in seeds)
        assert len(set(seeds)) == 1000


class TestConfigValidation:
    def test_bad_kind(self):
        with pytest.raises(ValueError):
            ExperimentConfig(kind="scan")

    def test_bad_method(self):
        with pytest.raises(ValueError):
            ExperimentConfig(kind="degree-sweep", method="guess")

    def test_empty_grid(self):
        with pytest.raises(ValueError):
            ExperimentConfig(kind="degree-sweep", k_grid=())

    def test_bad_instances(self):
        with pytest.raises(ValueError):
            ExperimentConfig(kind="degree-sweep", instances=0)

    def test_empty_strategies(self):
        with pytest.raises(ValueError):
            ExperimentConfig(kind="degree-sweep", strategies=())

    def test_kind_mismatch_rejected_by_runner(self):
        cfg = ExperimentConfig(kind="kl-sweep")
        with pytest.raises(ValueError):
            run_degree_sweep(cfg)

    def test_default_strategies_cover_all_kinds(self):
        assert len(DEFAULT_STRATEGIES) == 7


class TestSerialization:
    def _result(self):
        rows = (
            SweepRow(family="ba", parameter="avg-degree", value=4.0,
                     strategy="u-rw", method="exact", metric="grmfpt",
                     mean=123.456, std=7.89, instances=10),
            SweepRow(family="ws", parameter="avg-degree", value=2.0,
                     strategy="f-rwm", method="exact",
                     metric="kl-divergence", mean=None, std=None,
                     instances=10, error="chain is reducible, sorry"),
            SweepRow(family="euroroad", parameter="dataset", value=None,
                     strategy="p-rwm(alpha=10,beta=0.01)",
                     method="simulated", metric="grmfpt", mean=2716.0,
                     std=12.5, instances=1),
        )
        return SweepResult(kind="degree-sweep", seed=42,
                           config={"seed": 42}, rows=rows)

    def test_csv_round_trip_is_lossless(self):
        result = self._result()
        assert rows_from_csv_text(result.to_csv_text()) == result.rows

    def test_csv_survives_commas_in_fields(self):
        result = self._result()
        text = result.to_csv_text()
        assert "p-rwm(alpha=10,beta=0.01)" in text
        back = rows_from_csv_text(text)
        assert back[2].strategy == "p-rwm(alpha=10,beta=0.01)"
        assert back[1].error == "chain is reducible, sorry"

    def test_json_round_trip(self):
        result = self._result()
        back = SweepResult.from_json_dict(result.to_json_dict())
        assert back.rows == result.rows
        assert back.kind == result.kind
        assert back.seed == result.seed
        assert back.config == result.config

    def test_csv_header_contract(self):
        header = self._result().to_csv_text().splitlines()[0]
        assert header == ("family,parameter,value,strategy,method,metric,"
                          "mean,std,instances,error")

    def test_bad_csv_header_rejected(self):
        with pytest.raises(ValueError):
            rows_from_csv_text("a,b,c\n1,2,3\n")


class TestDegreeSweep:
    def _cfg(self, **kw):
        base = dict(kind="degree-sweep", families=("er",), n=16,
                    k_grid=(4.0,), strategies=(U_RW, P_RWM), instances=2,
                    method="both", seed=7,
                    sim=SimConfig(repetitions=100))
        base.update(kw)
        return ExperimentConfig(**base)

    def test_row_count_contract(self):
        result = run_degree_sweep(self._cfg())
        # families x grid x strategies x methods
        assert len(result.rows) == 1 * 1 * 2 * 2
        methods = {(r.strategy, r.method) for r in result.rows}
        assert methods == {("u-rw", "exact"), ("u-rw", "simulated"),
                           ("p-rwm(alpha=10,beta=0.01)", "exact"),
                           ("p-rwm(alpha=10,beta=0.01)", "simulated")}

    def test_single_method_halves_rows(self):
        result = run_degree_sweep(self._cfg(method="exact"))
        assert len(result.rows) == 2
        assert all(r.method == "exact" for r in result.rows)

    def test_exact_and_simulated_agree(self):
        result = run_degree_sweep(self._cfg())
        by = {(r.strategy, r.method): r.mean for r in result.rows}
        for strat in ("u-rw", "p-rwm(alpha=10,beta=0.01)"):
            exact = by[(strat, "exact")]
            sim = by[(strat, "simulated")]
            assert sim == pytest.approx(exact, rel=0.05)

    def test_rows_reproducible_from_coordinates(self):
        cfg = self._cfg()
        result = run_degree_sweep(cfg)
        for row in result.rows:
            strat = U_RW if row.strategy == "u-rw" else P_RWM
            again = degree_cell(cfg, row.family, row.value, strat,
                                row.method)
            assert again == row

    def test_repeat_run_identical(self):
        cfg = self._cfg()
        a = run_degree_sweep(cfg)
        b = run_degree_sweep(cfg)
        assert a.rows == b.rows

    def test_different_seed_changes_simulated_rows(self):
        sim_a = run_degree_sweep(self._cfg(seed=1)).rows
        sim_b = run_degree_sweep(self._cfg(seed=2)).rows
        diffs = [x.mean != y.mean for x, y in zip(sim_a, sim_b)]
        assert any(diffs)

    def test_instances_dispersion_reported(self):
        result = run_degree_sweep(self._cfg(method="exact", instances=3))
        for row in result.rows:
            assert row.instances == 3
            assert row.std is not None and row.std >= 0

    def test_ws_family_uses_configured_rewiring(self):
        cfg = self._cfg(families=("ws",), ws_p_rew=0.0, method="exact",
                        strategies=(U_RW,), instances=1, n=10,
                        k_grid=(2.0,))
        result = run_degree_sweep(cfg)
        # p_rew=0 ring of degree 2 is the cycle C10: G = (n+1)n/6... mean
        # over targets of sum d(n-d)/(n-1) = n(n+1)/6
        assert result.rows[0].mean == pytest.approx(10 * 11 / 6, rel=1e-9)

    def test_generation_failure_carries_coordinates(self):
        cfg = self._cfg(families=("er",), k_grid=(0.05,), method="exact",
                        strategies=(U_RW,), instances=1)
        with pytest.raises(ExperimentError) as exc:
            run_degree_sweep(cfg)
        message = str(exc.value)
        assert "family=er" in message
        assert "avg-degree=0.05" in message
        assert "instance=0" in message

    def test_manifest_carries_config(self):
        cfg = self._cfg(method="exact")
        result = run_degree_sweep(cfg)
        assert result.config["kind"] == "degree-sweep"
        assert result.config["seed"] == 7
        assert result.config["strategies"] == [
            "u-rw", "p-rwm(alpha=10,beta=0.01)"]


class TestKlSweep:
    def test_regular_ring_kl_zero_for_uniform_walk(self):
        cfg = ExperimentConfig(kind="kl-sweep", families=("ws",), n=10,
                               k_grid=(4.0,), ws_p_rew=0.0,
                               strategies=(U_RW,), instances=2, seed=3)
        result = run_kl_sweep(cfg)
        (row,) = result.rows
        assert row.metric == "kl-divergence"
        assert row.method == "exact"
        assert row.mean == pytest.approx(0.0, abs=1e-12)

    def test_reducible_cell_marked_invalid(self):
        cfg = ExperimentConfig(kind="kl-sweep", families=("ws",), n=8,
                               k_grid=(2.0,), ws_p_rew=0.0,
                               strategies=(F_RWM,), instances=1, seed=3)
        (row,) = run_kl_sweep(cfg).rows
        assert row.mean is None and row.std is None
        assert "irreducible" in row.error or "reducible" in row.error

    def test_heterogeneous_network_positive_kl(self):
        cfg = ExperimentConfig(kind="kl-sweep", families=("ba",), n=30,
                               k_grid=(2.0,), strategies=(U_RW,),
                               instances=2, seed=4)
        (row,) = run_kl_sweep(cfg).rows
        assert row.mean > 0.01


class TestRewireSweep:
    def _cfg(self, **kw):
        base = dict(kind="ws-rewire-sweep", n=12, p_grid=(0.0, 0.5),
                    ws_k_values=(4,), strategies=(U_RW,), instances=2,
                    method="exact", seed=11)
        base.update(kw)
        return ExperimentConfig(**base)

    def test_row_count_and_labels(self):
        result = run_ws_rewire_sweep(self._cfg(ws_k_values=(4, 6)))
        assert len(result.rows) == 2 * 2 * 1 * 1
        assert {r.family for r in result.rows} == {"ws-k4", "ws-k6"}
        assert all(r.parameter == "p-rew" for r in result.rows)

    def test_unrewired_ring_deterministic(self):
        a = run_ws_rewire_sweep(self._cfg()).rows[0]
        b = run_ws_rewire_sweep(self._cfg()).rows[0]
        assert a.value == 0.0
        assert a.mean == b.mean
        assert a.std == 0.0  # identical ring in every instance

    def test_rows_reproducible_from_coordinates(self):
        cfg = self._cfg()
        row = run_ws_rewire_sweep(cfg).rows[-1]
        again = rewire_cell(cfg, 4, row.value, U_RW, row.method)
        assert again == row


class TestRealTable:
    def _register_toy(self, tmp_path, monkeypatch):
        edges = ["0 1", "1 2", "2 3", "3 0", "0 2"]
        (tmp_path / "toy.txt").write_text("\n".join(edges) + "\n")
        spec = DatasetSpec(
            key="toy", title="Toy", directed=False, source="local",
            url="https://example.org", filenames=("toy.txt",),
            expected_nodes=4, expected_links=5)
        monkeypatch.setitem(REGISTRY, "toy", spec)

    def _cfg(self, tmp_path, **kw):
        base = dict(kind="real-table", datasets=("toy",),
                    data_dir=str(tmp_path), strategies=(U_RW, F_RWM),
                    method="auto", seed=5,
                    sim=SimConfig(mode="sampled-pairs", n_pairs=2000))
        base.update(kw)
        return ExperimentConfig(**base)

    def test_auto_runs_both_methods_below_budget(self, tmp_path,
                                                 monkeypatch):
        self._register_toy(tmp_path, monkeypatch)
        result = run_real_table(self._cfg(tmp_path))
        assert len(result.rows) == 2 * 2
        assert {r.method for r in result.rows} == {"exact", "simulated"}
        assert all(r.family == "toy" for r in result.rows)
        assert all(r.parameter == "dataset" and r.value is None
                   for r in result.rows)

    def test_auto_simulates_only_above_budget(self, tmp_path, monkeypatch):
        self._register_toy(tmp_path, monkeypatch)
        result = run_real_table(self._cfg(tmp_path, arc_budget=3))
        assert {r.method for r in result.rows} == {"simulated"}

    def test_exact_matches_solver_and_sim_is_close(self, tmp_path,
                                                   monkeypatch):
        self._register_toy(tmp_path, monkeypatch)
        result = run_real_table(self._cfg(
            tmp_path, sim=SimConfig(mode="sampled-pairs", n_pairs=30_000)))
        by = {(r.strategy, r.method): r for r in result.rows}
        from walkmem.datasets import load_dataset
        g = load_dataset("toy", tmp_path).graph
        for strat in (U_RW, F_RWM):
            exact = compute_mfpt_report(g, strat).grmfpt
            assert by[(strat.label, "exact")].mean == pytest.approx(exact)
            sim_row = by[(strat.label, "simulated")]
            assert sim_row.mean == pytest.approx(exact, rel=0.05)
            assert sim_row.std is not None and sim_row.std > 0

    def test_stats_attached_per_network(self, tmp_path, monkeypatch):
        self._register_toy(tmp_path, monkeypatch)
        result = run_real_table(self._cfg(tmp_path))
        assert set(result.stats) == {"toy"}
        assert result.stats["toy"].node_count == 4
        assert result.stats["toy"].link_count == 5
        back = SweepResult.from_json_dict(result.to_json_dict())
        assert back.stats["toy"] == result.stats["toy"]

    def test_missing_dataset_propagates(self, tmp_path):
        from walkmem.errors import DatasetMissingError
        with pytest.raises(DatasetMissingError):
            run_real_table(self._cfg(tmp_path, datasets=("euroroad",)))


class TestRunSingle:
    def test_exact_report_on_cycle_file(self, tmp_path):
        path = tmp_path / "c6.txt"
        path.write_text("\n".join(f"{i} {(i + 1) % 6}" for i in range(6)))
        cfg = ExperimentConfig(kind="single", strategies=(F_RWM,),
                               method="exact", edges_path=str(path))
        (report,) = run_single(cfg)
        assert report.method == "exact"
        assert report.grmfpt == pytest.approx(3.0, abs=1e-10)

    def test_generated_network_both_methods(self):
        spec = GeneratorSpec(family="er", n=12, avg_degree=4.0, seed=2)
        cfg = ExperimentConfig(kind="single", strategies=(U_RW,),
                               method="both", spec=spec,
                               sim=SimConfig(repetitions=200), seed=9)
        exact, sim = run_single(cfg)
        assert exact.method == "exact" and sim.method == "simulated"
        assert sim.grmfpt == pytest.approx(exact.grmfpt, rel=0.05)

    def test_auto_respects_budget(self):
        spec = GeneratorSpec(family="er", n=12, avg_degree=4.0, seed=2)
        cfg = ExperimentConfig(kind="single", strategies=(U_RW,),
                               method="auto", spec=spec, arc_budget=3,
                               sim=SimConfig(mode="sampled-pairs",
                                             n_pairs=500), seed=9)
        reports = run_single(cfg)
        assert [r.method for r in reports] == ["simulated"]

    def test_requires_exactly_one_network_source(self):
        with pytest.raises(ValueError):
            run_single(ExperimentConfig(kind="single", strategies=(U_RW,)))

    def test_requires_exactly_one_strategy(self):
        spec = GeneratorSpec(family="er", n=10, avg_degree=4.0, seed=2)
        cfg = ExperimentConfig(kind="single", strategies=(U_RW, F_RWM),
                               spec=spec)
        with pytest.raises(ValueError):
            run_single(cfg)

    def test_file_reduced_to_largest_component(self, tmp_path):
        path = tmp_path / "two.txt"
        path.write_text("0 1\n1 2\n2 0\n7 8\n")
        cfg = ExperimentConfig(kind="single", strategies=(U_RW,),
                               method="exact", edges_path=str(path))
        (report,) = run_single(cfg)
        assert report.n_nodes == 3


class TestRealNetworkRows:
    def test_named_rows_for_ad_hoc_graph(self, tmp_path):
        from walkmem.graph import Graph
        g = Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
        cfg = ExperimentConfig(kind="real-table", strategies=(U_RW,),
                               method="auto", seed=1,
                               sim=SimConfig(mode="sampled-pairs",
                                             n_pairs=500))
        rows = real_network_rows(cfg, "ring", g)
        assert [r.method for r in rows] == ["exact", "simulated"]
        assert all(r.family == "ring" for r in rows)
