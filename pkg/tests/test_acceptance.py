"""Acceptance suite: one test per release criterion, tolerances pinned.

Run with ``pytest tests/test_acceptance.py -s`` to see one PASS/FAIL line
per criterion.
"""

import itertools
import math
from collections import Counter
from contextlib import contextmanager

import numpy as np
import pytest
from fastapi.testclient import TestClient

import _oracle as oracle
from _fixtures import dataset_from_trajectories, synthetic_dataset
from iohbench.cli import main as cli_main
from iohbench.logger import ObserverConfig
from iohbench.runner import (
    AlgorithmContext,
    ExperimentConfig,
    one_plus_lambda_ea,
    random_search,
    run_experiment,
)
from iohbench.service import create_app
from iohbench.stats import (
    TargetGrid,
    auc_normalized,
    ecdf_fixed_budget,
    ecdf_fixed_target,
    fd_histogram,
    fixed_budget_table,
    fixed_target_table,
    load_folder,
    parameter_table,
    percentile,
)
from iohbench.suite import (
    SeededGenerator,
    generate_instance_spec,
    linear_weights,
    make_instance,
)


@contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        print(f"\n[ACCEPTANCE] {name}: FAIL")
        raise
    print(f"\n[ACCEPTANCE] {name}: PASS")


def observer(folder, algorithm="RANDOM_SEARCH", parameters=("evaluation",),
             tau=10, t=3, v=(1, 2, 5)):
    return ObserverConfig(
        result_folder=str(folder),
        algorithm_name=algorithm,
        algorithm_info=f"{algorithm} acceptance experiment",
        parameter_names=list(parameters),
        complete_triggers=True,
        interval_step=tau,
        target_triggers=t,
        base_evaluations=list(v),
    )


def step_value(knots, x):
    y = 0.0
    for kx, ky in knots:
        if kx <= x:
            y = ky
        else:
            break
    return y


def test_instance_parameter_ranges():
    with criterion("instance parameter ranges"):
        for fid, dim in itertools.product((1, 2, 3, 4), (16, 100)):
            identity = generate_instance_spec(fid, 1, dim)
            assert identity.is_identity()
            for iid in range(2, 101):
                spec = generate_instance_spec(fid, iid, dim)
                assert 0.2 <= spec.scale <= 5.0
                assert -1000.0 <= spec.shift <= 1000.0


def test_transformation_composition_oracle():
    # independent re-implementations of the four base problems
    def base_value(fid, bits):
        ones = sum(bits)
        if fid == 1:
            return float(ones)
        if fid == 2:
            count = 0
            for bit in bits:
                if bit != 1:
                    break
                count += 1
            return float(count)
        if fid == 3:  # jump, k=1: gap is empty
            return float(1 + ones)
        weights = linear_weights(len(bits))
        return float(sum(w * b for w, b in zip(weights, bits)))

    with criterion("transformation composition oracle"):
        instance_ids = (1, 2, 3, 4, 5, 51, 52, 53, 54, 55)
        for fid in (1, 2, 3, 4):
            for iid in instance_ids:
                ip = make_instance(fid, iid, 8)
                spec = ip.spec
                for bits in itertools.product((0, 1), repeat=8):
                    shifted = [b ^ z for b, z in zip(bits, spec.xor_mask)]
                    reordered = [shifted[spec.permutation[i]] for i in range(8)]
                    expected = spec.scale * base_value(fid, reordered) + spec.shift
                    _, transformed = ip.evaluate(list(bits))
                    assert transformed == pytest.approx(expected, rel=1e-12)


def test_landscape_isomorphism():
    with criterion("landscape isomorphism"):
        for fid in (1, 2, 3, 4):
            base = make_instance(fid, 1, 8)
            base_multiset = Counter(
                base.evaluate(list(bits))[0]
                for bits in itertools.product((0, 1), repeat=8)
            )
            for iid in (2, 37, 51, 88):
                instance = make_instance(fid, iid, 8)
                multiset = Counter(
                    instance.evaluate(list(bits))[0]
                    for bits in itertools.product((0, 1), repeat=8)
                )
                assert multiset == base_multiset


def scaled_example_config(folder):
    return ExperimentConfig(
        suite_name="PBO",
        function_ids=(1, 2, 3, 4),
        instance_ids=(1, 2, 3, 4, 5),
        dimensions=(16,),
        observer=observer(folder),
        budget_multiplier=50,
        independent_restarts=5,
    )


def test_logger_format_round_trip(tmp_path):
    with criterion("logger format round trip"):
        report = run_experiment(scaled_example_config(tmp_path / "EXP"), random_search,
                                seed=42, jobs=4)
        assert report.runs_executed == 100  # 4 functions x 5 instances x 5 restarts
        ds = load_folder(report.result_folder)
        assert ds.report.warnings == []
        for entry in ds.sorted_entries():
            assert len(entry.runs) == 25
            for run in entry.runs:
                assert run.info_count == len(run.records)

        rerun = run_experiment(scaled_example_config(tmp_path / "EXP2"), random_search,
                               seed=42, jobs=1)
        first = {p.relative_to(report.result_folder): p.read_bytes()
                 for p in report.result_folder.rglob("*") if p.is_file()}
        second = {p.relative_to(rerun.result_folder): p.read_bytes()
                  for p in rerun.result_folder.rglob("*") if p.is_file()}
        assert first == second


def test_trigger_semantics(tmp_path):
    with criterion("trigger semantics"):
        cfg = ExperimentConfig(
            suite_name="PBO",
            function_ids=(1,),
            instance_ids=(1,),
            dimensions=(10,),
            observer=observer(tmp_path / "EXP", tau=10, t=3, v=(1, 2, 5)),
            budget_multiplier=10,  # budget 100
            independent_restarts=1,
        )
        report = run_experiment(cfg, random_search, seed=3)
        folder = report.result_folder / "data_f1"
        idat = [
            int(line.split()[0])
            for line in (folder / "IOHprofiler_f1_DIM10_i1.idat").read_text().splitlines()
            if not line.startswith('"')
        ]
        assert idat == [1] + list(range(10, 101, 10))
        tdat = [
            int(line.split()[0])
            for line in (folder / "IOHprofiler_f1_DIM10_i1.tdat").read_text().splitlines()
            if not line.startswith('"')
        ]
        expected = sorted({1, 2, 5, 10, 20, 50, 100} | {1, 2, 5, 10, 22, 46, 100})
        assert tdat == expected
        assert tdat[-1] == 100  # final evaluation included


def test_statistics_oracle_equivalence():
    with criterion("statistics oracle equivalence"):
        for seed in range(10):
            ds = synthetic_dataset(seed, max_runs=20, max_records=200)
            grid = TargetGrid(0.0, 12.0, 1.5)
            budgets = [1, 5, 17, 60, 200]

            target_table = fixed_target_table(ds, grid)
            budget_table = fixed_budget_table(ds, budgets)
            ecdf_t = ecdf_fixed_target(ds, grid, max_budget=100)
            ecdf_b = ecdf_fixed_budget(ds, budgets)
            param_table = parameter_table(ds, "p", grid)
            auc = auc_normalized(ds, grid, max_budget=100)

            for entry in ds.sorted_entries():
                times = [
                    oracle.hitting_time(run.records, v, ds.direction)
                    for run in entry.runs for v in grid.targets()
                ]
                pairs = len(times)

                for target in grid.targets():
                    row = next(r for r in target_table.rows
                               if r["algorithm"] == entry.algorithm and r["target"] == target)
                    expected = oracle.fixed_target_stats(entry.runs, target, ds.direction)
                    if expected is None:
                        assert row["runs"] == 0
                    else:
                        assert row["runs"] == expected["runs"]
                        for col in ("mean", "median", "sd", "2%", "25%", "50%", "75%", "98%"):
                            assert row[col] == pytest.approx(expected[col], rel=1e-9)

                for budget in budgets:
                    row = next(r for r in budget_table.rows
                               if r["algorithm"] == entry.algorithm and r["budget"] == budget)
                    expected = oracle.fixed_budget_stats(entry.runs, budget, ds.direction)
                    assert row["runs"] == expected["runs"]
                    for col in ("mean", "median", "sd", "5%", "50%", "95%"):
                        assert row[col] == pytest.approx(expected[col], rel=1e-9)

                knots = [(r["budget"], r["proportion"]) for r in ecdf_t.rows
                         if r["algorithm"] == entry.algorithm]
                probes = {1, 50, 100} | {k for k, _ in knots} | {k + 1 for k, _ in knots}
                for t in sorted(p for p in probes if 1 <= p <= 100):
                    expected = sum(1 for h in times if h is not None and h <= t) / pairs
                    assert step_value(knots, t) == pytest.approx(expected, rel=1e-9)

                budget_knots = [(r["target"], r["proportion"]) for r in ecdf_b.rows
                                if r["algorithm"] == entry.algorithm]
                values = [oracle.best_at(run.records, b, ds.direction)
                          for run in entry.runs for b in budgets]
                for v, frac in budget_knots:
                    expected = sum(1 for value in values if value >= v) / len(values)
                    assert frac == pytest.approx(expected, rel=1e-9)

                covered = 0.0
                for t in range(1, 101):
                    covered += sum(1 for h in times if h is not None and h <= t) / pairs
                assert auc[(entry.algorithm, 1, 16)] == pytest.approx(covered / 100, rel=1e-9)

                reached = sorted(float(h) for h in (
                    oracle.hitting_time(run.records, 5.0, ds.direction)
                    for run in entry.runs
                ) if h is not None)
                if len(reached) >= 2:
                    got = fd_histogram(reached)
                    expected_bins = oracle.fd_bins(reached)
                    assert [c for _, _, c in got] == [c for _, _, c in expected_bins]

                for target in grid.targets():
                    row = next(r for r in param_table.rows
                               if r["algorithm"] == entry.algorithm and r["target"] == target)
                    expected = oracle.parameter_stats(entry.runs, 0, target, ds.direction)
                    if expected is None:
                        assert row["runs"] == 0
                    else:
                        for col in ("runs", "mean", "sd", "median"):
                            assert row[col] == pytest.approx(expected[col], rel=1e-9)


def test_percentile_and_ecdf_anchors():
    with criterion("percentile and ECDF anchors"):
        # frozen index table for samples 1..r: value == max(1, floor(p*r/100))
        expected_values = {
            1: {2: 1, 5: 1, 25: 1, 50: 1, 75: 1, 95: 1, 98: 1, 100: 1},
            3: {2: 1, 5: 1, 25: 1, 50: 1, 75: 2, 95: 2, 98: 2, 100: 3},
            10: {2: 1, 5: 1, 25: 2, 50: 5, 75: 7, 95: 9, 98: 9, 100: 10},
            100: {2: 2, 5: 5, 25: 25, 50: 50, 75: 75, 95: 95, 98: 98, 100: 100},
        }
        for r, cases in expected_values.items():
            samples = list(range(1, r + 1))
            for p, value in cases.items():
                assert percentile(samples, p) == value

        ideal = dataset_from_trajectories([[(1, 100.0)], [(1, 100.0)], [(1, 100.0)]])
        auc = auc_normalized(ideal, TargetGrid(0.0, 100.0, 10.0), max_budget=1000)
        assert auc[("alg", 1, 8)] == 1.0

        for samples in ([1.0, 2.0, 4.0, 9.0, 50.0, 50.5, 80.0], list(range(27))):
            ordered = sorted(float(s) for s in samples)
            r = len(ordered)
            expected_width = (percentile(ordered, 75) - percentile(ordered, 25)) / r ** (1 / 3)
            bins = fd_histogram(ordered)
            assert bins[0][1] - bins[0][0] == pytest.approx(expected_width, rel=1e-12)


class _SilentLogger:
    def observe(self, *args):
        pass


def test_example_algorithm_contracts(tmp_path):
    with criterion("example algorithm contracts"):
        n, budget, seeds = 16, 800, 100
        # exhaustive order-statistic oracle for the best of `budget` draws
        cdf = [sum(math.comb(n, j) for j in range(k + 1)) / 2**n for k in range(n + 1)]
        top = [cdf[k] ** budget for k in range(n + 1)]
        pmf = [top[0]] + [top[k] - top[k - 1] for k in range(1, n + 1)]
        expectation = sum(k * pmf[k] for k in range(n + 1))
        variance = sum(k * k * pmf[k] for k in range(n + 1)) - expectation**2

        bests = []
        for seed in range(seeds):
            ctx = AlgorithmContext(
                make_instance(1, 1, n), _SilentLogger(), budget, SeededGenerator(seed)
            )
            best = random_search(ctx)
            assert best <= n
            bests.append(best)
        margin = 3.0 * math.sqrt(variance / seeds)
        assert abs(np.mean(bests) - expectation) < margin

        cfg = ExperimentConfig(
            suite_name="PBO",
            function_ids=(1, 2),
            instance_ids=(1, 2),
            dimensions=(16,),
            observer=observer(tmp_path / "EA", algorithm="EA",
                              parameters=("mutation_rate", "l")),
            budget_multiplier=30,
            independent_restarts=2,
        )
        report = run_experiment(cfg, one_plus_lambda_ea, seed=7)
        ds = load_folder(report.result_folder)
        rate_low, rate_high = 1.0 / 16, 0.5
        for entry in ds.sorted_entries():
            rate_index = entry.parameter_names.index("mutation_rate")
            for run in entry.runs:
                bests_seen = [r.best_transformed for r in run.records]
                assert bests_seen == sorted(bests_seen)  # elitist parent trajectory
                for record in run.records:
                    rate = record.parameters[rate_index]
                    assert rate_low - 1e-12 <= rate <= rate_high + 1e-12


def test_figure7_style_dominance():
    with criterion("ECDF dominance scenario"):
        rng = np.random.default_rng(99)
        fast = [[(1, 0.0), (int(t), 10.0)] for t in rng.integers(2, 30, size=8)]
        slow = [[(1, 0.0), (int(t), 10.0)] for t in rng.integers(40, 200, size=8)]
        ds = dataset_from_trajectories(fast, algorithm="fast").merged_with(
            dataset_from_trajectories(slow, algorithm="slow")
        )
        table = ecdf_fixed_target(ds, TargetGrid(0.0, 10.0, 2.0), max_budget=250)
        fast_knots = [(r["budget"], r["proportion"]) for r in table.rows
                      if r["algorithm"] == "fast"]
        slow_knots = [(r["budget"], r["proportion"]) for r in table.rows
                      if r["algorithm"] == "slow"]
        for t in range(1, 251):
            assert step_value(fast_knots, t) >= step_value(slow_knots, t)


def test_cli_serve_parity(tmp_path):
    with criterion("CLI/serve parity"):
        cfg = ExperimentConfig(
            suite_name="PBO",
            function_ids=(1, 2),
            instance_ids=(1, 2),
            dimensions=(8,),
            observer=observer(tmp_path / "EXP"),
            budget_multiplier=10,
            independent_restarts=2,
        )
        report = run_experiment(cfg, random_search, seed=11)
        out = tmp_path / "csv"
        assert cli_main([
            "process", str(report.result_folder), "--out", str(out),
            "--fmin", "0", "--fmax", "8", "--step", "1", "--budgets", "1,10,80",
        ]) == 0
        client = TestClient(create_app())
        dataset_id = client.post(
            "/api/datasets", json={"path": str(report.result_folder)}
        ).json()["id"]
        queries = [
            ("fixed_target_summary.csv", "fixed-target-summary",
             {"fmin": "0", "fmax": "8", "step": "1"}),
            ("ecdf_budget.csv", "ecdf-budget", {"budgets": "1,10,80"}),
            ("raw_samples_target.csv", "raw-samples",
             {"fmin": "0", "fmax": "8", "step": "1", "orientation": "wide"}),
        ]
        for filename, statistic, params in queries:
            response = client.get(
                f"/api/datasets/{dataset_id}/{statistic}",
                params={**params, "format": "csv"},
            )
            assert response.status_code == 200
            assert (out / filename).read_bytes() == response.content
