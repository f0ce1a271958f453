"""Synthetic dataset builders shared by the stats and acceptance tests."""

import random

from iohbench.logger import LogRecord
from iohbench.stats import DatasetEntry, Run, RunDataset


def synthetic_run(rng, length, instance=1, parameters=2, step=1.0):
    """A maximization run with a noisy upward-drifting raw value column."""
    records = []
    best_raw = None
    best_tr = None
    level = rng.uniform(0.0, 5.0)
    evaluations = 0
    for _ in range(length):
        evaluations += rng.randint(1, 3)
        level += rng.uniform(-step, 1.5 * step)
        raw = round(level, 3)
        transformed = 2.0 * raw + 5.0
        best_raw = raw if best_raw is None else max(best_raw, raw)
        best_tr = transformed if best_tr is None else max(best_tr, transformed)
        params = tuple(round(rng.uniform(0.0, 10.0), 3) for _ in range(parameters))
        records.append(LogRecord(evaluations, raw, best_raw, transformed, best_tr, params))
    return Run(instance_id=instance, records=records)


def synthetic_dataset(seed, algorithms=("alpha", "beta"), max_runs=20, max_records=200):
    rng = random.Random(seed)
    entries = {}
    for algorithm in algorithms:
        runs = [
            synthetic_run(rng, rng.randint(3, max_records), instance=i + 1)
            for i in range(rng.randint(2, max_runs))
        ]
        entry = DatasetEntry(
            algorithm=algorithm,
            function_id=1,
            dimension=16,
            parameter_names=["p", "q"],
            runs=runs,
        )
        entries[(algorithm, 1, 16)] = entry
    return RunDataset(entries)


def dataset_from_trajectories(trajectories, algorithm="alg", parameter_names=()):
    """Build a single-entry dataset from explicit (evaluations, raw) pairs."""
    runs = []
    for instance, pairs in enumerate(trajectories, start=1):
        best = None
        records = []
        for item in pairs:
            evaluations, raw = item[0], item[1]
            params = tuple(item[2]) if len(item) > 2 else ()
            best = raw if best is None else max(best, raw)
            records.append(LogRecord(evaluations, raw, best, raw, best, params))
        runs.append(Run(instance_id=instance, records=records))
    entry = DatasetEntry(
        algorithm=algorithm,
        function_id=1,
        dimension=8,
        parameter_names=list(parameter_names),
        runs=runs,
    )
    return RunDataset({(algorithm, 1, 8): entry})
