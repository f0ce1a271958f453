import pytest

from iohbench.logger import ObserverConfig
from iohbench.runner import (
    ExperimentConfig,
    one_plus_lambda_ea,
    random_search,
    run_experiment,
)


def small_observer(folder, algorithm_name="RS", parameter_names=("evaluation",)):
    return ObserverConfig(
        result_folder=str(folder),
        algorithm_name=algorithm_name,
        algorithm_info=f"{algorithm_name} test experiment",
        parameter_names=list(parameter_names),
        complete_triggers=True,
        interval_step=10,
        target_triggers=3,
        base_evaluations=[1, 2, 5],
    )


def run_small_experiment(folder, algorithm=random_search, seed=11, **overrides):
    fields = dict(
        suite_name="PBO",
        function_ids=(1, 2),
        instance_ids=(1, 2),
        dimensions=(8,),
        observer=small_observer(folder),
        budget_multiplier=10,
        independent_restarts=2,
    )
    fields.update(overrides)
    return run_experiment(ExperimentConfig(**fields), algorithm, seed=seed)


@pytest.fixture
def experiment_folder(tmp_path):
    """A small random-search result folder (2 functions, 4 runs each)."""
    report = run_small_experiment(tmp_path / "EXP")
    return report.result_folder


@pytest.fixture
def two_algorithm_folders(tmp_path):
    """Result folders of two different algorithms on the same problems."""
    rs = run_small_experiment(tmp_path / "RS")
    ea_observer = small_observer(
        tmp_path / "EA", algorithm_name="EA", parameter_names=("mutation_rate", "l")
    )
    ea = run_small_experiment(tmp_path / "EA", algorithm=one_plus_lambda_ea,
                              observer=ea_observer, seed=13)
    return rs.result_folder, ea.result_folder
