"""Record service responses as frontend test fixtures.

Runs a small two-algorithm experiment, registers it with the in-process
HTTP service, and freezes selected responses (JSON and CSV bytes) under
frontend/tests/fixtures together with a manifest the fake fetch uses to
match requests. Regenerate with:

    python frontend/scripts/record_fixtures.py
"""

import json
import shutil
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from iohbench.logger import ObserverConfig
from iohbench.runner import (
    ExperimentConfig,
    one_plus_lambda_ea,
    random_search,
    run_experiment,
)
from iohbench.service import create_app

FIXTURES = Path(__file__).resolve().parents[1] / "tests" / "fixtures"

QUERIES = [
    ("ft_summary_step1.json", "fixed-target-summary",
     {"fmin": "0", "fmax": "8", "step": "1"}),
    ("ft_summary_step1.csv", "fixed-target-summary",
     {"fmin": "0", "fmax": "8", "step": "1", "format": "csv"}),
    ("ft_summary_step2.json", "fixed-target-summary",
     {"fmin": "0", "fmax": "8", "step": "2"}),
    ("raw_samples_wide.json", "raw-samples",
     {"fmin": "0", "fmax": "8", "step": "1", "orientation": "wide"}),
    ("ecdf_target.json", "ecdf-target", {"fmin": "0", "fmax": "8", "step": "2"}),
    ("ecdf_single.json", "ecdf-target", {"fmin": "4", "fmax": "4", "step": "1"}),
    ("auc.json", "auc", {"fmin": "0", "fmax": "8", "step": "2"}),
    ("histogram_target4.json", "histogram", {"target": "4"}),
    ("pmf_target4.json", "pmf", {"target": "4"}),
    ("fb_summary.json", "fixed-budget-summary", {"budgets": "1,10,80"}),
    ("ecdf_budget.json", "ecdf-budget", {"budgets": "1,10,80"}),
    ("parameter_table.json", "parameter-table",
     {"parameter": "evaluation", "fmin": "0", "fmax": "8", "step": "2"}),
]


def observer(folder, name, parameters):
    return ObserverConfig(
        result_folder=str(folder),
        algorithm_name=name,
        algorithm_info=f"{name} fixture experiment",
        parameter_names=list(parameters),
        complete_triggers=True,
        interval_step=10,
        target_triggers=3,
        base_evaluations=[1, 2, 5],
    )


def build_experiments(parent: Path) -> None:
    base = dict(
        suite_name="PBO",
        function_ids=(1, 2),
        instance_ids=(1, 2),
        dimensions=(8,),
        budget_multiplier=10,
        independent_restarts=2,
    )
    run_experiment(
        ExperimentConfig(observer=observer(parent / "RS", "RS", ["evaluation"]), **base),
        random_search, seed=11,
    )
    run_experiment(
        ExperimentConfig(
            observer=observer(parent / "EA", "EA", ["mutation_rate", "l"]), **base
        ),
        one_plus_lambda_ea, seed=13,
    )


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    workdir = Path(tempfile.mkdtemp(prefix="iohbench-fixtures-"))
    manifest = []

    def record(fixture: str, method: str, path: str, params: dict, response) -> None:
        (FIXTURES / fixture).write_bytes(response.content)
        manifest.append({
            "fixture": fixture,
            "method": method,
            "path": path,
            "params": params,
            "status": response.status_code,
            "contentType": response.headers.get("content-type", "application/json"),
        })

    try:
        build_experiments(workdir)
        client = TestClient(create_app())

        upload = client.post("/api/datasets", json={"path": str(workdir)})
        assert upload.status_code == 201, upload.text
        dataset_id = upload.json()["id"]
        record("upload.json", "POST", "/api/datasets", {}, upload)

        listing = client.get("/api/datasets")
        record("datasets.json", "GET", "/api/datasets", {}, listing)

        for fixture, statistic, params in QUERIES:
            response = client.get(f"/api/datasets/{dataset_id}/{statistic}", params=params)
            assert response.status_code == 200, f"{statistic}: {response.text}"
            record(fixture, "GET", f"/api/datasets/{dataset_id}/{statistic}", params, response)

        efficient = client.post(
            f"/api/datasets/{dataset_id}/efficient", json={"enabled": True, "cap": 100}
        )
        record("efficient_on.json", "POST", f"/api/datasets/{dataset_id}/efficient",
               {}, efficient)

        (FIXTURES / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
        print(f"recorded {len(manifest)} fixtures into {FIXTURES}")
    finally:
        shutil.rmtree(workdir, ignore_errors=True)


if __name__ == "__main__":
    main()
