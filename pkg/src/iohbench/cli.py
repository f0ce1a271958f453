"""Command-line entry point: run experiments, export CSV reports, serve the API.

Subcommands:

* ``run``     - execute a configuration.ini experiment with a named algorithm
* ``process`` - post-process result folders into CSV tables + manifest
* ``export``  - like process, but a single selected statistic
* ``serve``   - preload folders and serve the HTTP API (and dashboard assets)
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from iohbench import __version__, stats
from iohbench.logger import format_value
from iohbench.runner import (
    Algorithm,
    ConfigError,
    one_plus_lambda_ea,
    parse_config,
    random_search,
    run_experiment,
)
from iohbench.service import (
    ApiError,
    DatasetRegistry,
    STATISTIC_NAMES,
    compute_statistic,
    create_app,
)

ALGORITHMS: dict[str, Algorithm] = {
    "random-search": random_search,
    "one-plus-lambda-ea": one_plus_lambda_ea,
}


def register_algorithm(name: str, algorithm: Algorithm) -> None:
    """Make a plugin algorithm selectable via ``iohbench run --algorithm``."""
    if name in ALGORITHMS:
        raise ValueError(f"algorithm {name!r} is already registered")
    ALGORITHMS[name] = algorithm


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="iohbench", description=__doc__)
    parser.add_argument("--version", action="version", version=f"iohbench {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment from a configuration.ini")
    run.add_argument("--config", required=True, help="path to the configuration file")
    run.add_argument("--algorithm", required=True,
                     help=f"one of {sorted(ALGORITHMS)} or a registered plugin")
    run.add_argument("--seed", type=int, default=42, help="master seed (default 42)")
    run.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                     help="parallel (function, dimension) groups")

    def add_grid_flags(command):
        command.add_argument("--fmin", type=float, help="smallest target value")
        command.add_argument("--fmax", type=float, help="largest target value")
        command.add_argument("--step", type=float, help="target grid step")
        command.add_argument("--budgets", help="comma-separated budget list")
        command.add_argument("--efficient", type=int, metavar="CAP",
                             help="trim runs to CAP records before computing")

    process = sub.add_parser("process", help="export every statistic as CSV")
    process.add_argument("folders", nargs="+", help="result folders to load")
    process.add_argument("--out", required=True, help="output directory")
    add_grid_flags(process)

    export = sub.add_parser("export", help="export one statistic as CSV")
    export.add_argument("folders", nargs="+", help="result folders to load")
    export.add_argument("--out", required=True, help="output directory")
    export.add_argument("--statistic", required=True, choices=STATISTIC_NAMES)
    add_grid_flags(export)
    export.add_argument("--target", help="single target value (histogram/pmf)")
    export.add_argument("--budget", help="single budget (histogram/pmf)")
    export.add_argument("--parameter", help="tracked parameter name (parameter-table)")
    export.add_argument("--orientation", choices=("wide", "long"),
                        help="raw-samples layout")
    export.add_argument("--algorithms", help="comma-separated algorithm filter")

    serve = sub.add_parser("serve", help="serve the HTTP API and dashboard")
    serve.add_argument("folders", nargs="*", help="result folders to preload")
    serve.add_argument("--port", type=int, default=8080)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--dashboard", help="directory of built dashboard assets")
    serve.add_argument("--upload-cap", type=int, default=512, metavar="MB",
                       help="upload size cap in megabytes (default 512)")
    return parser


def _fail(message: str, code: int = 2) -> int:
    print(f"iohbench: error: {message}", file=sys.stderr)
    return code


def cmd_run(args) -> int:
    config_path = Path(args.config)
    if not config_path.is_file():
        return _fail(f"config file not found: {config_path}")
    algorithm = ALGORITHMS.get(args.algorithm)
    if algorithm is None:
        return _fail(f"unknown algorithm {args.algorithm!r}; "
                     f"available: {sorted(ALGORITHMS)}")
    try:
        cfg = parse_config(config_path.read_text())
    except ConfigError as exc:
        return _fail(str(exc))
    try:
        report = run_experiment(cfg, algorithm, seed=args.seed, jobs=max(1, args.jobs))
    except (LookupError, OSError) as exc:
        return _fail(str(exc), code=1)
    print(f"result folder: {report.result_folder}")
    print(f"runs executed: {report.runs_executed}")
    return 0


def _load_merged(folders) -> tuple[stats.RunDataset | None, list[str]]:
    dataset = None
    failures = []
    for folder in folders:
        try:
            loaded = stats.load_folder(folder)
        except (FileNotFoundError, stats.DataParseError, stats.IntegrityError) as exc:
            failures.append(f"{folder}: {exc}")
            continue
        dataset = loaded if dataset is None else dataset.merged_with(loaded)
    return dataset, failures


def _base_params(args) -> dict[str, str]:
    params: dict[str, str] = {}
    for name in ("fmin", "fmax", "step"):
        value = getattr(args, name, None)
        if value is not None:
            params[name] = format_value(value)
    if getattr(args, "budgets", None):
        params["budgets"] = args.budgets
    return params


def _write_tables(ds, out_dir: Path, jobs: list[tuple[str, str, dict]],
                  manifest_extra: dict) -> int:
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest: dict = {"files": {}, **manifest_extra}
    written = 0
    for filename, statistic, params in jobs:
        try:
            table, resolved = compute_statistic(ds, statistic, params)
        except ApiError as exc:
            manifest["files"][filename] = {"statistic": statistic, "error": exc.message}
            continue
        (out_dir / filename).write_bytes(stats.render_csv(table))
        manifest["files"][filename] = {"statistic": statistic, "params": resolved}
        written += 1
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2, default=str) + "\n")
    print(f"wrote {written} tables to {out_dir}")
    return 0


def cmd_process(args) -> int:
    dataset, failures = _load_merged(args.folders)
    for failure in failures:
        print(f"iohbench: failed to load {failure}", file=sys.stderr)
    if dataset is None:
        return 1
    if args.efficient:
        dataset = stats.trim_efficient(dataset, args.efficient)

    base = _base_params(args)
    budgets_param = base.get("budgets") or ",".join(
        str(b) for b in stats.default_budgets(dataset)
    )
    grid = (
        stats.TargetGrid(args.fmin, args.fmax, args.step)
        if args.fmin is not None and args.fmax is not None and args.step is not None
        else stats.default_grid(dataset)
    )
    targets = grid.targets()
    middle_target = format_value(targets[len(targets) // 2])
    final_budget = budgets_param.split(",")[-1]

    jobs = [
        ("fixed_target_summary.csv", "fixed-target-summary", dict(base)),
        ("fixed_budget_summary.csv", "fixed-budget-summary", dict(base)),
        ("raw_samples_target.csv", "raw-samples",
         {**{k: v for k, v in base.items() if k != "budgets"}, "orientation": "wide"}),
        ("raw_samples_budget.csv", "raw-samples",
         {"budgets": budgets_param, "orientation": "wide"}),
        ("ecdf_target.csv", "ecdf-target",
         {k: v for k, v in base.items() if k != "budgets"}),
        ("ecdf_budget.csv", "ecdf-budget", {"budgets": budgets_param}),
        ("auc.csv", "auc", {k: v for k, v in base.items() if k != "budgets"}),
        ("histogram_target.csv", "histogram",
         {k: v for k, v in base.items() if k != "budgets"}),
        ("histogram_budget.csv", "histogram", {"budgets": budgets_param}),
        ("pmf_target.csv", "pmf", {"target": middle_target}),
        ("pmf_budget.csv", "pmf", {"budget": final_budget}),
    ]
    parameter_names = sorted(
        {name for entry in dataset.entries.values() for name in entry.parameter_names}
    )
    for name in parameter_names:
        jobs.append(
            (f"parameter_{name}.csv", "parameter-table",
             {**{k: v for k, v in base.items() if k != "budgets"}, "parameter": name})
        )
    extra = {
        "sources": [str(f) for f in args.folders],
        "warnings": dataset.report.warnings,
        "failures": failures,
    }
    return _write_tables(dataset, Path(args.out), jobs, extra)


def cmd_export(args) -> int:
    dataset, failures = _load_merged(args.folders)
    for failure in failures:
        print(f"iohbench: failed to load {failure}", file=sys.stderr)
    if dataset is None:
        return 1
    if args.efficient:
        dataset = stats.trim_efficient(dataset, args.efficient)
    params = _base_params(args)
    for name in ("target", "budget", "parameter", "orientation", "algorithms"):
        value = getattr(args, name, None)
        if value is not None:
            params[name] = str(value)
    try:
        table, resolved = compute_statistic(dataset, args.statistic, params)
    except ApiError as exc:
        return _fail(f"{exc.message} {exc.detail}".strip())
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    filename = args.statistic.replace("-", "_") + ".csv"
    (out_dir / filename).write_bytes(stats.render_csv(table))
    manifest = {"files": {filename: {"statistic": args.statistic, "params": resolved}},
                "sources": [str(f) for f in args.folders]}
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2, default=str) + "\n")
    print(f"wrote {out_dir / filename}")
    return 0


def _find_dashboard(cli_value: str | None) -> Path | None:
    candidates = []
    if cli_value:
        candidates.append(Path(cli_value))
    candidates.append(Path.cwd() / "frontend" / "dist")
    candidates.append(Path(__file__).resolve().parents[2] / "frontend" / "dist")
    for candidate in candidates:
        if candidate.is_dir():
            return candidate
    return None


def cmd_serve(args) -> int:
    import uvicorn

    registry = DatasetRegistry()
    for folder in args.folders:
        try:
            registry.add(stats.load_folder(folder), str(folder))
        except (FileNotFoundError, stats.DataParseError, stats.IntegrityError) as exc:
            return _fail(f"failed to preload {folder}: {exc}", code=1)
    app = create_app(
        registry,
        static_dir=_find_dashboard(args.dashboard),
        max_upload_bytes=args.upload_cap * 2**20,
    )
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except (OSError, SystemExit) as exc:
        return _fail(f"could not serve on {args.host}:{args.port}: {exc}", code=1)
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "run": cmd_run,
        "process": cmd_process,
        "export": cmd_export,
        "serve": cmd_serve,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
