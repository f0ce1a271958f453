"""HTTP/JSON API over loaded run datasets.

The service owns a process-lifetime registry of datasets (uploaded as zip
archives or registered from server-local folders) and exposes every
statistic of :mod:`iohbench.stats` under
``GET /api/datasets/{id}/{statistic}``. JSON responses mirror the CSV
column schema verbatim, and ``format=csv`` returns exactly the bytes the
``iohbench process`` command writes, both being rendered by
:func:`compute_statistic` + :func:`iohbench.stats.render_csv`.
"""

from __future__ import annotations

import io
import shutil
import tempfile
import threading
import zipfile
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles

from iohbench import stats
from iohbench.logger import format_value
from iohbench.stats import RunDataset, Table, TargetGrid

STATISTIC_NAMES = (
    "fixed-target-summary",
    "fixed-budget-summary",
    "raw-samples",
    "ecdf-target",
    "ecdf-budget",
    "auc",
    "histogram",
    "pmf",
    "parameter-table",
)

DEFAULT_UPLOAD_CAP = 512 * 2**20
DEFAULT_EFFICIENT_CAP = 100


class ApiError(Exception):
    def __init__(self, status: int, message: str, detail: str = ""):
        super().__init__(message)
        self.status = status
        self.message = message
        self.detail = detail


# ---------------------------------------------------------------------------
# Registry


@dataclass
class DatasetRecord:
    dataset_id: str
    source: str
    full: RunDataset
    active: RunDataset
    efficient: bool = False
    cap: int = 0

    def describe(self) -> dict:
        return {
            "id": self.dataset_id,
            "source": self.source,
            "efficient": self.efficient,
            "cap": self.cap if self.efficient else None,
            "entries": self.full.report.entries,
            "warnings": self.full.report.warnings,
        }


class DatasetRegistry:
    """Process-lifetime dataset store; reads share, writes are exclusive."""

    def __init__(self):
        self._lock = threading.Lock()
        self._records: dict[str, DatasetRecord] = {}
        self._counter = 0

    def add(self, dataset: RunDataset, source: str) -> DatasetRecord:
        with self._lock:
            self._counter += 1
            record = DatasetRecord(f"ds-{self._counter}", source, dataset, dataset)
            self._records[record.dataset_id] = record
            return record

    def get(self, dataset_id: str) -> DatasetRecord:
        with self._lock:
            try:
                return self._records[dataset_id]
            except KeyError:
                raise ApiError(404, f"unknown dataset {dataset_id!r}") from None

    def remove(self, dataset_id: str) -> None:
        with self._lock:
            if dataset_id not in self._records:
                raise ApiError(404, f"unknown dataset {dataset_id!r}")
            del self._records[dataset_id]

    def list(self) -> list[DatasetRecord]:
        with self._lock:
            return [self._records[k] for k in sorted(self._records)]

    def set_efficient(self, dataset_id: str, enabled: bool, cap: int) -> DatasetRecord:
        record = self.get(dataset_id)
        with self._lock:
            if enabled:
                record.active = stats.trim_efficient(record.full, cap)
                record.efficient = True
                record.cap = cap
            else:
                record.active = record.full
                record.efficient = False
                record.cap = 0
            return record


# ---------------------------------------------------------------------------
# Statistic computation shared with the CLI


def _float_param(params: Mapping[str, str], name: str) -> float | None:
    raw = params.get(name)
    if raw in (None, ""):
        return None
    try:
        return float(raw)
    except ValueError:
        raise ApiError(400, f"invalid numeric value for {name!r}: {raw!r}") from None


def _int_param(params: Mapping[str, str], name: str) -> int | None:
    raw = params.get(name)
    if raw in (None, ""):
        return None
    try:
        return int(raw)
    except ValueError:
        raise ApiError(400, f"invalid integer value for {name!r}: {raw!r}") from None


def _int_list_param(params: Mapping[str, str], name: str) -> list[int] | None:
    raw = params.get(name)
    if raw in (None, ""):
        return None
    try:
        return sorted({int(tok) for tok in raw.split(",") if tok.strip()})
    except ValueError:
        raise ApiError(400, f"invalid integer list for {name!r}: {raw!r}") from None


def _resolve_grid(ds: RunDataset, params: Mapping[str, str], resolved: dict) -> TargetGrid:
    fmin = _float_param(params, "fmin")
    fmax = _float_param(params, "fmax")
    step = _float_param(params, "step")
    if fmin is None or fmax is None or step is None:
        default = stats.default_grid(ds)
        fmin = default.f_min if fmin is None else fmin
        fmax = default.f_max if fmax is None else fmax
        step = default.step if step is None else step
    try:
        grid = TargetGrid(fmin, fmax, step)
    except ValueError as exc:
        raise ApiError(400, str(exc)) from None
    resolved.update(fmin=grid.f_min, fmax=grid.f_max, step=grid.step)
    return grid


def _resolve_budgets(ds: RunDataset, params: Mapping[str, str], resolved: dict) -> list[int]:
    budgets = _int_list_param(params, "budgets")
    if budgets is None:
        budgets = stats.default_budgets(ds)
    if not budgets or min(budgets) < 1:
        raise ApiError(400, "budgets must be positive integers")
    resolved["budgets"] = ",".join(str(b) for b in budgets)
    return budgets


def _filter_algorithms(ds: RunDataset, params: Mapping[str, str], resolved: dict) -> RunDataset:
    raw = params.get("algorithms")
    if not raw:
        return ds
    wanted = {name.strip() for name in raw.split(",") if name.strip()}
    entries = {k: v for k, v in ds.entries.items() if k[0] in wanted}
    resolved["algorithms"] = ",".join(sorted(wanted))
    return RunDataset(entries, ds.report)


def _filter_percentiles(table: Table, params: Mapping[str, str], resolved: dict) -> Table:
    raw = params.get("percentiles")
    if not raw:
        return table
    try:
        keep = {int(tok) for tok in raw.split(",") if tok.strip()}
    except ValueError:
        raise ApiError(400, f"invalid percentile list {raw!r}") from None
    unknown = keep - set(stats.PERCENTILE_LEVELS)
    if unknown:
        raise ApiError(
            400,
            f"unsupported percentiles {sorted(unknown)}",
            detail=f"available: {list(stats.PERCENTILE_LEVELS)}",
        )
    drop = {f"{p}%" for p in stats.PERCENTILE_LEVELS if p not in keep}
    columns = [c for c in table.columns if c not in drop]
    resolved["percentiles"] = ",".join(str(p) for p in sorted(keep))
    return Table(columns, [{c: row.get(c) for c in columns} for row in table.rows])


def compute_statistic(
    ds: RunDataset, statistic: str, params: Mapping[str, str]
) -> tuple[Table, dict]:
    """Build the table for one statistic; returns (table, resolved params).

    ``params`` uses the exact query-parameter names of the HTTP API, so
    the CLI and the service produce identical output for identical input.
    """
    if statistic not in STATISTIC_NAMES:
        raise ApiError(404, f"unknown statistic {statistic!r}",
                       detail=f"available: {list(STATISTIC_NAMES)}")
    resolved: dict = {"statistic": statistic}
    ds = _filter_algorithms(ds, params, resolved)
    if not ds.entries:
        raise ApiError(400, "no data selected",
                       detail="dataset is empty after algorithm filtering")

    if statistic == "fixed-target-summary":
        table = stats.fixed_target_table(ds, _resolve_grid(ds, params, resolved))
        table = _filter_percentiles(table, params, resolved)
    elif statistic == "fixed-budget-summary":
        table = stats.fixed_budget_table(ds, _resolve_budgets(ds, params, resolved))
        table = _filter_percentiles(table, params, resolved)
    elif statistic == "raw-samples":
        orientation = params.get("orientation", "wide")
        if orientation not in ("wide", "long"):
            raise ApiError(400, f"orientation must be wide or long, got {orientation!r}")
        resolved["orientation"] = orientation
        if params.get("budgets"):
            budgets = _resolve_budgets(ds, params, resolved)
            table = stats.raw_samples(ds, budgets=budgets, orientation=orientation)
        else:
            grid = _resolve_grid(ds, params, resolved)
            table = stats.raw_samples(ds, grid=grid, orientation=orientation)
    elif statistic == "ecdf-target":
        grid = _resolve_grid(ds, params, resolved)
        max_budget = _int_param(params, "max_budget")
        if max_budget is not None:
            resolved["max_budget"] = max_budget
        table = stats.ecdf_fixed_target(ds, grid, max_budget)
    elif statistic == "ecdf-budget":
        table = stats.ecdf_fixed_budget(ds, _resolve_budgets(ds, params, resolved))
    elif statistic == "auc":
        grid = _resolve_grid(ds, params, resolved)
        max_budget = _int_param(params, "max_budget")
        if max_budget is not None:
            resolved["max_budget"] = max_budget
        table = stats.auc_table(ds, grid, max_budget)
    elif statistic == "histogram":
        target = _float_param(params, "target")
        budget = _int_param(params, "budget")
        if target is not None and budget is not None:
            raise ApiError(400, "give either target or budget, not both")
        if target is not None:
            resolved["target"] = target
            table = stats.histogram_table(ds, targets=[target])
        elif budget is not None:
            resolved["budget"] = budget
            table = stats.histogram_table(ds, budgets=[budget])
        elif params.get("budgets"):
            table = stats.histogram_table(ds, budgets=_resolve_budgets(ds, params, resolved))
        else:
            grid = _resolve_grid(ds, params, resolved)
            table = stats.histogram_table(ds, targets=grid.targets())
    elif statistic == "pmf":
        target = _float_param(params, "target")
        budget = _int_param(params, "budget")
        if (target is None) == (budget is None):
            raise ApiError(400, "pmf needs exactly one of target or budget")
        points = _int_param(params, "points") or 512
        if points < 2:
            raise ApiError(400, "points must be >= 2")
        resolved["points"] = points
        if target is not None:
            resolved["target"] = target
        else:
            resolved["budget"] = budget
        table = stats.pmf_table(ds, target=target, budget=budget, points=points)
    else:  # parameter-table
        name = params.get("parameter")
        if not name:
            raise ApiError(400, "parameter-table needs a 'parameter' query value")
        resolved["parameter"] = name
        grid = _resolve_grid(ds, params, resolved)
        try:
            table = stats.parameter_table(ds, name, grid)
        except LookupError as exc:
            raise ApiError(400, str(exc)) from None
    return table, resolved


def _json_params(resolved: dict) -> dict:
    return {
        key: format_value(value) if isinstance(value, float) else value
        for key, value in resolved.items()
    }


# ---------------------------------------------------------------------------
# Upload helpers


def _extract_zip(data: bytes, destination: Path) -> None:
    try:
        archive = zipfile.ZipFile(io.BytesIO(data))
    except zipfile.BadZipFile:
        raise ApiError(422, "payload is not a zip archive") from None
    for member in archive.namelist():
        target = destination / member
        if not target.resolve().is_relative_to(destination.resolve()):
            raise ApiError(422, f"archive member escapes the archive root: {member}")
    archive.extractall(destination)


def _load_tree(root: Path) -> RunDataset:
    """Load every result folder (dir containing .info files) under root."""
    folders = sorted({p.parent for p in root.rglob("*.info")})
    if not folders:
        raise ApiError(422, "no .info files found in the payload")
    dataset: RunDataset | None = None
    for folder in folders:
        loaded = stats.load_folder(folder)
        dataset = loaded if dataset is None else dataset.merged_with(loaded)
    return dataset


# ---------------------------------------------------------------------------
# Application


def create_app(
    registry: DatasetRegistry | None = None,
    static_dir: str | Path | None = None,
    max_upload_bytes: int = DEFAULT_UPLOAD_CAP,
) -> FastAPI:
    app = FastAPI(title="iohbench", docs_url=None, redoc_url=None)
    app.state.registry = registry or DatasetRegistry()

    @app.exception_handler(ApiError)
    async def handle_api_error(_request: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status, content={"error": exc.message, "detail": exc.detail}
        )

    @app.get("/api/datasets")
    async def list_datasets():
        return {"datasets": [record.describe() for record in app.state.registry.list()]}

    @app.post("/api/datasets", status_code=201)
    async def upload(request: Request):
        content_type = request.headers.get("content-type", "")
        if content_type.startswith("multipart/"):
            form = await request.form()
            upload_file = form.get("file")
            if upload_file is None or isinstance(upload_file, str):
                raise ApiError(422, "multipart upload needs a 'file' field")
            data = await upload_file.read()
            if len(data) > max_upload_bytes:
                raise ApiError(413, f"upload exceeds the {max_upload_bytes} byte cap")
            workdir = Path(tempfile.mkdtemp(prefix="iohbench-upload-"))
            try:
                _extract_zip(data, workdir)
                dataset = _load_tree(workdir)
            except (stats.DataParseError, stats.IntegrityError) as exc:
                raise ApiError(422, "could not parse the uploaded data", str(exc)) from None
            finally:
                shutil.rmtree(workdir, ignore_errors=True)
            source = getattr(upload_file, "filename", "upload.zip") or "upload.zip"
        else:
            try:
                body = await request.json()
            except Exception:
                raise ApiError(422, "expected a multipart upload or a JSON body") from None
            path = body.get("path") if isinstance(body, dict) else None
            if not path:
                raise ApiError(422, "JSON body needs a 'path' field")
            try:
                dataset = _load_tree(Path(path))
            except FileNotFoundError as exc:
                raise ApiError(422, str(exc)) from None
            except (stats.DataParseError, stats.IntegrityError) as exc:
                raise ApiError(422, "could not parse the result folder", str(exc)) from None
            source = str(path)
        record = app.state.registry.add(dataset, source)
        return {"id": record.dataset_id, "report": record.describe()}

    @app.delete("/api/datasets/{dataset_id}")
    async def delete_dataset(dataset_id: str):
        app.state.registry.remove(dataset_id)
        return {"deleted": dataset_id}

    @app.post("/api/datasets/{dataset_id}/efficient")
    async def set_efficient(dataset_id: str, request: Request):
        try:
            body = await request.json()
        except Exception:
            raise ApiError(400, "expected a JSON body") from None
        if not isinstance(body, dict) or "enabled" not in body:
            raise ApiError(400, "body needs an 'enabled' field")
        enabled = bool(body["enabled"])
        cap = int(body.get("cap", DEFAULT_EFFICIENT_CAP))
        if enabled and cap < 2:
            raise ApiError(400, "cap must be >= 2")
        record = app.state.registry.set_efficient(dataset_id, enabled, cap)
        return record.describe()

    @app.get("/api/datasets/{dataset_id}/{statistic}")
    async def query(dataset_id: str, statistic: str, request: Request):
        record = app.state.registry.get(dataset_id)
        params = dict(request.query_params)
        table, resolved = compute_statistic(record.active, statistic, params)
        if params.get("format", "json") == "csv":
            return Response(content=stats.render_csv(table), media_type="text/csv")
        return {
            "columns": table.columns,
            "rows": table.rows,
            "params": _json_params(resolved),
        }

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="dashboard")

    return app
