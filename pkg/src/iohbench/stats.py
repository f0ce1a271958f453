"""Post-processing: parse result folders and compute run-time statistics.

The dataset model mirrors the log files: runs of ordered records keyed by
(algorithm, function, dimension). Two sample families underlie everything:

* hitting times ``T(v, i)`` - evaluations run ``i`` needed to first reach
  target value ``v`` (undefined when never reached), and
* best values ``V(t, i)`` - best value run ``i`` found within budget ``t``.

Summary tables, raw-sample exports, ECDF curves, normalized areas under
the ECDF, histograms, kernel density estimates, and parameter-evolution
tables are all pure functions of an immutable dataset, so they are safe
to evaluate concurrently. All statistics read the raw (untransformed)
best-so-far column, which is comparable across instances of one function.
"""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from iohbench.logger import LogRecord, format_value

MAXIMIZE = "maximize"
MINIMIZE = "minimize"

PERCENTILE_LEVELS = (2, 5, 10, 25, 50, 75, 90, 95, 98)
STAT_COLUMNS = ("runs", "mean", "median") + tuple(f"{p}%" for p in PERCENTILE_LEVELS) + ("sd",)
ID_COLUMNS = ("algorithm", "funcId", "DIM")


class DataParseError(ValueError):
    """A data or index file violates the expected grammar."""


class IntegrityError(ValueError):
    """Loaded runs contradict each other (e.g. mixed objective directions)."""


# ---------------------------------------------------------------------------
# Dataset model


@dataclass
class Run:
    instance_id: int | None
    records: list[LogRecord]
    info_count: int | None = None
    info_best: float | None = None

    @property
    def final_evaluations(self) -> int:
        return self.records[-1].evaluations

    @property
    def final_best(self) -> float:
        return self.records[-1].best_raw


@dataclass
class DatasetEntry:
    algorithm: str
    function_id: int
    dimension: int
    suite: str = "PBO"
    parameter_names: list[str] = field(default_factory=list)
    runs: list[Run] = field(default_factory=list)


@dataclass
class LoadReport:
    sources: list[str] = field(default_factory=list)
    entries: list[dict] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


EntryKey = tuple[str, int, int]


class RunDataset:
    """Parsed, indexed collection of runs; immutable by convention."""

    def __init__(self, entries: dict[EntryKey, DatasetEntry] | None = None,
                 report: LoadReport | None = None):
        self.entries: dict[EntryKey, DatasetEntry] = entries or {}
        self.report = report or LoadReport()
        self.direction = detect_direction(self) if self.entries else MAXIMIZE

    def sorted_entries(self) -> list[DatasetEntry]:
        return [self.entries[key] for key in sorted(self.entries)]

    def merged_with(self, other: "RunDataset") -> "RunDataset":
        entries = {k: v for k, v in self.entries.items()}
        for key, entry in other.entries.items():
            if key in entries:
                entries[key] = DatasetEntry(
                    entry.algorithm,
                    entry.function_id,
                    entry.dimension,
                    entry.suite,
                    entries[key].parameter_names,
                    entries[key].runs + entry.runs,
                )
            else:
                entries[key] = entry
        report = LoadReport(
            self.report.sources + other.report.sources,
            self.report.entries + other.report.entries,
            self.report.warnings + other.report.warnings,
        )
        return RunDataset(entries, report)


def detect_direction(ds: RunDataset) -> str:
    """Infer minimization vs maximization from the best-so-far columns."""
    saw_increase = saw_decrease = False
    for entry in ds.entries.values():
        for run in entry.runs:
            bests = [r.best_raw for r in run.records]
            increases = any(b > a for a, b in zip(bests, bests[1:]))
            decreases = any(b < a for a, b in zip(bests, bests[1:]))
            if increases and decreases:
                raise IntegrityError(
                    f"best-so-far values of a run of {entry.algorithm} on "
                    f"f{entry.function_id} are not monotone"
                )
            saw_increase |= increases
            saw_decrease |= decreases
    if saw_increase and saw_decrease:
        raise IntegrityError("runs disagree on the objective direction")
    return MINIMIZE if saw_decrease else MAXIMIZE


# ---------------------------------------------------------------------------
# Folder loading

_INFO_LINE = re.compile(
    r"suite = '(?P<suite>[^']*)', funcId = (?P<fid>\d+), DIM = (?P<dim>\d+), "
    r"algId = '(?P<alg>[^']*)', version = '(?P<version>[^']*)'"
)
_RUN_ENTRY = re.compile(r"^(\d+):(\d+)\|(\S+)$")


def _parse_data_file(path: Path) -> tuple[list[str], list[list[LogRecord]]]:
    parameter_names: list[str] | None = None
    runs: list[list[LogRecord]] = []
    with path.open() as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith('"'):
                names = re.findall(r'"([^"]*)"', line)
                if len(names) < 5:
                    raise DataParseError(f"{path}:{lineno}: short header line")
                if parameter_names is None:
                    parameter_names = names[5:]
                runs.append([])
                continue
            if not runs:
                raise DataParseError(f"{path}:{lineno}: data row before any header")
            tokens = line.split()
            expected = 5 + len(parameter_names or ())
            if len(tokens) != expected:
                raise DataParseError(
                    f"{path}:{lineno}: expected {expected} columns, got {len(tokens)}"
                )
            try:
                evaluations = int(tokens[0])
                values = [float(t) for t in tokens[1:]]
            except ValueError:
                raise DataParseError(f"{path}:{lineno}: non-numeric field") from None
            runs[-1].append(
                LogRecord(evaluations, values[0], values[1], values[2], values[3],
                          tuple(values[4:]))
            )
    return parameter_names or [], runs


def _resolve_data_path(folder: Path, rel: str, warnings: list[str]) -> Path | None:
    primary = folder.joinpath(*rel.split("/"))
    if primary.exists():
        return primary
    for fallback in (".cdat", ".idat", ".tdat"):
        candidate = primary.with_suffix(fallback)
        if candidate.exists():
            warnings.append(f"{primary.name} missing, fell back to {candidate.name}")
            return candidate
    warnings.append(f"data file {rel} not found under {folder}")
    return None


def load_folder(path: str | Path) -> RunDataset:
    """Parse one result folder written in the .info index format."""
    folder = Path(path)
    info_files = sorted(folder.glob("*.info"))
    if not info_files:
        raise FileNotFoundError(f"no .info files in {folder}")
    report = LoadReport(sources=[str(folder)])
    entries: dict[EntryKey, DatasetEntry] = {}

    for info_path in info_files:
        lines = [l.rstrip("\n") for l in info_path.open()]
        index = 0
        while index < len(lines):
            line = lines[index]
            if not line.strip():
                index += 1
                continue
            match = _INFO_LINE.match(line)
            if not match:
                raise DataParseError(f"{info_path}:{index + 1}: malformed header line")
            if index + 2 >= len(lines) or not lines[index + 1].startswith("%"):
                raise DataParseError(f"{info_path}:{index + 1}: truncated block")
            data_line = lines[index + 2]
            index += 3

            parts = [p.strip() for p in data_line.split(",")]
            rel_path, run_entries = parts[0], []
            for part in parts[1:]:
                entry_match = _RUN_ENTRY.match(part)
                if not entry_match:
                    raise DataParseError(
                        f"{info_path}: malformed run entry {part!r}"
                    )
                run_entries.append(
                    (
                        int(entry_match.group(1)),
                        int(entry_match.group(2)),
                        float(entry_match.group(3)),
                    )
                )

            data_path = _resolve_data_path(folder, rel_path, report.warnings)
            if data_path is None:
                continue
            parameter_names, record_runs = _parse_data_file(data_path)

            if len(record_runs) != len(run_entries):
                report.warnings.append(
                    f"{data_path.name}: {len(record_runs)} runs in file but "
                    f"{len(run_entries)} run entries in {info_path.name}"
                )
            runs: list[Run] = []
            for position, records in enumerate(record_runs):
                meta = run_entries[position] if position < len(run_entries) else None
                run = Run(
                    instance_id=meta[0] if meta else None,
                    records=records,
                    info_count=meta[1] if meta else None,
                    info_best=meta[2] if meta else None,
                )
                if not records:
                    report.warnings.append(
                        f"{data_path.name}: run {position + 1} has no records, skipped"
                    )
                    continue
                if data_path.suffix == ".dat" and meta and meta[1] != len(records):
                    report.warnings.append(
                        f"{data_path.name}: run {position + 1} has {len(records)} rows "
                        f"but .info reports {meta[1]}"
                    )
                runs.append(run)

            key = (match.group("alg"), int(match.group("fid")), int(match.group("dim")))
            if key not in entries:
                entries[key] = DatasetEntry(
                    algorithm=key[0],
                    function_id=key[1],
                    dimension=key[2],
                    suite=match.group("suite"),
                    parameter_names=list(parameter_names),
                )
            elif entries[key].parameter_names != list(parameter_names):
                report.warnings.append(
                    f"{data_path.name}: parameter names differ within "
                    f"{key[0]}/f{key[1]}/DIM{key[2]}; keeping the first set"
                )
            entries[key].runs.extend(runs)

    for key in sorted(entries):
        entry = entries[key]
        report.entries.append(
            {
                "algorithm": entry.algorithm,
                "function_id": entry.function_id,
                "dimension": entry.dimension,
                "runs": len(entry.runs),
                "parameters": list(entry.parameter_names),
            }
        )
    return RunDataset(entries, report)


def load_folders(paths: Sequence[str | Path]) -> RunDataset:
    dataset: RunDataset | None = None
    for path in paths:
        loaded = load_folder(path)
        dataset = loaded if dataset is None else dataset.merged_with(loaded)
    if dataset is None:
        raise ValueError("no folders given")
    return dataset


# ---------------------------------------------------------------------------
# Elementary statistics


def _meets(value: float, target: float, direction: str) -> bool:
    return value >= target if direction == MAXIMIZE else value <= target


def first_hitting_time(run: Run, target: float, direction: str = MAXIMIZE) -> int | None:
    """Evaluations until the best-so-far value first meets the target."""
    for record in run.records:
        if _meets(record.best_raw, target, direction):
            return record.evaluations
    return None


def best_value_at(run: Run, budget: int) -> float:
    """Best-so-far value within the first ``budget`` evaluations.

    For budgets before the first logged record the first record's value
    is returned; with logger-written data that record sits at
    evaluation 1, so the case only arises on foreign data.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    best = run.records[0].best_raw
    for record in run.records:
        if record.evaluations > budget:
            break
        best = record.best_raw
    return best


def percentile(samples: Sequence[float], p: float) -> float:
    """p-th percentile as the sample at 1-based index floor(p*r/100).

    The index is clamped to 1 where the formula would yield 0. Samples
    must already be sorted non-decreasingly.
    """
    r = len(samples)
    if r == 0:
        raise ValueError("percentile of empty sample list")
    if not 1 <= p <= 100:
        raise ValueError("percentile level must lie in 1..100")
    if float(p).is_integer():
        index = (int(p) * r) // 100
    else:
        index = math.floor(p * r / 100.0)
    return samples[max(1, index) - 1]


@dataclass(frozen=True)
class TargetGrid:
    """Evenly spaced target values f_min, f_min+step, ..., up to f_max."""

    f_min: float
    f_max: float
    step: float

    def __post_init__(self):
        if self.f_min > self.f_max:
            raise ValueError("f_min must not exceed f_max")
        if self.step <= 0:
            raise ValueError("step must be positive")

    def targets(self) -> list[float]:
        count = int(math.floor((self.f_max - self.f_min) / self.step + 1e-9)) + 1
        return [self.f_min + k * self.step for k in range(count)]


def default_grid(ds: RunDataset) -> TargetGrid:
    """Grid spanning observed best values in ten steps."""
    firsts = [run.records[0].best_raw for e in ds.entries.values() for run in e.runs]
    finals = [run.final_best for e in ds.entries.values() for run in e.runs]
    if not firsts:
        raise ValueError("dataset is empty")
    lo = min(min(firsts), min(finals))
    hi = max(max(firsts), max(finals))
    if hi <= lo:
        return TargetGrid(lo, lo, 1.0)
    return TargetGrid(lo, hi, (hi - lo) / 10.0)


def default_budgets(ds: RunDataset) -> list[int]:
    """Budgets 1,2,5 x powers of ten up to the longest run, inclusive."""
    longest = max(run.final_evaluations for e in ds.entries.values() for run in e.runs)
    budgets = {longest}
    for v in (1, 2, 5):
        value = v
        while value <= longest:
            budgets.add(value)
            value *= 10
    return sorted(budgets)


# ---------------------------------------------------------------------------
# Tables


@dataclass
class Table:
    columns: list[str]
    rows: list[dict]

    def column(self, name: str) -> list:
        return [row.get(name) for row in self.rows]


def render_csv(table: Table) -> bytes:
    """RFC-4180 CSV with the table's fixed column order; empty cell for None."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\r\n")
    writer.writerow(table.columns)
    for row in table.rows:
        rendered = []
        for name in table.columns:
            value = row.get(name)
            if value is None:
                rendered.append("")
            elif isinstance(value, str):
                rendered.append(value)
            else:
                rendered.append(format_value(value))
        writer.writerow(rendered)
    return buffer.getvalue().encode("utf-8")


def _identity(entry: DatasetEntry) -> dict:
    return {"algorithm": entry.algorithm, "funcId": entry.function_id,
            "DIM": entry.dimension}


def _sample_stats(samples: list[float]) -> dict:
    ordered = sorted(samples)
    r = len(ordered)
    # median is the conventional sample median; the 50% column keeps the
    # low-biased floor(p*r/100) percentile estimator
    middle = ordered[r // 2] if r % 2 else (ordered[r // 2 - 1] + ordered[r // 2]) / 2.0
    stats = {
        "runs": r,
        "mean": sum(ordered) / r,
        "median": middle,
        "sd": float(np.std(ordered)),
    }
    for p in PERCENTILE_LEVELS:
        stats[f"{p}%"] = percentile(ordered, p)
    return stats


def _blank_stats() -> dict:
    blank = {"runs": 0, "mean": None, "median": None, "sd": None}
    for p in PERCENTILE_LEVELS:
        blank[f"{p}%"] = None
    return blank


def _ordered_targets(grid: TargetGrid, direction: str) -> list[float]:
    targets = grid.targets()
    return list(reversed(targets)) if direction == MINIMIZE else targets


def fixed_target_table(ds: RunDataset, grid: TargetGrid) -> Table:
    """Hitting-time statistics per (algorithm, target value).

    Runs that never reach a target are excluded from the mean and the
    percentiles; the runs column reports how many did reach it.
    """
    columns = [*ID_COLUMNS, "target", *STAT_COLUMNS]
    rows = []
    for entry in ds.sorted_entries():
        for target in _ordered_targets(grid, ds.direction):
            times = [first_hitting_time(run, target, ds.direction) for run in entry.runs]
            samples = [float(t) for t in times if t is not None]
            stats = _sample_stats(samples) if samples else _blank_stats()
            rows.append({**_identity(entry), "target": target, **stats})
    return Table(columns, rows)


def fixed_budget_table(ds: RunDataset, budgets: Sequence[int]) -> Table:
    """Best-value statistics per (algorithm, budget); every run contributes."""
    columns = [*ID_COLUMNS, "budget", *STAT_COLUMNS]
    rows = []
    for entry in ds.sorted_entries():
        for budget in sorted(budgets):
            samples = [best_value_at(run, budget) for run in entry.runs]
            stats = _sample_stats(samples) if samples else _blank_stats()
            rows.append({**_identity(entry), "budget": int(budget), **stats})
    return Table(columns, rows)


def raw_samples(
    ds: RunDataset,
    grid: TargetGrid | None = None,
    budgets: Sequence[int] | None = None,
    orientation: str = "wide",
) -> Table:
    """Sorted per-run samples behind the summary tables.

    Fixed-target samples are hitting times with unreached runs rendered
    as empty cells; fixed-budget samples are best values. ``wide`` puts
    runs in columns, ``long`` one run per row.
    """
    if (grid is None) == (budgets is None):
        raise ValueError("exactly one of grid and budgets must be given")
    if orientation not in ("wide", "long"):
        raise ValueError(f"unknown orientation {orientation!r}")
    key_column = "target" if grid is not None else "budget"

    per_entry: list[tuple[DatasetEntry, list[tuple[float, list[float | None]]]]] = []
    for entry in ds.sorted_entries():
        keyed = []
        if grid is not None:
            for target in _ordered_targets(grid, ds.direction):
                times = [first_hitting_time(run, target, ds.direction) for run in entry.runs]
                reached = sorted(float(t) for t in times if t is not None)
                missing = [None] * (len(times) - len(reached))
                keyed.append((target, reached + missing))
        else:
            for budget in sorted(budgets):
                keyed.append(
                    (int(budget), sorted(best_value_at(run, budget) for run in entry.runs))
                )
        per_entry.append((entry, keyed))

    if orientation == "long":
        columns = [*ID_COLUMNS, key_column, "run", "value"]
        rows = [
            {**_identity(entry), key_column: key, "run": i + 1, "value": value}
            for entry, keyed in per_entry
            for key, values in keyed
            for i, value in enumerate(values)
        ]
        return Table(columns, rows)

    width = max((len(e.runs) for e in ds.entries.values()), default=0)
    columns = [*ID_COLUMNS, key_column, *(f"run{i + 1}" for i in range(width))]
    rows = []
    for entry, keyed in per_entry:
        for key, values in keyed:
            row = {**_identity(entry), key_column: key}
            for i, value in enumerate(values):
                row[f"run{i + 1}"] = value
            rows.append(row)
    return Table(columns, rows)


# ---------------------------------------------------------------------------
# ECDF curves and area under the curve


def _hitting_times(entry: DatasetEntry, targets: Sequence[float], direction: str) -> list[int | None]:
    return [
        first_hitting_time(run, target, direction)
        for run in entry.runs
        for target in targets
    ]


def ecdf_fixed_target(ds: RunDataset, grid: TargetGrid, max_budget: int | None = None) -> Table:
    """Fraction of (run, target) pairs satisfied as a step function of budget."""
    columns = [*ID_COLUMNS, "budget", "proportion"]
    rows = []
    for entry in ds.sorted_entries():
        targets = grid.targets()
        times = _hitting_times(entry, targets, ds.direction)
        total = len(times)
        end = max_budget or max(run.final_evaluations for run in entry.runs)
        reached = sorted(t for t in times if t is not None and t <= end)
        knots: list[tuple[int, float]] = []
        satisfied = 0
        for time, streak in _run_lengths(reached):
            satisfied += streak
            knots.append((time, satisfied / total))
        if not knots or knots[0][0] > 1:
            knots.insert(0, (1, 0.0))
        if knots[-1][0] < end:
            knots.append((end, knots[-1][1]))
        rows.extend(
            {**_identity(entry), "budget": t, "proportion": frac} for t, frac in knots
        )
    return Table(columns, rows)


def _run_lengths(ordered: Sequence) -> list[tuple[object, int]]:
    out: list[tuple[object, int]] = []
    for value in ordered:
        if out and out[-1][0] == value:
            out[-1] = (value, out[-1][1] + 1)
        else:
            out.append((value, 1))
    return out


def ecdf_fixed_budget(ds: RunDataset, budgets: Sequence[int]) -> Table:
    """Fraction of (run, budget) pairs satisfied as a step function of target."""
    columns = [*ID_COLUMNS, "target", "proportion"]
    rows = []
    for entry in ds.sorted_entries():
        values = sorted(
            best_value_at(run, budget) for run in entry.runs for budget in sorted(budgets)
        )
        total = len(values)
        knots: list[tuple[float, float]] = []
        seen = 0
        for value, streak in _run_lengths(values):
            if ds.direction == MAXIMIZE:
                # pairs with V >= value; `seen` counts strictly smaller samples
                knots.append((value, (total - seen) / total))
            else:
                knots.append((value, (seen + streak) / total))
            seen += streak
        rows.extend(
            {**_identity(entry), "target": v, "proportion": frac} for v, frac in knots
        )
    return Table(columns, rows)


def auc_normalized(
    ds: RunDataset, grid: TargetGrid, max_budget: int | None = None
) -> dict[EntryKey, float]:
    """Area under the fixed-target ECDF over budgets 1..max_budget.

    Normalized by the area of the ideal algorithm whose curve is 1
    everywhere, i.e. the discrete mean of the ECDF over the integer
    budgets; 1.0 means every target was hit on the first evaluation.
    """
    result: dict[EntryKey, float] = {}
    for key in sorted(ds.entries):
        entry = ds.entries[key]
        targets = grid.targets()
        end = max_budget or max(run.final_evaluations for run in entry.runs)
        if end < 1:
            raise ValueError("max_budget must be >= 1")
        times = _hitting_times(entry, targets, ds.direction)
        covered = sum(end - t + 1 for t in times if t is not None and t <= end)
        result[key] = covered / (len(times) * end)
    return result


def auc_table(ds: RunDataset, grid: TargetGrid, max_budget: int | None = None) -> Table:
    """Normalized AUC per single target (radar axes) plus the 'all' aggregate."""
    columns = [*ID_COLUMNS, "target", "auc"]
    rows = []
    aggregate = auc_normalized(ds, grid, max_budget)
    for key in sorted(ds.entries):
        entry = ds.entries[key]
        for target in _ordered_targets(grid, ds.direction):
            single = auc_normalized(ds, TargetGrid(target, target, 1.0), max_budget)
            rows.append({**_identity(entry), "target": target, "auc": single[key]})
        rows.append({**_identity(entry), "target": "all", "auc": aggregate[key]})
    return Table(columns, rows)


# ---------------------------------------------------------------------------
# Distributions


def fd_histogram(samples: Sequence[float]) -> list[tuple[float, float, int]]:
    """Histogram bins (lo, hi, count) sized by the Freedman-Diaconis rule.

    Bin width is (Q75 - Q25) / cuberoot(r) with the quartiles taken from
    the same percentile estimator as the summary tables; a zero width
    collapses to a single bin holding all samples.
    """
    if not samples:
        raise ValueError("histogram of empty sample list")
    ordered = sorted(float(s) for s in samples)
    r = len(ordered)
    width = (percentile(ordered, 75) - percentile(ordered, 25)) / r ** (1.0 / 3.0)
    low, high = ordered[0], ordered[-1]
    if width <= 0:
        return [(low, high, r)]
    bin_count = int(math.floor((high - low) / width)) + 1
    counts = [0] * bin_count
    for value in ordered:
        index = min(int((value - low) / width), bin_count - 1)
        counts[index] += 1
    return [
        (low + k * width, low + (k + 1) * width, counts[k]) for k in range(bin_count)
    ]


def pmf_estimate(samples: Sequence[float], points: int = 512) -> list[tuple[float, float]]:
    """Gaussian kernel density over [min, max], normalized on that span.

    Bandwidth follows Silverman's rule 1.06 * sd * r^(-1/5); exact
    duplicates are collapsed into weighted kernels. The returned grid
    densities are non-negative and trapezoid-integrate to one.
    """
    values = np.asarray(sorted(float(s) for s in samples))
    r = values.size
    if r < 2:
        raise ValueError("density estimate needs at least two samples")
    spread = float(np.std(values, ddof=1))
    if spread == 0:
        raise ValueError("density estimate needs samples with spread")
    bandwidth = 1.06 * spread * r ** (-0.2)
    grid = np.linspace(values[0], values[-1], points)
    unique, counts = np.unique(values, return_counts=True)
    z = (grid[:, None] - unique[None, :]) / bandwidth
    density = (np.exp(-0.5 * z * z) @ (counts / r)) / (bandwidth * math.sqrt(2 * math.pi))
    density /= np.trapezoid(density, grid)
    return list(zip(grid.tolist(), density.tolist()))


def _samples_at(
    entry: DatasetEntry, direction: str, target: float | None, budget: int | None
) -> list[float]:
    if (target is None) == (budget is None):
        raise ValueError("exactly one of target and budget must be given")
    if target is not None:
        times = [first_hitting_time(run, target, direction) for run in entry.runs]
        return [float(t) for t in times if t is not None]
    return [best_value_at(run, budget) for run in entry.runs]


def histogram_table(
    ds: RunDataset,
    targets: Sequence[float] | None = None,
    budgets: Sequence[int] | None = None,
) -> Table:
    """Freedman-Diaconis bins of the samples at each given target or budget."""
    if (targets is None) == (budgets is None):
        raise ValueError("exactly one of targets and budgets must be given")
    key_column = "target" if targets is not None else "budget"
    keys = list(targets) if targets is not None else [int(b) for b in budgets]
    columns = [*ID_COLUMNS, key_column, "bin_lo", "bin_hi", "count"]
    rows = []
    for entry in ds.sorted_entries():
        for key in keys:
            samples = _samples_at(
                entry,
                ds.direction,
                key if targets is not None else None,
                key if budgets is not None else None,
            )
            if not samples:
                continue
            for lo, hi, count in fd_histogram(samples):
                rows.append(
                    {**_identity(entry), key_column: key, "bin_lo": lo,
                     "bin_hi": hi, "count": count}
                )
    return Table(columns, rows)


def pmf_table(
    ds: RunDataset,
    target: float | None = None,
    budget: int | None = None,
    points: int = 512,
) -> Table:
    """Kernel density curves of the samples at one target or budget."""
    key_column = "target" if target is not None else "budget"
    key = target if target is not None else (int(budget) if budget is not None else None)
    columns = [*ID_COLUMNS, key_column, "x", "density"]
    rows = []
    for entry in ds.sorted_entries():
        samples = _samples_at(entry, ds.direction, target, budget)
        if len(samples) < 2 or len(set(samples)) < 2:
            continue
        for x, density in pmf_estimate(samples, points):
            rows.append(
                {**_identity(entry), key_column: key, "x": x, "density": density}
            )
    return Table(columns, rows)


# ---------------------------------------------------------------------------
# Parameter evolution


def parameter_table(ds: RunDataset, parameter_name: str, grid: TargetGrid) -> Table:
    """Statistics of a tracked parameter at first hit of each target value."""
    known = {name for e in ds.entries.values() for name in e.parameter_names}
    if parameter_name not in known:
        raise LookupError(
            f"unknown parameter {parameter_name!r}; tracked parameters: "
            f"{sorted(known) or 'none'}"
        )
    columns = [*ID_COLUMNS, "target", *STAT_COLUMNS]
    rows = []
    for entry in ds.sorted_entries():
        if parameter_name not in entry.parameter_names:
            continue
        position = entry.parameter_names.index(parameter_name)
        for target in _ordered_targets(grid, ds.direction):
            values = []
            for run in entry.runs:
                for record in run.records:
                    if _meets(record.best_raw, target, ds.direction):
                        values.append(record.parameters[position])
                        break
            stats = _sample_stats(values) if values else _blank_stats()
            rows.append({**_identity(entry), "target": target, **stats})
    return Table(columns, rows)


# ---------------------------------------------------------------------------
# Efficient mode


def trim_efficient(ds: RunDataset, cap: int) -> RunDataset:
    """Lossy per-run trimming that preserves endpoints and improvements.

    Runs with at most ``cap`` records pass through unchanged; otherwise
    the first record, the last record, and all strict improvements are
    kept, thinned further by a ceil(count/cap) stride if still above the
    cap. Improvement-driven statistics (hitting times, AUC) survive the
    trim exactly as long as the cap exceeds the improvement count.
    """
    if cap < 2:
        raise ValueError("cap must be >= 2")
    entries = {}
    for key, entry in ds.entries.items():
        trimmed_runs = []
        for run in entry.runs:
            records = run.records
            if len(records) <= cap:
                trimmed_runs.append(run)
                continue
            keep = {0, len(records) - 1}
            best = records[0].best_raw
            for position in range(1, len(records)):
                value = records[position].best_raw
                if _meets(value, best, ds.direction) and value != best:
                    keep.add(position)
                    best = value
            kept = sorted(keep)
            if len(kept) > cap:
                stride = math.ceil(len(kept) / cap)
                kept = sorted(set(kept[::stride]) | {0, len(records) - 1})
            trimmed_runs.append(
                Run(run.instance_id, [records[k] for k in kept],
                    run.info_count, run.info_best)
            )
        entries[key] = DatasetEntry(
            entry.algorithm, entry.function_id, entry.dimension, entry.suite,
            entry.parameter_names, trimmed_runs,
        )
    return RunDataset(entries, ds.report)
