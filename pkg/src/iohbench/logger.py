"""Run observation and the four trigger-driven data-file families.

Every function evaluation of a run passes through :meth:`RunLogger.observe`,
which appends a record to each enabled file whose trigger fires:

* ``.cdat`` - every evaluation,
* ``.idat`` - every tau-th evaluation,
* ``.dat``  - every strict improvement of the best-so-far raw value,
* ``.tdat`` - log-spaced evaluation budgets.

The first evaluation is logged in every enabled file so all curves are
anchored at t=1, and run finalization force-appends the last evaluation
to ``.dat`` and ``.tdat`` so fixed-budget statistics at the full budget
are exact. One ``.info`` index file per benchmark function records, per
(dimension) block, the data path and a ``instance:rows|best`` entry per
run. The byte-level grammar is documented in docs/formats.md.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable

from iohbench import __version__

FILE_FAMILIES = ("dat", "cdat", "idat", "tdat")

VALUE_HEADERS = (
    "function evaluation",
    "current f(x)",
    "best-so-far f(x)",
    "current af(x)+b",
    "best af(x)+b",
)


@dataclass(frozen=True)
class ObserverConfig:
    """Output location, naming, and trigger granularity of an experiment."""

    result_folder: str
    algorithm_name: str
    algorithm_info: str = ""
    parameter_names: list[str] = field(default_factory=list)
    complete_triggers: bool = False
    interval_step: int = 0  # tau; 0 disables .idat
    target_triggers: int = 0  # t of the 10^(i/t) budgets; 0 disables that family
    base_evaluations: list[int] = field(default_factory=list)  # v-list; empty disables
    observer_name: str = "PBO"

    def __post_init__(self):
        if self.interval_step < 0 or self.target_triggers < 0:
            raise ValueError("trigger steps must be non-negative")
        if any(v < 1 for v in self.base_evaluations):
            raise ValueError("base evaluation triggers must be >= 1")

    @property
    def tdat_enabled(self) -> bool:
        return self.target_triggers > 0 or bool(self.base_evaluations)


@dataclass(frozen=True)
class LogRecord:
    """One observed evaluation, in data-file column order."""

    evaluations: int
    raw_value: float
    best_raw: float
    transformed_value: float
    best_transformed: float
    parameters: tuple[float, ...] = ()


@dataclass(frozen=True)
class RunSummary:
    instance_id: int
    datapoint_count: int  # lines this run contributed to .dat
    final_best: float


def time_trigger_budgets(t: int, v_list: Iterable[int], max_budget: int) -> list[int]:
    """Evaluation budgets of the .tdat family, sorted and deduplicated.

    Union of ``v * 10^i`` for every v in the list and, when ``t > 0``,
    ``10^(i/t)`` rounded to the nearest integer (half up), filtered to
    ``<= max_budget``.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    budgets: set[int] = set()
    for v in v_list:
        if v < 1:
            raise ValueError("base evaluation triggers must be >= 1")
        value = int(v)
        while value <= max_budget:
            budgets.add(value)
            value *= 10
    if t > 0:
        i = 0
        while True:
            budget = int(10.0 ** (i / t) + 0.5)
            if budget > max_budget:
                break
            budgets.add(budget)
            i += 1
    return sorted(budgets)


def format_value(value: float) -> str:
    """Shortest decimal representation that parses back to the same double."""
    v = float(value)
    if math.isfinite(v) and v == int(v) and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


class RunLogger:
    """Per-run logging state; create via :meth:`LogGroup.start_run`."""

    def __init__(
        self,
        files: dict[str, IO[str]],
        parameter_names: list[str],
        instance_id: int,
        tdat_budgets: set[int],
        interval_step: int = 0,
    ):
        self._files = files
        self._parameter_names = parameter_names
        self._instance_id = instance_id
        self._tdat_budgets = tdat_budgets
        self._idat_step = interval_step or 1
        self._best_raw = -math.inf
        self._best_transformed = -math.inf
        self._dat_rows = 0
        self._last_record: LogRecord | None = None
        self._last_written: dict[str, int] = {}
        self._finalized = False
        header = " ".join(
            f'"{name}"' for name in (*VALUE_HEADERS, *parameter_names)
        )
        for handle in files.values():
            handle.write(header + "\n")

    def observe(
        self,
        evaluations: int,
        raw: float,
        transformed: float,
        parameters: Iterable[float] = (),
    ) -> None:
        """Record one evaluation; must be called in evaluation order."""
        if self._finalized:
            raise RuntimeError("run already finalized")
        params = tuple(float(p) for p in parameters)
        if len(params) != len(self._parameter_names):
            raise ValueError(
                f"got {len(params)} parameter values for "
                f"{len(self._parameter_names)} configured parameter names"
            )
        improved = raw > self._best_raw
        self._best_raw = max(self._best_raw, raw)
        self._best_transformed = max(self._best_transformed, transformed)
        record = LogRecord(
            evaluations, raw, self._best_raw, transformed, self._best_transformed, params
        )
        self._last_record = record

        first = evaluations == 1
        if "cdat" in self._files:
            self._write("cdat", record)
        if "idat" in self._files and (first or evaluations % self._idat_step == 0):
            self._write("idat", record)
        if "dat" in self._files and (first or improved):
            self._write("dat", record)
            self._dat_rows += 1
        if "tdat" in self._files and (first or evaluations in self._tdat_budgets):
            self._write("tdat", record)

    def finalize(self) -> RunSummary:
        """Flush and close out the run; append the final record if missing."""
        if not self._finalized:
            self._finalized = True
            record = self._last_record
            if record is not None:
                for family in ("dat", "tdat"):
                    if family in self._files and (
                        self._last_written.get(family) != record.evaluations
                    ):
                        self._write(family, record)
                        if family == "dat":
                            self._dat_rows += 1
            for handle in self._files.values():
                handle.flush()
        return RunSummary(self._instance_id, self._dat_rows, self._best_raw)

    def _write(self, family: str, record: LogRecord) -> None:
        fields = [
            str(record.evaluations),
            format_value(record.raw_value),
            format_value(record.best_raw),
            format_value(record.transformed_value),
            format_value(record.best_transformed),
            *(format_value(p) for p in record.parameters),
        ]
        self._files[family].write(" ".join(fields) + "\n")
        self._last_written[family] = record.evaluations


@dataclass(frozen=True)
class InfoBlock:
    """One dimension block of a function's .info index, pending write."""

    function_id: int
    dimension: int
    min_instance: int
    data_path: str  # relative to the result folder, POSIX separators
    summaries: tuple[RunSummary, ...]


class LogGroup:
    """Owns the data files of one (function, dimension) group of runs."""

    def __init__(self, folder: Path, config: ObserverConfig, function_id: int,
                 dimension: int, min_instance: int):
        self.function_id = function_id
        self.dimension = dimension
        self.min_instance = min_instance
        self._config = config
        data_dir = folder / f"data_f{function_id}"
        data_dir.mkdir(parents=True, exist_ok=True)
        stem = f"IOHprofiler_f{function_id}_DIM{dimension}_i{min_instance}"
        self._rel_dat = f"data_f{function_id}/{stem}.dat"
        families = ["dat"]
        if config.complete_triggers:
            families.append("cdat")
        if config.interval_step > 0:
            families.append("idat")
        if config.tdat_enabled:
            families.append("tdat")
        self._files: dict[str, IO[str]] = {
            fam: (data_dir / f"{stem}.{fam}").open("w", newline="\n")
            for fam in families
        }
        self._summaries: list[RunSummary] = []
        self._active: RunLogger | None = None

    def start_run(self, instance_id: int, max_budget: int) -> RunLogger:
        if self._active is not None and not self._active._finalized:
            raise RuntimeError("previous run not finalized")
        budgets = set(
            time_trigger_budgets(
                self._config.target_triggers, self._config.base_evaluations, max_budget
            )
        )
        run = RunLogger(
            self._files,
            self._config.parameter_names,
            instance_id,
            budgets,
            self._config.interval_step,
        )
        self._active = run
        return run

    def finish_run(self, run: RunLogger) -> RunSummary:
        summary = run.finalize()
        self._summaries.append(summary)
        return summary

    def close(self) -> InfoBlock:
        """Close data files and return the pending .info block."""
        if self._active is not None and not self._active._finalized:
            self.finish_run(self._active)
        for handle in self._files.values():
            handle.close()
        return InfoBlock(
            self.function_id,
            self.dimension,
            self.min_instance,
            self._rel_dat,
            tuple(self._summaries),
        )


class ExperimentLogger:
    """Writes one experiment's result folder.

    Data files are written per (function, dimension) group as runs
    execute; .info index blocks are collected and written by
    :meth:`write_info` after the groups complete, in deterministic
    order, so concurrent groups never interleave index lines.
    """

    def __init__(self, config: ObserverConfig, suite_name: str = "PBO",
                 version: str = __version__):
        self.config = config
        self.suite_name = suite_name
        self.version = version
        self.folder = Path(config.result_folder)
        self.folder.mkdir(parents=True, exist_ok=True)
        self._info_started: set[Path] = set()

    def start_group(self, function_id: int, dimension: int, min_instance: int) -> LogGroup:
        return LogGroup(self.folder, self.config, function_id, dimension, min_instance)

    def write_info(self, blocks: Iterable[InfoBlock]) -> list[Path]:
        """Append index blocks, grouped per function, sorted by dimension."""
        written = []
        for block in sorted(blocks, key=lambda b: (b.function_id, b.dimension)):
            path = self.folder / (
                f"IOHprofiler_f{block.function_id}_i{block.min_instance}.info"
            )
            mode = "a" if path in self._info_started else "w"
            self._info_started.add(path)
            entries = ", ".join(
                f"{s.instance_id}:{s.datapoint_count}|{format_value(s.final_best)}"
                for s in block.summaries
            )
            with path.open(mode, newline="\n") as handle:
                handle.write(
                    f"suite = '{self.suite_name}', funcId = {block.function_id}, "
                    f"DIM = {block.dimension}, algId = '{self.config.algorithm_name}', "
                    f"version = '{self.version}'\n"
                )
                handle.write(f"% {self.config.algorithm_info}\n")
                handle.write(f"{block.data_path}, {entries}\n")
            written.append(path)
        return written
