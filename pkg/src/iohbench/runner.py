"""Configuration-driven experiment execution.

Parses ``configuration.ini`` (sections [suite], [observer], [triggers]),
expands the function x dimension x instance cross-product, and drives
``independent_restarts`` runs per cell with ``budget_multiplier * dimension``
evaluations each. Algorithms receive an :class:`AlgorithmContext` whose
``evaluate`` callback returns the transformed instance value and feeds the
run logger; parameters staged via ``set_parameters`` ride along on the next
logged record.
"""

from __future__ import annotations

import concurrent.futures
import configparser
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from iohbench.logger import ExperimentLogger, ObserverConfig, RunSummary
from iohbench.suite import (
    InstancedProblem,
    SeededGenerator,
    get_problem,
    make_instance,
    register_problem,  # noqa: F401  (re-exported: problems register through here)
)


class ConfigError(ValueError):
    """Raised for malformed or incomplete experiment configurations."""


class BudgetExhaustedError(RuntimeError):
    """Raised when an algorithm evaluates past its run budget."""


class _OptimumReached(Exception):
    """Internal control flow for the optional stop-on-optimum mode."""


@dataclass(frozen=True)
class ExperimentConfig:
    suite_name: str
    function_ids: tuple[int, ...]
    instance_ids: tuple[int, ...]
    dimensions: tuple[int, ...]
    observer: ObserverConfig
    budget_multiplier: int = 50
    independent_restarts: int = 1
    stop_on_optimum: bool = False


_SUITE_KEYS = {
    "suite_name",
    "functions_id",
    "instances_id",
    "dimensions",
    "budget_multiplier",
    "independent_restarts",
    "stop_on_optimum",
}
_OBSERVER_KEYS = {
    "observer_name",
    "result_folder",
    "algorithm_name",
    "algorithm_info",
    "parameters_name",
}
_TRIGGER_KEYS = {
    "complete_triggers",
    "number_interval_triggers",
    "number_target_triggers",
    "base_evaluation_triggers",
}
_REQUIRED = {
    "suite": {"suite_name", "functions_id", "instances_id", "dimensions"},
    "observer": _OBSERVER_KEYS,
    "triggers": _TRIGGER_KEYS,
}
_KNOWN = {"suite": _SUITE_KEYS, "observer": _OBSERVER_KEYS, "triggers": _TRIGGER_KEYS}


def parse_id_range(text: str) -> tuple[int, ...]:
    """Expand comma/dash range syntax such as "1-25,75,80-100".

    Both the ASCII hyphen and the en-dash are accepted as range separators.
    """
    ids: set[int] = set()
    for token in text.replace("–", "-").split(","):
        token = token.strip()
        if not token:
            raise ConfigError(f"empty entry in range list {text!r}")
        if "-" in token:
            lo_text, _, hi_text = token.partition("-")
            try:
                lo, hi = int(lo_text), int(hi_text)
            except ValueError:
                raise ConfigError(f"malformed range {token!r}") from None
            if lo > hi:
                raise ConfigError(f"descending range {token!r}")
            ids.update(range(lo, hi + 1))
        else:
            try:
                ids.add(int(token))
            except ValueError:
                raise ConfigError(f"malformed id {token!r}") from None
    if not ids or min(ids) < 1:
        raise ConfigError(f"ids must be positive integers, got {text!r}")
    return tuple(sorted(ids))


def _key_lines(text: str) -> dict[tuple[str, str], int]:
    lines: dict[tuple[str, str], int] = {}
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith(("#", ";")):
            continue
        if stripped.startswith("["):
            section = stripped.strip("[]").strip()
        elif "=" in stripped and section is not None:
            key = stripped.split("=", 1)[0].strip()
            lines[(section, key)] = lineno
    return lines


def parse_config(text: str) -> ExperimentConfig:
    """Validate and load an experiment configuration from INI text."""
    lines = _key_lines(text)

    def err(section: str, key: str, message: str) -> ConfigError:
        lineno = lines.get((section, key))
        where = f" (line {lineno})" if lineno else ""
        return ConfigError(f"[{section}] {key}{where}: {message}")

    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc

    for section in ("suite", "observer", "triggers"):
        if not parser.has_section(section):
            raise ConfigError(f"missing section [{section}]")
    for section in parser.sections():
        if section not in _KNOWN:
            raise ConfigError(f"unknown section [{section}]")
        for key in parser[section]:
            if key not in _KNOWN[section]:
                raise err(section, key, "unknown key")
        for key in _REQUIRED[section]:
            if key not in parser[section]:
                raise ConfigError(f"missing key '{key}' in [{section}]")

    suite = parser["suite"]
    observer = parser["observer"]
    triggers = parser["triggers"]

    def positive_int(section: str, key: str, value: str, minimum: int = 0) -> int:
        try:
            number = int(value)
        except ValueError:
            raise err(section, key, f"expected an integer, got {value!r}") from None
        if number < minimum:
            raise err(section, key, f"must be >= {minimum}")
        return number

    def boolean(section: str, key: str, value: str) -> bool:
        lowered = value.strip().lower()
        if lowered in ("true", "false"):
            return lowered == "true"
        raise err(section, key, f"expected 'true' or 'false', got {value!r}")

    def id_range(key: str) -> tuple[int, ...]:
        try:
            return parse_id_range(suite[key])
        except ConfigError as exc:
            raise err("suite", key, str(exc)) from None

    function_ids = id_range("functions_id")
    instance_ids = id_range("instances_id")
    dimensions = id_range("dimensions")

    names_text = observer["parameters_name"].strip().strip('"')
    parameter_names = [n.strip() for n in names_text.split(",") if n.strip()]

    base_text = triggers["base_evaluation_triggers"].strip()
    if base_text in ("", "0"):
        base_evaluations: list[int] = []
    else:
        base_evaluations = sorted(
            positive_int("triggers", "base_evaluation_triggers", tok.strip(), 1)
            for tok in base_text.split(",")
        )

    observer_config = ObserverConfig(
        result_folder=observer["result_folder"].strip(),
        algorithm_name=observer["algorithm_name"].strip(),
        algorithm_info=observer["algorithm_info"].strip(),
        parameter_names=parameter_names,
        complete_triggers=boolean("triggers", "complete_triggers", triggers["complete_triggers"]),
        interval_step=positive_int(
            "triggers", "number_interval_triggers", triggers["number_interval_triggers"]
        ),
        target_triggers=positive_int(
            "triggers", "number_target_triggers", triggers["number_target_triggers"]
        ),
        base_evaluations=base_evaluations,
        observer_name=observer["observer_name"].strip(),
    )
    return ExperimentConfig(
        suite_name=suite["suite_name"].strip(),
        function_ids=function_ids,
        instance_ids=instance_ids,
        dimensions=dimensions,
        observer=observer_config,
        budget_multiplier=positive_int(
            "suite", "budget_multiplier", suite.get("budget_multiplier", "50"), 1
        ),
        independent_restarts=positive_int(
            "suite", "independent_restarts", suite.get("independent_restarts", "1"), 1
        ),
        stop_on_optimum=boolean(
            "suite", "stop_on_optimum", suite.get("stop_on_optimum", "false")
        ),
    )


def run_seed(master: int, function_id: int, dimension: int, instance_id: int,
             repetition: int) -> int:
    """Documented mixing of the master seed into one per-run stream seed."""
    seed = int(master) % 2147483647
    for value in (function_id, dimension, instance_id, repetition):
        seed = (seed * 1000003 + int(value)) % 2147483647
    return seed


class AlgorithmContext:
    """The evaluation interface handed to an algorithm for one run."""

    def __init__(
        self,
        instance: InstancedProblem,
        run_logger,
        max_budget: int,
        random: SeededGenerator,
        stop_on_optimum: bool = False,
    ):
        self._instance = instance
        self._logger = run_logger
        self.max_budget = int(max_budget)
        self.random = random
        self._stop_on_optimum = stop_on_optimum
        self._staged: tuple[float, ...] | None = None
        self._evaluations = 0

    @property
    def dimension(self) -> int:
        return self._instance.dimension

    @property
    def evaluations(self) -> int:
        return self._evaluations

    @property
    def remaining(self) -> int:
        return self.max_budget - self._evaluations

    def set_parameters(self, values: Sequence[float]) -> None:
        """Stage parameter values; they attach to the next evaluation's record."""
        self._staged = tuple(float(v) for v in values)

    def evaluate(self, x: Sequence[int]) -> float:
        """Evaluate a search point and return its transformed value."""
        if self._evaluations >= self.max_budget:
            raise BudgetExhaustedError(
                f"budget of {self.max_budget} evaluations exhausted"
            )
        raw, transformed = self._instance.evaluate(x)
        self._evaluations += 1
        self._logger.observe(self._evaluations, raw, transformed, self._staged or ())
        optimum = self._instance.problem.optimum_value
        if self._stop_on_optimum and optimum is not None and raw >= optimum:
            raise _OptimumReached
        return transformed


Algorithm = Callable[[AlgorithmContext], float]


def random_search(ctx: AlgorithmContext) -> float:
    """Uniform sampling of bit vectors until the budget runs out.

    Stages the 1-based evaluation index as its single tracked parameter,
    matching the reference experiment setup.
    """
    n = ctx.dimension
    best = -math.inf
    for i in range(ctx.max_budget):
        x = np.array([int(2.0 * ctx.random.next_uniform()) for _ in range(n)])
        ctx.set_parameters([float(i + 1)])
        best = max(best, ctx.evaluate(x))
    return best


def _positive_binomial(rng: SeededGenerator, n: int, p: float) -> int:
    """Binomial(n, p) draw conditioned on being positive, by CDF inversion."""
    for _ in range(1_000_000):
        u = rng.next_uniform()
        pmf = (1.0 - p) ** n
        cdf = pmf
        k = 0
        while u > cdf and k < n:
            k += 1
            pmf *= (n - k + 1) / k * p / (1.0 - p)
            cdf += pmf
        if k > 0:
            return k
    raise RuntimeError("binomial resampling failed to produce a positive draw")


def adapted_mutation_rate(rate: float, g: float, dimension: int) -> float:
    """Log-normal perturbation of the mutation rate, clamped to [1/n, 0.5]."""
    rate = 1.0 / (1.0 + (1.0 - rate) / rate * math.exp(0.22 * g))
    return min(max(rate, 1.0 / dimension), 0.5)


def flip_distinct(rng: SeededGenerator, bits: np.ndarray, flips: int) -> np.ndarray:
    """Copy of ``bits`` with ``flips`` distinct positions inverted."""
    n = len(bits)
    positions = list(range(n))
    for j in range(flips):  # partial Fisher-Yates
        r = j + int(rng.next_uniform() * (n - j))
        positions[j], positions[r] = positions[r], positions[j]
    offspring = bits.copy()
    offspring[positions[:flips]] ^= 1
    return offspring


def one_plus_lambda_ea(ctx: AlgorithmContext, lam: int = 1) -> float:
    """(1+lambda) EA with a self-adaptive mutation rate.

    Each offspring flips l ~ Binomial(n, mr) distinct positions of the
    parent, with l resampled until positive; [mr, l] are staged as the two
    tracked parameters. After every generation the parent becomes the best
    individual so far and the mutation rate is perturbed log-normally,
    mr <- 1 / (1 + (1-mr)/mr * exp(0.22 g)) with g standard normal, then
    clamped to [1/n, 0.5].
    """
    if lam < 1:
        raise ValueError("lambda must be >= 1")
    n = ctx.dimension
    rng = ctx.random
    parent = np.array([int(2.0 * rng.next_uniform()) for _ in range(n)])
    mutation_rate = 1.0 / n
    ctx.set_parameters([mutation_rate, 0.0])
    best_value = ctx.evaluate(parent)
    best = parent.copy()
    while ctx.remaining > 0:
        for _ in range(lam):
            flips = _positive_binomial(rng, n, mutation_rate)
            offspring = flip_distinct(rng, parent, flips)
            ctx.set_parameters([mutation_rate, float(flips)])
            value = ctx.evaluate(offspring)
            if value > best_value:
                best_value = value
                best = offspring.copy()
            if ctx.remaining == 0:
                break
        parent = best.copy()
        mutation_rate = adapted_mutation_rate(mutation_rate, rng.next_normal(), n)
    return best_value


@dataclass
class ExperimentReport:
    result_folder: Path
    runs_executed: int = 0
    info_files: list[Path] = field(default_factory=list)
    run_summaries: dict[tuple[int, int], list[RunSummary]] = field(default_factory=dict)


def run_experiment(
    cfg: ExperimentConfig,
    algorithm: Algorithm,
    seed: int = 42,
    jobs: int = 1,
) -> ExperimentReport:
    """Execute every configured run and write the result folder.

    Runs are grouped by (function, dimension); groups may execute in
    parallel worker threads since they write disjoint data files. The
    .info index files are written afterwards in sorted order, so output
    bytes do not depend on scheduling.
    """
    for function_id in cfg.function_ids:
        get_problem(function_id, min(cfg.dimensions))  # fail fast on unknown ids
    exp_logger = ExperimentLogger(cfg.observer, suite_name=cfg.suite_name)
    report = ExperimentReport(result_folder=exp_logger.folder)

    def run_group(function_id: int, dimension: int):
        group = exp_logger.start_group(function_id, dimension, min(cfg.instance_ids))
        executed = 0
        for instance_id in cfg.instance_ids:
            instance = make_instance(function_id, instance_id, dimension)
            for repetition in range(1, cfg.independent_restarts + 1):
                budget = cfg.budget_multiplier * dimension
                run_logger = group.start_run(instance_id, budget)
                ctx = AlgorithmContext(
                    instance,
                    run_logger,
                    budget,
                    SeededGenerator(
                        run_seed(seed, function_id, dimension, instance_id, repetition)
                    ),
                    stop_on_optimum=cfg.stop_on_optimum,
                )
                try:
                    algorithm(ctx)
                except _OptimumReached:
                    pass
                group.finish_run(run_logger)
                executed += 1
        return group.close(), executed

    cells = [(f, d) for f in cfg.function_ids for d in cfg.dimensions]
    blocks = []
    if jobs > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as pool:
            for block, executed in pool.map(lambda c: run_group(*c), cells):
                blocks.append(block)
                report.runs_executed += executed
    else:
        for cell in cells:
            block, executed = run_group(*cell)
            blocks.append(block)
            report.runs_executed += executed
    for block in blocks:
        report.run_summaries[(block.function_id, block.dimension)] = list(block.summaries)
    report.info_files = exp_logger.write_info(blocks)
    return report
