"""Benchmarking and profiling toolkit for iterative optimization heuristics.

The package covers the full experiment cycle: defining pseudo-Boolean
benchmark problems and their transformed instances (:mod:`iohbench.suite`),
logging runs in the four trigger-driven data-file families
(:mod:`iohbench.logger`), driving configured experiments
(:mod:`iohbench.runner`), computing fixed-target / fixed-budget statistics
from result folders (:mod:`iohbench.stats`), and serving everything over
HTTP for the dashboard (:mod:`iohbench.service`).
"""

__version__ = "0.1.0"

from iohbench.suite import (  # noqa: F401
    InstancedProblem,
    InstanceSpec,
    Problem,
    SeededGenerator,
    evaluate_instance,
    make_instance,
    register_problem,
)
