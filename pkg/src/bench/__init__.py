"""Benchmark suite: timed workloads, oracle checks, scaling fits and charts."""

from .fit import ScalingFit, scaling_fit
from .strategies import artifact_size_comparison
from .suite import (
    CSV_COLUMNS,
    BenchResult,
    SuiteConfig,
    log_sizes,
    read_csv,
    results_csv,
    run_suite,
    run_workload,
    time_trial,
    write_csv,
)
from .workloads import CORE_WORKLOADS, WORKLOADS, Trial, Workload, get_workload, register_workload

__all__ = [
    "BenchResult",
    "CORE_WORKLOADS",
    "CSV_COLUMNS",
    "ScalingFit",
    "SuiteConfig",
    "Trial",
    "WORKLOADS",
    "Workload",
    "artifact_size_comparison",
    "get_workload",
    "log_sizes",
    "read_csv",
    "register_workload",
    "results_csv",
    "run_suite",
    "run_workload",
    "scaling_fit",
    "time_trial",
    "write_csv",
]
