"""Benchmark harness: warmup, timed trials, oracle checks and CSV output."""

import csv
import io
import math
import statistics
import threading
import time
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

from pydantic import BaseModel, Field, field_validator

from ..core.errors import BenchBusy
from ..runtime.optim import GdConfig
from ..utils.logger import get_logger
from .workloads import CORE_WORKLOADS, get_workload


logger = get_logger(__name__)

CSV_COLUMNS = ["workload", "param", "trials", "mean_ns", "std_ns"]

_running = threading.Lock()


def log_sizes(lo: int, hi: int, per_decade: int = 4) -> List[int]:
    """Log-spaced integer sizes from ``lo`` to ``hi``, ``per_decade`` steps per decade."""
    start, stop = math.log10(lo), math.log10(hi)
    steps = int(round((stop - start) * per_decade))
    sizes = [int(round(10 ** (start + k / per_decade))) for k in range(steps + 1)]
    return sorted(set(sizes))


class BenchResult(BaseModel):
    """Timing of one workload at one parameter.

    ``value`` records what the run computed when that is a number worth
    keeping, such as a gradient-descent argmin.
    """

    workload: str
    param: Union[int, str]
    trials: int = Field(ge=3)
    mean_ns: float
    std_ns: float = Field(ge=0)
    value: Optional[float] = None


class SuiteConfig(BaseModel):
    """What to run and how often."""

    workloads: List[str] = Field(default_factory=lambda: list(CORE_WORKLOADS))
    sizes: List[int] = Field(default_factory=lambda: log_sizes(10, 10 ** 6))
    conv_sizes: List[int] = Field(default_factory=lambda: [8, 16, 32, 64])
    params: Dict[str, List[Union[int, str]]] = Field(default_factory=dict)
    trials: int = Field(default=10, ge=3)
    warmup: int = Field(default=3, ge=0)
    seed: int = 0
    gd: GdConfig = Field(default_factory=GdConfig)

    @field_validator("sizes", "conv_sizes")
    @classmethod
    def _positive(cls, value: List[int]) -> List[int]:
        if any(size <= 0 for size in value):
            raise ValueError("sizes must be positive")
        return value

    @classmethod
    def from_settings(cls, settings, **overrides) -> "SuiteConfig":
        values = {
            "trials": settings.bench_trials,
            "warmup": settings.bench_warmup,
            "gd": GdConfig.from_settings(settings),
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)

    def params_for(self, workload: str) -> List[Union[int, str]]:
        if workload in self.params:
            return list(self.params[workload])
        return get_workload(workload).default_params(self)


def time_trial(run, trials: int, warmup: int) -> List[int]:
    """Nanosecond timings of ``trials`` runs after ``warmup`` discarded ones."""
    for _ in range(warmup):
        run()
    timings = []
    for _ in range(trials):
        started = time.perf_counter_ns()
        run()
        timings.append(time.perf_counter_ns() - started)
    return timings


def run_workload(name: str, param: Union[int, str], config: SuiteConfig) -> BenchResult:
    """Time one workload at one parameter and check its result.

    Raises:
        UnknownWorkload: For unregistered names
        BenchOracleError: If the result disagrees with the oracle
    """
    trial = get_workload(name).setup(param, config)
    try:
        timings = time_trial(trial.run, config.trials, config.warmup)
        value = trial.check(trial.run())
    finally:
        trial.close()

    result = BenchResult(
        workload=name,
        param=param,
        trials=len(timings),
        mean_ns=statistics.fmean(timings),
        std_ns=statistics.stdev(timings),
        value=value,
    )
    logger.debug("workload timed", workload=name, param=param, mean_ns=result.mean_ns)
    return result


def run_suite(config: Optional[SuiteConfig] = None, out: Optional[Path] = None) -> List[BenchResult]:
    """Run every configured workload at every parameter, in config order.

    Args:
        config: Suite configuration, defaults when omitted
        out: CSV destination; the header is written even for an empty suite

    Returns:
        One result per (workload, parameter)

    Raises:
        UnknownWorkload: If a workload name is not registered, before anything runs
        BenchOracleError: If a workload computes a wrong result
        BenchBusy: If another suite is already running in this process
    """
    config = config or SuiteConfig()
    for name in config.workloads:
        get_workload(name)

    if not _running.acquire(blocking=False):
        raise BenchBusy("a benchmark suite is already running")
    try:
        results = []
        for name in config.workloads:
            for param in config.params_for(name):
                results.append(run_workload(name, param, config))
        logger.info("suite finished", workloads=config.workloads, results=len(results))
    finally:
        _running.release()

    if out is not None:
        write_csv(results, out)
    return results


def results_csv(results: Sequence[BenchResult]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in results:
        writer.writerow([r.workload, r.param, r.trials, f"{r.mean_ns:.1f}", f"{r.std_ns:.1f}"])
    return buffer.getvalue()


def write_csv(results: Sequence[BenchResult], path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(results_csv(results), encoding="utf-8")
    return path


def read_csv(path: Path) -> List[BenchResult]:
    """Parse a results CSV back into results (without recorded values)."""
    with open(path, newline="", encoding="utf-8") as f:
        rows = list(csv.DictReader(f))
    return [
        BenchResult(
            workload=row["workload"],
            param=int(row["param"]) if row["param"].isdigit() else row["param"],
            trials=int(row["trials"]),
            mean_ns=float(row["mean_ns"]),
            std_ns=float(row["std_ns"]),
        )
        for row in rows
    ]
