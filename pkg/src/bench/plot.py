"""Log-log charts of size-swept benchmark results."""

from collections import OrderedDict
from pathlib import Path
from typing import Dict, List, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .suite import BenchResult


def size_series(results: Sequence[BenchResult]) -> Dict[str, List[Tuple[int, float]]]:
    """(size, mean ns) points per workload, for workloads swept over sizes."""
    series: Dict[str, List[Tuple[int, float]]] = OrderedDict()
    for r in results:
        if isinstance(r.param, int):
            series.setdefault(r.workload, []).append((r.param, r.mean_ns))
    return {name: sorted(points) for name, points in series.items() if len(points) >= 2}


def plot_results(results: Sequence[BenchResult], path: Path) -> Path:
    """Write a log-log chart of time against size, one line per workload.

    The format follows the file suffix (``.svg``, ``.png``, ``.pdf``).
    """
    fig, ax = plt.subplots(figsize=(7, 4.5))
    try:
        for name, points in size_series(results).items():
            sizes = [size for size, _ in points]
            means = [mean for _, mean in points]
            ax.loglog(sizes, means, marker="o", label=name)
        ax.set_xlabel("size (elements)")
        ax.set_ylabel("mean time (ns)")
        ax.grid(True, which="both", alpha=0.3)
        if ax.lines:
            ax.legend()
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path)
    finally:
        plt.close(fig)
    return path
