"""Log-log scaling fit of timings against problem size."""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..core.errors import InsufficientData
from .suite import BenchResult


MIN_SIZES = 3
MIN_DECADES = 2.0


@dataclass(frozen=True)
class ScalingFit:
    """``log10(time) = slope * log10(size) + intercept``."""

    slope: float
    intercept: float
    r_squared: float
    points: int


def scaling_fit(results: Sequence[BenchResult]) -> ScalingFit:
    """Least-squares line through (log size, log mean time).

    Args:
        results: Results of one workload with integer size parameters

    Returns:
        Slope, intercept and coefficient of determination

    Raises:
        InsufficientData: With fewer than 3 distinct sizes or a span under 2 decades
    """
    points = [(float(r.param), r.mean_ns) for r in results if isinstance(r.param, int)]
    sizes = sorted({size for size, _ in points})
    if len(sizes) < MIN_SIZES:
        raise InsufficientData(f"scaling fit needs {MIN_SIZES} distinct sizes, got {len(sizes)}")
    if np.log10(sizes[-1]) - np.log10(sizes[0]) < MIN_DECADES:
        raise InsufficientData(
            f"scaling fit needs sizes spanning {MIN_DECADES:g} decades, got {sizes[0]:g}..{sizes[-1]:g}"
        )
    if any(mean <= 0 for _, mean in points):
        raise InsufficientData("scaling fit needs positive timings")

    x = np.log10([size for size, _ in points])
    y = np.log10([mean for _, mean in points])
    slope, intercept = np.polyfit(x, y, 1)

    residual = float(np.sum((y - (slope * x + intercept)) ** 2))
    total = float(np.sum((y - y.mean()) ** 2))
    r_squared = 1.0 - residual / total if total > 0 else 1.0
    return ScalingFit(slope=float(slope), intercept=float(intercept), r_squared=r_squared, points=len(points))
