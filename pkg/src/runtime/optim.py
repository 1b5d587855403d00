"""One-dimensional gradient descent with central-difference derivatives."""

import math
import random
import time
from dataclasses import dataclass
from typing import Callable, Optional

from pydantic import BaseModel, Field

from ..core.errors import Diverged
from ..utils.logger import get_logger


logger = get_logger(__name__)

DIVERGENCE_BOUND = 1e12


class GdConfig(BaseModel):
    """Gradient descent parameters.

    ``init`` is the starting point; when it is ``None`` a start is drawn
    uniformly from [0, 10] with a ``random.Random(seed)`` generator.
    """

    step_size: float = Field(default=0.01, gt=0)
    max_iters: int = Field(default=1_000_000, gt=0)
    tol: float = Field(default=1e-8, gt=0)
    fd_step: float = Field(default=1e-6, gt=0)
    init: Optional[float] = None
    seed: Optional[int] = None

    @classmethod
    def from_settings(cls, settings, **overrides) -> "GdConfig":
        values = {
            "step_size": settings.gd_step_size,
            "max_iters": settings.gd_max_iters,
            "tol": settings.gd_tol,
            "fd_step": settings.gd_fd_step,
        }
        values.update(overrides)
        return cls(**values)

    def initial_point(self) -> float:
        if self.init is not None:
            return float(self.init)
        return random.Random(self.seed).uniform(0.0, 10.0)


@dataclass(frozen=True)
class GdResult:
    """Outcome of a descent run.

    Attributes:
        x: Final iterate
        iterations: Updates performed
        converged: False when the run stopped at ``max_iters``
        elapsed: Wall time in seconds
    """

    x: float
    iterations: int
    converged: bool
    elapsed: float


def central_difference(f: Callable[[float], float], x: float, h: float) -> float:
    """Symmetric difference quotient with the step scaled by ``max(1, |x|)``."""
    step = h * max(1.0, abs(x))
    return (f(x + step) - f(x - step)) / ((x + step) - (x - step))


def gradient_descent(
    f: Callable[[float], float],
    cfg: Optional[GdConfig] = None,
    derivative: Optional[Callable[[float], float]] = None,
) -> GdResult:
    """Minimise ``f`` from ``cfg``'s starting point.

    Iterates ``x <- x - step_size * f'(x)`` until an update moves less than
    ``tol`` or ``max_iters`` updates were made.

    Args:
        f: Scalar objective
        cfg: Descent parameters, defaults when omitted
        derivative: Analytic derivative; central differences otherwise

    Returns:
        Final iterate with iteration count and convergence flag

    Raises:
        Diverged: If ``|x|`` exceeds 1e12 or ``f(x)`` is not finite
    """
    cfg = cfg or GdConfig()
    slope = derivative or (lambda x: central_difference(f, x, cfg.fd_step))

    started = time.perf_counter()
    x = cfg.initial_point()
    converged = False
    iterations = 0
    while iterations < cfg.max_iters:
        x_next = x - cfg.step_size * slope(x)
        iterations += 1
        if not math.isfinite(x_next) or abs(x_next) > DIVERGENCE_BOUND or not math.isfinite(f(x_next)):
            raise Diverged(x_next, iterations)
        step = abs(x_next - x)
        x = x_next
        if step < cfg.tol:
            converged = True
            break

    elapsed = time.perf_counter() - started
    if not converged:
        logger.warning("gradient descent hit max_iters", x=x, iterations=iterations)
    return GdResult(x=x, iterations=iterations, converged=converged, elapsed=elapsed)


def argmin(f: Callable[[float], float], cfg: Optional[GdConfig] = None) -> float:
    """Final iterate of :func:`gradient_descent`."""
    return gradient_descent(f, cfg).x
