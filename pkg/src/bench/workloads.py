"""Benchmark workloads and their functional oracles.

A workload turns a parameter into a :class:`Trial`: a zero-argument ``run``
that is timed, and a ``check`` that verifies the result against an
independent oracle so timing never hides a wrong answer.
"""

import math
import operator
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Union

import numpy as np

from ..core.errors import BenchOracleError, UnknownWorkload
from ..runtime.conv import conv2d_naive, conv2d_valid
from ..runtime.ndarray import Ndarray, nd_fold, nd_map
from ..runtime.optim import gradient_descent

Param = Union[int, str]


@dataclass
class Trial:
    run: Callable[[], Any]
    check: Callable[[Any], Optional[float]]
    close: Callable[[], None] = field(default=lambda: None)


@dataclass(frozen=True)
class Workload:
    name: str
    setup: Callable[[Param, Any], Trial]
    sized: bool = True
    default_params: Callable[[Any], List[Param]] = field(default=lambda cfg: list(cfg.sizes))


WORKLOADS: Dict[str, Workload] = {}

# Suite workloads run by default; the strategy workloads are opt-in
CORE_WORKLOADS = ("map", "fold", "gd_sin", "gd_cubic", "conv_toy")


def register_workload(name: str, sized: bool = True, params: Optional[Callable[[Any], List[Param]]] = None):
    def wrap(setup: Callable[[Param, Any], Trial]):
        WORKLOADS[name] = Workload(
            name=name,
            setup=setup,
            sized=sized,
            default_params=params or (lambda cfg: list(cfg.sizes)),
        )
        return setup

    return wrap


def get_workload(name: str) -> Workload:
    """Look up a workload, loading the strategy workloads on demand.

    Raises:
        UnknownWorkload: For names no module registers
    """
    if name not in WORKLOADS:
        from . import strategies  # noqa: F401
    if name not in WORKLOADS:
        raise UnknownWorkload(name)
    return WORKLOADS[name]


def _fail(workload: str, param: Param, detail: str) -> BenchOracleError:
    return BenchOracleError(f"{workload}[{param}] disagrees with its oracle: {detail}")


def _double(x: float) -> float:
    return x * 2.0


@register_workload("map")
def map_workload(n: int, cfg) -> Trial:
    a = Ndarray.arange(int(n))
    expected = 2.0 * np.arange(int(n), dtype=np.float64)

    def check(result: Ndarray) -> None:
        if result.shape != a.shape or not np.array_equal(result.data, expected):
            raise _fail("map", n, "elementwise doubling mismatch")

    return Trial(run=lambda: nd_map(_double, a), check=check)


@register_workload("fold")
def fold_workload(n: int, cfg) -> Trial:
    n = int(n)
    a = Ndarray.arange(n)
    expected = n * (n - 1) // 2

    def check(result: float) -> float:
        if result != float(expected):
            raise _fail("fold", n, f"sum {result} != {expected}")
        return result

    return Trial(run=lambda: nd_fold(operator.add, 0.0, a), check=check)


def _gd_trial(name: str, f: Callable[[float], float], init: float, expected: float, cfg) -> Trial:
    gd = cfg.gd.model_copy(update={"init": init})

    def check(result) -> float:
        if abs(result.x - expected) > 1e-4:
            raise _fail(name, "argmin", f"x={result.x}, expected {expected}")
        return result.x

    return Trial(run=lambda: gradient_descent(f, gd), check=check)


@register_workload("gd_sin", sized=False, params=lambda cfg: ["sin"])
def gd_sin_workload(param: Param, cfg) -> Trial:
    return _gd_trial("gd_sin", math.sin, 5.0, 3.0 * math.pi / 2.0, cfg)


@register_workload("gd_cubic", sized=False, params=lambda cfg: ["cubic"])
def gd_cubic_workload(param: Param, cfg) -> Trial:
    return _gd_trial("gd_cubic", lambda x: x ** 3 - 2.0 * x ** 2 + 2.0, 4.0, 4.0 / 3.0, cfg)


@register_workload("conv_toy", params=lambda cfg: list(cfg.conv_sizes))
def conv_workload(n: int, cfg) -> Trial:
    rng = np.random.default_rng(cfg.seed + int(n))
    image = Ndarray.from_numpy(rng.uniform(-1.0, 1.0, size=(int(n), int(n))))
    kernel = Ndarray.from_numpy(rng.uniform(-1.0, 1.0, size=(3, 3)))
    expected = conv2d_naive(image, kernel)

    def check(result: Ndarray) -> None:
        if result.shape != expected.shape or not np.allclose(result.data, expected.data, rtol=0, atol=1e-12):
            raise _fail("conv_toy", n, "differs from the naive convolution")

    return Trial(run=lambda: conv2d_valid(image, kernel), check=check)
