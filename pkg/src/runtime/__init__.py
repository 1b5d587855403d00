"""Service execution and the numerical kernels behind the benchmarks."""

from .conv import conv2d_naive, conv2d_valid
from .executor import check_inputs, execute
from .ndarray import Ndarray, nd_fold, nd_map
from .optim import GdConfig, GdResult, argmin, gradient_descent
from .registry import Primitive, PrimitiveRegistry, load_package_primitives

__all__ = [
    "conv2d_naive",
    "conv2d_valid",
    "check_inputs",
    "execute",
    "Ndarray",
    "nd_fold",
    "nd_map",
    "GdConfig",
    "GdResult",
    "argmin",
    "gradient_descent",
    "Primitive",
    "PrimitiveRegistry",
    "load_package_primitives",
]
