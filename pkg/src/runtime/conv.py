"""Valid 2-D cross-correlation, the toy stand-in for DNN convolution layers."""

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..core.errors import ShapeMismatch
from .ndarray import Ndarray


def _check(input: Ndarray, kernel: Ndarray) -> None:
    if len(input.shape) != 2 or len(kernel.shape) != 2:
        raise ShapeMismatch(
            f"conv2d needs 2-d input and kernel, got {list(input.shape)} and {list(kernel.shape)}"
        )
    (h, w), (kh, kw) = input.shape, kernel.shape
    if kh > h or kw > w:
        raise ShapeMismatch(f"kernel {kh}x{kw} does not fit input {h}x{w}")


def conv2d_valid(input: Ndarray, kernel: Ndarray) -> Ndarray:
    """``out[i, j] = sum(input[i+u, j+v] * kernel[u, v])`` over the valid region.

    Raises:
        ShapeMismatch: If either array is not 2-d or the kernel is larger
    """
    _check(input, kernel)
    windows = sliding_window_view(input.to_numpy(), kernel.shape)
    return Ndarray.from_numpy(np.einsum("ijuv,uv->ij", windows, kernel.to_numpy()))


def conv2d_naive(input: Ndarray, kernel: Ndarray) -> Ndarray:
    """Quadruple-loop reference implementation."""
    _check(input, kernel)
    a, k = input.to_numpy(), kernel.to_numpy()
    (h, w), (kh, kw) = a.shape, k.shape
    out = np.zeros((h - kh + 1, w - kw + 1))
    for i in range(h - kh + 1):
        for j in range(w - kw + 1):
            total = 0.0
            for u in range(kh):
                for v in range(kw):
                    total += a[i + u, j + v] * k[u, v]
            out[i, j] = total
    return Ndarray.from_numpy(out)
