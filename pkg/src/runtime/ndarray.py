"""Dense row-major float64 n-dimensional arrays with map and fold."""

import numbers
from functools import reduce
from typing import Callable, Iterable, Optional, Sequence, Tuple

import numpy as np

from ..core.errors import ShapeMismatch


class Ndarray:
    """Immutable ndarray: a shape and a flat float64 buffer in row-major order."""

    __slots__ = ("_shape", "_data")

    def __init__(self, shape: Sequence[int], data: Iterable[float]):
        shape = tuple(shape)
        if any(isinstance(d, bool) or not isinstance(d, numbers.Integral) for d in shape):
            raise ShapeMismatch(f"shape entries must be integers, got {list(shape)}")
        shape = tuple(int(d) for d in shape)
        if not shape or any(d <= 0 for d in shape):
            raise ShapeMismatch(f"shape must be a non-empty list of positive integers, got {list(shape)}")

        buffer = np.array(data, dtype=np.float64).reshape(-1)
        if buffer.size != int(np.prod(shape)):
            raise ShapeMismatch(
                f"shape {list(shape)} needs {int(np.prod(shape))} values, got {buffer.size}"
            )
        buffer.flags.writeable = False
        self._shape = shape
        self._data = buffer

    @classmethod
    def from_numpy(cls, array: np.ndarray) -> "Ndarray":
        array = np.asarray(array, dtype=np.float64)
        shape = array.shape or (1,)
        return cls(shape, np.ascontiguousarray(array).reshape(-1))

    @classmethod
    def from_list(cls, values: Sequence[float], shape: Optional[Sequence[int]] = None) -> "Ndarray":
        return cls(shape or (len(values),), values)

    @classmethod
    def ones(cls, shape: Sequence[int]) -> "Ndarray":
        return cls(shape, np.ones(int(np.prod(shape))))

    @classmethod
    def zeros(cls, shape: Sequence[int]) -> "Ndarray":
        return cls(shape, np.zeros(int(np.prod(shape))))

    @classmethod
    def arange(cls, n: int) -> "Ndarray":
        return cls((n,), np.arange(n, dtype=np.float64))

    @property
    def shape(self) -> Tuple[int, ...]:
        return self._shape

    @property
    def data(self) -> np.ndarray:
        """Flat read-only buffer."""
        return self._data

    @property
    def size(self) -> int:
        return self._data.size

    def to_numpy(self) -> np.ndarray:
        return self._data.reshape(self._shape)

    def tolist(self) -> list:
        return self._data.tolist()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Ndarray):
            return NotImplemented
        return self._shape == other._shape and bool(np.array_equal(self._data, other._data))

    def __hash__(self) -> int:
        return hash((self._shape, self._data.tobytes()))

    def __repr__(self) -> str:
        return f"Ndarray(shape={list(self._shape)}, data={self._data.tolist()[:8]}{'...' if self.size > 8 else ''})"


def nd_map(f: Callable[[float], float], a: Ndarray) -> Ndarray:
    """Apply ``f`` to every element, preserving the shape."""
    values = np.fromiter((f(x) for x in a.data.tolist()), dtype=np.float64, count=a.size)
    return Ndarray(a.shape, values)


def nd_fold(f: Callable[[float, float], float], init: float, a: Ndarray) -> float:
    """Reduce the flat buffer left to right, starting from ``init``."""
    return float(reduce(f, a.data.tolist(), float(init)))
