"""Tests for ndarrays, numerical kernels, primitives and the executor."""

import math

import numpy as np
import pytest

from src.core.errors import (
    Diverged,
    InputArityMismatch,
    InputTypeMismatch,
    MissingPrimitive,
    PrimitiveFailure,
    PrimitiveLoadError,
    ShapeMismatch,
)
from src.core.refs import VersionRef
from src.core.types import EN_TEXT, FLOAT, FR_TEXT, INT, PNG_IMG
from src.core.values import TypedValue
from src.runtime import (
    GdConfig,
    Ndarray,
    PrimitiveRegistry,
    argmin,
    conv2d_naive,
    conv2d_valid,
    execute,
    gradient_descent,
    load_package_primitives,
    nd_fold,
    nd_map,
)
from src.runtime.optim import central_difference
from src.typecheck.checker import compose, create_service

from .conftest import SAMPLE_PNG, expected_label


# ----------------------------------------------------------------------
# Ndarray
# ----------------------------------------------------------------------


def test_ndarray_shape_must_match_data():
    """Test the buffer length must equal the shape product."""
    with pytest.raises(ShapeMismatch):
        Ndarray([2, 3], [1.0] * 5)
    with pytest.raises(ShapeMismatch):
        Ndarray([0], [])


@pytest.mark.parametrize("shape", [[2.5], [2.0], [True, 2]])
def test_ndarray_shape_must_be_integral(shape):
    """Test fractional, float and boolean dimensions are rejected rather than truncated."""
    with pytest.raises(ShapeMismatch):
        Ndarray(shape, [1.0, 2.0])


def test_ndarray_is_row_major():
    """Test the flat buffer is row-major."""
    a = Ndarray([2, 3], range(6))

    assert a.to_numpy()[1, 0] == 3.0
    assert a.tolist() == [0.0, 1.0, 2.0, 3.0, 4.0, 5.0]


def test_ndarray_is_immutable():
    """Test the buffer cannot be written through."""
    a = Ndarray.ones([3])

    with pytest.raises(ValueError):
        a.data[0] = 5.0


def test_nd_map_preserves_shape():
    """Test map applies elementwise."""
    a = Ndarray([2, 2], [1.0, 2.0, 3.0, 4.0])

    assert nd_map(lambda x: x * x, a) == Ndarray([2, 2], [1.0, 4.0, 9.0, 16.0])


@pytest.mark.parametrize("n", [1, 10, 1000, 100_000])
def test_nd_fold_matches_closed_form(n):
    """Test folding 0..n-1 gives n(n-1)/2 exactly."""
    assert nd_fold(lambda acc, x: acc + x, 0.0, Ndarray.arange(n)) == n * (n - 1) / 2


def test_nd_fold_is_left_to_right():
    """Test fold order on a non-commutative operator."""
    assert nd_fold(lambda acc, x: acc * 10 + x, 0.0, Ndarray.from_list([1.0, 2.0, 3.0])) == 123.0


# ----------------------------------------------------------------------
# Convolution
# ----------------------------------------------------------------------


def test_conv_matches_naive_oracle():
    """Test the vectorised convolution on 200 random instances."""
    rng = np.random.default_rng(42)
    for _ in range(200):
        h, w = rng.integers(3, 16, size=2)
        kh, kw = rng.integers(1, min(h, w) + 1, size=2)
        a = Ndarray.from_numpy(rng.standard_normal((h, w)))
        k = Ndarray.from_numpy(rng.standard_normal((kh, kw)))

        fast, slow = conv2d_valid(a, k), conv2d_naive(a, k)
        assert fast.shape == (h - kh + 1, w - kw + 1)
        assert np.max(np.abs(fast.data - slow.data)) <= 1e-12


def test_conv_identity_kernel():
    """Test a 1x1 unit kernel returns the input."""
    a = Ndarray([3, 3], range(9))

    assert conv2d_valid(a, Ndarray.ones([1, 1])) == a


def test_conv_rejects_bad_shapes():
    """Test non-2-d arrays and oversized kernels."""
    with pytest.raises(ShapeMismatch):
        conv2d_valid(Ndarray.ones([4]), Ndarray.ones([1, 1]))
    with pytest.raises(ShapeMismatch):
        conv2d_valid(Ndarray.ones([2, 2]), Ndarray.ones([3, 1]))


# ----------------------------------------------------------------------
# Gradient descent
# ----------------------------------------------------------------------


def test_gd_cubic_oracle():
    """Test x^3 - 2x^2 + 2 from 4 reaches 4/3."""
    result = gradient_descent(lambda x: x**3 - 2 * x**2 + 2, GdConfig(init=4.0))

    assert result.converged
    assert abs(result.x - 4 / 3) < 1e-4
    assert result.iterations > 0
    assert result.elapsed >= 0


def test_gd_sin_oracle():
    """Test sin from 5 reaches 3*pi/2."""
    assert abs(argmin(math.sin, GdConfig(init=5.0)) - 3 * math.pi / 2) < 1e-4


@pytest.mark.parametrize("a", [0.5, 1.0, 2.0])
def test_gd_converges_on_quadratics(a):
    """Test a*x^2 converges to 0 for a step size below 2/curvature."""
    result = gradient_descent(lambda x: a * x * x, GdConfig(init=3.0, step_size=0.01))

    assert result.converged
    assert abs(result.x) < 1e-4


def test_gd_analytic_derivative():
    """Test an analytic derivative reaches the same minimum."""
    result = gradient_descent(lambda x: (x - 2) ** 2, GdConfig(init=0.0), derivative=lambda x: 2 * (x - 2))

    assert abs(result.x - 2.0) < 1e-4


def test_gd_seeded_start_is_reproducible():
    """Test a seeded random start is deterministic and inside [0, 10]."""
    start = GdConfig(seed=3).initial_point()

    assert start == GdConfig(seed=3).initial_point()
    assert 0.0 <= start <= 10.0


def test_gd_max_iters():
    """Test the iteration cap is reported as non-convergence."""
    result = gradient_descent(lambda x: x * x, GdConfig(init=5.0, max_iters=3))

    assert result.iterations == 3
    assert not result.converged


def test_central_difference_far_from_origin():
    """Test the derivative stays accurate where an absolute step would vanish."""
    x = 2.5e11

    assert central_difference(lambda t: t * t, x, 1e-6) == pytest.approx(2 * x, rel=1e-6)


def test_gd_divergence():
    """Test an unbounded objective raises."""
    with pytest.raises(Diverged):
        gradient_descent(lambda x: -(x**4), GdConfig(init=10.0, step_size=1.0))


# ----------------------------------------------------------------------
# Primitive registry
# ----------------------------------------------------------------------


def test_registry_decorator_and_lookup():
    """Test the decorator registers under the function name."""
    registry = PrimitiveRegistry()

    @registry.primitive("mylib", "int -> int")
    def double(n):
        return n * 2

    primitive = registry.lookup("mylib/v3", "double")
    assert primitive(4) == TypedValue(INT, 8)
    assert registry.keys() == [("mylib", "double")]


def test_registry_missing_primitive():
    """Test lookups of unregistered functions."""
    with pytest.raises(MissingPrimitive):
        PrimitiveRegistry().lookup("mylib", "nothing")


def test_primitive_wraps_failures():
    """Test exceptions and bad outputs become PrimitiveFailure."""
    registry = PrimitiveRegistry()
    registry.register("lib", "boom", "int -> int", lambda n: 1 // 0)
    registry.register("lib", "liar", "int -> int", lambda n: "text")

    with pytest.raises(PrimitiveFailure):
        registry.lookup("lib", "boom")(1)
    with pytest.raises(PrimitiveFailure):
        registry.lookup("lib", "liar")(1)


def test_primitive_widens_int_result():
    """Test an int result of a float function is widened."""
    registry = PrimitiveRegistry()
    registry.register("lib", "one", "float", lambda: 1)

    assert registry.lookup("lib", "one")() == TypedValue(FLOAT, 1.0)


def test_load_package_primitives(store, refs):
    """Test every scripted config entry is registered under gid/vid."""
    registry = PrimitiveRegistry()
    ref = refs["m4th"]

    names = load_package_primitives(ref.package_id, store.resolve(ref).files, registry)

    assert sorted(names) == sorted(
        ["add", "neg", "to_float", "length", "shout", "square", "norm", "is_positive"]
    )
    assert registry.has(ref.package_id, "shout")


def test_load_package_primitives_script_error():
    """Test a failing script is reported with its package."""
    files = {"zoo.json": b'{"f": "int -> int"}', "f.py": b"raise RuntimeError('nope')\n"}

    with pytest.raises(PrimitiveLoadError):
        load_package_primitives("bad/v1", files, PrimitiveRegistry())


# ----------------------------------------------------------------------
# Executor
# ----------------------------------------------------------------------


def test_execute_use_case(pipeline, primitives):
    """Test the pipeline labels an image in French."""
    output = execute(pipeline, [TypedValue(PNG_IMG, SAMPLE_PNG)], primitives)

    assert output.dtype == FR_TEXT
    assert output.payload == expected_label(SAMPLE_PNG)


@pytest.mark.parametrize("workers", [2, 4])
def test_execute_parallel_matches_sequential(pipeline, primitives, workers):
    """Test level-parallel execution gives the sequential result."""
    inputs = [TypedValue(PNG_IMG, SAMPLE_PNG + bytes([workers]))]

    assert execute(pipeline, inputs, primitives, max_workers=workers) == execute(pipeline, inputs, primitives)


def test_execute_fan_in_arguments_in_position_order(store, primitives):
    """Test multi-input nodes receive producers by position."""
    m = create_service(VersionRef(gid="m4th"), store)
    composed = compose([m["to_float"], m["neg"]], m["add"])

    output = execute(composed, [TypedValue(INT, 5), TypedValue(FLOAT, 2.0)], primitives)

    assert output == TypedValue(FLOAT, 3.0)


def test_execute_checks_inputs(pipeline, primitives):
    """Test arity and type of inputs are checked before running."""
    with pytest.raises(InputArityMismatch):
        execute(pipeline, [], primitives)
    with pytest.raises(InputTypeMismatch) as exc_info:
        execute(pipeline, [TypedValue(EN_TEXT, b"cat")], primitives)

    assert exc_info.value.position == 0


def test_execute_missing_primitive(pipeline):
    """Test a node without a primitive."""
    with pytest.raises(MissingPrimitive):
        execute(pipeline, [TypedValue(PNG_IMG, SAMPLE_PNG)], PrimitiveRegistry())
