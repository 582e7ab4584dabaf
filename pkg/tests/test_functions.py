import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from stragglesim.functions import REGISTRY, get_function, make_constant, make_fixed_mlp, make_polynomial, make_xsinx
from stragglesim.stragglers import stream


def test_xsinx_examples():
    f = make_xsinx()
    assert f(0.0)[0, 0] == 0.0
    assert f(math.pi / 2)[0, 0] == pytest.approx(math.pi / 2)


@given(st.floats(-50, 50))
def test_xsinx_even(x):
    f = make_xsinx()
    assert f(-x)[0, 0] == f(x)[0, 0]


def test_polynomial_examples():
    assert np.all(make_polynomial([1])(np.linspace(-3, 3, 7)) == 1.0)
    assert make_polynomial([0, 1])(3.5)[0, 0] == 3.5
    assert make_polynomial([1, 2, 3])(2.0)[0, 0] == 17.0
    with pytest.raises(ValueError):
        make_polynomial([])


def test_mlp_zero_weights_uniform():
    f = make_fixed_mlp((8, 5, 4), zero_weights=True)
    np.testing.assert_array_equal(f(np.ones((3, 8))), np.full((3, 4), 0.25))


def test_mlp_deterministic_and_shaped():
    a = make_fixed_mlp((16, 8, 3), seed=4)
    b = make_fixed_mlp((16, 8, 3), seed=4)
    x = np.random.default_rng(0).uniform(-1, 1, (5, 16))
    assert np.array_equal(a(x), b(x))
    assert a(x).shape == (5, 3)
    np.testing.assert_allclose(a(x).sum(axis=1), 1.0)
    assert not np.array_equal(a(x), make_fixed_mlp((16, 8, 3), seed=5)(x))
    with pytest.raises(ValueError):
        make_fixed_mlp(())


def test_default_mlp_dims():
    f = make_fixed_mlp()
    assert (f.in_dim, f.out_dim) == (1024, 10)


def test_registry():
    for name in ("xsinx", "mlp", "poly"):
        assert name in REGISTRY
    assert get_function("poly", coeffs=[1, 1]).name == "poly"
    with pytest.raises(ValueError):
        get_function("lenet")


@given(st.sampled_from(["xsinx", "poly", "constant"]), st.integers(0, 1000))
def test_pure(name, seed):
    f = get_function(name, coeffs=[0.5, -1, 2]) if name == "poly" else get_function(name)
    x = f.sample_inputs(6, stream(seed))
    assert np.all(np.abs(x) <= 1)
    assert np.array_equal(f(x), f(x.copy()))


def test_constant():
    f = make_constant(2.0, in_dim=3)
    assert f(np.zeros((4, 3))).tolist() == [[2.0]] * 4
