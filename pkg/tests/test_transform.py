import math

import numpy as np
import pytest

from conftest import make_system
from dunkl.groups import build_root_system
from dunkl.hermite import HermiteSystem
from dunkl.operators import OperatorContext
from dunkl.profiles import gaussian, named_profile
from dunkl.transform import TransformContext

XI2 = np.array([[0.3, 0.3], [-0.7, 0.4], [1.1, -0.2]])


@pytest.fixture(scope="module")
def z2sq():
    return TransformContext(make_system("Z2sq"), npoints=40)


@pytest.mark.parametrize("name", ["Z2_mu1", "Z2sq", "B2", "S3", "I2_3"])
def test_gaussian_at_origin(name):
    # D_k f(0) is the weighted integral: 2^{gamma + N/2} / c_k for f = e^{-|x|^2/2}
    s = make_system(name)
    tc = TransformContext(s, npoints=16)
    val = tc.dunkl_transform(gaussian(0.5), np.zeros(s.dimension))
    assert val == pytest.approx(2 ** (tc.gamma + tc.N / 2) / tc.c_k, rel=1e-13)


def test_classical_gaussian_transform():
    # k = 0: the transform of e^{-|x|^2} is pi^{N/2} e^{-|xi|^2/4}
    tc = TransformContext(build_root_system("B", 2, [0, 0]), npoints=20)
    D = tc.dunkl_transform(gaussian(1.0), XI2)
    ref = math.pi * np.exp(-np.sum(XI2 ** 2, axis=1) / 4)
    assert np.allclose(D, ref, rtol=1e-13, atol=1e-15)


@pytest.mark.parametrize("name", ["Z2_mu1", "Z2_half", "Z2sq", "B2", "S3", "I2_3"])
def test_hermite_functions_are_eigenfunctions(name):
    s = make_system(name)
    tc = TransformContext(s, npoints=20)
    hs = HermiteSystem(OperatorContext(s), 3)
    xi = np.vstack([XI2[:, :1].repeat(s.dimension, axis=1)[:, : s.dimension], np.full((1, s.dimension), -0.5)])
    for nu in hs.indices():
        assert tc.eigen_residual(hs, nu, xi) < 1e-10


@pytest.mark.parametrize("name", ["Z2sq", "B2", "I2_3"])
def test_heat_identity(name):
    tc = TransformContext(make_system(name), npoints=20)
    for t in (0.1, 0.7, 2.0):
        assert np.abs(tc.transform_heat_identity(t, XI2)).max() < 1e-12
    with pytest.raises(ValueError):
        tc.transform_heat_identity(0.0, XI2)


def test_inverse_is_reflected_transform(z2sq):
    f = named_profile("shifted", 2)
    assert np.allclose(z2sq.inverse_transform(f, XI2), z2sq.dunkl_transform(f, -XI2))


def test_inversion(z2sq):
    for f in (gaussian(0.5), named_profile("shifted", 2)):
        assert np.abs(z2sq.inversion_residual(f, XI2)).max() < 1e-5


def test_translation(z2sq):
    x, y = np.array([0.5, 0.1]), np.array([0.2, -0.3])
    assert abs(z2sq.generalized_translation(gaussian(1.0), y, x) - z2sq.gaussian_translation_closed(y, x)) < 1e-5
    # L^0 is the identity
    assert z2sq.generalized_translation(gaussian(1.0), np.zeros(2), x) == pytest.approx(math.exp(-x @ x), abs=1e-8)


def test_translation_closed_form_at_zero():
    tc = TransformContext(make_system("B2"), npoints=10)
    x = np.array([0.4, -0.9])
    assert tc.gaussian_translation_closed(np.zeros(2), x) == pytest.approx(math.exp(-x @ x), rel=1e-14)


def test_unstable_nested_integral_raises():
    # the power series cannot resolve K(i x, xi) at the outer nodes for B2: refuse rather than guess
    tc = TransformContext(make_system("B2"), npoints=40)
    with pytest.raises(ArithmeticError):
        tc.inversion_residual(gaussian(0.5), XI2)


def test_errors():
    tc = TransformContext(build_root_system("Z2", 3, [1, 1, 1]), npoints=6)
    with pytest.raises(ValueError):
        tc.generalized_translation(gaussian(1.0), np.zeros(3), np.zeros(3))
    with pytest.raises(ValueError):
        tc.rule_at(0.0)
    with pytest.raises(ValueError):
        TransformContext(make_system("B2"), rule=tc.rule)
