import math

import numpy as np
import pytest

from dunkl.groups import build_root_system
from dunkl.hermite import HermiteSystem
from dunkl.operators import OperatorContext
from dunkl.profiles import Profile, constant, gaussian, hermite_function_profile, named_profile

PTS = np.array([[0.0, 0.0], [0.5, -1.0], [1.2, 0.3]])


def test_gaussian_and_constant():
    g = gaussian(2.0, 3.0)
    assert np.allclose(g(PTS), 3.0 * np.exp(-2.0 * np.sum(PTS ** 2, axis=1)))
    assert g.sup == 3.0 and g.rate == 2.0
    c = constant(-2.5)
    assert np.allclose(c(PTS), -2.5) and c.rate == 0.0 and c.sup == 2.5


def test_single_point_is_promoted():
    assert gaussian(1.0)([1.0, 0.0]).shape == (1,)


def test_shifted_sup():
    f = named_profile("shifted", 2)
    s = np.linspace(-3, 3, 200001)
    assert f.sup == pytest.approx(np.max((1 + s) * np.exp(-s * s)), rel=1e-9)
    assert f([0.5, 0.0])[0] == pytest.approx(1.5 * math.exp(-0.25))


def test_named_profiles():
    assert named_profile("one", 2)(PTS) == pytest.approx(np.ones(3))
    assert named_profile("gaussian_half", 2).rate == 0.5
    assert named_profile("gaussian", 2).rate == 1.0
    with pytest.raises(ValueError):
        named_profile("nope", 2)
    with pytest.raises(ValueError):
        named_profile("h:1,0", 2)


def test_hermite_profile():
    hs = HermiteSystem(OperatorContext(build_root_system("Z2", 2, [1, 1])), 3)
    f = named_profile("h:1,2", 2, hs)
    ref = np.array([hs.hermite_function((1, 2), p) for p in PTS])
    assert np.allclose(f(PTS), ref, rtol=1e-13)
    assert hermite_function_profile(hs, (0, 0)).rate == 0.5
    with pytest.raises(ValueError):
        named_profile("h:1", 2, hs)


def test_profile_is_frozen():
    p = Profile(lambda X: X[:, 0], 1.0)
    with pytest.raises(AttributeError):
        p.rate = 2.0
