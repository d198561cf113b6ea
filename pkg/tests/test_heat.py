import math

import numpy as np
import pytest

from conftest import make_system
from dunkl.groups import build_root_system
from dunkl.heat import MIN_TIME, HeatModel, basic_solution, basic_solution_residual, laplacian_numeric
from dunkl.profiles import constant, gaussian, named_profile

MODEL_POINTS = {"Z2_mu1": 40, "Z2sq": 20, "B2": 20, "S3": 20, "I2_3": 20}


@pytest.fixture(scope="module", params=sorted(MODEL_POINTS))
def model(request):
    return HeatModel(make_system(request.param), MODEL_POINTS[request.param])


def points(N):
    return np.array([[0.3] * N, [-0.5] + [0.8] * (N - 1), [0.0] * N])


def test_fundamental_solution_classical():
    m = HeatModel(build_root_system("Z2", 1, 0), 10)
    x, t = np.array([0.7]), 0.3
    assert m.fundamental_solution(x, t) == pytest.approx(math.exp(-0.49 / (4 * t)) / math.sqrt(4 * math.pi * t))


def test_mass_is_one(model):
    for t in (0.05, 0.3, 2.0):
        assert np.abs(model.mass(points(model.N), t) - 1).max() < 1e-9


def test_gaussian_closed_form(model):
    X = points(model.N)
    for b, t in ((1.0, 0.25), (0.5, 1.5)):
        got = model.heat_solve(gaussian(b), X, t)
        assert np.abs(got - model.gaussian_solution(b, X, t)).max() < 1e-12


def test_classical_weierstrass():
    m = HeatModel(build_root_system("Z2", 2, [0, 0]), 20)
    X = points(2)
    t = 0.4
    ref = (1 + 4 * t) ** -1 * np.exp(-np.sum(X ** 2, axis=1) / (1 + 4 * t))
    assert np.allclose(m.heat_solve(gaussian(1.0), X, t), ref, rtol=1e-13)


def test_time_zero_returns_f(model):
    f = named_profile("shifted", model.N)
    X = points(model.N)
    assert np.array_equal(model.heat_solve(f, X, 0), f(X))


def test_kernel_symmetric_and_positive(model):
    X = points(model.N)
    a = model.heat_kernel(X[:1], X[1:], 0.5)
    b = model.heat_kernel(X[1:], X[:1], 0.5)
    assert np.all(a > 0)
    assert np.allclose(a, b, rtol=1e-12)


@pytest.mark.parametrize("name", ["Z2_mu1", "Z2sq", "B2", "I2_3"])
def test_kernel_two_routes(name):
    m = HeatModel(make_system(name), 30)
    X = points(m.N)
    for t in (0.3, 1.0):
        direct = m.heat_kernel(X[0], X[1], t)[0]
        assert m.heat_kernel_spectral(X[0], X[1], t) == pytest.approx(direct, rel=1e-8)


def test_spectral_solve_example():
    m = HeatModel(build_root_system("Z2", 1, 1), 60)
    direct = m.heat_solve(gaussian(1.0), np.array([0.5]), 0.25)
    assert m.heat_solve_spectral(gaussian(1.0), np.array([0.5]), 0.25) == pytest.approx(direct, rel=1e-6)
    assert direct == pytest.approx(float(m.gaussian_solution(1.0, np.array([0.5]), 0.25)), rel=1e-13)


@pytest.mark.parametrize("name, tol", [("Z2_mu1", 1e-12), ("Z2sq", 1e-8), ("B2", 1e-7), ("I2_3", 1e-7)])
def test_semigroup(name, tol):
    m = HeatModel(make_system(name), MODEL_POINTS[name])
    res = m.semigroup_residual(named_profile("shifted", m.N), points(m.N), 0.1, 0.2)
    assert np.abs(res).max() < tol
    with pytest.raises(ValueError):
        m.semigroup_residual(gaussian(1.0), points(m.N), 0.0, 0.2)


@pytest.mark.slow
def test_semigroup_s3():
    m = HeatModel(make_system("S3"), 14)
    assert np.abs(m.semigroup_residual(named_profile("shifted", 3), points(3), 0.1, 0.2)).max() < 1e-4


def test_max_principle(model):
    N = model.N
    f = named_profile("shifted", N)
    grid = np.array([[v] * N for v in np.linspace(-1.5, 1.5, 5)])
    rep = model.max_principle_probe(f, grid, [0.05, 0.5], bumps=[[0.2] * N, [0.0] * N])
    assert rep["ok"], rep
    assert rep["max_u"] <= rep["sup_f"] + 1e-8


def test_max_principle_flags_bad_sup():
    m = HeatModel(build_root_system("Z2", 1, 1), 20)
    bad = constant(1.0).__class__(lambda X: np.ones(X.shape[0]), 0.0, "liar", sup=0.5)
    rep = m.max_principle_probe(bad, np.array([[0.0], [1.0]]), [0.1])
    assert not rep["ok"] and rep["violations"]


def test_laplacian_numeric_examples(model):
    s = model.system
    N = s.dimension
    expect = 2 * N + 4 * float(s.gamma)
    norm2 = lambda P: np.sum(P * P, axis=-1)
    for x in points(N):
        # the origin lies on every mirror, so the hyperplane branch is exercised
        assert laplacian_numeric(s, norm2, x) == pytest.approx(expect, abs=1e-6)


def test_laplacian_numeric_gaussian():
    # Delta_k e^{lam |x|^2} = (4 lam^2 |x|^2 + 2 lam (N + 2 gamma)) e^{lam |x|^2}
    s = make_system("B2")
    lam = -0.7
    for x in (np.array([0.4, 0.9]), np.array([0.5, 0.5]), np.array([0.3, 0.0])):
        r2 = float(x @ x)
        ref = (4 * lam ** 2 * r2 + 2 * lam * (2 + 2 * float(s.gamma))) * math.exp(lam * r2)
        got = laplacian_numeric(s, lambda P: np.exp(lam * np.sum(P * P, axis=-1)), x, h=1e-3)
        assert got == pytest.approx(ref, abs=1e-5)


@pytest.mark.parametrize("name", ["Z2_mu1", "Z2sq", "B2", "S3", "I2_3"])
def test_basic_solution(name):
    s = make_system(name)
    for a, b, x, t in ((1.0, 0.5, 0.6, 0.3), (2.0, -1.0, -0.4, 1.0)):
        res, scale = basic_solution_residual(s, a, b, np.full(s.dimension, x), t)
        assert abs(res) <= 1e-5 * scale


def test_basic_solution_errors():
    s = make_system("B2")
    with pytest.raises(ValueError):
        basic_solution(s, 1.0, 0.0, np.zeros(2), 0.1)
    with pytest.raises(ValueError):
        basic_solution(s, -1.0, 1.0, np.zeros(2), 0.1)
    with pytest.raises(ValueError):
        basic_solution(s, 1.0, 1.0, np.zeros(2), 1.0)


def test_small_time_rejected():
    m = HeatModel(build_root_system("Z2", 1, 1), 10)
    with pytest.raises(ValueError):
        m.heat_kernel([0.1], [0.2], MIN_TIME / 2)
    with pytest.raises(ValueError):
        m.fundamental_solution([0.1], 1e-7)
