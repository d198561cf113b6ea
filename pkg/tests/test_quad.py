import math
from fractions import Fraction

import numpy as np
import pytest
from numpy.polynomial.hermite import hermgauss

from conftest import make_system
from dunkl.groups import build_root_system
from dunkl.hermite import HermiteSystem
from dunkl.operators import OperatorContext
from dunkl.quad import (
    QuadratureRule,
    heat_constant_M_k,
    normalization_c_k,
    precision_digits,
    recurrence_generalized_hermite,
    rule_generalized_hermite_1d,
    rule_polar,
    rule_tensor,
)


def mehta_mass(degrees, k, N, gamma):
    """``int prod |<alpha, x>|^{2k} e^{-|x|^2} dx`` from the Macdonald-Mehta product (|alpha|^2 = 2)."""
    prod = math.prod(math.gamma(1 + d * k) / math.gamma(1 + k) for d in degrees)
    return math.pi ** (N / 2) * 2.0 ** (-gamma) * prod


def test_gauss_hermite_classical():
    r = rule_generalized_hermite_1d(0, 12)
    x, w = hermgauss(12)
    assert np.allclose(np.sort(r.nodes[:, 0]), np.sort(x), atol=1e-14)
    assert r.mass == pytest.approx(math.sqrt(math.pi), rel=1e-15)
    assert np.allclose(np.sort(r.weights), np.sort(w), rtol=1e-12)


@pytest.mark.parametrize("mu", [0, Fraction(1, 2), 1, Fraction(5, 2), Fraction(1, 3)])
def test_moment_exactness(mu):
    n = 15
    r = rule_generalized_hermite_1d(mu, n)
    assert np.all(r.weights > 0)
    x = r.nodes[:, 0]
    for m in range(2 * n):
        got = r.integrate_values(x ** m)
        if m % 2:
            assert abs(got) < 1e-12 * math.gamma(float(mu) + m / 2 + 0.5)
        else:
            ref = math.gamma(float(mu) + m / 2 + 0.5)
            assert got == pytest.approx(ref, rel=1e-12)


def test_gamma_moment_example():
    r = rule_generalized_hermite_1d(1, 5)
    x = r.nodes[:, 0]
    assert r.integrate_values(x ** 2) == pytest.approx(0.75 * math.sqrt(math.pi), rel=1e-14)


def test_recurrence_mass_and_errors():
    a, b = recurrence_generalized_hermite(Fraction(3, 2), 4)
    assert float(b[0]) == pytest.approx(math.gamma(2.0))
    assert all(abs(float(v)) < 1e-40 for v in a)
    with pytest.raises(ValueError):
        recurrence_generalized_hermite(-1, 3)
    with pytest.raises(ValueError):
        recurrence_generalized_hermite(1, 0)


def test_precision_override(monkeypatch):
    assert precision_digits(10) >= 50
    monkeypatch.setenv("DUNKL_PRECISION", "77")
    assert precision_digits(10) == 77


def test_z2_product_mass():
    # weight |sqrt2 x_1|^2 |sqrt2 x_2|^4 carries the factor 2^gamma
    r = rule_tensor(build_root_system("Z2", 2, [1, 2]), 10)
    assert r.mass == pytest.approx(2 ** 3 * math.gamma(1.5) * math.gamma(2.5), rel=1e-14)
    assert not r.approximate and r.degree == 19


def test_classical_tensor():
    r = rule_tensor(build_root_system("B", 2, [0, 0]), 8)
    x, w = hermgauss(8)
    assert r.mass == pytest.approx(np.sum(w) ** 2, rel=1e-14)
    assert sorted(np.unique(np.round(r.nodes[:, 0], 12))) == pytest.approx(sorted(x), abs=1e-12)


@pytest.mark.parametrize("k", [1, 2, Fraction(1, 2), Fraction(1, 3)])
def test_s3_mass(k):
    sysm = build_root_system("A", 3, k)
    ref = mehta_mass([1, 2, 3], float(k), 3, float(sysm.gamma))
    r20, r40 = rule_tensor(sysm, 14), rule_tensor(sysm, 24)
    assert r20.mass == pytest.approx(ref, rel=1e-12)
    assert r40.mass == pytest.approx(r20.mass, rel=1e-12)


@pytest.mark.parametrize("m", [3, 4, 5, 8])
@pytest.mark.parametrize("k", [1, Fraction(1, 2), Fraction(1, 3)])
def test_dihedral_mass(m, k):
    sysm = build_root_system("dihedral", 2, k if m % 2 else [k, k], m)
    r = rule_tensor(sysm, 20)
    ref = mehta_mass([2, m], float(k), 2, float(sysm.gamma))
    assert r.mass == pytest.approx(ref, rel=1e-12)
    if r.approximate:
        assert r.error_estimate < 1e-12


def test_polar_and_tensor_agree_on_polynomial_weight():
    sysm = build_root_system("B", 2, [1, 2])
    hs = HermiteSystem(OperatorContext(sysm), 4)
    t, p = rule_tensor(sysm, 20), rule_polar(sysm, 20)
    for nu in hs.indices():
        f = lambda X: hs.hermite_values(nu, X) * X[:, 0] ** 2
        assert t.integrate(f) == pytest.approx(p.integrate(f), rel=1e-11, abs=1e-11)


def test_polar_rejects_rank_three():
    with pytest.raises(ValueError):
        rule_polar(build_root_system("B", 3, [1, 1]), 6)


def test_normalization_constants():
    assert normalization_c_k(build_root_system("Z2", 1, 0), rule_tensor(build_root_system("Z2", 1, 0), 5)) \
        == pytest.approx(1 / math.sqrt(math.pi))
    # w(x) = 2 x^2 at mu = 1
    s1 = build_root_system("Z2", 1, 1)
    assert normalization_c_k(s1, rule_tensor(s1, 5)) == pytest.approx(1 / math.sqrt(math.pi))
    s2 = build_root_system("Z2", 2, [1, 1])
    assert normalization_c_k(s2, rule_tensor(s2, 5)) == pytest.approx(1 / (4 * math.gamma(1.5) ** 2))
    assert heat_constant_M_k(s1, 2.0) == pytest.approx(2.0 / 4 ** 1.5)


def test_integrate_examples():
    sysm = build_root_system("Z2", 1, 1)
    r = rule_tensor(sysm, 20)
    c = normalization_c_k(sysm, r)
    assert r.integrate(lambda X: np.ones(len(X))) == pytest.approx(r.mass)
    assert abs(r.integrate(lambda X: X[:, 0] ** 3)) < 1e-14
    hs = HermiteSystem(OperatorContext(sysm), 2)
    assert c * r.integrate(lambda X: hs.hermite_values((2,), X) ** 2) == pytest.approx(4.0, rel=1e-12)


@pytest.mark.parametrize("name, tol", [("Z2sq", 1e-10), ("S3", 1e-10), ("B2", 1e-10)])
def test_hermite_orthogonality(name, tol):
    sysm = make_system(name)
    hs = HermiteSystem(OperatorContext(sysm), 4)
    rule = rule_tensor(sysm, 16)
    c = normalization_c_k(sysm, rule)
    idx = hs.indices()
    V = np.array([hs.hermite_values(nu, rule.nodes) for nu in idx])
    G = c * (V * rule.weights) @ V.T
    ref = np.diag([2.0 ** sum(nu) for nu in idx])
    assert np.abs(G - ref).max() < tol


def test_scaled_rule():
    sysm = build_root_system("B", 2, [1, 1])
    r = rule_tensor(sysm, 14)
    s = r.scaled(2.5)
    # int w_k e^{-a|x|^2} = a^{-gamma - N/2} int w_k e^{-|x|^2}
    assert s.mass == pytest.approx(r.mass * 2.5 ** (-4 - 1), rel=1e-13)
    assert s.scaled(1.0).mass == pytest.approx(r.mass, rel=1e-13)
    f = lambda X: X[:, 0] ** 2 * X[:, 1] ** 4
    assert s.integrate(f) == pytest.approx(r.integrate(f) * 2.5 ** (-4 - 1 - 3), rel=1e-12)


def test_json_round_trip():
    r = rule_tensor(build_root_system("dihedral", 2, 1, 3), 6)
    back = QuadratureRule.from_json(r.to_json())
    assert np.array_equal(back.nodes, r.nodes) and np.array_equal(back.weights, r.weights)
    assert back.degree == r.degree and back.system == r.system


def test_size_guard():
    with pytest.raises(ValueError):
        rule_tensor(build_root_system("A", 4, 1), 100)
    with pytest.raises(ValueError):
        rule_tensor(build_root_system("A", 3, 1), 0)
