import math
from fractions import Fraction

import numpy as np
import pytest
from numpy.polynomial import hermite as nph
from scipy.special import eval_genlaguerre

from conftest import SYSTEM_ARGS, make_system
from dunkl.groups import build_root_system
from dunkl.hermite import GramSingularError, HermiteSystem, Normalized, build_basis
from dunkl.operators import OperatorContext
from dunkl.poly import Polynomial

X = Polynomial.variable(1, 0)


def hermite_z2(mu, n_max=6):
    return HermiteSystem(OperatorContext(build_root_system("Z2", 1, mu)), n_max)


@pytest.fixture(scope="module", params=sorted(SYSTEM_ARGS))
def hs(request):
    return build_basis(OperatorContext(make_system(request.param)), 5)


def z2_norm(mu, n):
    return math.prod(Fraction(j) + (2 * mu if j % 2 else 0) for j in range(1, n + 1))


@pytest.mark.parametrize("mu", [0, Fraction(1, 2), 1, Fraction(5, 2)])
def test_z2_norms(mu):
    h = hermite_z2(mu)
    for n in range(7):
        assert h.phi_tilde((n,)) == X ** n
        assert h.norm2((n,)) == z2_norm(mu, n)


def test_degree_zero_and_one():
    h = hermite_z2(1, 3)
    assert h.phi_tilde((0,)) == 1
    assert h.hermite_tilde((0,)) == 1
    assert h.phi_tilde((1,)) == X


@pytest.mark.parametrize("mu", [0, Fraction(1, 2), 1, Fraction(5, 2)])
def test_z2_second_hermite(mu):
    h = hermite_z2(mu, 2)
    H2 = h.hermite_poly((2,))
    assert H2.norm2 == 2 + 4 * mu
    assert H2.poly == 4 * X ** 2 - 2 * (1 + 2 * mu)


@pytest.mark.parametrize("mu", [0, Fraction(1, 2), 1, Fraction(5, 2)])
def test_z2_laguerre_closed_form(mu):
    # sqrt(m) H_{2k} = (-1)^k 4^k k! L_k^{mu-1/2}(x^2); the odd ones carry x L_k^{mu+1/2}
    h = hermite_z2(mu, 8)
    xs = np.linspace(-2, 2, 9)
    a = float(mu)
    for n in range(9):
        k = n // 2
        if n % 2 == 0:
            ref = (-1) ** k * 4 ** k * math.factorial(k) * eval_genlaguerre(k, a - 0.5, xs ** 2)
        else:
            ref = (-1) ** k * 2 ** n * math.factorial(k) * xs * eval_genlaguerre(k, a + 0.5, xs ** 2)
        got = h.hermite_tilde((n,)).evaluate_many(xs[:, None])
        assert np.allclose(got, ref, rtol=1e-12, atol=1e-9)


def test_classical_hermite_product():
    h = HermiteSystem(OperatorContext(build_root_system("Z2", 2, [0, 0])), 5)
    pts = np.array([[0.3, -1.2], [1.5, 0.7], [-0.4, 0.0]])
    for nu in h.indices():
        ref = np.ones(len(pts))
        for i, ni in enumerate(nu):
            ref = ref * nph.hermval(pts[:, i], [0] * ni + [1])
        ref = ref / math.sqrt(math.prod(math.factorial(v) for v in nu))
        assert np.allclose(h.hermite_values(nu, pts), ref, rtol=1e-12)


def test_classical_rodrigues_second():
    h = hermite_z2(0, 2)
    rod = h.rodrigues_poly((2,))
    assert rod.poly == 4 * X ** 2 - 2 and rod.norm2 == 2


def test_hermite_function_example():
    h = hermite_z2(1, 2)
    assert h.hermite_function((0,), [0.0]) == pytest.approx(1.0)
    assert h.hermite_function((2,), [1.0]) == pytest.approx(math.exp(-0.5) * (4 - 6) / math.sqrt(6))
    assert h.hermite_function((2,), [0.0]) == pytest.approx(h.hermite_values((2,), np.zeros((1, 1)))[0])


def test_rodrigues_equals_hermite(hs):
    for nu in hs.indices():
        rod, her = hs.rodrigues_poly(nu), hs.hermite_poly(nu)
        assert rod.poly == her.poly and rod.norm2 == her.norm2


def test_eigen_equations(hs):
    for nu in hs.indices():
        for route in ("sum_of_squares", "explicit"):
            r1, r2 = hs.eigen_residuals(nu, route=route)
            assert r1.is_zero() and r2.is_zero()


def test_gram_identity(hs):
    assert hs.gram_identity_residual() == 0


def test_parity(hs):
    for nu in hs.indices():
        H = hs.hermite_tilde(nu)
        sign = -1 if sum(nu) % 2 else 1
        assert H.scale_arguments(-1) == H.scale(sign)


def test_leading_coefficient_positive(hs):
    for nu in hs.indices():
        _, c = hs.phi_tilde(nu).sorted_terms()[0]
        assert c > 0


@pytest.mark.parametrize("lam", [1, 2, -1, Fraction(1, 3)])
def test_scaling_identity(lam):
    hsys = build_basis(OperatorContext(make_system("B2")), 4)
    for nu in hsys.indices():
        assert hsys.scaling_identity_residual(nu, lam).is_zero()
    with pytest.raises(ValueError):
        hsys.scaling_identity_residual((0, 0), 0)


def test_eigenspace_of_delta_minus_two_rho(hs):
    ctx = hs.ctx
    for nu in hs.indices():
        p = Polynomial.monomial(nu)
        q = ctx.exp_laplacian(Fraction(-1, 4), p)
        n = sum(nu)
        assert (ctx.laplacian(q) - q.euler().scale(2) + q.scale(2 * n)).is_zero()


def test_normalized_evaluation():
    h = hermite_z2(1, 3)
    pair = h.phi((3,))
    assert isinstance(pair, Normalized)
    x = 0.7
    assert pair.evaluate([x]) == pytest.approx(x ** 3 / math.sqrt(float(z2_norm(1, 3))))


def test_table_round_trip():
    h = hermite_z2(1, 4)
    rows = h.table()
    assert len(rows) == 5
    back = Polynomial.from_json_obj(rows[2]["hermite_tilde"])
    assert back == h.hermite_tilde((2,))
    assert Fraction(rows[2]["norm2"]) == 6


def test_unknown_index_and_limits():
    h = hermite_z2(1, 2)
    with pytest.raises(KeyError):
        h.phi_tilde((3,))
    with pytest.raises(ValueError):
        hermite_z2(1, 65)
    with pytest.raises(ValueError):
        HermiteSystem(OperatorContext(make_system("B2")), 2, mutation="bogus")


def test_mutated_difference_sign_breaks_gram():
    # flipping the reflection term of T_1 at mu = 1/2 makes [x, x] = 1 - 2 mu vanish
    ctx = OperatorContext(build_root_system("Z2", 1, Fraction(1, 2)), mutation="flip_difference_sign")
    with pytest.raises(GramSingularError):
        HermiteSystem(ctx, 2)
