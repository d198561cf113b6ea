from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import SYSTEM_ARGS, make_system, polynomials
from dunkl.groups import build_root_system
from dunkl.operators import OperatorContext
from dunkl.poly import Polynomial, monomials

X = Polynomial.variable(1, 0)


def z2(mu):
    return OperatorContext(build_root_system("Z2", 1, mu))


@pytest.fixture(scope="module", params=sorted(SYSTEM_ARGS))
def ctx(request):
    return OperatorContext(make_system(request.param))


def test_k_zero_is_the_gradient():
    c = OperatorContext(build_root_system("B", 2, [0, 0]))
    x1 = Polynomial.variable(2, 0)
    assert c.dunkl_apply(0, x1 ** 2) == 2 * x1


@pytest.mark.parametrize("mu", [0, Fraction(1, 2), 1, Fraction(5, 2)])
def test_z2_first_order(mu):
    assert z2(mu).dunkl_apply(0, X) == Polynomial.constant(1, 1 + 2 * mu)


def test_z2_examples():
    c = z2(1)
    assert c.dunkl_apply(0, X) == 3
    assert c.dunkl_apply(0, X ** 3) == 5 * X ** 2
    # T(x^4) = 4x^3, then T(4x^3) = 4 (3 + 2) x^2
    assert c.laplacian(X ** 4) == 20 * X ** 2
    assert c.laplacian_explicit(X ** 4) == 20 * X ** 2


def test_laplacian_of_norm(ctx):
    N = ctx.N
    norm2 = Polynomial.norm_squared(N)
    expected = 2 * N + 4 * ctx.gamma
    assert ctx.laplacian(norm2) == expected
    assert ctx.laplacian_explicit(norm2) == expected


def test_classical_laplacian():
    c = OperatorContext(build_root_system("B", 2, [0, 0]))
    x1, x2 = Polynomial.variable(2, 0), Polynomial.variable(2, 1)
    assert c.laplacian(x1 ** 2 * x2 ** 2) == 2 * x1 ** 2 + 2 * x2 ** 2


@pytest.mark.parametrize("mu", [0, Fraction(1, 2), 1])
def test_exp_laplacian_examples(mu):
    c = z2(mu)
    assert c.exp_laplacian(Fraction(-1, 4), X ** 2) == X ** 2 - Fraction(1 + 2 * mu, 2)
    assert c.exp_laplacian(Fraction(3, 7), Polynomial.constant(1, 5)) == 5


def test_exp_laplacian_inverse(ctx):
    for d in range(5):
        for e in monomials(ctx.N, d):
            p = Polynomial.monomial(e)
            q = ctx.exp_laplacian(Fraction(1, 3), p)
            assert ctx.exp_laplacian(Fraction(-1, 3), q) == p


def test_exp_laplacian_scaling(ctx):
    # (e^{-Delta/2} p)(2x) = 2^n (e^{-Delta/8} p)(x); squaring the two sides of the
    # sqrt(2) form keeps everything rational
    for e in monomials(ctx.N, 3):
        p = Polynomial.monomial(e)
        lhs = ctx.exp_laplacian(Fraction(-1, 2), p).scale_arguments(2)
        rhs = ctx.exp_laplacian(Fraction(-1, 8), p).scale(8)
        assert lhs == rhs


def test_apply_poly_of_T_examples(ctx):
    q = Polynomial.monomial((2,) + (1,) * (ctx.N - 1))
    x1 = Polynomial.variable(ctx.N, 0)
    assert ctx.apply_poly_of_T(x1, q) == ctx.dunkl_apply(0, q)
    assert ctx.apply_poly_of_T(Polynomial.constant(ctx.N, 1), q) == q


def test_pairing_examples():
    assert z2(1).pairing(Polynomial.constant(1, 1), Polynomial.constant(1, 1)) == 1
    for mu in (0, Fraction(1, 2), 2):
        assert z2(mu).pairing(X, X) == 1 + 2 * mu
    c0 = OperatorContext(build_root_system("B", 2, [0, 0]))
    p = Polynomial.monomial((3, 2))
    assert c0.pairing(p, p) == 6 * 2


def test_pairing_different_degrees_vanish(ctx):
    p = Polynomial.monomial((2,) + (0,) * (ctx.N - 1))
    q = Polynomial.monomial((1,) * ctx.N)
    if p.degree != q.degree:
        assert ctx.pairing(p, q) == 0


def test_commutativity_up_to_degree_five(ctx):
    for d in range(6):
        for e in monomials(ctx.N, d):
            p = Polynomial.monomial(e)
            Tp = ctx.dunkl_all(p)
            for i in range(ctx.N):
                for j in range(i + 1, ctx.N):
                    assert ctx.dunkl_apply(i, Tp[j]) == ctx.dunkl_apply(j, Tp[i])


def test_homogeneity(ctx):
    for e in monomials(ctx.N, 4):
        for q in ctx.dunkl_all(Polynomial.monomial(e)):
            assert q.is_zero() or (q.is_homogeneous() and q.degree == 3)


def test_laplacian_routes_agree(ctx):
    for d in range(6):
        for e in monomials(ctx.N, d):
            p = Polynomial.monomial(e)
            assert ctx.laplacian(p) == ctx.laplacian_explicit(p)


def test_gram_matrix_symmetric_positive_definite(ctx):
    for d in range(4):
        basis, G = ctx.gram_matrix(d)
        n = len(basis)
        assert all(G[a][b] == G[b][a] for a in range(n) for b in range(n))
        # exact LDL^T: every pivot must be positive
        M = [row[:] for row in G]
        for j in range(n):
            assert M[j][j] > 0
            for a in range(j + 1, n):
                f = M[a][j] / M[j][j]
                for b in range(j, n):
                    M[a][b] -= f * M[j][b]


def test_euler_examples():
    c = OperatorContext(build_root_system("B", 2, [1, 1]))
    x1, x2 = Polynomial.variable(2, 0), Polynomial.variable(2, 1)
    assert c.euler(x1 ** 2 * x2) == 3 * x1 ** 2 * x2
    assert c.euler(Polynomial.constant(2, 1)).is_zero()
    assert c.euler(x1 + x2 ** 2) == x1 + 2 * x2 ** 2


def test_sl2_fixed_examples(ctx):
    x1 = Polynomial.variable(ctx.N, 0)
    for p in (x1 ** 3, Polynomial.constant(ctx.N, 1)):
        assert all(r.is_zero() for r in ctx.sl2_commutators(p))


def test_gaussian_twisted_examples():
    c = z2(Fraction(3, 2))
    one = Polynomial.constant(1, 1)
    assert c.gaussian_twisted_apply(0, one) == -2 * X
    twice = c.gaussian_twisted_apply(0, c.gaussian_twisted_apply(0, one))
    assert twice == 4 * X ** 2 - 2 * (1 + 2 * Fraction(3, 2))
    c0 = z2(0)
    assert c0.gaussian_twisted_apply(0, X) == 1 - 2 * X ** 2


def test_cherednik_examples():
    c = OperatorContext(build_root_system("A", 2, 1))
    one = Polynomial.constant(2, 1)
    assert c.cherednik_apply(0, one).is_zero()
    x1, x2 = Polynomial.variable(2, 0), Polynomial.variable(2, 1)
    # by hand: alpha x1 T1(x1 + x2) - (x1 + x2) + s12(x1 + x2), with T1(x1 + x2) = 1
    assert c.cherednik_apply(0, x1 + x2) == x1
    with pytest.raises(ValueError):
        OperatorContext(build_root_system("B", 2, [1, 1])).cherednik_apply(0, one)


def test_mutations_rejected_when_unknown():
    with pytest.raises(ValueError):
        OperatorContext(make_system("B2"), mutation="nonsense")


def test_index_checks(ctx):
    with pytest.raises((ValueError, IndexError)):
        ctx.dunkl_apply(ctx.N, Polynomial.constant(ctx.N, 1))
    with pytest.raises(ValueError):
        ctx.dunkl_apply(0, Polynomial.constant(ctx.N + 1, 1))


# property tests on two exact systems of different type ----------------------------
B2 = OperatorContext(make_system("B2"))
S3 = OperatorContext(make_system("S3"))


@given(polynomials(2, max_degree=4), polynomials(2, max_degree=4))
def test_pairing_symmetric_bilinear(p, q):
    assert B2.pairing(p, q) == B2.pairing(q, p)
    assert B2.pairing(p + q, q) == B2.pairing(p, q) + B2.pairing(q, q)
    if not p.is_zero():
        assert B2.pairing(p, p) > 0


@given(polynomials(3, max_degree=3), polynomials(3, max_degree=3), st.integers(0, 5))
def test_pairing_equivariance(p, q, idx):
    g = S3.system.group_elements[idx]
    assert S3.pairing(p.compose_orthogonal(g), q.compose_orthogonal(g)) == S3.pairing(p, q)


@given(polynomials(2, max_degree=5))
def test_sl2_random(p):
    assert all(r.is_zero() for r in B2.sl2_commutators(p))


@given(polynomials(3, max_degree=3), polynomials(3, max_degree=3), st.integers(0, 2))
def test_cherednik_symmetric(p, q, i):
    assert S3.pairing(S3.cherednik_apply(i, p), q) == S3.pairing(p, S3.cherednik_apply(i, q))


@given(polynomials(2, max_degree=4), polynomials(2, max_degree=4))
def test_poly_of_T_order_irrelevant(p, q):
    x1, x2 = Polynomial.variable(2, 0), Polynomial.variable(2, 1)
    assert B2.apply_poly_of_T(x1 * x2, q) == B2.dunkl_apply(1, B2.dunkl_apply(0, q))
    assert B2.apply_poly_of_T(x2 * x1, q) == B2.dunkl_apply(0, B2.dunkl_apply(1, q))
    assert B2.apply_poly_of_T(p + x1, q) == B2.apply_poly_of_T(p, q) + B2.dunkl_apply(0, q)
