"""Dunkl operators and the exact operator algebra built on them.

For a positive root ``alpha = sqrt(s) * beta`` the difference term of
``T_i`` is ``k * beta_i * (f - f o sigma) / <beta, x>`` because the scale
cancels between numerator and denominator.  All operators therefore map
polynomials with coefficients in the field of the root directions to the same
field, and everything below is exact for rational (or ``Q(sqrt 3)``) roots.

``T_i`` is linear, so it is evaluated monomial by monomial with a cache; the
Laplacian has a second, independent route through the explicit formula
``Delta f + 2 sum k delta_alpha f``.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

import numpy as np

from .groups import RootSystem
from .poly import Polynomial, monomials

__all__ = [
    "OperatorContext",
    "MUTATIONS",
]

# Deliberate defects used to check that the identity tests are not vacuous.
# "flip_difference_sign": the reflection term of T_1 enters with the wrong sign.
# "flip_difference_sign_all": the same defect in every T_i (this is the same
# as replacing k by -k, which keeps the operators commuting).
MUTATIONS = (None, "flip_difference_sign", "flip_difference_sign_all")


class OperatorContext:
    """Dunkl operators of a root system acting on :class:`Polynomial`.

    Parameters
    ----------
    system : RootSystem
    mutation : str, optional
        One of :data:`MUTATIONS`; only for mutation testing.

    Notes
    -----
    Coordinate indices are 0-based throughout the Python API.
    """

    def __init__(self, system: RootSystem, mutation=None):
        if mutation not in MUTATIONS:
            raise ValueError(f"unknown mutation {mutation!r}")
        self.system = system
        self.mutation = mutation
        self.N = system.dimension
        self.gamma = system.gamma
        self.exact = system.exact
        self._roots = []
        for r, beta in enumerate(system.directions):
            k = system.multiplicities[r]
            if not k:
                continue
            kval = k if self.exact else float(k)
            self._roots.append((tuple(beta), system.root_scale2(r), kval, system.reflections[r]))
        self._mono_cache = {}

    # -- single operators ----------------------------------------------------
    def reflect_poly(self, p: Polynomial, matrix) -> Polynomial:
        """``x -> p(sigma x)`` (reflections are symmetric involutions)."""
        return p.substitute_linear(matrix)

    def _difference(self, p, beta, matrix):
        return (p - p.substitute_linear(matrix)).divide_by_linear_form(beta)

    def _monomial_images(self, exps):
        """``(T_0 x^e, ..., T_{N-1} x^e)`` for one monomial, cached."""
        hit = self._mono_cache.get(exps)
        if hit is not None:
            return hit
        mono = Polynomial._raw(self.N, {exps: Fraction(1)})
        out = [mono.diff(i) for i in range(self.N)]
        diffs = [(beta, k, self._difference(mono, beta, mat)) for beta, _, k, mat in self._roots]
        for i in range(self.N):
            sign = -1 if (self.mutation == "flip_difference_sign_all"
                          or (self.mutation == "flip_difference_sign" and i == 0)) else 1
            acc = out[i]
            for beta, k, d in diffs:
                if beta[i]:
                    acc = acc + d.scale(sign * k * beta[i])
            out[i] = acc
        out = tuple(out)
        if len(self._mono_cache) > 200000:
            self._mono_cache.clear()
        self._mono_cache[exps] = out
        return out

    def _check_index(self, i):
        if not 0 <= int(i) < self.N:
            raise IndexError(f"coordinate index {i} out of range 0..{self.N - 1}")

    def dunkl_apply(self, i: int, p: Polynomial) -> Polynomial:
        """``T_i p``."""
        self._check_index(i)
        self._check_poly(p)
        acc = {}
        for e, c in p.terms.items():
            img = self._monomial_images(e)[i]
            for f, v in img.terms.items():
                acc[f] = acc.get(f, 0) + c * v
        return Polynomial(self.N, acc)

    def dunkl_all(self, p: Polynomial):
        """``[T_0 p, ..., T_{N-1} p]``."""
        self._check_poly(p)
        accs = [{} for _ in range(self.N)]
        for e, c in p.terms.items():
            for i, img in enumerate(self._monomial_images(e)):
                acc = accs[i]
                for f, v in img.terms.items():
                    acc[f] = acc.get(f, 0) + c * v
        return [Polynomial(self.N, a) for a in accs]

    def _check_poly(self, p):
        if p.nvars != self.N:
            raise ValueError(f"polynomial has {p.nvars} variables, system has {self.N}")

    # -- Laplacian -----------------------------------------------------------
    def laplacian(self, p: Polynomial) -> Polynomial:
        """``Delta_k p = sum_i T_i^2 p``."""
        out = Polynomial.zero(self.N)
        for i, q in enumerate(self.dunkl_all(p)):
            out = out + self.dunkl_apply(i, q)
        return out

    def delta_alpha(self, p: Polynomial, r: int) -> Polynomial:
        """``<grad p, alpha>/<alpha, x> - (p - p o sigma)/<alpha, x>^2`` for the r-th positive root.

        Computed as one numerator over ``s <beta, x>^2`` and two exact
        divisions by the linear form.
        """
        beta = self.system.directions[r]
        s = self.system.root_scale2(r)
        mat = self.system.reflections[r]
        grad_beta = Polynomial.zero(self.N)
        for i, b in enumerate(beta):
            if b:
                grad_beta = grad_beta + p.diff(i).scale(b)
        lin = Polynomial.linear_form(beta)
        num = lin * grad_beta * s - (p - p.substitute_linear(mat))
        q = num.divide_by_linear_form(beta).divide_by_linear_form(beta)
        return q / s

    def laplacian_explicit(self, p: Polynomial) -> Polynomial:
        """``Delta p + 2 sum_{alpha > 0} k(alpha) delta_alpha p`` (independent of ``T_i``)."""
        self._check_poly(p)
        out = Polynomial.zero(self.N)
        for i in range(self.N):
            out = out + p.diff(i).diff(i)
        for r, k in enumerate(self.system.multiplicities):
            if k:
                out = out + self.delta_alpha(p, r).scale(2 * (k if self.exact else float(k)))
        return out

    def laplacian_power(self, p: Polynomial, n: int) -> Polynomial:
        for _ in range(n):
            p = self.laplacian(p)
        return p

    def exp_laplacian(self, c, p: Polynomial) -> Polynomial:
        """``e^{c Delta_k} p`` as the finite sum ``sum_n c^n/n! Delta_k^n p``."""
        c = Fraction(c) if isinstance(c, (int, str, Fraction)) else c
        out = p
        term = p
        n = 0
        while True:
            term = self.laplacian(term)
            if not term:
                break
            n += 1
            out = out + term.scale(c ** n / factorial(n) if isinstance(c, Fraction)
                                   else c ** n / factorial(n))
        return out

    # -- p(T), pairing ------------------------------------------------------
    def apply_poly_of_T(self, p: Polynomial, q: Polynomial) -> Polynomial:
        """``p(T) q = sum_e a_e T^e q``, highest degree terms first."""
        self._check_poly(p)
        self._check_poly(q)
        memo = {(0,) * self.N: q}
        out = Polynomial.zero(self.N)
        for e, a in p.sorted_terms():
            out = out + self._T_power(e, memo).scale(a)
        return out

    def _T_power(self, e, memo):
        hit = memo.get(e)
        if hit is not None:
            return hit
        # peel the last nonzero exponent: T^e q = T_i (T^{e - e_i} q)
        i = max(j for j, v in enumerate(e) if v)
        prev = list(e)
        prev[i] -= 1
        base = self._T_power(tuple(prev), memo)
        val = self.dunkl_apply(i, base) if base else base
        memo[e] = val
        return val

    def pairing(self, p: Polynomial, q: Polynomial):
        """``[p, q]_k = (p(T) q)(0)``; only equal-degree components contribute."""
        self._check_poly(p)
        self._check_poly(q)
        qd = dict(q.homogeneous_components())
        total = Fraction(0)
        for d, pd in p.homogeneous_components():
            if d in qd:
                total = total + self.apply_poly_of_T(pd, qd[d]).constant_term
        return total

    def gram_matrix(self, degree: int, basis=None):
        """Pairing Gram matrix ``[x^mu, x^nu]`` on the monomials of one degree.

        Returns ``(basis, G)`` with ``G`` a list of lists of exact scalars.
        """
        basis = list(basis) if basis is not None else monomials(self.N, degree)
        G = [[None] * len(basis) for _ in basis]
        for b, nu in enumerate(basis):
            memo = {(0,) * self.N: Polynomial._raw(self.N, {nu: Fraction(1)})}
            for a, mu in enumerate(basis):
                G[a][b] = self._T_power(mu, memo).constant_term
        return basis, G

    # -- Euler operator, sl(2) ------------------------------------------------
    @staticmethod
    def euler(p: Polynomial) -> Polynomial:
        """``rho p = sum_i x_i d_i p``."""
        return p.euler()

    def op_E(self, p):
        return (Polynomial.norm_squared(self.N) * p) / 2

    def op_F(self, p):
        return -(self.laplacian(p) / 2)

    def op_H(self, p):
        c = self.gamma + Fraction(self.N, 2) if self.exact else float(self.gamma) + self.N / 2
        return p.euler() + p.scale(c)

    def sl2_commutators(self, p: Polynomial):
        """Residuals ``([H,E]-2E)p``, ``([H,F]+2F)p``, ``([E,F]-H)p``."""
        E, F, H = self.op_E, self.op_F, self.op_H
        r1 = H(E(p)) - E(H(p)) - E(p).scale(2)
        r2 = H(F(p)) - F(H(p)) + F(p).scale(2)
        r3 = E(F(p)) - F(E(p)) - H(p)
        return r1, r2, r3

    # -- twisted operators -----------------------------------------------------
    def gaussian_twisted_apply(self, i: int, p: Polynomial) -> Polynomial:
        """``T_i p - 2 x_i p``: the action of ``T_i`` conjugated by ``e^{-|x|^2}``."""
        return self.dunkl_apply(i, p) - Polynomial.variable(self.N, i) * p * 2

    def cherednik_apply(self, i: int, p: Polynomial) -> Polynomial:
        """``xi_i p = alpha x_i T_i p + (1 - N) p + sum_{j > i} s_ij p`` for S_N, ``alpha = 1/k``."""
        if self.system.family != "A":
            raise ValueError("Cherednik operators are defined here for the symmetric group only")
        self._check_index(i)
        k = self.system.orbit_multiplicities[0]
        if k <= 0:
            raise ValueError("Cherednik operators need a positive multiplicity (alpha = 1/k)")
        out = Polynomial.variable(self.N, i) * self.dunkl_apply(i, p) * (1 / k)
        out = out + p.scale(1 - self.N)
        for j in range(i + 1, self.N):
            swap = np.eye(self.N, dtype=int).tolist()
            swap[i][i] = swap[j][j] = 0
            swap[i][j] = swap[j][i] = 1
            out = out + p.substitute_linear(swap)
        return out
