"""Orthonormal bases for the Dunkl pairing and generalized Hermite polynomials.

Within each degree the monomials are orthogonalised exactly with respect to
``[p, q]_k = (p(T) q)(0)``.  Norms are kept as exact squares: every basis
element is a pair ``(phi_tilde, m)`` meaning ``phi = phi_tilde / sqrt(m)``.
All exact identities are checked on ``phi_tilde``; a residual that vanishes
for ``phi_tilde`` vanishes for ``phi`` since the factor ``sqrt(m)`` is a
common scalar.

Gram-Schmidt runs through the monomials of a degree from the smallest in
graded-lex order upwards, so ``phi_tilde_nu = x^nu + (smaller monomials)``:
its leading coefficient is 1 and the sign convention is fixed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .operators import OperatorContext
from .poly import Polynomial, monomials

__all__ = [
    "HermiteSystem",
    "Normalized",
    "GramSingularError",
    "build_basis",
]


class GramSingularError(ArithmeticError):
    """A pairing Gram matrix turned out singular (cannot happen for k >= 0)."""


@dataclass(frozen=True)
class Normalized:
    """The polynomial ``poly / sqrt(norm2)`` kept in exact pair form."""

    poly: Polynomial
    norm2: object

    @property
    def scale(self) -> float:
        return 1.0 / math.sqrt(float(self.norm2))

    def evaluate(self, x):
        """Float/complex value at a point, or an mpmath value for mpmath points."""
        v = self.poly.evaluate(x)
        if type(v).__name__ in ("mpf", "mpc"):
            import mpmath

            return v / mpmath.sqrt(mpmath.mpf(self.norm2.numerator) / self.norm2.denominator)
        return v * self.scale if not isinstance(v, Fraction) else float(v) * self.scale

    __call__ = evaluate

    def evaluate_many(self, points):
        return self.poly.evaluate_many(points) * self.scale

    def __eq__(self, other):
        if not isinstance(other, Normalized):
            return NotImplemented
        # poly_a/sqrt(m_a) == poly_b/sqrt(m_b) with equal norms is the only case we compare
        return self.norm2 == other.norm2 and self.poly == other.poly

    def __hash__(self):
        return hash((self.poly, self.norm2))


class HermiteSystem:
    """Pairing-orthonormal basis ``phi_nu`` and Hermite polynomials ``H_nu`` up to ``n_max``.

    Parameters
    ----------
    ctx : OperatorContext
    n_max : int
        Largest degree built.
    mutation : str, optional
        ``"flip_rodrigues_sign"`` drops the ``(-1)^{|nu|}`` factor of the
        Rodrigues formula; only for mutation testing.

    Notes
    -----
    ``basis(n)`` lists the multi-indices of degree ``n`` in descending
    graded-lex order (``x_1^n`` first).  The float evaluation of ``phi_nu``
    takes one square root of the exact norm.
    """

    def __init__(self, ctx: OperatorContext, n_max: int, mutation=None):
        from .poly import MAX_DEGREE

        if n_max > MAX_DEGREE:
            raise ValueError(f"n_max exceeds the degree cap {MAX_DEGREE}")
        if n_max < 0:
            raise ValueError("n_max must be >= 0")
        if mutation not in (None, "flip_rodrigues_sign"):
            raise ValueError(f"unknown mutation {mutation!r}")
        self.mutation = mutation
        self.ctx = ctx
        self.system = ctx.system
        self.N = ctx.N
        self.n_max = int(n_max)
        self._phi = {}
        self._norm2 = {}
        self._gram = {}
        self._hermite = {}
        self._float_cache = {}
        for d in range(self.n_max + 1):
            self._build_degree(d)

    # construction -------------------------------------------------------------
    def _build_degree(self, d):
        basis = monomials(self.N, d)[::-1]  # ascending graded-lex order
        _, G = self.ctx.gram_matrix(d, basis)
        self._gram[d] = (basis[::-1], [row[::-1] for row in G[::-1]])
        n = len(basis)
        vecs, norms = [], []
        for j in range(n):
            v = [Fraction(0)] * n
            v[j] = Fraction(1)
            for u, m in zip(vecs, norms):
                # coefficient <x^nu_j, u> / m using Gram entries
                ip = sum((G[j][b] * u[b] for b in range(n) if u[b]), Fraction(0))
                if ip:
                    c = ip / m
                    v = [vi - c * ui for vi, ui in zip(v, u)]
            m = _quadratic_form(G, v)
            if not m:
                raise GramSingularError(f"pairing is degenerate in degree {d}")
            if not self.ctx.exact:
                if abs(float(m)) < 1e-12:
                    raise GramSingularError(f"pairing is degenerate in degree {d}")
            vecs.append(v)
            norms.append(m)
            nu = basis[j]
            self._phi[nu] = Polynomial(self.N, {basis[b]: v[b] for b in range(n) if v[b]})
            self._norm2[nu] = m

    # access -----------------------------------------------------------------------
    def basis(self, n):
        if n > self.n_max:
            raise ValueError(f"degree {n} exceeds n_max={self.n_max}")
        return monomials(self.N, n)

    def indices(self):
        out = []
        for n in range(self.n_max + 1):
            out.extend(self.basis(n))
        return out

    def _key(self, nu):
        nu = tuple(int(v) for v in nu)
        if len(nu) != self.N or nu not in self._phi:
            raise KeyError(f"unknown multi-index {nu}")
        return nu

    def phi_tilde(self, nu) -> Polynomial:
        return self._phi[self._key(nu)]

    def norm2(self, nu):
        return self._norm2[self._key(nu)]

    def phi(self, nu) -> Normalized:
        nu = self._key(nu)
        return Normalized(self._phi[nu], self._norm2[nu])

    def monomial_gram(self, n):
        """``(monomials, G)`` with ``G[a][b] = [x^mu_a, x^mu_b]``."""
        return self._gram[n]

    def hermite_tilde(self, nu) -> Polynomial:
        """``2^{|nu|} e^{-Delta_k/4} phi_tilde_nu``."""
        nu = self._key(nu)
        hit = self._hermite.get(nu)
        if hit is None:
            n = sum(nu)
            hit = self.ctx.exp_laplacian(Fraction(-1, 4), self._phi[nu]).scale(Fraction(2) ** n)
            self._hermite[nu] = hit
        return hit

    def hermite_poly(self, nu) -> Normalized:
        """``H_nu = 2^{|nu|} e^{-Delta_k/4} phi_nu`` in pair form."""
        nu = self._key(nu)
        return Normalized(self.hermite_tilde(nu), self._norm2[nu])

    def rodrigues_poly(self, nu) -> Normalized:
        """``(-1)^{|nu|} phi_nu(T~)(1)`` with ``T~_i p = T_i p - 2 x_i p``.

        This is ``(-1)^{|nu|} e^{|x|^2} phi_nu(T) e^{-|x|^2}`` with the Gaussian
        removed, and is computed without any Laplacian.
        """
        nu = self._key(nu)
        n = sum(nu)
        memo = self._twisted_memo()
        out = Polynomial.zero(self.N)
        for e, a in self._phi[nu].sorted_terms():
            out = out + self._twisted_power(e, memo).scale(a)
        if n % 2 and self.mutation != "flip_rodrigues_sign":
            out = -out
        return Normalized(out, self._norm2[nu])

    def _twisted_memo(self):
        if not hasattr(self, "_tw_memo"):
            self._tw_memo = {(0,) * self.N: Polynomial.constant(self.N, 1)}
        return self._tw_memo

    def _twisted_power(self, e, memo):
        hit = memo.get(e)
        if hit is not None:
            return hit
        i = max(j for j, v in enumerate(e) if v)
        prev = list(e)
        prev[i] -= 1
        val = self.ctx.gaussian_twisted_apply(i, self._twisted_power(tuple(prev), memo))
        memo[e] = val
        return val

    # identity residuals ----------------------------------------------------------
    def eigen_residuals(self, nu, route="sum_of_squares"):
        """Exact residuals of the two eigen-equations for ``H_nu``.

        (i)  ``(Delta_k - 2 rho) H + 2|nu| H``;
        (ii) ``sum_i (T_i - x_i)^2 H - |x|^2 H + (2|nu| + 2 gamma + N) H``, the
        Gaussian factor of ``h_nu = e^{-|x|^2/2} H_nu`` stripped by the
        product rule.

        ``route`` selects the Laplacian in (i): ``"sum_of_squares"`` or
        ``"explicit"`` (the ``delta_alpha`` formula).
        """
        H = self.hermite_tilde(nu)
        n = sum(self._key(nu))
        lap = self.ctx.laplacian if route == "sum_of_squares" else self.ctx.laplacian_explicit
        r1 = lap(H) - H.euler().scale(2) + H.scale(2 * n)
        acc = Polynomial.zero(self.N)
        for i in range(self.N):
            xi = Polynomial.variable(self.N, i)
            u = self.ctx.dunkl_apply(i, H) - xi * H
            acc = acc + self.ctx.dunkl_apply(i, u) - xi * u
        c = 2 * n + 2 * self.ctx.gamma + self.N
        r2 = acc - Polynomial.norm_squared(self.N) * H + H.scale(c)
        return r1, r2

    def scaling_identity_residual(self, nu, lam):
        """``(lam/2)^{|nu|} H_nu(x/lam) - (e^{-lam^2 Delta_k/4} phi_nu)(x)`` in pair form."""
        lam = Fraction(lam)
        if lam == 0:
            raise ValueError("lambda must be nonzero")
        nu = self._key(nu)
        n = sum(nu)
        lhs = self.hermite_tilde(nu).scale_arguments(1 / lam).scale((lam / 2) ** n)
        rhs = self.ctx.exp_laplacian(-lam * lam / 4, self._phi[nu])
        return lhs - rhs

    def gram_identity_residual(self):
        """Largest deviation of the pair-form Gram matrix from the identity.

        ``[phi_tilde_a, phi_tilde_b] / sqrt(m_a m_b)`` is ``delta_ab`` iff
        ``[phi_tilde_a, phi_tilde_b] == m_a delta_ab`` exactly, which is what
        is checked (cross-degree pairs vanish by grading and are included).
        """
        worst = Fraction(0)
        idx = self.indices()
        for a, mu in enumerate(idx):
            for nu in idx[a:]:
                val = self.ctx.pairing(self._phi[mu], self._phi[nu])
                target = self._norm2[mu] if mu == nu else 0
                dev = abs(val - target)
                if dev > worst:
                    worst = dev
        return worst

    # numerics ------------------------------------------------------------------------
    def _float_poly(self, kind, nu):
        key = (kind, nu)
        hit = self._float_cache.get(key)
        if hit is None:
            src = self._phi[nu] if kind == "phi" else self.hermite_tilde(nu)
            hit = (src, 1.0 / math.sqrt(float(self._norm2[nu])))
            self._float_cache[key] = hit
        return hit

    def phi_values(self, nu, points):
        p, s = self._float_poly("phi", self._key(nu))
        return p.evaluate_many(points) * s

    def hermite_values(self, nu, points):
        p, s = self._float_poly("H", self._key(nu))
        return p.evaluate_many(points) * s

    def hermite_function(self, nu, x):
        """``h_nu(x) = e^{-|x|^2/2} H_nu(x)`` at float points ``(..., N)``."""
        pts = np.asarray(x, dtype=float)
        if pts.ndim == 0:
            pts = pts.reshape(1)
        vals = self.hermite_values(nu, pts) * np.exp(-0.5 * np.sum(pts * pts, axis=-1))
        return vals if np.ndim(vals) else float(vals)

    # export -----------------------------------------------------------------------------
    def table(self):
        """Records ``{nu, norm2, phi_tilde, hermite_tilde}`` with exact coefficients."""
        rows = []
        for nu in self.indices():
            rows.append({
                "nu": list(nu),
                "norm2": _scalar_str(self._norm2[nu]),
                "phi_tilde": self._phi[nu].to_json_obj(),
                "hermite_tilde": self.hermite_tilde(nu).to_json_obj(),
            })
        return rows

    def to_json(self):
        return json.dumps({"system": self.system.to_json_obj(), "n_max": self.n_max,
                           "records": self.table()}, indent=1)


def _scalar_str(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if hasattr(v, "to_json"):
        return v.to_json()
    return repr(float(v))


def _quadratic_form(G, v):
    n = len(v)
    total = Fraction(0)
    for a in range(n):
        if v[a]:
            row = G[a]
            s = sum((row[b] * v[b] for b in range(n) if v[b]), Fraction(0))
            total = total + v[a] * s
    return total


def build_basis(ctx: OperatorContext, n_max: int) -> HermiteSystem:
    """Gram-Schmidt basis and Hermite polynomials up to degree ``n_max``."""
    return HermiteSystem(ctx, n_max)
