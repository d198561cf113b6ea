"""Dunkl heat kernel, Cauchy problem solver and maximum-principle probes.

``Gamma_k(x, y, t) = M_k t^{-gamma-N/2} e^{-(|x|^2+|y|^2)/4t} K(x/sqrt(2t), y/sqrt(2t))``
with ``M_k = 4^{-gamma-N/2} c_k``.  ``H(t) f(x) = int Gamma_k(x, y, t) f(y) w_k(y) dy``
is computed with the Gauss rule whose rate matches ``1/(4t)`` plus the rate of
``f``.  For a profile of rate ``b`` the solution ``H(s) f`` decays with rate
``b / (1 + 4 s b)``; the semigroup check uses that to place the inner solve
on the outer rule's nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .groups import RootSystem
from .kernel import KernelEvaluator
from .profiles import Profile
from .quad import QuadratureRule, heat_constant_M_k, normalization_c_k, rule_tensor

__all__ = [
    "HeatModel",
    "laplacian_numeric",
    "basic_solution",
    "basic_solution_residual",
    "MIN_TIME",
]

MIN_TIME = 1e-6


class HeatModel:
    """Everything needed to evaluate ``F_k``, ``Gamma_k`` and ``H(t) f``.

    Parameters
    ----------
    system : RootSystem
    npoints : int
        Points per coordinate of the base quadrature rule.
    """

    def __init__(self, system: RootSystem, npoints: int = 40, rule: QuadratureRule | None = None,
                 kernel: KernelEvaluator | None = None, tol: float = 1e-15):
        self.system = system
        self.N = system.dimension
        self.gamma = float(system.gamma)
        self.rule = rule if rule is not None else rule_tensor(system, npoints)
        self.kernel = kernel if kernel is not None else KernelEvaluator(system)
        self.c_k = normalization_c_k(system, self.rule)
        self.M_k = heat_constant_M_k(system, self.c_k)
        self.tol = tol
        self.expo = self.gamma + self.N / 2

    @staticmethod
    def _check_time(t):
        if t < MIN_TIME:
            raise ValueError(f"t must be >= {MIN_TIME} for kernel evaluation")

    # closed forms -----------------------------------------------------------------
    def fundamental_solution(self, x, t):
        """``F_k(x, t) = M_k t^{-gamma-N/2} e^{-|x|^2/4t}`` (vectorised over points)."""
        self._check_time(t)
        X = np.asarray(x, dtype=float)
        return self.M_k * t ** (-self.expo) * np.exp(-np.sum(X * X, axis=-1) / (4 * t))

    def gaussian_solution(self, b, x, t):
        """``H(t) e^{-b|.|^2}(x) = (1 + 4bt)^{-gamma-N/2} e^{-b|x|^2/(1 + 4bt)}``."""
        X = np.asarray(x, dtype=float)
        q = 1 + 4 * b * t
        return q ** (-self.expo) * np.exp(-b * np.sum(X * X, axis=-1) / q)

    # heat kernel ---------------------------------------------------------------------
    def heat_kernel(self, x, y, t, certify=False):
        """``Gamma_k(x, y, t)``; ``x`` and ``y`` broadcast as ``(P, N)`` arrays.

        With ``certify=True`` any value whose floating-point rounding estimate
        is not small against the value itself is recomputed in mpmath.
        """
        self._check_time(t)
        X = np.atleast_2d(np.asarray(x, dtype=float))
        Y = np.atleast_2d(np.asarray(y, dtype=float))
        X, Y = np.broadcast_arrays(X, Y)
        s = math.sqrt(2 * t)
        gauss = (np.sum(X * X, axis=1) + np.sum(Y * Y, axis=1)) / (4 * t)
        vals, tail, conv, rnd = self.kernel.eval_many(
            X / s, Y / s, self.tol * np.exp(np.minimum(gauss, 600.0)))
        if not np.all(conv):
            raise ArithmeticError("kernel series did not converge")
        vals = np.real(vals)
        if certify:
            bad = np.nonzero(~(np.abs(vals) > 4 * (rnd + tail)))[0]
            for p in bad:
                kv = self.kernel.kernel_eval(list(X[p] / s), list(Y[p] / s), tol=1e-30, mode="mp")
                vals[p] = float(mpmath.re(kv.value))
        pref = self.M_k * t ** (-self.expo)
        return pref * np.exp(-gauss) * vals

    def heat_kernel_spectral(self, x, y, t):
        """``(c_k^2/4^{gamma+N/2}) int e^{-t|xi|^2} K(ix, xi) K(-iy, xi) w_k(xi) dxi``."""
        self._check_time(t)
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        rule = self.rule.scaled(t)
        nodes = rule.nodes
        tol = self.tol * np.exp(np.minimum(t * np.sum(nodes ** 2, axis=1), 600.0))
        kx, _, c1, _ = self.kernel.eval_many(np.broadcast_to(1j * x, nodes.shape), nodes, tol)
        ky, _, c2, _ = self.kernel.eval_many(np.broadcast_to(-1j * y, nodes.shape), nodes, tol)
        if not (np.all(c1) and np.all(c2)):
            raise ArithmeticError("kernel series did not converge")
        val = self.c_k ** 2 * 4.0 ** (-self.expo) * rule.integrate_values(kx * ky)
        return float(np.real(val))

    # Cauchy problem ---------------------------------------------------------------------
    def _solve_rule(self, f: Profile, t):
        return self.rule.scaled(1.0 / (4 * t) + f.rate)

    def heat_solve(self, f: Profile, x, t):
        """``H(t) f(x)`` at points ``x`` of shape ``(P, N)`` (or one point)."""
        X = np.atleast_2d(np.asarray(x, dtype=float))
        if t == 0:
            out = f(X)
        else:
            self._check_time(t)
            out = self._solve_with_values(X, t, f.rate, lambda nodes: f.reduced(nodes))
        return out[0] if np.ndim(x) == 1 else out

    def _solve_with_values(self, X, t, rate, reduced_fn, prune=1e-18):
        rule = self.rule.scaled(1.0 / (4 * t) + rate)
        # Gamma_k(x, y, t) <= M_k t^{-gamma-N/2} e^{-(|x|-|y|)^2/4t}: drop nodes whose
        # bound on the contribution is negligible against the largest one
        r = np.sqrt(np.sum(rule.nodes ** 2, axis=1))
        gap = np.maximum(r - np.sqrt(np.max(np.sum(X * X, axis=1))), 0.0)
        bound = rule.plain_weights() * np.exp(-rate * r ** 2 - gap ** 2 / (4 * t))
        keep = bound >= prune * np.max(bound)
        nodes = rule.nodes[keep]
        weights = rule.weights[keep]
        red = reduced_fn(nodes)
        s = math.sqrt(2 * t)
        P, M = X.shape[0], nodes.shape[0]
        Xa = np.repeat(X / s, M, axis=0)
        Yn = np.tile(nodes / s, (P, 1))
        expo = (np.sum(Xa ** 2, axis=1) + np.sum(Yn ** 2, axis=1)) / 2 + rate * np.sum(
            np.tile(nodes, (P, 1)) ** 2, axis=1)
        vals, tail, conv, rnd = self.kernel.eval_many(Xa, Yn, self.tol * np.exp(np.minimum(expo, 600.0)))
        if not np.all(conv):
            raise ArithmeticError("kernel series did not converge")
        K = np.real(vals).reshape(P, M)
        pref = self.M_k * t ** (-self.expo) * np.exp(-np.sum(X * X, axis=1) / (4 * t))
        return pref * (K @ (weights * red))

    def heat_solve_spectral(self, f: Profile, x, t, transform=None):
        """``(c_k^2/4^{gamma+N/2}) int e^{-t|xi|^2} D_k f(xi) K(ix, xi) w_k(xi) dxi``."""
        from .transform import TransformContext

        tc = transform or TransformContext(self.system, rule=self.rule, kernel=self.kernel,
                                           c_k=self.c_k, tol=self.tol)
        X = np.atleast_2d(np.asarray(x, dtype=float))
        rule2, red = tc._transform_on_rule(f, extra_rate=t)
        table = tc._kernel_table(1j * X, rule2.nodes, rule2.rate, kernel=tc.nested_kernel)
        tc._check_rounding(rule2.weights * red, "outer integral")
        out = np.real(tc.inversion_constant * (table @ (rule2.weights * red)))
        return out[0] if np.ndim(x) == 1 else out

    def mass(self, x, t):
        """``int Gamma_k(x, y, t) w_k(y) dy``."""
        from .profiles import constant

        return self.heat_solve(constant(1.0), x, t)

    def semigroup_residual(self, f: Profile, x, s, t):
        """``H(t + s) f(x) - H(t)(H(s) f)(x)``, inner solve on the outer nodes."""
        if s <= 0 or t <= 0:
            raise ValueError("s and t must be positive")
        X = np.atleast_2d(np.asarray(x, dtype=float))
        direct = self.heat_solve(f, X, t + s)
        inner_rate = f.rate / (1 + 4 * s * f.rate)

        def inner(nodes):
            return self.heat_solve(f, nodes, s) * np.exp(inner_rate * np.sum(nodes ** 2, axis=1))

        composed = self._solve_with_values(X, t, inner_rate, inner)
        res = direct - composed
        return res[0] if np.ndim(x) == 1 else res

    # probes ------------------------------------------------------------------------------
    def max_principle_probe(self, f: Profile, grid, times, slack=1e-8, bumps=None, h=1e-3,
                            lap_tol=1e-6):
        """Sample ``H(t) f`` and check it never exceeds ``sup f``; check ``Delta_k <= 0`` at bump peaks.

        ``bumps`` is a list of centres ``c``; the bump ``e^{-|x - c|^2}`` has
        its global maximum at ``c``.  Returns a report dictionary.
        """
        grid = np.atleast_2d(np.asarray(grid, dtype=float))
        sup_f = f.sup if f.sup is not None else float(np.max(f(grid)))
        violations = []
        peak = -math.inf
        for t in times:
            u = self.heat_solve(f, grid, t)
            peak = max(peak, float(np.max(u)))
            for p in np.nonzero(u > sup_f + slack)[0]:
                violations.append({"x": grid[p].tolist(), "t": t, "u": float(u[p])})
        lap_report = []
        for c in bumps or []:
            c = np.asarray(c, dtype=float)

            def bump(X, c=c):
                X = np.atleast_2d(X)
                return np.exp(-np.sum((X - c) ** 2, axis=-1))

            val = laplacian_numeric(self.system, bump, c, h)
            lap_report.append({"center": c.tolist(), "laplacian": val, "ok": bool(val <= lap_tol)})
        return {
            "sup_f": sup_f,
            "max_u": peak,
            "violations": violations,
            "bump_laplacians": lap_report,
            "ok": not violations and all(r["ok"] for r in lap_report),
        }


def laplacian_numeric(system: RootSystem, f, x, h=1e-4, threshold=10.0):
    """Finite-difference ``Delta_k f(x)`` for a smooth vectorised ``f``.

    ``Delta f`` and ``grad f`` use central differences; reflection
    differences are exact.  When ``|<alpha, x>| < threshold * h`` the term
    ``delta_alpha f`` switches to its hyperplane limit: with ``p`` the foot
    of ``x`` on the hyperplane and ``s = <alpha, x>``,
    ``delta_alpha f(x) = (1/2) alpha^T D^2 f(p + (s/6) alpha) alpha + O(s^2)``.
    """
    x = np.asarray(x, dtype=float)
    N = x.shape[0]
    E = np.eye(N)

    def F(P):
        return np.asarray(f(np.atleast_2d(P)), dtype=float).reshape(-1)

    f0 = F(x)[0]
    plus = F(x + h * E)
    minus = F(x - h * E)
    lap = float(np.sum(plus - 2 * f0 + minus)) / h ** 2
    grad = (plus - minus) / (2 * h)
    total = lap
    for alpha, k in zip(system.positive_roots, system.multiplicities):
        if not k:
            continue
        s = float(alpha @ x)
        if abs(s) >= threshold * h:
            fs = F(x - s * alpha)[0]  # sigma_alpha x = x - <alpha, x> alpha since |alpha|^2 = 2
            delta = float(grad @ alpha) / s - (f0 - fs) / s ** 2
        else:
            p = x - (s / 2) * alpha
            xi = p + (s / 6) * alpha
            u = alpha / math.sqrt(2.0)
            vals = F(np.stack([xi + h * u, xi, xi - h * u]))
            delta = float(vals[0] - 2 * vals[1] + vals[2]) / h ** 2  # u^T D^2 f u = (1/2) a^T D^2 f a
        total += 2 * float(k) * delta
    return total


def basic_solution(system: RootSystem, a, b, x, t):
    """``u(x, t) = (a - bt)^{-(gamma+N/2)} exp(b|x|^2 / (4(a - bt)))`` for ``a - bt > 0``."""
    if b == 0:
        raise ValueError("b must be nonzero")
    if a < 0:
        raise ValueError("a must be >= 0")
    q = a - b * t
    if q <= 0:
        raise ValueError("t is at or beyond the blow-up time a/b")
    expo = float(system.gamma) + system.dimension / 2
    X = np.asarray(x, dtype=float)
    return q ** (-expo) * np.exp(b * np.sum(X * X, axis=-1) / (4 * q))


def basic_solution_residual(system: RootSystem, a, b, x, t, h=1e-3):
    """``(Delta_k u - d_t u)`` at ``(x, t)`` and the scale ``max(1, |u|, |d_t u|)``.

    ``Delta_k`` is taken numerically with :func:`laplacian_numeric`; the
    time derivative is the analytic ``u (c b/q + b^2 |x|^2 / (4 q^2))`` with
    ``q = a - bt`` and ``c = gamma + N/2``.
    """
    x = np.asarray(x, dtype=float)
    u = float(basic_solution(system, a, b, x, t))
    q = a - b * t
    c = float(system.gamma) + system.dimension / 2
    ut = u * (c * b / q + b * b * float(x @ x) / (4 * q * q))
    lap = laplacian_numeric(system, lambda P: basic_solution(system, a, b, P, t), x, h)
    return lap - ut, max(1.0, abs(u), abs(ut))
