"""Dunkl transform by direct quadrature.

``D_k f(xi) = int f(x) K(-i xi, x) w_k(x) dx`` is evaluated with a Gauss rule
scaled to the Gaussian rate of ``f`` (see :mod:`dunkl.profiles`).  For ``f``
of rate ``a`` the transform has rate ``1/(4a)``, which is what nested
computations (inversion, generalized translation) use for the second
integral.
"""

from __future__ import annotations

import math

import numpy as np

from .groups import RootSystem
from .kernel import KernelEvaluator, Z2ProductKernel
from .profiles import Profile
from .quad import QuadratureRule, normalization_c_k, rule_tensor

__all__ = ["TransformContext"]


class TransformContext:
    """System, kernel evaluator, base quadrature rule and ``c_k`` bundled together.

    Parameters
    ----------
    system : RootSystem
    npoints : int
        Points per coordinate of the base rule (ignored if ``rule`` given).
    rule : QuadratureRule, optional
        Rule for ``w_k e^{-|x|^2}``; rescaled as needed.
    kernel : KernelEvaluator, optional
    tol : float
        Kernel truncation tolerance (absolute, per value).
    nested_npoints : int
        Points per coordinate of the outer rule of nested integrals; default
        ``0.3 *`` the base rule's (clipped to ``[8, 24]``).  The outer nodes
        must stay where the inner rule resolves ``K(-i xi, .)``.
    nested_tol : float
        Bound on the propagated kernel rounding error in nested integrals;
        exceeding it raises ``ArithmeticError``.
    nested_kernel : object, optional
        Evaluator used for nested integrals (inversion, translation), where
        imaginary arguments of large modulus occur.  Defaults to the Bessel
        product for Z_2^N and to ``kernel`` otherwise; the power series loses
        about ``eps * e^{|xi||x|}`` to cancellation there.
    """

    def __init__(self, system: RootSystem, npoints: int = 40, rule: QuadratureRule | None = None,
                 kernel: KernelEvaluator | None = None, c_k: float | None = None, tol: float = 1e-15,
                 nested_kernel=None, nested_npoints: int | None = None, nested_tol: float = 1e-7):
        self.system = system
        self.N = system.dimension
        self.gamma = float(system.gamma)
        self.rule = rule if rule is not None else rule_tensor(system, npoints)
        if self.rule.dimension != self.N:
            raise ValueError("rule dimension does not match the system")
        self.kernel = kernel if kernel is not None else KernelEvaluator(system)
        if nested_kernel is None:
            nested_kernel = Z2ProductKernel(system) if system.family == "Z2_product" else self.kernel
        self.nested_kernel = nested_kernel
        if nested_npoints is None:
            nested_npoints = min(24, max(8, round(0.3 * (self.rule.npoints or 40))))
        self.nested_npoints = nested_npoints
        self.nested_tol = nested_tol
        self._outer_rule = None
        self._tables = {}
        self.c_k = c_k if c_k is not None else normalization_c_k(system, self.rule)
        self.tol = tol
        self.inversion_constant = 4.0 ** (-self.gamma - self.N / 2) * self.c_k ** 2

    def rule_at(self, rate: float) -> QuadratureRule:
        if rate <= 0:
            raise ValueError("the integrand needs Gaussian decay (rate > 0)")
        return self.rule.scaled(rate)

    # kernels against nodes -----------------------------------------------------------
    def _kernel_table(self, A, nodes, node_rate=0.0, point_rate=0.0, kernel=None):
        """``K(a_p, x_j)`` for all ``p``, ``j``: array ``(P, M)``.

        Each value enters a sum with a Gaussian weight ``~ e^{-node_rate |x_j|^2}``
        (and possibly an outer weight ``~ e^{-point_rate |a_p|^2}``), so its
        absolute truncation tolerance is relaxed by the inverse of those
        factors.
        """
        A = np.atleast_2d(A)
        P, M = A.shape[0], nodes.shape[0]
        Xa = np.repeat(A, M, axis=0)
        Yn = np.tile(nodes, (P, 1))
        expo = node_rate * np.sum(Yn ** 2, axis=1) + point_rate * np.sum(np.abs(Xa) ** 2, axis=1)
        tol = self.tol * np.exp(np.minimum(expo, 600.0))
        kernel = kernel if kernel is not None else self.kernel
        vals, tail, conv, rnd = kernel.eval_many(Xa, Yn, tol)
        if not np.all(conv):
            raise ArithmeticError("kernel series did not converge at the required range")
        self._last_rounding = np.asarray(rnd).reshape(P, M)
        return vals.reshape(P, M)

    def _check_rounding(self, weights, what):
        """Raise if the kernel rounding of the last table, propagated through ``weights``, is too large."""
        err = float(np.max(self._last_rounding @ np.abs(weights)))
        if not err <= self.nested_tol:
            raise ArithmeticError(
                f"{what}: kernel cancellation error {err:.2e} exceeds {self.nested_tol:.0e} "
                "(no stable kernel for imaginary arguments of this size)")
        return err

    # transforms ---------------------------------------------------------------------------
    def dunkl_transform(self, f: Profile, xi, outer_rate=0.0, kernel=None):
        """``D_k f(xi)`` for one point ``xi`` or an array ``(P, N)`` of points.

        ``outer_rate`` declares that the values will be multiplied by
        ``e^{-outer_rate |xi|^2}`` (nested integrals), which relaxes the
        kernel truncation accordingly.
        """
        xi_arr = np.atleast_2d(np.asarray(xi, dtype=float))
        rule = self.rule_at(f.rate)
        red = f.reduced(rule.nodes)
        # tables are reused across profiles of the same rate on the same points
        key = (id(kernel), rule.rate, outer_rate, xi_arr.shape, xi_arr.tobytes())
        hit = self._tables.get(key)
        if hit is None:
            table = self._kernel_table(-1j * xi_arr, rule.nodes, rule.rate, outer_rate, kernel)
            hit = (table, self._last_rounding)
            if len(self._tables) >= 8:
                self._tables.pop(next(iter(self._tables)))
            self._tables[key] = hit
        table, rounding = hit
        out = table @ (rule.weights * red)
        self._last_transform_rounding = rounding @ np.abs(rule.weights * red)
        return out[0] if np.ndim(xi) == 1 else out

    def dunkl_transform_values(self, values, rule: QuadratureRule, xi):
        """Transform of a function given by its reduced values on ``rule``'s nodes."""
        xi_arr = np.atleast_2d(np.asarray(xi, dtype=float))
        table = self._kernel_table(-1j * xi_arr, rule.nodes, rule.rate)
        return table @ (rule.weights * values)

    def inverse_transform(self, f: Profile, x):
        """``E_k f(x) = D_k f(-x)``."""
        return self.dunkl_transform(f, -np.asarray(x, dtype=float))

    def outer_rule(self, rate: float) -> QuadratureRule:
        """The smaller rule used for the outer integral of nested computations."""
        if self._outer_rule is None:
            self._outer_rule = rule_tensor(self.system, self.nested_npoints)
        return self._outer_rule.scaled(rate)

    def _transform_on_rule(self, f: Profile, extra_rate=0.0):
        """``D_k f`` on the outer-rule nodes for the rate ``1/(4a) + extra_rate``.

        Returns the rule and the reduced values ``D_k f(xi) e^{|xi|^2/(4a)}``
        (the factor ``e^{-extra_rate |xi|^2}`` is left to the rule).
        """
        rate_f = 1.0 / (4.0 * f.rate)
        rule2 = self.outer_rule(rate_f + extra_rate)
        vals = self.dunkl_transform(f, rule2.nodes, outer_rate=rule2.rate, kernel=self.nested_kernel)
        plain = rule2.plain_weights() * np.exp(-extra_rate * np.sum(rule2.nodes ** 2, axis=1))
        err = float(np.sum(self._last_transform_rounding * plain))
        if not err <= self.nested_tol:
            raise ArithmeticError(
                f"inner transform: kernel cancellation error {err:.2e} exceeds {self.nested_tol:.0e} "
                "(no stable kernel for imaginary arguments of this size)")
        reduced = vals * np.exp(rate_f * np.sum(rule2.nodes ** 2, axis=1))
        return rule2, reduced

    def inversion_residual(self, f: Profile, x):
        """``4^{-gamma-N/2} c_k^2 E_k D_k f(x) - f(x)`` at points ``(P, N)``."""
        X = np.atleast_2d(np.asarray(x, dtype=float))
        rule2, red = self._transform_on_rule(f)
        # E_k g(x) = int g(xi) K(i x, xi) w dxi
        table = self._kernel_table(1j * X, rule2.nodes, rule2.rate, kernel=self.nested_kernel)
        self._check_rounding(rule2.weights * red, "outer integral")
        back = self.inversion_constant * (table @ (rule2.weights * red))
        return back - f(X)

    def eigen_residual(self, hermite, nu, xi):
        """Relative deviation of ``D_k h_nu`` from ``2^{gamma+N/2} c_k^{-1} (-i)^{|nu|} h_nu``.

        Returns ``max |D - rhs| / max |rhs|`` over the points ``xi``.
        """
        from .profiles import hermite_function_profile

        xi = np.atleast_2d(np.asarray(xi, dtype=float))
        f = hermite_function_profile(hermite, nu)
        D = self.dunkl_transform(f, xi)
        n = sum(nu)
        rhs = 2.0 ** (self.gamma + self.N / 2) / self.c_k * (-1j) ** n * f(xi)
        return float(np.max(np.abs(D - rhs)) / np.max(np.abs(rhs)))

    def transform_heat_identity(self, t, xi, heat=None):
        """``D_k F_k(., t)(xi) - e^{-t |xi|^2}``."""
        from .profiles import Profile

        if t <= 0:
            raise ValueError("t must be positive")
        M_k = 4.0 ** (-self.gamma - self.N / 2) * self.c_k
        amp = M_k * t ** (-self.gamma - self.N / 2)
        F = Profile(lambda X: np.full(X.shape[0], amp), 1.0 / (4.0 * t), f"F_k(t={t})")
        xi_arr = np.atleast_2d(np.asarray(xi, dtype=float))
        D = self.dunkl_transform(F, xi_arr)
        res = D - np.exp(-t * np.sum(xi_arr ** 2, axis=1))
        return res[0] if np.ndim(xi) == 1 else res

    def generalized_translation(self, f: Profile, y, x):
        """``L^y f(x) = (c_k^2 / 4^{gamma+N/2}) int D_k f(xi) K(ix, xi) K(iy, xi) w_k(xi) dxi``.

        ``x`` and ``y`` are single points; limited to ``N <= 2``.
        """
        if self.N > 2:
            raise ValueError("generalized translation is limited to N <= 2 (cost guard)")
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        rule2, red = self._transform_on_rule(f)
        kx = self._kernel_table(1j * x[None, :], rule2.nodes, rule2.rate, kernel=self.nested_kernel)[0]
        self._check_rounding(rule2.weights * red, "outer integral")
        ky = self._kernel_table(1j * y[None, :], rule2.nodes, rule2.rate, kernel=self.nested_kernel)[0]
        self._check_rounding(rule2.weights * red, "outer integral")
        val = self.inversion_constant * np.sum(rule2.weights * red * kx * ky)
        return val

    def gaussian_translation_closed(self, y, x):
        """Heat-kernel route for ``f = e^{-|x|^2}``: ``e^{-|x|^2-|y|^2} K(sqrt2 x, -sqrt2 y)``.

        Follows from ``e^{-|x|^2} = F_k(x, 1/4) / c_k`` and
        ``L^{-y} F_k(., t)(x) = Gamma_k(x, y, t)``.
        """
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        kv = self.kernel.kernel_eval(math.sqrt(2) * x, -math.sqrt(2) * y, tol=self.tol)
        return math.exp(-float(x @ x) - float(y @ y)) * float(kv)
