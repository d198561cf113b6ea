"""The Dunkl kernel ``K(x, y)`` and its homogeneous parts ``K_n``.

Two independent routes are provided.

*Basis route*: ``K_n(x, y) = sum_{|nu| = n} phi_nu(x) phi_nu(y)`` using the
pairing-orthonormal basis of :mod:`dunkl.hermite`.  It is exact at rational
points and is limited to degrees for which the basis has been built.

*Orbit route*: applying ``sum_j x_j T_j`` to ``K_n(., y)`` and using
``T_j K_n = y_j K_{n-1}`` gives

    (n + gamma) K_n(x) - sum_alpha k(alpha) K_n(sigma_alpha x) = <x, y> K_{n-1}(x),

a linear system on the group orbit of ``x``.  Its matrix ``(n + gamma) I - S``
is symmetric with spectrum in ``[n, n + 2 gamma]``, so every degree follows
from the previous one by a well-conditioned solve.  This route needs no basis
and reaches high degrees; it runs in float (vectorised), mpmath or exact
arithmetic.

Truncations are reported with the certified tail bound
``sum_{j > n} (|x| |y|)^j / j!`` that follows from
``|K_j(x, y)| <= (|x| |y|)^j / j!``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np
from scipy.special import gammainc

from .groups import RootSystem
from .poly import Polynomial, _coerce

__all__ = [
    "KernelEvaluator",
    "KernelValue",
    "Z2ProductKernel",
    "tail_bound",
    "terms_needed",
    "kernel_eval_z2",
    "bessel_j_normalized",
    "l_form",
]

EPS = np.finfo(float).eps


def tail_bound(ab, n):
    """``sum_{j > n} t^j / j!`` for ``t = ab >= 0`` (equals ``e^t P(n + 1, t)``)."""
    ab = np.asarray(ab, dtype=float)
    with np.errstate(over="ignore"):
        out = np.where(ab > 0, np.exp(ab) * gammainc(n + 1, np.maximum(ab, 1e-300)), 0.0)
    return out if out.shape else float(out)


def terms_needed(ab, tol, n_cap=400):
    """Smallest ``n`` with ``tail_bound(ab, n) <= tol`` (``n_cap + 1`` if none)."""
    ab = float(ab)
    if ab == 0:
        return 0
    ns = np.arange(n_cap + 1)
    ok = np.nonzero(tail_bound(np.full(ns.shape, ab), ns) <= tol)[0]
    return int(ok[0]) if ok.size else n_cap + 1


def _order_for(ab, tol, n_cap):
    """Smallest ``n <= n_cap`` with ``tail_bound(ab_p, n) <= tol_p`` for all ``p`` (else ``n_cap``)."""
    if ab.size == 0 or not np.any(ab > 0):
        return 0

    def ok(n):
        return bool(np.all(tail_bound(ab, n) <= tol))

    if not ok(n_cap):
        return n_cap
    lo, hi = -1, n_cap
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return max(hi, 0)


def l_form(z):
    """``l(z) = sum_i z_i^2`` (no complex conjugation)."""
    z = np.asarray(z)
    return np.sum(z * z, axis=-1)


@dataclass(frozen=True)
class KernelValue:
    """A kernel value with its truncation data.

    ``converged`` means ``tail_bound <= tol``; ``rounding`` is an estimate of
    the floating-point error of the partial sum.
    """

    value: complex
    tail_bound: float
    converged: bool
    n_terms: int
    rounding: float = 0.0

    def __complex__(self):
        return complex(self.value)

    def __float__(self):
        v = complex(self.value)
        return v.real


def _norm(v):
    return math.sqrt(sum(abs(complex(c)) ** 2 for c in v))


class KernelEvaluator:
    """Truncated-series evaluator for the Dunkl kernel of a root system.

    Parameters
    ----------
    system : RootSystem
    hermite : HermiteSystem, optional
        Enables the basis route and the polynomial identities.
    n_max : int
        Truncation cap; a value whose tail bound at ``n_max`` exceeds the
        tolerance is flagged not converged.
    """

    def __init__(self, system: RootSystem, hermite=None, n_max: int = 400):
        self.system = system
        self.hermite = hermite
        self.n_max = int(n_max)
        self.N = system.dimension
        self.gamma = system.gamma
        self._setup_orbit()
        self._mp_cache = {}

    # orbit data ------------------------------------------------------------
    def _setup_orbit(self):
        sysm = self.system
        elems = sysm.group_elements
        self.group_size = len(elems)
        self._mats = sysm.group_matrices()
        index = {}
        for a, g in enumerate(elems):
            index[self._elem_key(g)] = a
        from .groups import _matmul

        Sx = [[Fraction(0)] * self.group_size for _ in range(self.group_size)]
        for r, k in enumerate(sysm.multiplicities):
            if not k:
                continue
            refl = sysm.reflections[r]
            for a, g in enumerate(elems):
                h = _matmul(refl, g)
                b = index[self._elem_key(h)]
                Sx[a][b] += k
        self._S_exact = Sx
        S = np.array([[float(v) for v in row] for row in Sx])
        self._S = S
        self._lam, self._Q = np.linalg.eigh(S)

    def _elem_key(self, g):
        if self.system.exact:
            return tuple(tuple(v for v in row) for row in g)
        return tuple(tuple(round(float(v), 9) + 0.0 for v in row) for row in g)

    # float orbit route ----------------------------------------------------------
    def orbit_terms(self, X, Y, n):
        """Float/complex ``K_j(x_p, y_p)`` for ``j = 0..n``: array ``(P, n + 1)``."""
        X = np.atleast_2d(np.asarray(X))
        Y = np.atleast_2d(np.asarray(Y))
        if X.shape[-1] != self.N or Y.shape[-1] != self.N:
            raise ValueError("point dimension mismatch")
        X, Y = np.broadcast_arrays(X, Y)
        dtype = complex if (np.iscomplexobj(X) or np.iscomplexobj(Y)) else float
        GX = np.einsum("gij,pj->pgi", self._mats, X)
        c = np.einsum("pgi,pi->pg", GX, Y).astype(dtype)
        Q, lam = self._Q, self._lam
        g = float(self.gamma)
        v = np.ones(c.shape, dtype=dtype)
        out = np.empty((X.shape[0], n + 1), dtype=dtype)
        out[:, 0] = 1.0
        for j in range(1, n + 1):
            rhs = c * v
            v = ((rhs @ Q) / (j + g - lam)) @ Q.T
            out[:, j] = v[:, 0]
        return out

    def _ab(self, X, Y):
        X = np.atleast_2d(np.asarray(X))
        Y = np.atleast_2d(np.asarray(Y))
        return np.sqrt(np.sum(np.abs(X) ** 2, axis=-1)) * np.sqrt(np.sum(np.abs(Y) ** 2, axis=-1))

    def eval_many(self, X, Y, tol=1e-13, chunk=8192):
        """Vectorised float kernel ``K(x_p, y_p)``.

        ``tol`` may be a scalar or one absolute tolerance per pair; the
        truncation order is the smallest that meets every tolerance.  Returns
        ``(values, tail, converged, rounding)`` arrays.
        """
        X = np.atleast_2d(np.asarray(X))
        Y = np.atleast_2d(np.asarray(Y))
        if X.shape[-1] != self.N or Y.shape[-1] != self.N:
            raise ValueError("point dimension mismatch")
        X, Y = np.broadcast_arrays(X, Y)
        ab = self._ab(X, Y)
        tol = np.broadcast_to(np.asarray(tol, dtype=float), ab.shape)
        n = _order_for(ab, tol, self.n_max)
        tail = np.asarray(tail_bound(ab, n), dtype=float).reshape(ab.shape)
        dtype = complex if (np.iscomplexobj(X) or np.iscomplexobj(Y)) else float
        vals = np.empty(ab.shape, dtype=dtype)
        absum = np.empty(ab.shape)
        for start in range(0, ab.shape[0], chunk):
            sl = slice(start, start + chunk)
            vals[sl], absum[sl] = self._orbit_sum(X[sl], Y[sl], n, dtype)
        rounding = EPS * (self.group_size + n + 2) * absum
        return vals, tail, tail <= tol, rounding

    def _orbit_sum(self, X, Y, n, dtype):
        GX = np.einsum("gij,pj->pgi", self._mats, X)
        c = np.einsum("pgi,pi->pg", GX, Y).astype(dtype)
        Q, lam = self._Q, self._lam
        g = float(self.gamma)
        v = np.ones(c.shape, dtype=dtype)
        total = np.ones(X.shape[0], dtype=dtype)
        absum = np.ones(X.shape[0])
        if self.group_size == 1:
            for j in range(1, n + 1):
                v = c * v / (j + g)
                total += v[:, 0]
                absum += np.abs(v[:, 0])
            return total, absum
        for j in range(1, n + 1):
            v = ((c * v) @ Q / (j + g - lam)) @ Q.T
            total += v[:, 0]
            absum += np.abs(v[:, 0])
        return total, absum

    # scalar evaluation -------------------------------------------------------------
    def kernel_eval(self, x, y, tol=1e-13, mode="float", dps=None) -> KernelValue:
        """``K(x, y)`` truncated where the certified tail drops below ``tol``.

        ``mode`` is ``"float"``, ``"mp"`` (mpmath at ``dps`` digits, default
        enough to absorb cancellation) or ``"exact"`` (partial sum in exact
        arithmetic; rational points only).
        """
        if tol <= 0:
            raise ValueError("tol must be positive")
        if len(x) != self.N or len(y) != self.N:
            raise ValueError("point dimension mismatch")
        ab = _norm(x) * _norm(y)
        n = terms_needed(ab, tol, self.n_max)
        converged = n <= self.n_max
        n = min(n, self.n_max)
        tb = float(tail_bound(ab, n))
        if mode == "float":
            terms = self.orbit_terms(np.array([x]), np.array([y]), n)[0]
            val = terms.sum()
            rnd = EPS * (self.group_size + n + 2) * float(np.abs(terms).sum())
            return KernelValue(val.item(), tb, converged and tb <= tol, n, rnd)
        if mode == "mp":
            dps = dps or 25 + int(2 * ab / math.log(10))
            with mpmath.workdps(dps):
                terms = self.orbit_terms_mp(x, y, n)
                val = mpmath.fsum(terms)
            return KernelValue(val, tb, converged and tb <= tol, n, 0.0)
        if mode == "exact":
            val = sum(self.orbit_terms_exact(x, y, n), Fraction(0))
            return KernelValue(val, tb, converged and tb <= tol, n, 0.0)
        raise ValueError(f"unknown mode {mode!r}")

    def __call__(self, x, y, tol=1e-13):
        return self.kernel_eval(x, y, tol).value

    def orbit_terms_mp(self, x, y, n):
        """``[K_0, ..., K_n]`` at ``(x, y)`` in mpmath at the current precision."""
        dps = mpmath.mp.dps
        G = self.system.group_elements
        xs = [mpmath.mpmathify(v) if not isinstance(v, Fraction) else _coerce(v, "mp") for v in x]
        ys = [mpmath.mpmathify(v) if not isinstance(v, Fraction) else _coerce(v, "mp") for v in y]
        cvec = []
        for g in G:
            gx = [mpmath.fsum(_coerce(g[i][j], "mp") * xs[j] for j in range(self.N))
                  for i in range(self.N)]
            cvec.append(mpmath.fsum(gx[i] * ys[i] for i in range(self.N)))
        v = [mpmath.mpf(1)] * len(G)
        out = [mpmath.mpf(1)]
        for j in range(1, n + 1):
            A = self._mp_matrix(j, dps)
            rhs = mpmath.matrix([cvec[a] * v[a] for a in range(len(G))])
            sol = mpmath.lu_solve(A, rhs)
            v = [sol[a] for a in range(len(G))]
            out.append(v[0])
        return out

    def _mp_matrix(self, j, dps):
        key = (j, dps)
        A = self._mp_cache.get(key)
        if A is None:
            m = len(self._S_exact)
            A = mpmath.matrix(m, m)
            for a in range(m):
                for b in range(m):
                    v = -_coerce(self._S_exact[a][b], "mp") if self._S_exact[a][b] else mpmath.mpf(0)
                    if a == b:
                        v += j + _coerce(Fraction(self.gamma), "mp")
                    A[a, b] = v
            self._mp_cache[key] = A
        return A

    def orbit_terms_exact(self, x, y, n):
        """Exact ``[K_0, ..., K_n]`` at rational points by exact linear solves."""
        G = self.system.group_elements
        m = len(G)
        x = [Fraction(v) if not hasattr(v, "to_json") else v for v in x]
        y = [Fraction(v) if not hasattr(v, "to_json") else v for v in y]
        cvec = []
        for g in G:
            gx = [sum((g[i][j] * x[j] for j in range(self.N)), Fraction(0)) for i in range(self.N)]
            cvec.append(sum((gx[i] * y[i] for i in range(self.N)), Fraction(0)))
        v = [Fraction(1)] * m
        out = [Fraction(1)]
        for j in range(1, n + 1):
            A = [[(j + self.gamma if a == b else 0) - self._S_exact[a][b] for b in range(m)]
                 for a in range(m)]
            v = _solve_exact(A, [cvec[a] * v[a] for a in range(m)])
            out.append(v[0])
        return out

    # basis route -----------------------------------------------------------------
    def _need_hermite(self, n):
        if self.hermite is None:
            raise ValueError("this operation needs a HermiteSystem")
        if n > self.hermite.n_max:
            raise ValueError(f"degree {n} exceeds the basis degree {self.hermite.n_max}")

    def kernel_homogeneous(self, n, x, y, route="auto"):
        """``K_n(x, y)``.

        ``route="basis"`` sums ``phi_nu(x) phi_nu(y)`` (exact at exact
        points), ``"orbit"`` uses the orbit recursion; ``"auto"`` prefers the
        basis when it covers degree ``n``.
        """
        if n < 0:
            raise ValueError("n must be >= 0")
        if n > self.n_max:
            raise ValueError(f"n={n} exceeds n_max={self.n_max}")
        if route == "auto":
            route = "basis" if self.hermite is not None and n <= self.hermite.n_max else "orbit"
        if route == "basis":
            self._need_hermite(n)
            hs = self.hermite
            total = None
            for nu in hs.basis(n):
                p = hs.phi_tilde(nu)
                term = p.evaluate(x) * p.evaluate(y)
                if isinstance(term, (Fraction,)) or hasattr(term, "to_json"):
                    term = term / hs.norm2(nu)
                else:
                    term = term / (float(hs.norm2(nu)) if not type(term).__name__.startswith("mp")
                                   else _coerce(hs.norm2(nu), "mp"))
                total = term if total is None else total + term
            return total
        exact_pts = all(isinstance(v, (int, Fraction)) for v in list(x) + list(y))
        if exact_pts and self.system.exact:
            return self.orbit_terms_exact(x, y, n)[n]
        return self.orbit_terms(np.array([x]), np.array([y]), n)[0, n].item()

    def kernel_poly(self, n) -> Polynomial:
        """``K_n`` as an exact polynomial in ``2N`` variables ``(x, y)`` (basis route)."""
        self._need_hermite(n)
        hs = self.hermite
        out = Polynomial.zero(2 * self.N)
        for nu in hs.basis(n):
            p = hs.phi_tilde(nu)
            out = out + p.tensor(p / hs.norm2(nu))
        return out

    def basis_terms_many(self, X, Y, n):
        """Float ``K_j(x_p, y_p)``, ``j <= n``, from the basis: array ``(P, n + 1)``."""
        self._need_hermite(n)
        hs = self.hermite
        X = np.atleast_2d(np.asarray(X))
        Y = np.atleast_2d(np.asarray(Y))
        dtype = complex if (np.iscomplexobj(X) or np.iscomplexobj(Y)) else float
        out = np.zeros((max(X.shape[0], Y.shape[0]), n + 1), dtype=dtype)
        for j in range(n + 1):
            for nu in hs.basis(j):
                out[:, j] += hs.phi_values(nu, X) * hs.phi_values(nu, Y)
        return out

    # identities ------------------------------------------------------------------
    def intertwining_residual(self, j, n) -> Polynomial:
        """``T_j^x K_n(x, y) - y_j K_{n-1}(x, y)`` as an exact polynomial in ``(x, y)``."""
        if not 1 <= n:
            raise ValueError("n must be >= 1")
        self._need_hermite(n)
        hs = self.hermite
        ctx = hs.ctx
        N = self.N
        lhs = Polynomial.zero(2 * N)
        for nu in hs.basis(n):
            p = hs.phi_tilde(nu)
            lhs = lhs + ctx.dunkl_apply(j, p).tensor(p / hs.norm2(nu))
        yj = Polynomial.variable(N, j)
        rhs = Polynomial.zero(2 * N)
        for nu in hs.basis(n - 1):
            p = hs.phi_tilde(nu)
            rhs = rhs + p.tensor(yj * p / hs.norm2(nu))
        return lhs - rhs

    def generating_function_residual(self, z, w, n_terms=None, tol=1e-14):
        """``sum_{n <= n_terms} L_n(z, w) - e^{-l(w)} K(2z, w)``.

        ``L_n(z, w) = sum_{|nu| = n} H_nu(z) phi_nu(w)``.  Returns
        ``(residual, allowance)`` where the allowance is the size of the last
        two partial-sum terms plus the kernel tail bound.
        """
        hs = self.hermite
        if hs is None:
            raise ValueError("this operation needs a HermiteSystem")
        n_terms = hs.n_max if n_terms is None else n_terms
        self._need_hermite(n_terms)
        z = np.asarray(z)
        w = np.asarray(w)
        Ls = []
        for n in range(n_terms + 1):
            acc = 0.0
            for nu in hs.basis(n):
                acc = acc + hs.hermite_values(nu, z[None, :])[0] * hs.phi_values(nu, w[None, :])[0]
            Ls.append(acc)
        lhs = math.fsum(np.real(Ls)) + 1j * math.fsum(np.imag(Ls))
        kv = self.kernel_eval(2 * z, w, tol=tol)
        rhs = np.exp(-l_form(w)) * kv.value
        allowance = abs(Ls[-1]) + (abs(Ls[-2]) if len(Ls) > 1 else 0.0) + kv.tail_bound + kv.rounding
        res = lhs - rhs
        if not np.iscomplexobj(z) and not np.iscomplexobj(w):
            res = res.real
        return res, allowance

    def mehler_lhs(self, x, y, r, n_terms=None):
        """Partial sum ``sum_{|nu| <= n_terms} H_nu(x) H_nu(y) (r/2)^{|nu|}``.

        Evaluated exactly when ``x``, ``y``, ``r`` are rational and returned
        as a float.
        """
        if abs(float(r)) >= 1:
            raise ValueError("|r| must be < 1")
        hs = self.hermite
        if hs is None:
            raise ValueError("this operation needs a HermiteSystem")
        n_terms = hs.n_max if n_terms is None else n_terms
        self._need_hermite(n_terms)
        exact = all(isinstance(v, (int, Fraction)) for v in list(x) + list(y) + [r])
        total = Fraction(0) if exact else 0.0
        for n in range(n_terms + 1):
            acc = Fraction(0) if exact else 0.0
            for nu in hs.basis(n):
                H = hs.hermite_tilde(nu)
                if exact:
                    acc += H.evaluate(x) * H.evaluate(y) / hs.norm2(nu)
                else:
                    acc += float(H.evaluate([float(v) for v in x])) * float(
                        H.evaluate([float(v) for v in y])) / float(hs.norm2(nu))
            total += acc * (Fraction(r) / 2 if exact else float(r) / 2) ** n
        return float(total)

    def mehler_rhs(self, x, y, r, tol=1e-15):
        """``(1 - r^2)^{-gamma - N/2} exp(-r^2 (|x|^2 + |y|^2)/(1 - r^2)) K(2 r x/(1 - r^2), y)``."""
        r = float(r)
        if abs(r) >= 1:
            raise ValueError("|r| must be < 1")
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        q = 1 - r * r
        pref = q ** (-float(self.gamma) - self.N / 2) * math.exp(-r * r * (x @ x + y @ y) / q)
        return pref * float(self.kernel_eval(2 * r * x / q, y, tol=tol))

    def reproducing_residual(self, rule, z, w, c_k=None, tol=1e-15):
        """``c_k sum_j W_j K(2z, x_j) K(2w, x_j) - e^{l(z) + l(w)} K(2z, w)``.

        ``rule`` integrates against ``w_k e^{-|x|^2}``.  Returns
        ``(residual, rhs)``.
        """
        c_k = c_k if c_k is not None else 1.0 / rule.mass
        z = np.asarray(z)
        w = np.asarray(w)
        nodes = rule.nodes
        ptol = tol * np.exp(np.minimum(0.5 * rule.rate * np.sum(nodes ** 2, axis=1), 600.0))
        k1, _, c1, _ = self.eval_many(np.broadcast_to(2 * z, nodes.shape), nodes, ptol)
        k2, _, c2, _ = self.eval_many(np.broadcast_to(2 * w, nodes.shape), nodes, ptol)
        if not (np.all(c1) and np.all(c2)):
            raise ArithmeticError("kernel series did not converge")
        lhs = c_k * rule.integrate_values(k1 * k2)
        rhs = np.exp(l_form(z) + l_form(w)) * self.kernel_eval(2 * z, w, tol).value
        return lhs - rhs, rhs

    def hermite_integral_residual(self, rule, nu, x, c_k=None, tol=1e-15):
        """``e^{-|x|^2} H_nu(x) - 2^{|nu|} c_k int K(x, -2iy) phi_nu(iy) w_k(y) e^{-|y|^2} dy``."""
        hs = self.hermite
        if hs is None:
            raise ValueError("this operation needs a HermiteSystem")
        c_k = c_k if c_k is not None else 1.0 / rule.mass
        x = np.asarray(x, dtype=float)
        nodes = rule.nodes
        ptol = tol * np.exp(np.minimum(rule.rate * np.sum(nodes ** 2, axis=1), 600.0))
        kv, _, conv, _ = self.eval_many(np.broadcast_to(x, nodes.shape), -2j * nodes, ptol)
        if not np.all(conv):
            raise ArithmeticError("kernel series did not converge")
        ph = hs.phi_values(nu, 1j * nodes)
        integral = c_k * rule.integrate_values(kv * ph)
        n = sum(nu)
        lhs = math.exp(-float(x @ x)) * hs.hermite_values(nu, x[None, :])[0]
        return lhs - 2 ** n * integral


def _solve_exact(A, b):
    """Gaussian elimination over an exact field."""
    m = len(A)
    M = [list(row) + [b[i]] for i, row in enumerate(A)]
    for col in range(m):
        piv = next(r for r in range(col, m) if M[r][col])
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col] if not hasattr(M[col][col], "to_json") else Fraction(1) / M[col][col]
        for r in range(m):
            if r != col and M[r][col]:
                f = M[r][col] * inv
                M[r] = [a - f * c for a, c in zip(M[r], M[col])]
    return [M[i][m] / M[i][i] for i in range(m)]


# Z_2 closed form ----------------------------------------------------------------
def bessel_j_normalized(alpha, z, dps=40):
    """``j_alpha(z) = Gamma(alpha + 1) sum_n (-1)^n (z/2)^{2n} / (n! Gamma(n + alpha + 1))``.

    Summed as a power series in mpmath until the terms fall below the working
    precision.  ``alpha`` must not be a negative integer.
    """
    with mpmath.workdps(dps):
        alpha = mpmath.mpf(alpha) if not isinstance(alpha, Fraction) else \
            mpmath.mpf(alpha.numerator) / alpha.denominator
        z = mpmath.mpmathify(z)
        q = -(z / 2) ** 2
        term = mpmath.mpf(1)
        total = mpmath.mpf(1)
        n = 0
        eps = mpmath.mpf(10) ** (-dps)
        while True:
            n += 1
            term = term * q / (n * (n + alpha))
            total += term
            if abs(term) <= eps * abs(total) and n > 2:
                break
            if n > 100000:
                raise ArithmeticError("Bessel series did not converge")
        return total


def kernel_eval_z2(mu, z, w, dps=40):
    """Closed-form Dunkl kernel of Z_2 with multiplicity ``mu``.

    ``K(z, w) = j_{mu - 1/2}(i z w) + (z w / (2 mu + 1)) j_{mu + 1/2}(i z w)``,
    which reduces to ``e^{z w}`` at ``mu = 0``.  Returns a Python complex.
    """
    mu = Fraction(str(mu)) if isinstance(mu, float) else Fraction(mu)
    if mu < 0:
        raise ValueError("mu must be >= 0")
    with mpmath.workdps(dps):
        t = mpmath.mpc(z) * mpmath.mpc(w)
        m = mpmath.mpf(mu.numerator) / mu.denominator
        val = (bessel_j_normalized(mu - Fraction(1, 2), 1j * t, dps)
               + t / (2 * m + 1) * bessel_j_normalized(mu + Fraction(1, 2), 1j * t, dps))
        return complex(val)


def _j_normalized_array(alpha, u):
    """Vectorised ``j_alpha(u)`` for complex ``u`` via ``J_alpha`` (series near 0)."""
    from scipy.special import gamma as gamma_fn, jv

    u = np.asarray(u, dtype=complex)
    out = np.empty(u.shape, dtype=complex)
    small = np.abs(u) < 1e-2
    if np.any(small):
        q = -(u[small] / 2) ** 2
        term = np.ones(q.shape, dtype=complex)
        acc = term.copy()
        for n in range(1, 12):
            term = term * q / (n * (n + alpha))
            acc = acc + term
        out[small] = acc
    big = ~small
    if np.any(big):
        ub = u[big]
        out[big] = gamma_fn(alpha + 1) * (ub / 2) ** (-alpha) * jv(alpha, ub)
    return out


class Z2ProductKernel:
    """Closed-form kernel of Z_2^N as a product of one-dimensional Bessel kernels.

    Numerically stable for imaginary arguments, where the power series
    suffers cancellation; meant for nested transforms.  Shares the
    ``eval_many`` interface of :class:`KernelEvaluator`.
    """

    def __init__(self, system: RootSystem):
        if system.family != "Z2_product":
            raise ValueError("the Bessel product kernel exists only for Z_2^N")
        self.system = system
        self.N = system.dimension
        self.mus = [float(m) for m in system.orbit_multiplicities]

    def eval_many(self, X, Y, tol=None, chunk=None):
        X = np.atleast_2d(np.asarray(X))
        Y = np.atleast_2d(np.asarray(Y))
        X, Y = np.broadcast_arrays(X, Y)
        out = np.ones(X.shape[0], dtype=complex)
        for i, mu in enumerate(self.mus):
            zw = X[:, i] * Y[:, i]
            u = 1j * zw
            out = out * (_j_normalized_array(mu - 0.5, u)
                         + zw / (2 * mu + 1) * _j_normalized_array(mu + 0.5, u))
        if not (np.iscomplexobj(X) or np.iscomplexobj(Y)):
            out = out.real
        zeros = np.zeros(X.shape[0])
        return out, zeros, np.ones(X.shape[0], dtype=bool), EPS * 8 * np.abs(out)

    def kernel_eval(self, x, y, tol=None, mode="float", dps=None):
        vals, tail, conv, rnd = self.eval_many(np.array([x]), np.array([y]))
        return KernelValue(vals[0].item(), 0.0, True, 0, float(rnd[0]))
