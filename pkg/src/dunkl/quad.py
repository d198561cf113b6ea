"""Gaussian quadrature for the Dunkl-weighted Gaussian measure.

A :class:`QuadratureRule` approximates ``int f(x) w_k(x) exp(-a |x|^2) dx``
by ``sum_j W_j f(x_j)``; ``a`` is the rule's *rate* (1 for the measure
``mu_k`` up to the constant ``c_k``).

For Z_2^N the weight factorises and each axis gets a Gauss rule for
``|x|^{2 mu} e^{-x^2}``, whose three-term recurrence is computed from the
Gamma moments by the Chebyshev algorithm in extended precision.  For the
other families the weight ``w_k`` is folded into Gauss-Hermite tensor
weights; in the plane, weights with kinks on the mirrors get a polar rule
instead (generalized Hermite in ``r``, Gauss-Jacobi on each sector between
adjacent mirrors).
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np
from scipy.linalg import eigh_tridiagonal

from .groups import RootSystem, weight

__all__ = [
    "QuadratureRule",
    "QuadratureBreakdown",
    "recurrence_generalized_hermite",
    "rule_generalized_hermite_1d",
    "rule_tensor",
    "rule_polar",
    "normalization_c_k",
    "heat_constant_M_k",
    "integrate",
    "precision_digits",
]


class QuadratureBreakdown(ArithmeticError):
    """The moment recurrence lost positivity; raise the working precision."""


def precision_digits(npoints: int) -> int:
    """Working digits for recurrence construction (``DUNKL_PRECISION`` overrides)."""
    env = os.environ.get("DUNKL_PRECISION")
    if env:
        return int(env)
    return max(50, 2 * npoints + 30)


@lru_cache(maxsize=64)
def _recurrence_cached(mu_num, mu_den, n, dps):
    with mpmath.workdps(dps):
        mu = mpmath.mpf(mu_num) / mu_den
        moments = []
        for j in range(2 * n):
            moments.append(mpmath.gamma(mu + mpmath.mpf(j + 1) / 2) if j % 2 == 0 else mpmath.mpf(0))
        a = [mpmath.mpf(0)] * n
        b = [mpmath.mpf(0)] * n
        prev2 = [mpmath.mpf(0)] * (2 * n)
        prev = list(moments)
        a[0] = moments[1] / moments[0]
        b[0] = moments[0]
        for k in range(1, n):
            cur = [mpmath.mpf(0)] * (2 * n)
            for l in range(k, 2 * n - k):
                cur[l] = prev[l + 1] - a[k - 1] * prev[l] - b[k - 1] * prev2[l]
            if cur[k] <= 0:
                raise QuadratureBreakdown(
                    f"moment recurrence broke down at step {k}; increase DUNKL_PRECISION (now {dps})")
            a[k] = cur[k + 1] / cur[k] - prev[k] / prev[k - 1]
            b[k] = cur[k] / prev[k - 1]
            prev2, prev = prev, cur
        return tuple(a), tuple(b)


def recurrence_generalized_hermite(mu, n, dps=None):
    """Recurrence coefficients ``(a_j, b_j)``, ``j < n``, for ``|x|^{2 mu} e^{-x^2}``.

    ``b_0`` is the total mass ``Gamma(mu + 1/2)``.  Values are mpmath numbers
    at ``dps`` digits (default :func:`precision_digits`).
    """
    from fractions import Fraction

    mu = Fraction(str(mu)) if isinstance(mu, float) else Fraction(mu)
    if mu < 0:
        raise ValueError("mu must be nonnegative")
    if n < 1:
        raise ValueError("npoints must be >= 1")
    dps = dps or precision_digits(n)
    return _recurrence_cached(mu.numerator, mu.denominator, int(n), int(dps))


def _gauss_from_recurrence(a, b):
    n = len(a)
    diag = np.array([float(v) for v in a])
    if n == 1:
        return diag.copy(), np.array([float(b[0])])
    off = np.array([float(mpmath.sqrt(v)) for v in b[1:]])
    nodes, vecs = eigh_tridiagonal(diag, off)
    weights = float(b[0]) * vecs[0, :] ** 2
    # symmetric weight: enforce exact symmetry of nodes and weights
    nodes = 0.5 * (nodes - nodes[::-1])
    weights = 0.5 * (weights + weights[::-1])
    return nodes, weights


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights for ``int f(x) w_k(x) e^{-rate |x|^2} dx``.

    Attributes
    ----------
    nodes : ndarray, shape (M, N)
    weights : ndarray, shape (M,)
    rate : float
        Gaussian rate ``a`` of the target measure.
    degree : int or None
        Polynomial degree (per coordinate) integrated exactly, if known.
    approximate : bool
        True when ``w_k`` is non-polynomial and folded into the weights.
    error_estimate : float
        Self-measured error of the total mass (0 for exact rules).
    system : dict
        Serialised root system the rule belongs to.
    """

    nodes: np.ndarray
    weights: np.ndarray
    rate: float = 1.0
    degree: int | None = None
    approximate: bool = False
    error_estimate: float = 0.0
    system: dict = field(default_factory=dict)
    npoints: int = 0
    gamma: float = 0.0

    @property
    def dimension(self):
        return self.nodes.shape[1]

    @property
    def size(self):
        return self.nodes.shape[0]

    @property
    def mass(self) -> float:
        return math.fsum(self.weights)

    def integrate(self, f):
        """``sum_j W_j f(x_j)``; ``f`` maps an ``(M, N)`` array to ``(M,)`` values."""
        return integrate(self, f)

    def integrate_values(self, values):
        values = np.asarray(values)
        if values.ndim == 1:
            return _fsum_dot(self.weights, values)
        return np.tensordot(self.weights, values, axes=(0, 0))

    def scaled(self, rate: float) -> "QuadratureRule":
        """The same rule transformed to the Gaussian rate ``rate``.

        Substituting ``x = y / sqrt(rate / self.rate)`` and using the
        homogeneity of ``w_k`` (degree ``2 gamma``).
        """
        lam = math.sqrt(rate / self.rate)
        gam = self.gamma
        n = self.dimension
        return replace(self, nodes=self.nodes / lam,
                       weights=self.weights * lam ** (-2 * gam - n), rate=float(rate))

    def plain_weights(self):
        """Weights for ``int f(x) w_k(x) dx`` with ``f`` carrying its own decay."""
        return self.weights * np.exp(self.rate * np.sum(self.nodes ** 2, axis=1))

    def to_json(self):
        return json.dumps({
            "nodes": [[repr(float(v)) for v in row] for row in self.nodes],
            "weights": [repr(float(v)) for v in self.weights],
            "rate": repr(self.rate),
            "degree": self.degree,
            "approximate": self.approximate,
            "error_estimate": repr(self.error_estimate),
            "system": self.system,
            "npoints": self.npoints,
            "gamma": repr(self.gamma),
        })

    @classmethod
    def from_json(cls, text):
        obj = json.loads(text)
        return cls(nodes=np.array([[float(v) for v in row] for row in obj["nodes"]]),
                   weights=np.array([float(v) for v in obj["weights"]]),
                   rate=float(obj["rate"]), degree=obj["degree"],
                   approximate=obj["approximate"], error_estimate=float(obj["error_estimate"]),
                   system=obj["system"], npoints=obj.get("npoints", 0),
                   gamma=float(obj.get("gamma", 0.0)))


def _fsum_dot(w, v):
    prod = w * v
    if np.iscomplexobj(prod):
        return complex(math.fsum(prod.real), math.fsum(prod.imag))
    return math.fsum(prod)


def integrate(rule: QuadratureRule, f):
    """Weighted sum of ``f`` over the rule's nodes (compensated, fixed order)."""
    vals = f(rule.nodes) if callable(f) else f
    vals = np.asarray(vals)
    if vals.ndim == 0:
        vals = np.full(rule.size, vals)
    return rule.integrate_values(vals)


def rule_generalized_hermite_1d(mu, npoints: int, dps=None) -> QuadratureRule:
    """Gauss rule for ``|x|^{2 mu} e^{-x^2}`` on the line.

    Exact for polynomials of degree ``<= 2 npoints - 1``.
    """
    a, b = recurrence_generalized_hermite(mu, npoints, dps)
    nodes, weights = _gauss_from_recurrence(a, b)
    return QuadratureRule(nodes=nodes.reshape(-1, 1), weights=weights, rate=1.0,
                          degree=2 * npoints - 1, approximate=False, npoints=npoints,
                          gamma=float(mu))


def _tensor(rules_1d):
    nodes = [r.nodes[:, 0] for r in rules_1d]
    weights = [r.weights for r in rules_1d]
    grids = np.meshgrid(*nodes, indexing="ij")
    wgrids = np.meshgrid(*weights, indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    w = np.ones(pts.shape[0])
    for g in wgrids:
        w = w * g.ravel()
    return pts, w


def _polynomial_weight(system: RootSystem):
    return all((2 * k).denominator == 1 and (2 * k) % 2 == 0 for k in system.multiplicities)


def rule_tensor(system: RootSystem, npoints: int = 20, dps=None, estimate_error=True) -> QuadratureRule:
    """Quadrature rule for ``w_k(x) e^{-|x|^2} dx`` on ``R^N``.

    Z_2^N: tensor product of generalized Hermite rules (exact to degree
    ``2 npoints - 1`` per coordinate).  Other families: Gauss-Hermite
    tensor grid with ``w_k`` folded into the weights.  When every ``2 k`` is
    an even integer ``w_k`` is a polynomial of degree ``2 gamma`` and the
    rule stays exact to degree ``2 npoints - 1 - 2 gamma``.  Otherwise
    :func:`rule_polar` is used when the weighted roots span at most a plane
    (every rank-2 system, and S_3), and in higher rank the tensor rule is
    flagged approximate with the mass difference to a refined rule recorded
    as ``error_estimate``.
    """
    n = system.dimension
    if npoints < 1:
        raise ValueError("npoints must be >= 1")
    if npoints ** n > 2_000_000:
        raise ValueError("tensor rule too large; reduce npoints or dimension")
    sysobj = system.to_json_obj()
    gam = float(system.gamma)
    if system.family == "Z2_product":
        rules = [rule_generalized_hermite_1d(system.orbit_multiplicities[i], npoints, dps)
                 for i in range(n)]
        pts, w = _tensor(rules)
        w = w * 2.0 ** float(system.gamma)
        return QuadratureRule(nodes=pts, weights=w, rate=1.0, degree=2 * npoints - 1,
                              approximate=False, system=sysobj, npoints=npoints, gamma=gam)
    if not _polynomial_weight(system) and _essential_plane(system) is not None:
        return rule_polar(system, npoints, dps, estimate_error)
    gh = rule_generalized_hermite_1d(0, npoints, dps)
    pts, w = _tensor([gh] * n)
    w = w * weight(system, pts)
    if _polynomial_weight(system):
        deg = 2 * npoints - 1 - 2 * int(system.gamma)
        return QuadratureRule(nodes=pts, weights=w, rate=1.0, degree=max(deg, -1),
                              approximate=False, system=sysobj, npoints=npoints, gamma=gam)
    err = float("nan")
    if estimate_error:
        finer = rule_tensor(system, npoints + max(2, npoints // 2), dps, estimate_error=False)
        err = abs(math.fsum(w) - finer.mass) / finer.mass
    return QuadratureRule(nodes=pts, weights=w, rate=1.0, degree=None, approximate=True,
                          error_estimate=err, system=sysobj, npoints=npoints, gamma=gam)


def _essential_plane(system: RootSystem):
    """Orthonormal ``(P, Q)``: ``P`` (2 x N) spans the roots with ``k != 0``, ``Q`` the rest.

    Returns None when those roots span more than a plane.
    """
    roots = np.array([a for a, k in zip(system.positive_roots, system.multiplicities) if k])
    n = system.dimension
    if n < 2 or roots.size == 0:
        return None
    _, sv, vt = np.linalg.svd(roots, full_matrices=True)
    if int(np.sum(sv > 1e-10 * sv[0])) > 2:
        return None
    return vt[:2], vt[2:]


def _mirror_sectors(roots2d, ks):
    """Sectors of ``[0, pi)`` cut out by the mirror lines, with the multiplicity at each end."""
    lines = {}
    for alpha, k in zip(roots2d, ks):
        if not k:
            continue
        ang = (math.atan2(alpha[1], alpha[0]) + math.pi / 2) % math.pi
        key = round(ang, 12) % round(math.pi, 12)
        lines[key] = (ang, float(k))
    marks = sorted(lines.values())
    out = []
    for j, (a, ka) in enumerate(marks):
        b, kb = marks[(j + 1) % len(marks)]
        if j + 1 == len(marks):
            b += math.pi
        out.append((a, b, ka, kb))
    return out


def _polar_plane(roots2d, ks, gamma, npoints, dps):
    """Nodes and weights for ``prod |<alpha, p>|^{2k} e^{-|p|^2} dp`` on the plane."""
    from scipy.special import roots_jacobi

    radial = rule_generalized_hermite_1d(gamma + Fraction(1, 2), npoints, dps)
    r_nodes = radial.nodes[:, 0]
    thetas, aw = [], []
    for a, b, ka, kb in _mirror_sectors(roots2d, ks):
        t, wt = roots_jacobi(npoints, 2 * kb, 2 * ka)  # weight (1 - t)^{2 kb} (1 + t)^{2 ka}
        th = a + (b - a) * (t + 1) / 2
        u = np.stack([np.cos(th), np.sin(th)], axis=1)
        g = np.ones(len(th))
        for alpha, k in zip(roots2d, ks):
            if k:
                g = g * np.abs(u @ alpha) ** (2 * float(k))
        # divide out the Jacobi factors; they vanish only at the (excluded) endpoints
        g = g / ((1 - t) ** (2 * kb) * (1 + t) ** (2 * ka))
        thetas.append(th)
        aw.append(wt * g * (b - a) / 2)
    th = np.concatenate(thetas)
    aw = np.concatenate(aw)
    U = np.stack([np.cos(th), np.sin(th)], axis=1)
    pts = (r_nodes[:, None, None] * U[None, :, :]).reshape(-1, 2)
    w = (radial.weights[:, None] * aw[None, :]).reshape(-1)
    return pts, w


def rule_polar(system: RootSystem, npoints: int = 20, dps=None, estimate_error=True) -> QuadratureRule:
    """Polar rule for ``w_k(x) e^{-|x|^2} dx`` when the weighted roots span a plane.

    In that plane, with ``p = r u(theta)``, ``r`` real and ``theta`` in
    ``[0, pi)``, the measure is ``|r|^{2 gamma + 1} e^{-r^2} dr *
    w_k(u(theta)) dtheta``.  The radial factor gets the generalized Hermite
    rule with ``mu = gamma + 1/2`` (exact in ``r`` to degree
    ``2 npoints - 1``).  On a sector between mirrors at angles ``a < b`` the
    angular weight behaves like ``(theta - a)^{2 k_a} (b - theta)^{2 k_b}``,
    so Gauss-Jacobi with those exponents absorbs the kinks and the remaining
    factor is smooth.  The orthogonal complement, where ``w_k`` is constant,
    gets Gauss-Hermite.
    """
    split = _essential_plane(system)
    if split is None:
        raise ValueError("the polar rule needs the weighted roots to span at most a plane")
    P, Q = split
    ks = system.multiplicities
    roots2d = system.positive_roots @ P.T
    plane, w = _polar_plane(roots2d, ks, system.gamma, npoints, dps)
    pts = plane @ P
    if Q.shape[0]:
        gh = rule_generalized_hermite_1d(0, npoints, dps)
        rest, wr = _tensor([gh] * Q.shape[0])
        pts = (pts[:, None, :] + (rest @ Q)[None, :, :]).reshape(-1, system.dimension)
        w = (w[:, None] * wr[None, :]).reshape(-1)
    err = float("nan")
    if estimate_error:
        finer = rule_polar(system, npoints + max(2, npoints // 2), dps, estimate_error=False)
        err = abs(math.fsum(w) - finer.mass) / finer.mass
    return QuadratureRule(nodes=pts, weights=w, rate=1.0, degree=None, approximate=True,
                          error_estimate=err, system=system.to_json_obj(), npoints=npoints,
                          gamma=float(system.gamma))


def normalization_c_k(system: RootSystem, rule: QuadratureRule | None = None) -> float:
    """``c_k = (int e^{-|x|^2} w_k(x) dx)^{-1}`` from a quadrature rule."""
    if rule is None:
        rule = rule_tensor(system)
    if abs(rule.rate - 1.0) > 0:
        rule = rule.scaled(1.0)
    mass = rule.mass
    if not mass > 0:
        raise ArithmeticError("nonpositive quadrature mass")
    return 1.0 / mass


def heat_constant_M_k(system: RootSystem, c_k: float) -> float:
    """``M_k = 4^{-gamma - N/2} c_k``."""
    return 4.0 ** (-float(system.gamma) - system.dimension / 2) * c_k
