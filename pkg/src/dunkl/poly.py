"""Sparse multivariate polynomials with exact coefficients.

A :class:`Polynomial` maps exponent tuples to coefficients.  Coefficients are
normally :class:`fractions.Fraction`; elements of ``Q(sqrt d)`` and floats are
tolerated so that the same code serves dihedral groups with irrational roots.
Zero coefficients are never stored, so equality of polynomials is equality of
their term dictionaries.
"""

from __future__ import annotations

import itertools
import json
from fractions import Fraction
from numbers import Rational

import numpy as np

from .surd import QuadSurd

MAX_DEGREE = 64

__all__ = [
    "Polynomial",
    "MAX_DEGREE",
    "monomials",
    "graded_lex_key",
    "DivisionError",
    "evaluate",
    "compose_orthogonal",
    "divide_by_linear_form",
    "homogeneous_components",
]


class DivisionError(ArithmeticError):
    """Raised when an exact division by a linear form leaves a remainder."""


def graded_lex_key(exps):
    """Sort key realising graded-lex order (lower degree first, x1 heaviest)."""
    return (sum(exps), tuple(exps))


def monomials(nvars: int, degree: int):
    """All exponent tuples of total degree ``degree``, in graded-lex order."""
    out = []

    def rec(prefix, left, slots):
        if slots == 1:
            out.append(prefix + (left,))
            return
        for e in range(left, -1, -1):
            rec(prefix + (e,), left - e, slots - 1)

    if nvars == 0:
        return [()] if degree == 0 else []
    rec((), degree, nvars)
    return out


def _is_exact(c):
    return isinstance(c, (int, Rational, QuadSurd))


def _scalar(c):
    """Normalise a user-supplied coefficient."""
    if isinstance(c, bool):
        return Fraction(int(c))
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, QuadSurd):
        return c.simplify()
    if isinstance(c, (np.floating, np.integer)):
        return c.item() if isinstance(c, np.floating) else Fraction(int(c))
    return c


def _coerce(c, kind):
    """Convert an (exact) coefficient to the arithmetic kind of an evaluation point."""
    if kind == "exact":
        return c
    if kind == "mp":
        import mpmath

        if isinstance(c, Fraction):
            return mpmath.mpf(c.numerator) / c.denominator
        if isinstance(c, QuadSurd):
            return (mpmath.mpf(c.a.numerator) / c.a.denominator
                    + mpmath.mpf(c.b.numerator) / c.b.denominator * mpmath.sqrt(c.d))
        return mpmath.mpmathify(c)
    if kind == "complex":
        return complex(c)
    return float(c)


def _kind_of(values):
    kind = "exact"
    for v in values:
        name = type(v).__name__
        if name in ("mpf", "mpc"):
            return "mp"
        if isinstance(v, (complex, np.complexfloating)):
            kind = "complex"
        elif isinstance(v, (float, np.floating)) and kind == "exact":
            kind = "float"
    return kind


class Polynomial:
    """Immutable sparse polynomial in ``nvars`` variables.

    Parameters
    ----------
    nvars : int
        Number of variables.
    terms : dict, optional
        Mapping from exponent tuples to coefficients.  Zero coefficients are
        dropped.
    """

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms=None):
        self.nvars = int(nvars)
        clean = {}
        if terms:
            for exps, c in terms.items():
                exps = tuple(int(e) for e in exps)
                if len(exps) != self.nvars:
                    raise ValueError(f"exponent {exps} does not have {self.nvars} entries")
                if any(e < 0 for e in exps):
                    raise ValueError("negative exponent")
                c = _scalar(c)
                if c:
                    clean[exps] = c
        if clean and max(sum(e) for e in clean) > MAX_DEGREE:
            raise ValueError(f"degree exceeds cap {MAX_DEGREE}")
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars, terms):
        # trusted constructor: terms already clean
        p = object.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    # constructors --------------------------------------------------------
    @classmethod
    def zero(cls, nvars):
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, nvars, c=1):
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars, i):
        e = [0] * nvars
        e[i] = 1
        return cls._raw(nvars, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, exps, c=1):
        return cls(len(exps), {tuple(exps): c})

    @classmethod
    def linear_form(cls, coeffs):
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            e = [0] * n
            e[i] = 1
            terms[tuple(e)] = c
        return cls(n, terms)

    @classmethod
    def norm_squared(cls, nvars):
        """The polynomial |x|^2."""
        terms = {}
        for i in range(nvars):
            e = [0] * nvars
            e[i] = 2
            terms[tuple(e)] = Fraction(1)
        return cls._raw(nvars, terms)

    # basic queries -------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    @property
    def degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self):
        return len({sum(e) for e in self.terms}) <= 1

    def coefficient(self, exps):
        return self.terms.get(tuple(exps), Fraction(0))

    @property
    def constant_term(self):
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def is_exact(self):
        return all(_is_exact(c) for c in self.terms.values())

    def sorted_terms(self):
        """Terms in descending graded-lex order."""
        return sorted(self.terms.items(), key=lambda kv: graded_lex_key(kv[0]), reverse=True)

    # ring operations -----------------------------------------------------
    def _check(self, other):
        if other.nvars != self.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.nvars, other)
        self._check(other)
        if len(other.terms) > len(self.terms):
            self, other = other, self
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Polynomial._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = _scalar(c)
        if not c:
            return Polynomial.zero(self.nvars)
        out = {}
        for e, v in self.terms.items():
            v = v * c
            if v:
                out[e] = v
        return Polynomial._raw(self.nvars, out)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        if self.terms and other.terms and self.degree + other.degree > MAX_DEGREE:
            raise ValueError(f"degree exceeds cap {MAX_DEGREE}")
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        return Polynomial._raw(self.nvars, {e: c for e, c in out.items() if c})

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, c):
        if isinstance(c, Polynomial):
            raise TypeError("use divide_by_linear_form for polynomial division")
        c = _scalar(c)
        if isinstance(c, Fraction):
            return self.scale(1 / c)
        return self.scale(Fraction(1) / c if isinstance(c, QuadSurd) else 1.0 / c)

    def __pow__(self, n):
        out = Polynomial.constant(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        if not self.terms:
            return other == 0
        return len(self.terms) == 1 and self.terms.get((0,) * self.nvars) == other

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def map_coefficients(self, fn):
        return Polynomial(self.nvars, {e: fn(c) for e, c in self.terms.items()})

    def chop(self, rel=1e-12):
        """Drop float coefficients below ``rel`` times the largest float one (exact ones are kept)."""
        if not self.terms:
            return self
        inexact = [abs(c) for c in self.terms.values() if isinstance(c, (float, complex))]
        if not inexact:
            return self
        top = max(inexact)
        keep = {e: c for e, c in self.terms.items() if not isinstance(c, (float, complex)) or abs(c) > rel * top}
        return Polynomial._raw(self.nvars, keep)

    # calculus ------------------------------------------------------------
    def diff(self, i):
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return Polynomial._raw(self.nvars, out)

    def gradient(self):
        return [self.diff(i) for i in range(self.nvars)]

    def euler(self):
        """Apply the Euler operator sum_i x_i d/dx_i."""
        return Polynomial._raw(self.nvars, {e: c * sum(e) for e, c in self.terms.items() if sum(e)})

    def homogeneous_part(self, d):
        return Polynomial._raw(self.nvars, {e: c for e, c in self.terms.items() if sum(e) == d})

    def homogeneous_components(self):
        """List of ``(degree, component)`` pairs in increasing degree."""
        by_deg = {}
        for e, c in self.terms.items():
            by_deg.setdefault(sum(e), {})[e] = c
        return [(d, Polynomial._raw(self.nvars, by_deg[d])) for d in sorted(by_deg)]

    def scale_arguments(self, a):
        """The polynomial x -> p(a x)."""
        return Polynomial(self.nvars, {e: c * a ** sum(e) for e, c in self.terms.items()})

    # substitutions -------------------------------------------------------
    def substitute_linear(self, matrix):
        """Return the polynomial ``x -> p(M x)`` for a square matrix ``M``.

        ``matrix`` is a sequence of rows with exact (or float) entries.
        Signed permutation matrices take a fast path.
        """
        n = self.nvars
        rows = [list(r) for r in matrix]
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ValueError("matrix shape does not match variable count")
        perm = _signed_permutation(rows)
        if perm is not None:
            out = {}
            for e, c in self.terms.items():
                f = [0] * n
                sign = 1
                for i, ei in enumerate(e):
                    j, s = perm[i]
                    f[j] = ei
                    if s < 0 and ei % 2:
                        sign = -sign
                out[tuple(f)] = c if sign > 0 else -c
            return Polynomial._raw(n, out)
        forms = [Polynomial.linear_form(r) for r in rows]
        powers = [[Polynomial.constant(n, 1)] for _ in range(n)]
        result = Polynomial.zero(n)
        for e, c in self.terms.items():
            term = Polynomial.constant(n, c)
            for i, ei in enumerate(e):
                while len(powers[i]) <= ei:
                    powers[i].append(powers[i][-1] * forms[i])
                if ei:
                    term = term * powers[i][ei]
            result = result + term
        return result

    def compose_orthogonal(self, g):
        """``g(p)(x) = p(g^{-1} x)`` for an orthogonal matrix ``g``."""
        gt = [[g[j][i] for j in range(self.nvars)] for i in range(self.nvars)]
        return self.substitute_linear(gt)

    def divide_by_linear_form(self, beta):
        """Exact quotient ``q`` with ``q * <beta, x> == self``.

        Raises :class:`DivisionError` if the division leaves a remainder.
        """
        beta = [_scalar(b) for b in beta]
        if len(beta) != self.nvars:
            raise ValueError("linear form has wrong length")
        piv = max((i for i, b in enumerate(beta) if b), default=None)
        if piv is None:
            raise ZeroDivisionError("zero linear form")
        if not self.terms:
            return Polynomial.zero(self.nvars)
        inexact = any(isinstance(b, float) for b in beta) or not self.is_exact()
        bp = beta[piv]
        inv = (1.0 / bp) if isinstance(bp, float) else (Fraction(1) / bp if isinstance(bp, QuadSurd) else 1 / Fraction(bp))
        rest = [(i, b) for i, b in enumerate(beta) if b and i != piv]
        # Work on terms grouped by power of the pivot variable, highest first.
        rem = dict(self.terms)
        quot = {}
        scale = max(abs(complex(c)) for c in rem.values()) if inexact else 0
        while rem:
            top = max(e[piv] for e in rem)
            if top == 0:
                if inexact and max(abs(complex(c)) for c in rem.values()) <= 1e-9 * max(scale, 1.0):
                    break
                raise DivisionError("polynomial is not divisible by the linear form")
            lead = [(e, c) for e, c in rem.items() if e[piv] == top]
            for e, c in lead:
                qe = list(e)
                qe[piv] -= 1
                qe = tuple(qe)
                qc = c * inv
                quot[qe] = quot.get(qe, 0) + qc
                del rem[e]
                for i, b in rest:
                    f = list(qe)
                    f[i] += 1
                    f = tuple(f)
                    v = rem.get(f, 0) - qc * b
                    if v and not (inexact and abs(complex(v)) <= 1e-13 * max(scale, 1.0)):
                        rem[f] = v
                    else:
                        rem.pop(f, None)
        return Polynomial(self.nvars, quot)

    # evaluation ----------------------------------------------------------
    def __call__(self, *x):
        if len(x) == 1 and not np.isscalar(x[0]) and not _is_scalar_like(x[0]):
            x = tuple(x[0])
        return self.evaluate(x)

    def evaluate(self, x):
        """Evaluate at a point.

        The result is exact for exact points (Fractions, ints, surds), a float
        or complex for float/complex points, and an mpmath number for mpmath
        points.
        """
        x = list(x)
        if len(x) != self.nvars:
            raise ValueError(f"point has {len(x)} coordinates, expected {self.nvars}")
        kind = _kind_of(x)
        if kind == "exact" and not self.is_exact():
            kind = "float"
        if kind == "exact":
            x = [_scalar(v) if isinstance(v, int) else v for v in x]
        total = _coerce(Fraction(0), kind)
        powers = [[_coerce(Fraction(1), kind)] for _ in x]
        for e, c in self.terms.items():
            term = _coerce(c, kind)
            for i, ei in enumerate(e):
                if ei:
                    pw = powers[i]
                    while len(pw) <= ei:
                        pw.append(pw[-1] * x[i])
                    term = term * pw[ei]
            total = total + term
        return total

    def evaluate_many(self, points):
        """Vectorised float/complex evaluation at an array of points ``(..., nvars)``."""
        pts = np.asarray(points)
        if pts.shape[-1] != self.nvars:
            raise ValueError("point dimension mismatch")
        dtype = complex if np.iscomplexobj(pts) else float
        out = np.zeros(pts.shape[:-1], dtype=dtype)
        powers = [[np.ones(pts.shape[:-1], dtype=dtype)] for _ in range(self.nvars)]
        for e, c in self.terms.items():
            term = np.full(pts.shape[:-1], complex(c) if dtype is complex else float(c), dtype=dtype)
            for i, ei in enumerate(e):
                if ei:
                    pw = powers[i]
                    while len(pw) <= ei:
                        pw.append(pw[-1] * pts[..., i])
                    term = term * pw[ei]
            out += term
        return out

    # tensor products -----------------------------------------------------
    def tensor(self, other):
        """The polynomial ``p(x) q(y)`` in ``nvars + other.nvars`` variables."""
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                c = c1 * c2
                if c:
                    out[e1 + e2] = c
        return Polynomial._raw(self.nvars + other.nvars, out)

    def embed(self, total, offset):
        """Re-express in ``total`` variables, shifting variable ``i`` to ``i + offset``."""
        out = {}
        for e, c in self.terms.items():
            f = [0] * total
            f[offset:offset + self.nvars] = e
            out[tuple(f)] = c
        return Polynomial._raw(total, out)

    # serialisation -------------------------------------------------------
    def to_json_obj(self):
        terms = []
        for e, c in self.sorted_terms():
            if isinstance(c, QuadSurd):
                terms.append([list(e), c.to_json()])
            elif isinstance(c, float):
                terms.append([list(e), repr(c)])
            else:
                terms.append([list(e), f"{c.numerator}/{c.denominator}"])
        return {"num_vars": self.nvars, "terms": terms}

    def to_json(self):
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj):
        terms = {}
        for e, c in obj["terms"]:
            if isinstance(c, dict):
                c = QuadSurd.from_json(c)
            elif "/" in c:
                c = Fraction(c)
            else:
                c = float(c)
            terms[tuple(e)] = c
        return cls(obj["num_vars"], terms)

    @classmethod
    def from_json(cls, text):
        return cls.from_json_obj(json.loads(text))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                f"x{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k
            )
            parts.append(f"({c})" + ("*" + mono if mono else ""))
        return " + ".join(parts)


def _is_scalar_like(v):
    return isinstance(v, (int, float, complex, Rational, QuadSurd)) or type(v).__name__ in ("mpf", "mpc")


def _signed_permutation(rows):
    perm = []
    for row in rows:
        nz = [(j, v) for j, v in enumerate(row) if v]
        if len(nz) != 1 or nz[0][1] not in (1, -1):
            return None
        perm.append(nz[0])
    if len({j for j, _ in perm}) != len(rows):
        return None
    # row i of M sends x_j (with sign) to new coordinate i, so variable i of p
    # becomes s * x_j: exponent e_i moves to slot j.
    return [(j, 1 if v == 1 else -1) for j, v in perm]


# thin functional aliases -----------------------------------------------------
def evaluate(p: Polynomial, x):
    return p.evaluate(x)


def compose_orthogonal(p: Polynomial, g):
    return p.compose_orthogonal(g)


def divide_by_linear_form(p: Polynomial, alpha):
    return p.divide_by_linear_form(alpha)


def homogeneous_components(p: Polynomial):
    return p.homogeneous_components()


def random_polynomial(rng, nvars, max_degree, n_terms=6, homogeneous=False, coeff_range=5):
    """Random polynomial with small integer-ratio coefficients (testing helper)."""
    terms = {}
    for _ in range(n_terms):
        d = max_degree if homogeneous else int(rng.integers(0, max_degree + 1))
        cuts = sorted(int(v) for v in rng.integers(0, d + 1, size=nvars - 1))
        exps = [b - a for a, b in zip([0] + cuts, cuts + [d])]
        num = int(rng.integers(-coeff_range, coeff_range + 1))
        den = int(rng.integers(1, coeff_range + 1))
        terms[tuple(exps)] = terms.get(tuple(exps), 0) + Fraction(num, den)
    return Polynomial(nvars, terms)


def all_monomials_up_to(nvars, degree):
    return list(itertools.chain.from_iterable(monomials(nvars, d) for d in range(degree + 1)))
