"""Finite reflection groups, root systems and multiplicity functions.

Roots are kept as exact *directions* ``beta`` together with ``|beta|^2``; the
normalised root is ``alpha = sqrt(2 / |beta|^2) * beta`` so that
``<alpha, alpha> = 2`` holds exactly.  Every operator in the package only
needs ``alpha_i / <alpha, x>`` and the reflection ``sigma_alpha``, and both
are invariant under rescaling of ``alpha``; the square root therefore never
enters exact computations.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

import numpy as np

from .surd import QuadSurd, sqrt3

__all__ = [
    "RootSystem",
    "build_root_system",
    "reflect",
    "weight",
    "gamma",
    "orbits",
    "from_config",
    "FAMILIES",
]

FAMILIES = ("Z2_product", "A", "B", "dihedral")

_ALIASES = {
    "z2": "Z2_product",
    "z2_product": "Z2_product",
    "z2n": "Z2_product",
    "a": "A",
    "s": "A",
    "sn": "A",
    "symmetric": "A",
    "b": "B",
    "bn": "B",
    "dihedral": "dihedral",
    "i2": "dihedral",
}


def _to_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, np.integer)):
        return Fraction(int(v))
    if isinstance(v, (float, np.floating)):
        # decimal reading: 0.7 means 7/10, not the binary float
        return Fraction(repr(float(v)))
    if isinstance(v, str):
        return Fraction(v.strip())
    if isinstance(v, Rational):
        return Fraction(v.numerator, v.denominator)
    raise TypeError(f"cannot use {v!r} as a multiplicity value")


def _dot(u, v):
    total = 0
    for a, b in zip(u, v):
        total = total + a * b
    return total


def _matmul(a, b):
    n = len(a)
    return tuple(
        tuple(_dot(a[i], [b[k][j] for k in range(n)]) for j in range(n)) for i in range(n)
    )


def _reflection_matrix(beta):
    n = len(beta)
    nb = _dot(beta, beta)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            v = (1 if i == j else 0) - 2 * beta[i] * beta[j] / nb
            if isinstance(v, QuadSurd):
                v = v.simplify()
            elif isinstance(v, int):
                v = Fraction(v)
            row.append(v)
        rows.append(tuple(row))
    return tuple(rows)


def _key(mat, exact):
    if exact:
        return mat
    return tuple(tuple(round(float(v), 9) + 0.0 for v in row) for row in mat)


def _scalar_json(v):
    if isinstance(v, QuadSurd):
        return v.to_json()
    if isinstance(v, float):
        return repr(v)
    v = Fraction(v)
    return f"{v.numerator}/{v.denominator}"


def _scalar_from_json(v):
    if isinstance(v, dict):
        return QuadSurd.from_json(v).simplify()
    if "/" in v:
        return Fraction(v)
    return float(v)


def _lex_positive(vec):
    for v in vec:
        if v:
            return float(v) > 0
    return False


@dataclass(frozen=True, eq=False)
class RootSystem:
    """A finite reflection group presented by a root system.

    Attributes
    ----------
    family : str
        One of ``"Z2_product"``, ``"A"``, ``"B"``, ``"dihedral"``.
    dimension : int
        Ambient dimension ``N``.
    directions : tuple
        One exact direction vector per positive root (lex-positive).
    orbit_of : tuple of int
        Orbit label of each positive root, indexing ``orbit_multiplicities``.
    orbit_multiplicities : tuple of Fraction
        Multiplicity value per root orbit.
    group_elements : tuple
        All group elements as exact (or float) ``N x N`` matrices; the
        identity comes first.
    exact : bool
        False when root coordinates are floating point (dihedral orders other
        than 3, 4, 6).
    """

    family: str
    dimension: int
    directions: tuple
    orbit_of: tuple
    orbit_multiplicities: tuple
    order_param: int | None = None
    exact: bool = True
    group_elements: tuple = field(default=(), repr=False)
    reflections: tuple = field(default=(), repr=False)

    # derived quantities -------------------------------------------------
    @property
    def rank(self):
        return self.dimension

    @property
    def multiplicities(self):
        """Multiplicity of each positive root, aligned with ``directions``."""
        return tuple(self.orbit_multiplicities[o] for o in self.orbit_of)

    @property
    def gamma(self) -> Fraction:
        return sum(self.multiplicities, Fraction(0))

    @property
    def group_order(self) -> int:
        return len(self.group_elements)

    @property
    def direction_norms(self):
        return tuple(_dot(b, b) for b in self.directions)

    @property
    def positive_roots(self) -> np.ndarray:
        """Normalised positive roots as a float array ``(n_roots, N)``."""
        out = []
        for b in self.directions:
            bf = np.array([float(v) for v in b])
            out.append(bf * math.sqrt(2.0 / float(bf @ bf)))
        return np.array(out).reshape(len(self.directions), self.dimension)

    @property
    def roots(self) -> np.ndarray:
        pos = self.positive_roots
        return np.concatenate([pos, -pos])

    def root_scale2(self, r):
        """``s`` with ``alpha_r = sqrt(s) * directions[r]`` (exact)."""
        return Fraction(2) / self.direction_norms[r] if self.exact else 2.0 / float(self.direction_norms[r])

    @property
    def is_trivial(self):
        return all(k == 0 for k in self.orbit_multiplicities)

    def group_matrices(self) -> np.ndarray:
        return np.array([[[float(v) for v in row] for row in g] for g in self.group_elements])

    def describe(self):
        k = ", ".join(str(v) for v in self.orbit_multiplicities)
        extra = f", m={self.order_param}" if self.order_param else ""
        return f"{self.family}(N={self.dimension}{extra}; k=({k}))"

    def __repr__(self):
        return f"RootSystem<{self.describe()}>"

    def with_multiplicity(self, values):
        """Same group with new orbit multiplicities."""
        return _assemble(self.family, self.dimension, self.directions, self.orbit_of,
                         _orbit_values(values, len(self.orbit_multiplicities)),
                         self.order_param, self.exact)

    # operations ---------------------------------------------------------
    def reflect(self, alpha, x):
        return reflect(alpha, x)

    def weight(self, x):
        return weight(self, x)

    # serialisation ------------------------------------------------------
    def to_json_obj(self):
        return {
            "family": self.family,
            "rank": self.dimension,
            "order": self.order_param,
            "exact": self.exact,
            "multiplicity": [_scalar_json(k) for k in self.orbit_multiplicities],
            "orbit_of": list(self.orbit_of),
            "directions": [[_scalar_json(v) for v in b] for b in self.directions],
        }

    def to_json(self):
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj):
        dirs = tuple(tuple(_scalar_from_json(v) for v in b) for b in obj["directions"])
        mult = tuple(Fraction(v) for v in obj["multiplicity"])
        return _assemble(obj["family"], int(obj["rank"]), dirs, tuple(obj["orbit_of"]), mult,
                         obj.get("order"), bool(obj.get("exact", True)))

    @classmethod
    def from_json(cls, text):
        return cls.from_json_obj(json.loads(text))


def _orbit_values(values, count):
    if isinstance(values, dict):
        values = list(values.values())
    if not isinstance(values, (list, tuple, np.ndarray)):
        values = [values]
    if len(values) != count:
        raise ValueError(f"multiplicity arity mismatch: expected {count} values, got {len(values)}")
    out = tuple(_to_fraction(v) for v in values)
    if any(v < 0 for v in out):
        raise ValueError("multiplicity values must be nonnegative")
    return out


def _closure(reflections, exact):
    n = len(reflections[0])
    ident = tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))
    seen = {_key(ident, exact): ident}
    order = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for s in reflections:
                h = _matmul(s, g)
                if not exact:
                    h = tuple(tuple(float(v) for v in row) for row in h)
                k = _key(h, exact)
                if k not in seen:
                    seen[k] = h
                    order.append(h)
                    nxt.append(h)
        frontier = nxt
        if len(order) > 100000:
            raise RuntimeError("group closure did not terminate")
    return tuple(order)


def _assemble(family, n, directions, orbit_of, mult, order_param, exact):
    refl = tuple(_reflection_matrix(b) for b in directions)
    if not exact:
        refl = tuple(tuple(tuple(float(v) for v in row) for row in s) for s in refl)
    if refl:
        elements = _closure(refl, exact)
    else:
        elements = (tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)),)
    return RootSystem(family=family, dimension=n, directions=tuple(tuple(b) for b in directions),
                      orbit_of=tuple(orbit_of), orbit_multiplicities=tuple(mult),
                      order_param=order_param, exact=exact, group_elements=elements,
                      reflections=refl)


def _unit(n, i, scale=1):
    v = [Fraction(0)] * n
    v[i] = Fraction(scale)
    return tuple(v)


def _family_roots(family, n, order):
    """Positive root directions and orbit labels of a family."""
    F = Fraction
    if family == "Z2_product":
        return [_unit(n, i) for i in range(n)], list(range(n)), n, True
    if family == "A":
        if n < 2:
            raise ValueError("the symmetric-group family needs at least 2 coordinates")
        dirs = []
        for i in range(n):
            for j in range(i + 1, n):
                v = [F(0)] * n
                v[i], v[j] = F(1), F(-1)
                dirs.append(tuple(v))
        return dirs, [0] * len(dirs), 1, True
    if family == "B":
        dirs, orb = [], []
        for i in range(n):
            for j in range(i + 1, n):
                for s in (-1, 1):
                    v = [F(0)] * n
                    v[i], v[j] = F(1), F(s)
                    dirs.append(tuple(v))
                    orb.append(0)
        for i in range(n):
            dirs.append(_unit(n, i))
            orb.append(1)
        return dirs, orb, 2, True
    if family == "dihedral":
        if n != 2:
            raise ValueError("dihedral groups require rank 2")
        if order is None or order < 3:
            raise ValueError("dihedral groups require an order parameter m >= 3")
        if order > 8:
            raise ValueError("dihedral groups are supported for m <= 8")
        m = int(order)
        n_orbits = 2 if m % 2 == 0 else 1
        labels = [j % 2 if n_orbits == 2 else 0 for j in range(m)]
        if m == 4:
            dirs = [(F(1), F(0)), (F(1), F(1)), (F(0), F(1)), (F(1), F(-1))]
            return dirs, labels, n_orbits, True
        if m in (3, 6):
            r3 = sqrt3()
            if m == 3:
                raw = [(F(1), F(0)), (F(1), r3), (F(-1), r3)]
            else:
                raw = [(F(1), F(0)), (r3, F(1)), (F(1), r3), (F(0), F(1)), (F(-1), r3), (-r3, F(1))]
            dirs = []
            for v in raw:
                v = tuple(c.simplify() if isinstance(c, QuadSurd) else c for c in v)
                if not _lex_positive(v):
                    v = tuple(-c for c in v)
                dirs.append(v)
            return dirs, labels, n_orbits, True
        dirs = []
        for j in range(m):
            th = math.pi * j / m
            v = (math.cos(th), math.sin(th))
            v = tuple(0.0 if abs(c) < 1e-15 else c for c in v)
            if not _lex_positive(v):
                v = tuple(-c for c in v)
            dirs.append(v)
        return dirs, labels, n_orbits, False
    raise ValueError(f"unknown family {family!r}")


def build_root_system(family, rank=1, multiplicity=0, order=None) -> RootSystem:
    """Construct a root system of a supported family.

    Parameters
    ----------
    family : str
        ``"Z2_product"`` (Z_2^N, one multiplicity per axis), ``"A"`` (S_N
        permuting ``rank`` coordinates; multiplicity ``1/alpha``), ``"B"``
        (``(k0, k1)`` for long roots ``e_i +- e_j`` and short roots ``e_i``),
        or ``"dihedral"`` (I_2(m); one value for odd ``m``, two for even).
    rank : int
        Ambient dimension N.
    multiplicity : scalar or sequence
        One nonnegative value per root orbit.
    order : int, optional
        The dihedral order ``m``.
    """
    fam = _ALIASES.get(str(family).lower())
    if fam is None:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    rank = int(rank)
    if rank < 1:
        raise ValueError("rank must be >= 1")
    dirs, labels, n_orbits, exact = _family_roots(fam, rank, order)
    mult = _orbit_values(multiplicity, n_orbits)
    return _assemble(fam, rank, dirs, labels, mult, order if fam == "dihedral" else None, exact)


def from_config(cfg: dict) -> RootSystem:
    """Build a system from a mapping with keys family, rank, multiplicity, order."""
    return build_root_system(cfg["family"], cfg.get("rank", 1), cfg.get("multiplicity", 0),
                             cfg.get("order"))


def reflect(alpha, x):
    """Reflect ``x`` in the hyperplane orthogonal to ``alpha``.

    Exact when both arguments are exact; any nonzero scaling of ``alpha``
    gives the same reflection.
    """
    if len(alpha) != len(x):
        raise ValueError("dimension mismatch between root and point")
    na = _dot(alpha, alpha)
    if not na:
        raise ValueError("zero root")
    c = 2 * _dot(alpha, x) / na
    out = [xi - c * ai for xi, ai in zip(x, alpha)]
    if isinstance(x, np.ndarray):
        return np.array(out)
    return tuple(out)


def weight(system: RootSystem, x):
    """The weight ``w_k(x) = prod_{alpha > 0} |<alpha, x>|^{2 k(alpha)}``.

    ``x`` may be a single point or an array of points ``(..., N)``; the
    result is a float (array).
    """
    pts = np.asarray(x, dtype=float)
    if pts.shape[-1] != system.dimension:
        raise ValueError("point dimension mismatch")
    out = np.ones(pts.shape[:-1])
    # |<alpha, x>|^2 = s <beta, x>^2 with s = 2 / |beta|^2, avoiding a sqrt
    for r, k in enumerate(system.multiplicities):
        if k:
            beta = np.array([float(v) for v in system.directions[r]])
            s = float(system.root_scale2(r))
            out = out * (s * (pts @ beta) ** 2) ** float(k)
    return out if out.shape else float(out)


def gamma(system: RootSystem) -> Fraction:
    """``gamma = sum_{alpha > 0} k(alpha)``."""
    return system.gamma


def orbits(system: RootSystem):
    """Orbit label of each positive root, computed from the group action."""
    mats = system.group_matrices()
    roots = system.positive_roots
    label = [-1] * len(roots)
    cur = 0
    for r in range(len(roots)):
        if label[r] >= 0:
            continue
        images = mats @ roots[r]
        for s, beta in enumerate(roots):
            hit = np.minimum(np.abs(images - beta).max(axis=1), np.abs(images + beta).max(axis=1))
            if label[s] < 0 and hit.min() < 1e-9:
                label[s] = cur
        cur += 1
    return label
