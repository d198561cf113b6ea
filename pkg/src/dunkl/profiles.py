"""Test functions of the form ``f(x) = r(x) exp(-rate |x|^2)``.

Every integral in the package is a Gauss rule for ``w_k(x) e^{-a |x|^2}``;
knowing the Gaussian rate of the integrand lets the rule be scaled to match
it, and only the smooth *reduced* part ``r`` is sampled at the nodes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = ["Profile", "gaussian", "constant", "hermite_function_profile", "named_profile"]


@dataclass(frozen=True)
class Profile:
    """``f(x) = reduced(x) * exp(-rate |x|^2)`` with ``reduced`` vectorised over ``(M, N)``."""

    reduced: Callable
    rate: float
    name: str = "profile"
    sup: float | None = None

    def __call__(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return self.reduced(X) * np.exp(-self.rate * np.sum(X * X, axis=-1))


def gaussian(b=1.0, scale=1.0) -> Profile:
    """``scale * e^{-b |x|^2}``."""
    return Profile(lambda X: np.full(X.shape[0], float(scale)), float(b), f"gaussian({b})",
                   sup=abs(float(scale)))


def constant(c=1.0) -> Profile:
    return Profile(lambda X: np.full(X.shape[0], float(c)), 0.0, f"constant({c})", sup=abs(float(c)))


def hermite_function_profile(hermite, nu) -> Profile:
    """``h_nu(x) = e^{-|x|^2/2} H_nu(x)``."""
    nu = tuple(nu)
    return Profile(lambda X: hermite.hermite_values(nu, X), 0.5, f"h{list(nu)}")


def named_profile(name: str, dimension: int, hermite=None) -> Profile:
    """Look up a profile by CLI name.

    ``one``, ``gaussian`` (``e^{-|x|^2}``), ``gaussian_half``
    (``e^{-|x|^2/2}``), ``shifted`` (``(1 + x_1) e^{-|x|^2}``, not
    G-invariant) or ``h:<i,j,...>`` (a Hermite function).
    """
    if name == "one":
        return constant(1.0)
    if name == "gaussian":
        return gaussian(1.0)
    if name == "gaussian_half":
        return gaussian(0.5)
    if name == "shifted":
        # sup of (1 + s) e^{-s^2} over s is attained at s = (sqrt(3) - 1)/2
        s = (np.sqrt(3.0) - 1) / 2
        return Profile(lambda X: 1.0 + X[:, 0], 1.0, "shifted", sup=float((1 + s) * np.exp(-s * s)))
    if name.startswith("h:"):
        if hermite is None:
            raise ValueError("Hermite profiles need a basis")
        nu = tuple(int(v) for v in name[2:].split(","))
        if len(nu) != dimension:
            raise ValueError("multi-index length does not match the dimension")
        return hermite_function_profile(hermite, nu)
    raise ValueError(f"unknown profile {name!r}")
