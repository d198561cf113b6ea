#!/usr/bin/env python3
"""Generalized Hermite polynomials for a few reflection groups.

Builds the orthonormal basis by exact Gram-Schmidt, prints the low-degree
polynomials, and checks orthonormality numerically with a Gauss rule for
``w_k(x) e^{-|x|^2}``.
"""

import numpy as np

from dunkl import HermiteSystem, OperatorContext, build_root_system, normalization_c_k, rule_tensor


def show(system, n_max=3, npoints=16):
    print(f"\n== {system.describe()}  gamma = {system.gamma}")
    hs = HermiteSystem(OperatorContext(system), n_max)
    for nu in hs.indices():
        print(f"  H~{list(nu)} = {hs.hermite_tilde(nu).chop()}    norm^2 = {hs.norm2(nu)}")
    print("  exact Gram identity residual:", hs.gram_identity_residual())

    rule = rule_tensor(system, npoints)
    c = normalization_c_k(system, rule)
    idx = hs.indices()
    V = np.array([hs.hermite_values(nu, rule.nodes) for nu in idx])
    G = c * (V * rule.weights) @ V.T
    ref = np.diag([2.0 ** sum(nu) for nu in idx])
    print(f"  c_k = {c:.12f};  max |c_k int H_a H_b w e^(-|x|^2) - 2^|a| delta_ab| = {np.abs(G - ref).max():.2e}")


def main():
    show(build_root_system("Z2", 1, 1), n_max=4)
    show(build_root_system("B", 2, [1, 1]))
    show(build_root_system("A", 3, 1), n_max=2)
    show(build_root_system("dihedral", 2, 1, 5), n_max=3)


if __name__ == "__main__":
    main()
