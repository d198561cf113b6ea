"""Rational Dunkl theory: exact operator algebra, Hermite systems, kernels, transforms and heat flow."""

from .groups import RootSystem, build_root_system, gamma, orbits, reflect, weight
from .heat import HeatModel, basic_solution, basic_solution_residual, laplacian_numeric
from .hermite import GramSingularError, HermiteSystem, Normalized, build_basis
from .kernel import KernelEvaluator, KernelValue, Z2ProductKernel, kernel_eval_z2, tail_bound
from .operators import MUTATIONS, OperatorContext
from .poly import DivisionError, Polynomial
from .profiles import Profile, constant, gaussian, hermite_function_profile, named_profile
from .quad import QuadratureRule, normalization_c_k, rule_generalized_hermite_1d, rule_tensor
from .transform import TransformContext

__all__ = [
    "RootSystem", "build_root_system", "gamma", "orbits", "reflect", "weight",
    "HeatModel", "basic_solution", "basic_solution_residual", "laplacian_numeric",
    "GramSingularError", "HermiteSystem", "Normalized", "build_basis",
    "KernelEvaluator", "KernelValue", "Z2ProductKernel", "kernel_eval_z2", "tail_bound",
    "MUTATIONS", "OperatorContext",
    "DivisionError", "Polynomial",
    "Profile", "constant", "gaussian", "hermite_function_profile", "named_profile",
    "QuadratureRule", "normalization_c_k", "rule_generalized_hermite_1d", "rule_tensor",
    "TransformContext",
]

__version__ = "0.1.0"
