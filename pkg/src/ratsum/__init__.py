"""ratsum: exact best approximation of a real number by a sum of k rationals
with denominators at most N, and the machinery to verify the quality bounds
numerically (coprime weighted sums, triangle-kernel Fourier estimates, and
the census of reachable least common denominators)."""

__version__ = "0.1.0"

from .errors import BudgetExceededError, InvalidInputError
from .numtheory import (
    SieveTables,
    build_sieves,
    coprime_linear_sum,
    coprime_weighted_sum,
    divisor_reciprocal_sum,
    ext_gcd_chain,
    restricted_power_sum,
    totient_ratio_report,
    totient_ratio_sum,
)
from .kernel import (
    KernelParams,
    alias_average,
    counting_sum,
    fourier_coeff,
    kernel_eval,
    root_of_unity_sum,
    tail_sum,
)
from .lcmset import LcmEntry, LcmSet, build_lcm_set, density
from .solver import (
    ApproxSolution,
    ThetaValue,
    best_approx,
    best_approx_bruteforce,
    dirichlet_k1,
    nearest_multiple,
    parse_theta,
    reconstruct_tuple,
    solution_to_dict,
)

__all__ = [
    "BudgetExceededError",
    "InvalidInputError",
    "SieveTables",
    "build_sieves",
    "coprime_linear_sum",
    "coprime_weighted_sum",
    "divisor_reciprocal_sum",
    "ext_gcd_chain",
    "restricted_power_sum",
    "totient_ratio_report",
    "totient_ratio_sum",
    "KernelParams",
    "alias_average",
    "counting_sum",
    "fourier_coeff",
    "kernel_eval",
    "root_of_unity_sum",
    "tail_sum",
    "LcmEntry",
    "LcmSet",
    "build_lcm_set",
    "density",
    "ApproxSolution",
    "ThetaValue",
    "best_approx",
    "best_approx_bruteforce",
    "dirichlet_k1",
    "nearest_multiple",
    "parse_theta",
    "reconstruct_tuple",
    "solution_to_dict",
    "__version__",
]
