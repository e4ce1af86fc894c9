"""socrep: minimum-size quadratic-cone representations of weighted
geometric-mean inequalities.

A weight tuple (s_1, ..., s_m) with gcd 1 describes the inequality
x_1^{s_1} ... x_m^{s_m} >= x_{m+1}^{s_1 + ... + s_m} over nonnegative
variables.  This package builds chains of simple quadratic constraints
x_i * x_j >= x_t^2 that realize the inequality, searches for chains of
minimum length, verifies candidate chains exactly, and reduces common
convex-modeling primitives (rational powers, p-norms, power cones) to such
inequalities.
"""

from ._kernels import backend_name
from .core import (
    Bounds,
    Configuration,
    InternalCheckError,
    InvalidInputError,
    SearchBudgetError,
    SocrepError,
    WeightTuple,
    bounds,
    count_partitions,
    lower_bound,
    partitions,
    upper_bound_common_one,
    upper_bound_perm,
    upper_bound_power_two,
)
from .exact import (
    FeasibilityResult,
    OptimalResult,
    brute_force,
    count_configs,
    feasible,
    iter_configs,
    load_catalog,
    scan_first_feasible,
    store_catalog,
)
from .frontends import (
    FrontendResult,
    SideConstraint,
    WgmInstance,
    as_rational,
    emit_constraints,
    to_negative_power,
    to_negative_power_multi,
    to_pnorm,
    to_power,
    to_power_cone,
    to_sub_unit_wgm,
    to_wgm,
)
from .heuristics import (
    ALGORITHMS,
    STRATEGIES,
    TraversalResult,
    heuristic,
    run_algorithm,
    traversal,
)
from .medseq import (
    MediatedSequence,
    MedTree,
    build_tree,
    enumerate_successive,
    is_mediated_sequence,
    leaf_heights,
    minimum_sequence,
    pow2_trivariate,
    tree_leaf_sums,
)
from .verify import NumericCheckResult, ReconstructedSet, numeric_check, reconstruct

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "Bounds",
    "Configuration",
    "FeasibilityResult",
    "FrontendResult",
    "InternalCheckError",
    "InvalidInputError",
    "MedTree",
    "MediatedSequence",
    "NumericCheckResult",
    "OptimalResult",
    "ReconstructedSet",
    "STRATEGIES",
    "SearchBudgetError",
    "SideConstraint",
    "SocrepError",
    "TraversalResult",
    "WeightTuple",
    "WgmInstance",
    "__version__",
    "as_rational",
    "backend_name",
    "bounds",
    "brute_force",
    "build_tree",
    "count_configs",
    "count_partitions",
    "emit_constraints",
    "enumerate_successive",
    "feasible",
    "heuristic",
    "is_mediated_sequence",
    "iter_configs",
    "leaf_heights",
    "load_catalog",
    "lower_bound",
    "minimum_sequence",
    "numeric_check",
    "partitions",
    "pow2_trivariate",
    "reconstruct",
    "run_algorithm",
    "scan_first_feasible",
    "store_catalog",
    "to_negative_power",
    "to_negative_power_multi",
    "to_pnorm",
    "to_power",
    "to_power_cone",
    "to_sub_unit_wgm",
    "to_wgm",
    "traversal",
    "tree_leaf_sums",
    "upper_bound_common_one",
    "upper_bound_perm",
    "upper_bound_power_two",
]
