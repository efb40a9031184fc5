"""Greedy minimization of separable convex functions on jump systems."""

from jumpgreedy.core import (
    ZERO,
    UnitStep,
    in_s_region,
    in_s_region_direct,
    inc,
    l1_distance,
)
from jumpgreedy.jump_systems import (
    ExplicitJumpSystem,
    GraphDegreeJumpSystem,
    generate_random,
    materialize,
    psi,
    verify_jexc,
)
from jumpgreedy.kernels import BACKEND
from jumpgreedy.objective import Linear, Quadratic, SeparableObjective, Table, verify_convexity
from jumpgreedy.oracle import OptimalityProfile, sweep
from jumpgreedy.solvers import (
    is_locally_optimal,
    jsc_greedy,
    jsc_refined_greedy,
    jsc_refined_greedy2,
    select_s_star,
)

__all__ = [
    "BACKEND",
    "ExplicitJumpSystem",
    "GraphDegreeJumpSystem",
    "Linear",
    "OptimalityProfile",
    "Quadratic",
    "SeparableObjective",
    "Table",
    "UnitStep",
    "ZERO",
    "generate_random",
    "in_s_region",
    "in_s_region_direct",
    "inc",
    "is_locally_optimal",
    "jsc_greedy",
    "jsc_refined_greedy",
    "jsc_refined_greedy2",
    "l1_distance",
    "materialize",
    "psi",
    "select_s_star",
    "sweep",
    "verify_convexity",
    "verify_jexc",
]

__version__ = "0.1.0"
