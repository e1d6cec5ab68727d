"""p-modulus of star and edge cover families on graphs.

Exact combinatorial shortest-object oracles (vertex stars, minimum-weight
edge covers through blossom matching) drive an active-set convex solver;
fractional edge covers are handled through conjugate-exponent duality with
stars.
"""

from .duality import DualResult, dual_weights, fec_modulus_via_stars, verify_reciprocal
from .errors import DegenerateResult, DomainError, Infeasible, ModkitError, ParseError, SolverError
from .families import (
    BasicFec,
    FamilyOracle,
    UsageRow,
    edge_cover_family,
    enumerate_basic_fecs,
    enumerate_minimal_edge_covers,
    explicit_family,
    is_fractional_edge_cover,
    star_family,
)
from .graph import Graph, make_standard, parse_graph, standard_from_string
from .matching import Matching, brute_force_mwpm, min_weight_edge_cover, min_weight_perfect_matching
from .oracles import barbell_bridge_usage, closed_form_modulus, ec_fec_ratio_complete
from .probability import (
    Pmf,
    expected_edge_usage,
    expected_overlap,
    optimal_expected_usage,
    pmf_from_result,
    uniform_star_lower_bound,
)
from .solver import ModulusResult, basic_algorithm, energy, rho_length, solve_subproblem

__version__ = "0.1.0"
