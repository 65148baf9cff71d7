"""Finding small attribute sets that derive a target set under functional
dependencies, optionally within a bounded number of inference rounds."""

from .errors import (
    DegreeExceeded,
    InfeasibleError,
    InstanceError,
    NotSimpleError,
    ParseError,
    SolverError,
    TcandError,
    TooLarge,
    UncoverableError,
)
from .fd import (
    FD,
    FDSet,
    Instance,
    Stats,
    bounded_closure,
    closure,
    format_instance,
    is_feasible,
    normalize,
    one_step_closure,
    parse_instance,
    stats,
)
from .generators import gen_gap_instance, gen_random_instance, gen_vc_instance
from .graph import build_fd_graph, is_simple, scc_condense, solve_simple
from .lp import build_layered_lp, build_one_round_lp, export_lp, lp_lower_bound, solve_lp
from .oracle import exact_rbsc, exact_tcand
from .redblue import RBSCInstance, parse_rbsc, rbsc_greedy, rbsc_to_tcand, tcand_to_rbsc
from .rounding import equitable_coloring, round_deterministic, round_randomized, round_randomized_d

__version__ = "0.1.0"

__all__ = [
    "DegreeExceeded",
    "InfeasibleError",
    "InstanceError",
    "NotSimpleError",
    "ParseError",
    "SolverError",
    "TcandError",
    "TooLarge",
    "UncoverableError",
    "FD",
    "FDSet",
    "Instance",
    "Stats",
    "bounded_closure",
    "closure",
    "format_instance",
    "is_feasible",
    "normalize",
    "one_step_closure",
    "parse_instance",
    "stats",
    "gen_gap_instance",
    "gen_random_instance",
    "gen_vc_instance",
    "build_fd_graph",
    "is_simple",
    "scc_condense",
    "solve_simple",
    "build_layered_lp",
    "build_one_round_lp",
    "export_lp",
    "lp_lower_bound",
    "solve_lp",
    "exact_rbsc",
    "exact_tcand",
    "RBSCInstance",
    "parse_rbsc",
    "rbsc_greedy",
    "rbsc_to_tcand",
    "tcand_to_rbsc",
    "equitable_coloring",
    "round_deterministic",
    "round_randomized",
    "round_randomized_d",
]
