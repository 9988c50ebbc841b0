"""Solvers for the conditional minisum rule in multi-issue approval voting."""

from .brute import SolveResult, solve_exhaustive
from .elim import (
    EliminationStep,
    eliminate_degree2,
    eliminate_isolated,
    eliminate_pendant,
    solve_elimination,
)
from .errors import (
    CmsError,
    MalformedOutcomeError,
    ProfileFormatError,
    SizeCapError,
    UnsupportedProfileError,
)
from .generator import GenConfig, Xoshiro256StarStar, generate_profile
from .minsat import (
    Clause,
    CnfInstance,
    DnfFormula,
    Literal,
    build_cij,
    dnf_to_cnf,
    export_dimacs,
    minsat_2approx,
    minsat_exact,
    outcome_from_assignment,
    parse_dimacs_assignment,
    reduce_profile,
    satisfied_count,
    solve_via_minsat,
)
from .model import (
    ApprovalStatement,
    BallotEntry,
    ConditionalBallot,
    GlobalGraph,
    Issue,
    Outcome,
    Profile,
    Violation,
    dissatisfaction,
    dissatisfied_on,
    fully_approving_entry,
    global_graph,
    max_indegree,
    total_cost,
    validate,
)
from .serialize import dumps_outcome, dumps_profile, parse_outcome, parse_profile

__version__ = "0.1.0"
