"""Justifying groups and justified-representation committees for approval elections."""

from .committee import (
    FillPolicy,
    PreconditionError,
    committee_both_genders,
    extend_to_committee,
    imbalance,
    jr_committees_constructive,
    min_imbalance_heuristic,
)
from .election import (
    ApprovalElection,
    CandidateSet,
    GenderAssignment,
    InstanceTooLarge,
    ParseError,
    candidate_set,
    is_jr_committee,
    is_justifying,
    is_justifying_bruteforce,
    parse_election,
    serialize_election,
    threshold_tau,
    uncovered_supporters,
)
from .estimators import JRCommitteeSelector, JustifyingGroupSelector, check_approval_matrix
from .exact import (
    BudgetExceeded,
    count_jr_committees,
    exact_min_bruteforce,
    exact_min_justifying,
    quasi_poly_min,
)
from .generators import (
    avg_approvals,
    fixture_example1,
    fixture_example2,
    fixture_example3,
    gen_euclid1d,
    gen_euclid2d,
    gen_ic,
)
from .greedy import GreedyMode, greedy_candidate, greedy_cc, marginal_utility, potential
from .tree import (
    IntervalModel,
    RootedCandidateTree,
    solve_on_tree,
    validate_tree_representation,
    vcr_election,
    vcr_to_tree,
)

__version__ = "0.1.0"
