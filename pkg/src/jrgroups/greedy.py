"""GreedyCC and GreedyCandidate.

Both return justifying groups; ties in the argmax go to the lowest candidate
index.  Residual supporter sets are bitsets over voters.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .election import ApprovalElection, CandidateSet, candidate_set, popcount


class GreedyMode(str, Enum):
    STOP_WHEN_JUSTIFYING = "stop_when_justifying"
    RUN_TO_K = "run_to_k"


def _argmax(values) -> int:
    best = 0
    for i, v in enumerate(values):
        if v > values[best]:
            best = i
    return best


def greedy_cc_sequence(e: ApprovalElection, steps: int) -> list[int]:
    """Selection order of GreedyCC for up to ``steps`` picks, ignoring the JR stop.

    Each step takes the candidate with the most unrepresented supporters.
    Stops early once no voter is left unrepresented.
    """
    masks = e.supporter_masks
    uncovered = e.all_voters
    chosen: list[int] = []
    while len(chosen) < steps:
        counts = [popcount(mask & uncovered) for mask in masks]
        best = _argmax(counts)
        if counts[best] == 0:
            break
        chosen.append(best)
        uncovered &= ~masks[best]
    return chosen


def greedy_cc(e: ApprovalElection, mode: GreedyMode | str = GreedyMode.STOP_WHEN_JUSTIFYING) -> CandidateSet:
    """GreedyCC: repeatedly represent the largest unrepresented cohesive group.

    In ``stop_when_justifying`` mode the loop ends as soon as every candidate
    has at most ``ell`` unrepresented supporters.  In ``run_to_k`` mode it
    keeps picking until ``k`` candidates are chosen or every voter with a
    non-empty ballot is represented.
    """
    mode = GreedyMode(mode)
    masks = e.supporter_masks
    ell = e.ell
    uncovered = e.all_voters
    chosen: list[int] = []
    while True:
        counts = [popcount(mask & uncovered) for mask in masks]
        best = _argmax(counts)
        if mode is GreedyMode.STOP_WHEN_JUSTIFYING:
            if counts[best] <= ell:
                break
        elif len(chosen) >= e.k or counts[best] == 0:
            break
        chosen.append(best)
        uncovered &= ~masks[best]
    return candidate_set(chosen)


def residual_sets(e: ApprovalElection, covered: int = 0) -> tuple[int, ...]:
    """Residual supporter sets ``B_c`` once the voters in ``covered`` are represented."""
    return tuple(mask & ~covered for mask in e.supporter_masks)


def potential(e: ApprovalElection, covered: int = 0) -> int:
    """Total excess ``sum_c max(0, |B_c| - ell)`` given the covered voters."""
    ell = e.ell
    return sum(max(0, popcount(b) - ell) for b in residual_sets(e, covered))


def marginal_utility(e: ApprovalElection, residual: tuple[int, ...], c: int) -> int:
    """Potential drop from selecting ``c`` in the given residual state."""
    ell = e.ell
    removed = residual[c]
    total = 0
    for b in residual:
        size = popcount(b)
        if size > ell:
            total += size - ell - max(0, popcount(b & ~removed) - ell)
    return total


@dataclass(frozen=True)
class GreedyStep:
    candidate: int
    utility: int
    potential_before: int
    potential_after: int


def greedy_candidate_trace(e: ApprovalElection) -> list[GreedyStep]:
    """Run GreedyCandidate and record every iteration."""
    ell = e.ell
    residual = list(e.supporter_masks)
    steps: list[GreedyStep] = []
    sizes = [popcount(b) for b in residual]
    psi = sum(max(0, s - ell) for s in sizes)
    while any(s > ell for s in sizes):
        deficient = [(b, s - ell) for b, s in zip(residual, sizes) if s > ell]
        utilities = []
        for removed in residual:
            u = 0
            for b, excess in deficient:
                u += excess - max(0, popcount(b & ~removed) - ell)
            utilities.append(u)
        best = _argmax(utilities)
        removed = residual[best]
        residual = [b & ~removed for b in residual]
        sizes = [popcount(b) for b in residual]
        new_psi = sum(max(0, s - ell) for s in sizes)
        steps.append(GreedyStep(best, utilities[best], psi, new_psi))
        psi = new_psi
    return steps


def greedy_candidate(e: ApprovalElection) -> CandidateSet:
    """GreedyCandidate: pick the candidate that most reduces the total excess potential."""
    return candidate_set(step.candidate for step in greedy_candidate_trace(e))
