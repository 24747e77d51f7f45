"""Turning justifying groups into full JR committees, with gender constraints."""

from __future__ import annotations

from enum import Enum
from typing import Iterable

from .election import (
    ApprovalElection,
    CandidateSet,
    GenderAssignment,
    candidate_set,
    ceil_div,
    is_justifying,
    popcount,
)
from .greedy import greedy_candidate, greedy_cc, greedy_cc_sequence


class FillPolicy(str, Enum):
    LOWEST_INDEX = "lowest_index"
    GENDER_BALANCE = "gender_balance"


class PreconditionError(ValueError):
    pass


def imbalance(w: Iterable[int], genders: GenderAssignment) -> int:
    """``|#male - #female|`` among the members of ``w``."""
    males = sum(1 for c in w if genders[c] == "M")
    females = sum(1 for c in w if genders[c] == "F")
    return abs(males - females)


def _balanced_fill(free: int, surplus: int, spare_m: list[int], spare_f: list[int]) -> list[int]:
    """Pick ``free`` extra members minimizing the final imbalance.

    ``surplus`` is the current male-minus-female count.
    """
    lo = max(0, free - len(spare_f))
    hi = min(free, len(spare_m))
    if lo > hi:
        raise PreconditionError("not enough candidates to fill the committee")
    n_male = min(range(lo, hi + 1), key=lambda x: (abs(surplus + x - (free - x)), x))
    return spare_m[:n_male] + spare_f[: free - n_male]


def extend_to_committee(
    e: ApprovalElection,
    g: Iterable[int],
    fill_policy: FillPolicy | str = FillPolicy.LOWEST_INDEX,
    genders: GenderAssignment | None = None,
) -> CandidateSet:
    """Pad a justifying group to ``k`` members; the result provides JR.

    ``gender_balance`` picks how many of each gender to add so the final
    imbalance is as small as the remaining candidates allow, taking the
    lowest indices within each gender.
    """
    fill_policy = FillPolicy(fill_policy)
    g = candidate_set(g)
    if len(g) > e.k:
        raise PreconditionError(f"group of size {len(g)} exceeds k={e.k}")
    if not is_justifying(e, g):
        raise PreconditionError("group is not justifying")
    free = e.k - len(g)
    outside = [c for c in range(e.m) if c not in set(g)]
    if fill_policy is FillPolicy.LOWEST_INDEX:
        extra = outside[:free]
    else:
        genders = genders or e.genders
        if genders is None:
            raise PreconditionError("gender_balance needs a gender assignment")
        surplus = sum(1 if genders[c] == "M" else -1 for c in g)
        spare_m = [c for c in outside if genders[c] == "M"]
        spare_f = [c for c in outside if genders[c] == "F"]
        extra = _balanced_fill(free, surplus, spare_m, spare_f)
    return candidate_set([*g, *extra])


def _every_candidate_approved(e: ApprovalElection) -> bool:
    return all(e.supporter_masks)


def _blocks(e: ApprovalElection, prefix: list[int]) -> tuple[list[int], list[int]]:
    """Recover the ``k`` disjoint voter blocks behind a non-justifying greedy prefix.

    Returns block candidates ``c_1..c_k`` and the matching voter bitsets.
    When ``k - 1`` greedy steps leave a cohesive group of ``ceil(n/k)``
    unrepresented voters, each step must have covered exactly ``n/k`` fresh
    voters and the leftovers share one candidate.  Anything else is a bug.
    """
    masks = e.supporter_masks
    uncovered = e.all_voters
    blocks = []
    for c in prefix:
        blocks.append(masks[c] & uncovered)
        uncovered &= ~masks[c]
    counts = [popcount(mask & uncovered) for mask in masks]
    last = max(range(e.m), key=counts.__getitem__)
    size = ceil_div(e.n, e.k)
    if e.n % e.k or any(popcount(b) != size for b in blocks) or counts[last] != size or popcount(uncovered) != size:
        raise AssertionError("greedy trace does not have the k disjoint n/k blocks shape")
    blocks.append(uncovered)
    return [*prefix, last], blocks


def jr_committees_constructive(e: ApprovalElection) -> list[CandidateSet]:
    """At least ``m - k + 1`` distinct JR committees, built from a GreedyCC prefix.

    Requires every candidate to be approved by some voter.
    """
    if not _every_candidate_approved(e):
        raise PreconditionError("every candidate must be approved by at least one voter")
    prefix = greedy_cc_sequence(e, e.k - 1)
    if is_justifying(e, prefix):
        base = candidate_set(prefix)
        # greedy may stop early once everybody is represented
        base = candidate_set([*base, *[c for c in range(e.m) if c not in base][: e.k - 1 - len(base)]])
        return [candidate_set([*base, c]) for c in range(e.m) if c not in base]
    heads, blocks = _blocks(e, prefix)
    out = [candidate_set(heads)]
    masks = e.supporter_masks
    for c in range(e.m):
        if c in heads:
            continue
        i = next(j for j, b in enumerate(blocks) if masks[c] & b)
        out.append(candidate_set([c, *heads[:i], *heads[i + 1 :]]))
    return out


def committee_both_genders(e: ApprovalElection, genders: GenderAssignment | None = None) -> CandidateSet:
    """A JR committee with at least one member of each gender.

    Requires ``k >= 2`` and, for each gender, a candidate approved by some voter.
    """
    genders = genders or e.genders
    if genders is None:
        raise PreconditionError("a gender assignment is required")
    masks = e.supporter_masks
    approved = {g: [c for c in genders.of(g) if masks[c]] for g in "MF"}
    if not approved["M"] or not approved["F"]:
        raise PreconditionError("each gender needs a candidate approved by some voter")
    if e.k < 2:
        raise PreconditionError("a one-seat committee cannot contain both genders")

    prefix = greedy_cc_sequence(e, e.k - 1)
    if is_justifying(e, prefix):
        chosen = list(prefix)
        present = {genders[c] for c in chosen}
        for g in "MF":
            if g not in present:
                chosen.append(approved[g][0])
                present.add(g)
        chosen += [c for c in range(e.m) if c not in chosen][: e.k - len(chosen)]
        return candidate_set(chosen)

    heads, blocks = _blocks(e, prefix)
    present = {genders[c] for c in heads}
    if present == {"M", "F"}:
        return candidate_set(heads)
    (only,) = present
    missing = "F" if only == "M" else "M"
    c = approved[missing][0]
    i = next(j for j, b in enumerate(blocks) if masks[c] & b)
    return candidate_set([c, *heads[:i], *heads[i + 1 :]])


def min_imbalance_heuristic(e: ApprovalElection, genders: GenderAssignment | None = None) -> CandidateSet:
    """Extend the smaller greedy justifying group to a committee of least imbalance.

    Only optimal relative to the chosen group, not over all JR committees.
    """
    genders = genders or e.genders
    if genders is None:
        raise PreconditionError("a gender assignment is required")
    by_cc = greedy_cc(e)
    by_cand = greedy_candidate(e)
    g = by_cc if len(by_cc) < len(by_cand) else by_cand
    return extend_to_committee(e, g, FillPolicy.GENDER_BALANCE, genders)


def imbalance_floor(e: ApprovalElection, g: Iterable[int], genders: GenderAssignment) -> int:
    """Least imbalance reachable by padding ``g`` to ``k`` members."""
    g = candidate_set(g)
    surplus = sum(1 if genders[c] == "M" else -1 for c in g)
    outside = [c for c in range(e.m) if c not in set(g)]
    spare_m = sum(1 for c in outside if genders[c] == "M")
    spare_f = len(outside) - spare_m
    free = e.k - len(g)
    lo, hi = max(0, free - spare_f), min(free, spare_m)
    return min(abs(surplus + 2 * x - free) for x in range(lo, hi + 1))

