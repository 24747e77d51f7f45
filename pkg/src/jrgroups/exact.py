"""Smallest justifying groups: certified branch-and-bound and exhaustive references."""

from __future__ import annotations

import itertools
import math

import numpy as np

from .election import (
    ApprovalElection,
    CandidateSet,
    InstanceTooLarge,
    candidate_set,
    is_justifying,
    popcount,
)
from .greedy import greedy_candidate, greedy_cc

DEFAULT_NODE_BUDGET = 200_000
BRUTEFORCE_MAX_CANDIDATES = 20
QUASI_MAX_VOTERS = 18
COUNT_MAX_COMMITTEES = 10**7


class BudgetExceeded(RuntimeError):
    """The search ran out of nodes before certifying optimality.

    ``best`` is the smallest justifying group known (an upper bound) and
    ``lower_bound`` the size below which no justifying group exists.
    """

    def __init__(self, best: CandidateSet, lower_bound: int, nodes: int):
        self.best = best
        self.lower_bound = lower_bound
        self.nodes = nodes
        super().__init__(
            f"node budget exhausted after {nodes} nodes; optimum in "
            f"[{lower_bound}, {len(best)}], best known {list(best)}"
        )


class _Search:
    def __init__(self, e: ApprovalElection, budget: int):
        self.e = e
        self.ell = e.ell
        self.approvals = e.to_matrix().astype(np.int32)
        self.budget = budget
        self.nodes = 0

    def _state(self, uncovered: np.ndarray):
        rows = self.approvals[uncovered]
        counts = rows.sum(axis=0)
        overlap = rows.T @ rows
        return counts, overlap

    def lower_bound(self, counts, overlap, allowed: np.ndarray) -> int | None:
        """Fewest further picks that could clear every excess; ``None`` if impossible."""
        excess = np.maximum(counts - self.ell, 0)
        deficient = np.flatnonzero(excess)
        if deficient.size == 0:
            return 0
        if not allowed.any():
            return None
        sub = overlap[np.ix_(deficient, np.flatnonzero(allowed))]
        # per deficient candidate: best-case number of picks to remove its excess
        ranked = -np.sort(-sub, axis=1)
        reach = np.cumsum(ranked, axis=1)
        need_each = excess[deficient]
        if (reach[:, -1] < need_each).any():
            return None
        per_candidate = int((reach < need_each[:, None]).sum(axis=1).max()) + 1
        # potential bound: no pick lowers the total excess by more than the best utility now
        after = np.maximum(counts[deficient, None] - sub - self.ell, 0)
        utility = (need_each[:, None] - after).sum(axis=0)
        best_u = int(utility.max())
        if best_u == 0:
            return None
        by_potential = math.ceil(int(need_each.sum()) / best_u)
        return max(per_candidate, by_potential)

    def dfs(self, uncovered, allowed, chosen: list[int], target: int) -> list[int] | None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise _OutOfBudget
        counts, overlap = self._state(uncovered)
        bound = self.lower_bound(counts, overlap, allowed)
        if bound is None or len(chosen) + bound > target:
            return None
        excess = counts - self.ell
        if (excess <= 0).all():
            return chosen
        # branch on the deficient candidate hit by the fewest allowed candidates
        deficient = np.flatnonzero(excess > 0)
        hitters = (overlap[deficient] > 0) & allowed[None, :]
        pivot = deficient[int(np.argmin(hitters.sum(axis=1)))]
        options = np.flatnonzero((overlap[pivot] > 0) & allowed)
        allowed = allowed.copy()
        for c in options:
            allowed[c] = False
            found = self.dfs(
                uncovered & (self.approvals[:, c] == 0), allowed, chosen + [int(c)], target
            )
            if found is not None:
                return found
        return None


class _OutOfBudget(Exception):
    pass


def exact_min_justifying(e: ApprovalElection, node_budget: int = DEFAULT_NODE_BUDGET) -> CandidateSet:
    """Smallest justifying group by iterative deepening branch-and-bound.

    For each target size from a root lower bound up to one less than the best
    greedy solution, a depth-first search branches on which candidate
    represents some voter of a still-deficient candidate, trying candidates in
    index order and excluding earlier siblings from later branches.  A node is
    pruned when the remaining depth cannot clear the outstanding excess.

    Raises :class:`BudgetExceeded` rather than returning an uncertified answer.
    """
    if is_justifying(e, ()):
        return ()
    candidates = [greedy_candidate(e), greedy_cc(e)]
    best = min(candidates, key=len)
    search = _Search(e, node_budget)
    uncovered = np.ones(e.n, dtype=bool)
    allowed = np.ones(e.m, dtype=bool)
    counts, overlap = search._state(uncovered)
    root = search.lower_bound(counts, overlap, allowed)
    target = max(1, root)
    try:
        while target < len(best):
            found = search.dfs(uncovered, allowed, [], target)
            if found is not None:
                return candidate_set(found)
            target += 1
    except _OutOfBudget:
        raise BudgetExceeded(best, target, search.nodes) from None
    return best


def exact_min_bruteforce(e: ApprovalElection) -> CandidateSet:
    """First justifying subset in size-then-lexicographic order."""
    if e.m > BRUTEFORCE_MAX_CANDIDATES:
        raise InstanceTooLarge(f"brute force needs m <= {BRUTEFORCE_MAX_CANDIDATES}, got {e.m}")
    masks = e.supporter_masks
    ell = e.ell
    full = e.all_voters
    for size in range(e.m + 1):
        for w in itertools.combinations(range(e.m), size):
            covered = 0
            for c in w:
                covered |= masks[c]
            uncovered = full & ~covered
            if all(popcount(mask & uncovered) <= ell for mask in masks):
                return w
    raise AssertionError("the full candidate set is always justifying")


def quasi_poly_min(e: ApprovalElection) -> CandidateSet:
    """Smallest justifying group among greedy covers of every voter subset.

    For each subset of voters, greedily cover it with the candidate covering
    the most still-uncovered voters of the subset; keep the smallest resulting
    set that is justifying for the whole election.  Exponential in ``n``.
    """
    if e.n > QUASI_MAX_VOTERS:
        raise InstanceTooLarge(f"subset enumeration needs n <= {QUASI_MAX_VOTERS}, got {e.n}")
    if is_justifying(e, ()):
        return ()
    masks = e.supporter_masks
    voters = [i for i, ballot in enumerate(e.ballots) if ballot]
    best: CandidateSet | None = None
    verdicts: dict[CandidateSet, bool] = {}
    for r in range(1, len(voters) + 1):
        for subset in itertools.combinations(voters, r):
            target = 0
            for i in subset:
                target |= 1 << i
            chosen: list[int] = []
            while target:
                if best is not None and len(chosen) >= len(best) - 1:
                    chosen = []
                    break
                gains = [popcount(mask & target) for mask in masks]
                c = max(range(e.m), key=gains.__getitem__)
                chosen.append(c)
                target &= ~masks[c]
            if not chosen:
                continue
            w = candidate_set(chosen)
            ok = verdicts.get(w)
            if ok is None:
                ok = verdicts[w] = is_justifying(e, w)
            if ok and (best is None or len(w) < len(best)):
                best = w
                if len(best) == 1:
                    return best
    assert best is not None
    return best


def count_jr_committees(e: ApprovalElection) -> int:
    """Number of size-``k`` committees providing justified representation."""
    total = math.comb(e.m, e.k)
    if total > COUNT_MAX_COMMITTEES:
        raise InstanceTooLarge(f"C({e.m},{e.k}) = {total} exceeds {COUNT_MAX_COMMITTEES}")
    masks = e.supporter_masks
    ell = e.ell
    full = e.all_voters
    count = 0
    for w in itertools.combinations(range(e.m), e.k):
        covered = 0
        for c in w:
            covered |= masks[c]
        uncovered = full & ~covered
        if all(popcount(mask & uncovered) <= ell for mask in masks):
            count += 1
    return count
