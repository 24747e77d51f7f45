"""Seeded random elections and the named fixture instances.

Randomness comes from numpy's PCG64 bit generator.  A stream is identified by
a master seed plus an integer key path: ``make_rng(seed, 3, 1, 17)`` is
``PCG64(SeedSequence(entropy=seed, spawn_key=(3, 1, 17)))``, so any trial's
stream is a pure function of ``(seed, key)`` and does not depend on which
other trials ran before it.
"""

from __future__ import annotations

import numpy as np

from .election import ApprovalElection, GenderAssignment
from .tree import IntervalModel, RootedCandidateTree

# points are drawn on a dyadic grid so coordinate differences are exact floats
_GRID_BITS = 32


def make_rng(seed, *key: int) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        if key:
            raise ValueError("cannot derive a keyed stream from a Generator")
        return seed
    seq = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(x) for x in key))
    return np.random.Generator(np.random.PCG64(seq))


def _check_size(n: int, m: int, k: int) -> None:
    if n < 1 or m < 1 or not 1 <= k <= m:
        raise ValueError(f"need n, m >= 1 and 1 <= k <= m, got n={n}, m={m}, k={k}")


def _unit_points(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.integers(0, 1 << _GRID_BITS, size=shape, dtype=np.uint64) / float(1 << _GRID_BITS)


def gen_ic(n: int, m: int, k: int, p: float, seed) -> ApprovalElection:
    """Impartial culture: every approval is an independent Bernoulli(p) draw."""
    _check_size(n, m, k)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    rng = make_rng(seed)
    # voter-major, candidate-minor
    return ApprovalElection.from_matrix(rng.random((n, m)) < p, k)


def gen_euclid1d(n: int, m: int, k: int, r: float, seed) -> tuple[ApprovalElection, IntervalModel]:
    """Uniform points on [0, 1]; approve iff ``|x_v - x_c| <= r``.

    The returned interval model gives every agent radius ``r / 2``, which
    induces exactly the same ballots.
    """
    _check_size(n, m, k)
    if r < 0:
        raise ValueError(f"radius must be non-negative, got {r}")
    rng = make_rng(seed)
    voters = _unit_points(rng, n)
    cands = _unit_points(rng, m)
    approves = np.abs(voters[:, None] - cands[None, :]) <= r
    e = ApprovalElection.from_matrix(approves, k)
    half = float(r) / 2
    model = IntervalModel(
        tuple(float(x) for x in voters),
        (half,) * n,
        tuple(float(x) for x in cands),
        (half,) * m,
    )
    return e, model


def gen_euclid2d(n: int, m: int, k: int, r: float, seed) -> ApprovalElection:
    """Uniform points in the unit square; approve iff Euclidean distance ``<= r``."""
    _check_size(n, m, k)
    if r < 0:
        raise ValueError(f"radius must be non-negative, got {r}")
    rng = make_rng(seed)
    voters = _unit_points(rng, (n, 2))
    cands = _unit_points(rng, (m, 2))
    diff = voters[:, None, :] - cands[None, :, :]
    approves = (diff**2).sum(axis=2) <= float(r) * float(r)
    return ApprovalElection.from_matrix(approves, k)


def avg_approvals(e: ApprovalElection) -> float:
    return sum(len(b) for b in e.ballots) / e.n


# ---------------------------------------------------------------------------
# Fixtures.  Candidate c_j of the worked examples is index j - 1.


def fixture_example1(k: int, m: int, block: int) -> ApprovalElection:
    """``k - 1`` disjoint blocks approving one candidate each; the last block
    approves every remaining candidate ``c_k..c_m``.  Exactly ``m - k + 1``
    JR committees exist."""
    if k < 1 or m < k or block < 1:
        raise ValueError("need 1 <= k <= m and block >= 1")
    ballots = []
    for j in range(k - 1):
        ballots.extend([(j,)] * block)
    ballots.extend([tuple(range(k - 1, m))] * block)
    return ApprovalElection.from_ballots(ballots, m, k)


def fixture_example2(k: int) -> ApprovalElection:
    """``n = k^2``, ``m = 2k``: GreedyCC needs ``k - 1`` candidates where
    ``{c_k}`` alone suffices."""
    if k < 3:
        raise ValueError(f"needs k >= 3, got {k}")
    ballots = []
    for j in range(k - 1):
        ballots.extend([(j,)] * (k - 1))
    for j in range(k - 1):
        ballots.append((j, k - 1))
    for j in range(k, 2 * k):
        ballots.append((j,))
    return ApprovalElection.from_ballots(ballots, 2 * k, k)


def fixture_example3(n: int) -> tuple[ApprovalElection, GenderAssignment]:
    """``n = k`` even; voters ``1..n-1`` each approve their own male candidate,
    voter ``n`` approves the ``n - 1`` female candidates.

    Males ``a_1..a_{n-1}`` are indices ``0..n-2``; females follow.
    """
    if n < 4 or n % 2:
        raise ValueError(f"needs an even n >= 4, got {n}")
    males = list(range(n - 1))
    females = list(range(n - 1, 2 * (n - 1)))
    ballots = [(a,) for a in males] + [tuple(females)]
    genders = GenderAssignment("M" * (n - 1) + "F" * (n - 1))
    return ApprovalElection.from_ballots(ballots, 2 * (n - 1), n, genders), genders


def fixture_vcr_star() -> tuple[ApprovalElection, IntervalModel, RootedCandidateTree]:
    """Four candidates a, b, c, d (indices 0..3) with intervals [0,5], [0,1],
    [2,3], [4,5]; voters use the same intervals.  Ballots are {a,b,c,d},
    {a,b}, {a,c}, {a,d}; the star centred at a is a tree representation."""
    spans = [(0, 5), (0, 1), (2, 3), (4, 5)]
    model = IntervalModel.from_intervals(spans, spans)
    ballots = [(0, 1, 2, 3), (0, 1), (0, 2), (0, 3)]
    star = RootedCandidateTree((None, 0, 0, 0))
    return ApprovalElection.from_ballots(ballots, 4, 4), model, star


def fixture_ptr_star() -> tuple[ApprovalElection, RootedCandidateTree]:
    """Ballots {a,b,c}, {a,b,d}, {a,c,d}: a star around a represents them,
    but no interval model does."""
    ballots = [(0, 1, 2), (0, 1, 3), (0, 2, 3)]
    star = RootedCandidateTree((None, 0, 0, 0))
    return ApprovalElection.from_ballots(ballots, 4, 3), star
