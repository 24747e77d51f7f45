"""Approval elections, the ``.appr`` file format, and justifying-group checks.

Candidate sets (justifying groups, committees) are plain tuples of candidate
indices in strictly increasing order; :func:`candidate_set` normalizes any
iterable into that form.  Voter sets are Python ints used as bitsets, bit
``i`` standing for voter ``i``.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

CandidateSet = tuple[int, ...]

BRUTEFORCE_MAX_VOTERS = 20
SUBSET_CROSSCHECK_MAX_VOTERS = 12


class ParseError(ValueError):
    """Malformed election, tree, or interval file."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyBallotWarning(UserWarning):
    pass


class InstanceTooLarge(ValueError):
    """An exhaustive routine was called outside its size guard."""


def candidate_set(members: Iterable[int]) -> CandidateSet:
    return tuple(sorted(set(int(c) for c in members)))


def popcount(mask: int) -> int:
    return mask.bit_count()


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)


@dataclass(frozen=True)
class GenderAssignment:
    """One ``'M'``/``'F'`` label per candidate."""

    labels: str

    def __post_init__(self):
        bad = set(self.labels) - {"M", "F"}
        if bad:
            raise ValueError(f"gender labels must be M or F, got {sorted(bad)}")

    def __len__(self) -> int:
        return len(self.labels)

    def __getitem__(self, c: int) -> str:
        return self.labels[c]

    def of(self, label: str) -> CandidateSet:
        return tuple(c for c, g in enumerate(self.labels) if g == label)


@dataclass(frozen=True)
class ApprovalElection:
    """Approval ballots of ``n`` voters over ``m`` candidates, committee size ``k``.

    ``ballots[i]`` is voter ``i``'s approval set as a sorted tuple.  Empty
    ballots are allowed; such voters never belong to a cohesive group.
    """

    n: int
    m: int
    k: int
    ballots: tuple[tuple[int, ...], ...]
    genders: GenderAssignment | None = field(default=None)

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError(f"need n >= 1 and m >= 1, got n={self.n}, m={self.m}")
        if not 1 <= self.k <= self.m:
            raise ValueError(f"need 1 <= k <= m, got k={self.k}, m={self.m}")
        if len(self.ballots) != self.n:
            raise ValueError(f"expected {self.n} ballots, got {len(self.ballots)}")
        for i, ballot in enumerate(self.ballots):
            if any(b <= a for a, b in zip(ballot, ballot[1:])):
                raise ValueError(f"ballot {i} is not strictly increasing: {ballot}")
            if ballot and not (0 <= ballot[0] and ballot[-1] < self.m):
                raise ValueError(f"ballot {i} has a candidate index out of range: {ballot}")
        if self.genders is not None and len(self.genders) != self.m:
            raise ValueError(f"expected {self.m} gender labels, got {len(self.genders)}")

    @classmethod
    def from_ballots(
        cls,
        ballots: Iterable[Iterable[int]],
        m: int,
        k: int,
        genders: GenderAssignment | str | None = None,
    ) -> "ApprovalElection":
        normalized = tuple(candidate_set(b) for b in ballots)
        if isinstance(genders, str):
            genders = GenderAssignment(genders)
        return cls(len(normalized), m, k, normalized, genders)

    @classmethod
    def from_matrix(cls, matrix, k: int, genders=None) -> "ApprovalElection":
        """Build from an ``n x m`` 0/1 approval matrix."""
        matrix = np.asarray(matrix, dtype=bool)
        n, m = matrix.shape
        cols = np.nonzero(matrix)[1].tolist()
        ends = np.cumsum(matrix.sum(axis=1)).tolist()
        ballots = tuple(tuple(cols[a:b]) for a, b in zip([0, *ends], ends))
        if isinstance(genders, str):
            genders = GenderAssignment(genders)
        return cls(n, m, k, ballots, genders)

    def to_matrix(self) -> np.ndarray:
        out = np.zeros((self.n, self.m), dtype=bool)
        for i, ballot in enumerate(self.ballots):
            out[i, list(ballot)] = True
        return out

    @property
    def ell(self) -> int:
        """Largest tolerated number of unrepresented supporters, ``ceil(n/k) - 1``."""
        return ceil_div(self.n, self.k) - 1

    @property
    def quota(self) -> int:
        """Smallest cohesive-group size that must be represented, ``ceil(n/k)``."""
        return ceil_div(self.n, self.k)

    @cached_property
    def supporter_masks(self) -> tuple[int, ...]:
        masks = [0] * self.m
        for i, ballot in enumerate(self.ballots):
            bit = 1 << i
            for c in ballot:
                masks[c] |= bit
        return tuple(masks)

    @cached_property
    def all_voters(self) -> int:
        return (1 << self.n) - 1

    def supporters(self, c: int) -> frozenset[int]:
        """The set of voters approving candidate ``c``."""
        mask = self.supporter_masks[c]
        return frozenset(i for i in range(self.n) if mask >> i & 1)

    def covered_mask(self, w: Iterable[int]) -> int:
        """Bitset of voters approving at least one member of ``w``."""
        mask = 0
        for c in w:
            mask |= self.supporter_masks[c]
        return mask


# ---------------------------------------------------------------------------
# File format


def parse_election(text: str) -> ApprovalElection:
    """Parse the ``.appr`` format.

    Line 1 is ``n m k``; an optional ``genders`` line follows; then one ballot
    per line as increasing 0-based indices.  ``#`` lines are comments.
    """
    header = None
    genders = None
    ballots: list[tuple[int, ...]] = []
    lines = text.splitlines()
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if line.startswith("#"):
            continue
        if header is None:
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ParseError("header must be 'n m k'", lineno)
            try:
                n, m, k = (int(p) for p in parts)
            except ValueError:
                raise ParseError(f"non-integer header {line!r}", lineno) from None
            if n < 1 or m < 1 or k < 1:
                raise ParseError("n, m, k must be positive", lineno)
            if k > m:
                raise ParseError(f"k={k} exceeds m={m}", lineno)
            header = (n, m, k)
            continue
        n, m, k = header
        if genders is None and not ballots and line.startswith("genders"):
            parts = line.split()
            if len(parts) != 2 or parts[0] != "genders":
                raise ParseError("gender line must be 'genders <labels>'", lineno)
            if len(parts[1]) != m:
                raise ParseError(f"expected {m} gender labels, got {len(parts[1])}", lineno)
            try:
                genders = GenderAssignment(parts[1])
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
            continue
        if len(ballots) == n:
            if line:
                raise ParseError(f"more than {n} ballots", lineno)
            continue
        try:
            ballot = tuple(int(p) for p in line.split())
        except ValueError:
            raise ParseError(f"non-integer ballot entry in {line!r}", lineno) from None
        for c in ballot:
            if not 0 <= c < m:
                raise ParseError(f"candidate index {c} out of range 0..{m - 1}", lineno)
        if any(b <= a for a, b in zip(ballot, ballot[1:])):
            raise ParseError("ballot indices must be strictly increasing", lineno)
        if not ballot:
            warnings.warn(f"line {lineno}: empty ballot", EmptyBallotWarning, stacklevel=2)
        ballots.append(ballot)
    if header is None:
        raise ParseError("missing header", len(lines) or 1)
    n, m, k = header
    if len(ballots) != n:
        raise ParseError(f"expected {n} ballots, found {len(ballots)}", len(lines))
    return ApprovalElection(n, m, k, tuple(ballots), genders)


def serialize_election(e: ApprovalElection) -> str:
    lines = [f"{e.n} {e.m} {e.k}"]
    if e.genders is not None:
        lines.append(f"genders {e.genders.labels}")
    lines.extend(" ".join(map(str, ballot)) for ballot in e.ballots)
    return "\n".join(lines) + "\n"


def read_election(path) -> ApprovalElection:
    with open(path, encoding="utf-8") as fh:
        return parse_election(fh.read())


def write_election(e: ApprovalElection, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_election(e))


# ---------------------------------------------------------------------------
# Verification


def _check_candidate(e: ApprovalElection, c: int) -> None:
    if not 0 <= c < e.m:
        raise IndexError(f"candidate {c} out of range 0..{e.m - 1}")


def uncovered_supporters(e: ApprovalElection, w: Iterable[int], c: int) -> int:
    """Number of voters approving ``c`` but no member of ``w``."""
    _check_candidate(e, c)
    w = list(w)
    for member in w:
        _check_candidate(e, member)
    return popcount(e.supporter_masks[c] & ~e.covered_mask(w))


def deficiencies(e: ApprovalElection, w: Iterable[int]) -> list[int]:
    uncovered = e.all_voters & ~e.covered_mask(w)
    return [popcount(mask & uncovered) for mask in e.supporter_masks]


def is_justifying(e: ApprovalElection, w: Iterable[int]) -> bool:
    """True iff every candidate has at most ``ell`` supporters left unrepresented by ``w``.

    The largest unrepresented cohesive group sharing candidate ``c`` is exactly
    the set of unrepresented voters approving ``c``, so this is the JR test
    without the size requirement.
    """
    uncovered = e.all_voters & ~e.covered_mask(w)
    ell = e.ell
    return all(popcount(mask & uncovered) <= ell for mask in e.supporter_masks)


def is_jr_committee(e: ApprovalElection, w: Sequence[int]) -> bool:
    w = candidate_set(w)
    return len(w) == e.k and is_justifying(e, w)


def is_justifying_bruteforce(e: ApprovalElection, w: Iterable[int]) -> bool:
    """Reference check straight from the cohesive-group definition.

    Works on ballots rather than bitsets and compares group sizes as
    ``|N'| * k >= n``.  For ``n <= 12`` it also enumerates every voter subset
    of size ``ceil(n/k)`` and raises ``AssertionError`` if the two views
    disagree.
    """
    if e.n > BRUTEFORCE_MAX_VOTERS:
        raise InstanceTooLarge(f"brute-force check needs n <= {BRUTEFORCE_MAX_VOTERS}, got {e.n}")
    w = set(w)
    unrepresented = [i for i, ballot in enumerate(e.ballots) if not w.intersection(ballot)]

    def large(size: int) -> bool:
        return size * e.k >= e.n

    verdict = True
    for c in range(e.m):
        group = [i for i in unrepresented if c in e.ballots[i]]
        if large(len(group)):
            verdict = False
            break

    if e.n <= SUBSET_CROSSCHECK_MAX_VOTERS:
        size = next(s for s in range(e.n + 1) if large(s))
        blocked = False
        for group in itertools.combinations(unrepresented, size):
            common = set(e.ballots[group[0]]) if group else set(range(e.m))
            for i in group[1:]:
                common &= set(e.ballots[i])
            if common:
                blocked = True
                break
        if blocked == verdict:
            raise AssertionError("per-candidate and subset enumeration disagree")
    return verdict


def threshold_tau(p: float, k: int) -> int:
    """Predicted minimal justifying-group size under impartial culture.

    ``max(0, ceil(-log_{1-p}(k p)))``, i.e. the least ``s >= 0`` with
    ``p (1-p)^s <= 1/k``.  The log value is corrected by direct evaluation
    so float error never shifts the result by one.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    raw = -math.log(k * p) / math.log1p(-p)
    s = max(0, math.ceil(raw))

    def fits(t: int) -> bool:
        return p * (1.0 - p) ** t <= 1.0 / k

    while s > 0 and fits(s - 1):
        s -= 1
    while not fits(s):
        s += 1
    return s
