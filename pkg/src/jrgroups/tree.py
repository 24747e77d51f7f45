"""Tree representations, the exact tree algorithm, and interval (1D-VCR) models.

Interval arithmetic is done on :class:`fractions.Fraction` values so the
closed-interval approval rule and the nesting tests are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .election import ApprovalElection, CandidateSet, ParseError, candidate_set


@dataclass(frozen=True)
class RootedCandidateTree:
    """``parent[c]`` is the parent of candidate ``c``, ``None`` for the root."""

    parent: tuple[int | None, ...]

    def __post_init__(self):
        m = len(self.parent)
        roots = [c for c, p in enumerate(self.parent) if p is None]
        if len(roots) != 1:
            raise ValueError(f"expected exactly one root, found {len(roots)}")
        for c, p in enumerate(self.parent):
            if p is not None and not 0 <= p < m:
                raise ValueError(f"parent {p} of {c} out of range")
        # every node must reach the root
        for c in range(m):
            seen = 0
            node = c
            while self.parent[node] is not None:
                node = self.parent[node]
                seen += 1
                if seen > m:
                    raise ValueError(f"parent links from {c} contain a cycle")

    @classmethod
    def from_edges(cls, m: int, edges: Sequence[tuple[int, int]], root: int) -> "RootedCandidateTree":
        """Orient an undirected edge list away from ``root``."""
        adjacent: list[list[int]] = [[] for _ in range(m)]
        for a, b in edges:
            adjacent[a].append(b)
            adjacent[b].append(a)
        parent: list[int | None] = [None] * m
        seen = {root}
        stack = [root]
        while stack:
            node = stack.pop()
            for nxt in adjacent[node]:
                if nxt not in seen:
                    seen.add(nxt)
                    parent[nxt] = node
                    stack.append(nxt)
        if len(seen) != m or len(edges) != m - 1:
            raise ValueError("edges do not form a spanning tree")
        return cls(tuple(parent))

    @property
    def m(self) -> int:
        return len(self.parent)

    @cached_property
    def root(self) -> int:
        return self.parent.index(None)

    @cached_property
    def children(self) -> tuple[tuple[int, ...], ...]:
        kids: list[list[int]] = [[] for _ in range(self.m)]
        for c, p in enumerate(self.parent):
            if p is not None:
                kids[p].append(c)
        return tuple(tuple(k) for k in kids)

    @cached_property
    def depth(self) -> tuple[int, ...]:
        out = [0] * self.m
        for c in self._preorder:
            p = self.parent[c]
            if p is not None:
                out[c] = out[p] + 1
        return tuple(out)

    @cached_property
    def _preorder(self) -> tuple[int, ...]:
        order = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            order.append(node)
            stack.extend(reversed(self.children[node]))
        return tuple(order)

    def subtree(self, v: int) -> frozenset[int]:
        """Nodes of the subtree rooted at ``v``."""
        out = set()
        stack = [v]
        while stack:
            node = stack.pop()
            out.add(node)
            stack.extend(self.children[node])
        return frozenset(out)

    def reroot(self, root: int) -> "RootedCandidateTree":
        edges = [(c, p) for c, p in enumerate(self.parent) if p is not None]
        return RootedCandidateTree.from_edges(self.m, edges, root)


def validate_tree_representation(e: ApprovalElection, t: RootedCandidateTree) -> bool:
    """True iff every non-empty ballot induces a connected subgraph of ``t``."""
    if t.m != e.m:
        raise ValueError(f"tree has {t.m} candidates, election has {e.m}")
    for ballot in e.ballots:
        members = set(ballot)
        # a vertex set of a tree is connected iff it spans |S| - 1 tree edges
        inner = sum(1 for c in ballot if t.parent[c] in members)
        if members and inner != len(members) - 1:
            return False
    return True


class InvalidRepresentation(ValueError):
    pass


def solve_on_tree(e: ApprovalElection, t: RootedCandidateTree, check_invariants: bool = False) -> CandidateSet:
    """Smallest justifying group of an election with a tree representation.

    Repeatedly take a deepest node ``v`` whose current subtree contains the
    ballots of ``ceil(n/k)`` remaining voters sharing a candidate, add ``v``,
    then drop every voter approving something in that subtree along with the
    subtree itself.  Ties between equally deep nodes go to the lowest index.
    """
    if not validate_tree_representation(e, t):
        raise InvalidRepresentation("ballots do not form subtrees of the given tree")
    quota = e.quota
    ballots = [frozenset(b) for b in e.ballots]
    active = {i for i, b in enumerate(ballots) if b}
    alive = set(range(e.m))
    chosen: list[int] = []
    order = sorted(range(e.m), key=lambda c: (-t.depth[c], c))
    subtrees = [t.subtree(c) for c in range(e.m)]
    while True:
        pick = None
        for v in order:
            if v not in alive:
                continue
            inside = subtrees[v] & alive
            tally: dict[int, int] = {}
            for i in active:
                if ballots[i] <= inside:
                    for c in ballots[i]:
                        tally[c] = tally.get(c, 0) + 1
            if tally and max(tally.values()) >= quota:
                pick = v
                break
        if pick is None:
            break
        removed = subtrees[pick] & alive
        chosen.append(pick)
        active = {i for i in active if not ballots[i] & removed}
        alive -= removed
        if check_invariants:
            deleted = frozenset(range(e.m)) - alive
            w = set(chosen)
            for b in ballots:
                assert b <= deleted or not b & deleted or b & w, "subtree deletion stranded a voter"
    return candidate_set(chosen)


# ---------------------------------------------------------------------------
# Interval models


def _exact(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class IntervalModel:
    """Centers and radii for voters and candidates on the real line."""

    voter_centers: tuple
    voter_radii: tuple
    candidate_centers: tuple
    candidate_radii: tuple

    def __post_init__(self):
        if len(self.voter_centers) != len(self.voter_radii):
            raise ValueError("voter centers and radii differ in length")
        if len(self.candidate_centers) != len(self.candidate_radii):
            raise ValueError("candidate centers and radii differ in length")
        if any(r < 0 for r in (*self.voter_radii, *self.candidate_radii)):
            raise ValueError("radii must be non-negative")

    @classmethod
    def from_intervals(cls, voters: Sequence[tuple], candidates: Sequence[tuple]) -> "IntervalModel":
        """Build from ``(left, right)`` endpoint pairs."""

        def split(pairs):
            centers, radii = [], []
            for lo, hi in pairs:
                lo, hi = _exact(lo), _exact(hi)
                if lo > hi:
                    raise ValueError(f"empty interval [{lo}, {hi}]")
                centers.append((lo + hi) / 2)
                radii.append((hi - lo) / 2)
            return tuple(centers), tuple(radii)

        vc, vr = split(voters)
        cc, cr = split(candidates)
        return cls(vc, vr, cc, cr)

    @property
    def n(self) -> int:
        return len(self.voter_centers)

    @property
    def m(self) -> int:
        return len(self.candidate_centers)

    @cached_property
    def voter_intervals(self) -> tuple[tuple[Fraction, Fraction], ...]:
        return tuple(
            (_exact(x) - _exact(r), _exact(x) + _exact(r))
            for x, r in zip(self.voter_centers, self.voter_radii)
        )

    @cached_property
    def candidate_intervals(self) -> tuple[tuple[Fraction, Fraction], ...]:
        return tuple(
            (_exact(x) - _exact(r), _exact(x) + _exact(r))
            for x, r in zip(self.candidate_centers, self.candidate_radii)
        )


def vcr_election(iv: IntervalModel, k: int) -> ApprovalElection:
    """Voter ``i`` approves ``c`` iff their closed intervals intersect."""
    ballots = []
    cands = iv.candidate_intervals
    for s_i, t_i in iv.voter_intervals:
        ballots.append(tuple(c for c, (s_c, t_c) in enumerate(cands) if s_c <= t_i and s_i <= t_c))
    return ApprovalElection(iv.n, iv.m, k, tuple(ballots))


def _nested(inner, outer) -> bool:
    """``inner`` lies in ``outer`` with at least one endpoint strictly inside."""
    return outer[0] <= inner[0] and inner[1] <= outer[1] and inner != outer


def vcr_to_tree(iv: IntervalModel) -> RootedCandidateTree:
    """Tree representation of an interval model.

    Unnested candidates form a path sorted by endpoints (level 0).  Every
    other candidate, outermost first, becomes a child of the deepest already
    placed node whose interval strictly contains its own, lowest index on ties.
    The tree is rooted at the first path node.
    """
    J = iv.candidate_intervals
    m = iv.m
    if m == 0:
        raise ValueError("interval model has no candidates")
    nested = [any(_nested(J[c], J[d]) for d in range(m) if d != c) for c in range(m)]
    path = sorted((c for c in range(m) if not nested[c]), key=lambda c: (J[c][0], J[c][1], c))
    parent: list[int | None] = [None] * m
    level = [0] * m
    for a, b in zip(path, path[1:]):
        parent[b] = a
    placed = list(path)
    pending = [c for c in range(m) if nested[c]]
    while pending:
        c = next(c for c in pending if not any(_nested(J[c], J[d]) for d in pending if d != c))
        hosts = [d for d in placed if _nested(J[c], J[d])]
        host = min(hosts, key=lambda d: (-level[d], d))
        parent[c] = host
        level[c] = level[host] + 1
        placed.append(c)
        pending.remove(c)
    tree = RootedCandidateTree(tuple(parent))
    return tree


# ---------------------------------------------------------------------------
# File formats


def parse_tree(text: str) -> RootedCandidateTree:
    """``.tree`` format: ``m`` then ``m`` lines of ``child parent`` (-1 for the root)."""
    rows = [(n, line.strip()) for n, line in enumerate(text.splitlines(), start=1)]
    rows = [(n, line) for n, line in rows if line and not line.startswith("#")]
    if not rows:
        raise ParseError("missing candidate count", 1)
    lineno, head = rows[0]
    try:
        m = int(head)
    except ValueError:
        raise ParseError(f"expected candidate count, got {head!r}", lineno) from None
    if len(rows) - 1 != m:
        raise ParseError(f"expected {m} node lines, found {len(rows) - 1}", rows[-1][0])
    parent: list[int | None] = [None] * m
    seen = set()
    for lineno, line in rows[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise ParseError("node line must be 'child parent'", lineno)
        try:
            child, par = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer node line {line!r}", lineno) from None
        if not 0 <= child < m or not -1 <= par < m:
            raise ParseError("node index out of range", lineno)
        if child in seen:
            raise ParseError(f"candidate {child} listed twice", lineno)
        seen.add(child)
        parent[child] = None if par == -1 else par
    try:
        return RootedCandidateTree(tuple(parent))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def serialize_tree(t: RootedCandidateTree) -> str:
    lines = [str(t.m)]
    lines.extend(f"{c} {-1 if p is None else p}" for c, p in enumerate(t.parent))
    return "\n".join(lines) + "\n"


def parse_vcr(text: str) -> IntervalModel:
    """``.vcr`` format: ``n m`` then ``n`` voter and ``m`` candidate lines of ``x r``."""
    rows = [(n, line.strip()) for n, line in enumerate(text.splitlines(), start=1)]
    rows = [(n, line) for n, line in rows if line and not line.startswith("#")]
    if not rows:
        raise ParseError("missing header", 1)
    lineno, head = rows[0]
    try:
        n, m = (int(p) for p in head.split())
    except ValueError:
        raise ParseError(f"header must be 'n m', got {head!r}", lineno) from None
    if len(rows) - 1 != n + m:
        raise ParseError(f"expected {n + m} agent lines, found {len(rows) - 1}", rows[-1][0])
    centers, radii = [], []
    for lineno, line in rows[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise ParseError("agent line must be 'x r'", lineno)
        try:
            x, r = _parse_number(parts[0]), _parse_number(parts[1])
        except (ValueError, OverflowError, ZeroDivisionError):
            raise ParseError(f"non-numeric agent line {line!r}", lineno) from None
        if r < 0:
            raise ParseError("negative radius", lineno)
        centers.append(x)
        radii.append(r)
    return IntervalModel(tuple(centers[:n]), tuple(radii[:n]), tuple(centers[n:]), tuple(radii[n:]))


def _parse_number(token: str) -> Fraction:
    # decimals are read as binary64 so float-valued models round-trip exactly
    if "/" in token:
        return Fraction(token)
    return Fraction(float(token))


def _decimal(x) -> str:
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        # only emit Fractions that round-trip through float exactly
        if Fraction(float(x)) == x:
            return repr(float(x))
        return f"{x.numerator}/{x.denominator}"
    return repr(float(x))


def serialize_vcr(iv: IntervalModel) -> str:
    lines = [f"{iv.n} {iv.m}"]
    for x, r in zip(iv.voter_centers + iv.candidate_centers, iv.voter_radii + iv.candidate_radii):
        lines.append(f"{_decimal(x)} {_decimal(r)}")
    return "\n".join(lines) + "\n"
