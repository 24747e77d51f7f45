from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jrgroups import (
    ApprovalElection,
    IntervalModel,
    RootedCandidateTree,
    exact_min_bruteforce,
    solve_on_tree,
    validate_tree_representation,
    vcr_election,
    vcr_to_tree,
)
from jrgroups.election import ParseError
from jrgroups.generators import fixture_ptr_star, fixture_vcr_star, gen_euclid1d
from jrgroups.tree import InvalidRepresentation, parse_tree, parse_vcr, serialize_tree, serialize_vcr
import oracles

spans = st.tuples(st.integers(0, 12), st.integers(0, 4)).map(lambda p: (p[0], p[0] + p[1]))


@st.composite
def interval_models(draw, max_n=20, max_m=8):
    voters = draw(st.lists(spans, min_size=1, max_size=max_n))
    cands = draw(st.lists(spans, min_size=1, max_size=max_m))
    return IntervalModel.from_intervals(voters, cands)


def contains(outer, inner):
    return outer[0] <= inner[0] and inner[1] <= outer[1]


class TestTreeType:
    def test_star(self):
        t = RootedCandidateTree((None, 0, 0, 0))
        assert t.root == 0 and t.depth == (0, 1, 1, 1)
        assert t.subtree(0) == frozenset(range(4)) and t.subtree(2) == frozenset({2})

    @pytest.mark.parametrize("parent", [(None, None), (1, 0), (None, 5), (None, 2, 1)])
    def test_rejects_bad_parents(self, parent):
        with pytest.raises(ValueError):
            RootedCandidateTree(parent)

    def test_from_edges_and_reroot(self):
        t = RootedCandidateTree.from_edges(3, [(1, 0), (0, 2)], root=1)
        assert t.parent == (1, None, 0)
        assert t.reroot(2).parent == (2, 0, None)

    def test_file_round_trip(self):
        t = RootedCandidateTree((2, 2, None, 1))
        assert parse_tree(serialize_tree(t)) == t
        assert serialize_tree(t) == "4\n0 2\n1 2\n2 -1\n3 1\n"

    @pytest.mark.parametrize("text", ["", "2\n0 -1\n", "2\n0 -1\n0 0\n", "2\n0 -1\n1 x\n", "2\n0 -1\n1 -1\n"])
    def test_bad_tree_files(self, text):
        with pytest.raises(ParseError):
            parse_tree(text)


class TestValidate:
    def test_star_fixture(self):
        e, _, star = fixture_vcr_star()
        assert validate_tree_representation(e, star)

    def test_disconnected_pair(self):
        path = RootedCandidateTree((1, None, 1))  # 0 - 1 - 2
        e = ApprovalElection.from_ballots([(0, 2)], 3, 1)
        assert not validate_tree_representation(e, path)
        assert validate_tree_representation(ApprovalElection.from_ballots([(0, 1, 2)], 3, 1), path)

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            validate_tree_representation(ApprovalElection.from_ballots([(0,)], 2, 1), RootedCandidateTree((None,)))

    def test_ptr_star_needs_the_centre(self):
        e, star = fixture_ptr_star()
        assert validate_tree_representation(e, star)
        assert not validate_tree_representation(e, RootedCandidateTree((None, 0, 1, 2)))


class TestSolve:
    def test_star_fixture(self):
        e, _, star = fixture_vcr_star()
        assert solve_on_tree(e, star) == (0,) == exact_min_bruteforce(e)

    def test_nothing_to_do(self):
        e = ApprovalElection.from_ballots([(0,), (1,), (2,)], 3, 1)
        assert solve_on_tree(e, RootedCandidateTree((None, 0, 1))) == ()

    def test_invalid_tree(self):
        e = ApprovalElection.from_ballots([(0, 2)], 3, 1)
        with pytest.raises(InvalidRepresentation):
            solve_on_tree(e, RootedCandidateTree((1, None, 1)))

    def test_ptr_star(self):
        e, star = fixture_ptr_star()
        assert len(solve_on_tree(e, star)) == len(exact_min_bruteforce(e))

    @given(interval_models(), st.integers(1, 8))
    def test_optimal_on_interval_models(self, iv, k):
        e = vcr_election(iv, min(k, iv.m))
        t = vcr_to_tree(iv)
        w = solve_on_tree(e, t, check_invariants=True)
        assert len(w) == oracles.min_justifying_size(e)

    def test_optimal_on_generated(self):
        for seed in range(40):
            e, iv = gen_euclid1d(50, 12, 5, 0.05 + 0.01 * seed, seed)
            w = solve_on_tree(e, vcr_to_tree(iv), check_invariants=True)
            assert len(w) == len(exact_min_bruteforce(e))

    def test_any_root_works(self):
        e, iv = gen_euclid1d(30, 8, 4, 0.15, 3)
        t = vcr_to_tree(iv)
        sizes = {len(solve_on_tree(e, t.reroot(r))) for r in range(e.m)}
        assert sizes == {len(exact_min_bruteforce(e))}


class TestIntervals:
    def test_fixture_ballots(self):
        e, iv, _ = fixture_vcr_star()
        assert vcr_election(iv, 4) == e

    def test_point_voter_at_centre(self):
        iv = IntervalModel((Fraction(1, 2),), (0,), (Fraction(1, 2),), (Fraction(1, 4),))
        assert vcr_election(iv, 1).ballots == ((0,),)

    def test_touching_endpoints_approve(self):
        iv = IntervalModel.from_intervals([(0, 1)], [(1, 2), (Fraction(3, 2), 2)])
        assert vcr_election(iv, 1).ballots == ((0,),)

    def test_star_conversion(self):
        _, iv, star = fixture_vcr_star()
        assert vcr_to_tree(iv) == star

    def test_unnested_become_a_path(self):
        iv = IntervalModel.from_intervals([(0, 0)], [(4, 6), (0, 2), (2, 5), (1, 3)])
        assert vcr_to_tree(iv).parent == (2, None, 3, 1)

    def test_duplicates_are_adjacent_on_the_path(self):
        iv = IntervalModel.from_intervals([(0, 0)], [(1, 2), (0, 1), (1, 2)])
        assert vcr_to_tree(iv).parent == (1, None, 0)

    def test_attaches_to_the_deepest_container(self):
        iv = IntervalModel.from_intervals([(0, 0)], [(0, 10), (1, 9), (2, 3), (0, 9)])
        # 3 sits inside 0, 1 inside 3, 2 inside 1
        assert vcr_to_tree(iv).parent == (None, 3, 1, 0)

    @given(interval_models())
    def test_conversion_is_a_representation(self, iv):
        assert validate_tree_representation(vcr_election(iv, 1), vcr_to_tree(iv))

    @given(interval_models(), st.data())
    def test_nesting_monotonicity(self, iv, data):
        e = vcr_election(iv, 1)
        J = iv.candidate_intervals
        for ballot in e.ballots:
            for c in ballot:
                for d in range(iv.m):
                    if contains(J[d], J[c]):
                        assert d in ballot

    @given(interval_models())
    def test_intermediate_values(self, iv):
        e = vcr_election(iv, 1)
        J = iv.candidate_intervals
        for ballot in e.ballots:
            for a in ballot:
                for b in ballot:
                    if J[a][0] <= J[b][0] and J[a][1] <= J[b][1]:
                        for c in range(iv.m):
                            if J[a][0] <= J[c][0] <= J[b][0] and J[a][1] <= J[c][1] <= J[b][1]:
                                assert c in ballot

    def test_vcr_round_trip(self):
        _, iv = gen_euclid1d(10, 4, 2, 0.3, 1)
        assert parse_vcr(serialize_vcr(iv)) == iv
        exact = IntervalModel((Fraction(1, 3),), (Fraction(1, 7),), (0,), (1,))
        back = parse_vcr(serialize_vcr(exact))
        assert back.voter_intervals == exact.voter_intervals

    @pytest.mark.parametrize("text", ["", "1 1\n0 0\n", "1 1\n0 0\n0 -1\n", "1 1\n0 x\n0 1\n"])
    def test_bad_vcr_files(self, text):
        with pytest.raises(ParseError):
            parse_vcr(text)

    def test_negative_radius(self):
        with pytest.raises(ValueError):
            IntervalModel((0,), (-1,), (0,), (0,))
        with pytest.raises(ValueError):
            IntervalModel.from_intervals([(2, 1)], [(0, 1)])
