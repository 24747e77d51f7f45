from itertools import combinations

import numpy as np
import pytest
from hypothesis import given

from conftest import elections, random_ic
from jrgroups import (
    ApprovalElection,
    FillPolicy,
    GenderAssignment,
    PreconditionError,
    committee_both_genders,
    extend_to_committee,
    imbalance,
    is_jr_committee,
    jr_committees_constructive,
    min_imbalance_heuristic,
)
from jrgroups.committee import imbalance_floor
from jrgroups.generators import fixture_example1, fixture_example2, fixture_example3
from jrgroups.greedy import greedy_candidate, greedy_cc
import oracles


def random_genders(rng, m):
    return GenderAssignment("".join(rng.choice(["M", "F"], size=m)))


class TestExtend:
    def test_example2_lowest_index(self):
        e = fixture_example2(10)
        w = extend_to_committee(e, (9,))
        assert w == tuple(range(10)) and is_jr_committee(e, w)

    def test_full_group_unchanged(self):
        e = fixture_example1(5, 8, 4)
        assert extend_to_committee(e, (0, 1, 2, 3, 4)) == (0, 1, 2, 3, 4)

    def test_balanced_fill(self):
        e = ApprovalElection.from_ballots([(c,) for c in range(12)], 12, 10)
        genders = GenderAssignment("MMMMFFFFFFMM")
        g = (0, 1, 2, 3)
        w = extend_to_committee(e, g, FillPolicy.GENDER_BALANCE, genders)
        assert len(w) == 10 and imbalance(w, genders) == 0 and set(g) <= set(w)

    def test_preconditions(self):
        e = fixture_example2(4)
        with pytest.raises(PreconditionError):
            extend_to_committee(e, (0,))
        with pytest.raises(PreconditionError):
            extend_to_committee(e, tuple(range(5)))
        with pytest.raises(PreconditionError):
            extend_to_committee(e, (3,), "gender_balance")

    @given(elections(max_n=15, max_m=8))
    def test_always_jr(self, e):
        w = extend_to_committee(e, greedy_cc(e))
        assert is_jr_committee(e, w)


class TestImbalance:
    def test_example3(self):
        _, genders = fixture_example3(8)
        assert imbalance((0, 1, 2, 3, 7, 8, 9, 10), genders) == 0
        assert imbalance((*range(7), 7), genders) == 6
        assert imbalance(range(7), genders) == 7


class TestConstructive:
    def test_example1_matches_enumeration(self):
        e = fixture_example1(5, 8, 4)
        out = jr_committees_constructive(e)
        assert set(out) == oracles.jr_committees(e) and len(out) == 4

    def test_m_equals_k(self):
        e = ApprovalElection.from_ballots([(0,), (1,), (2,)], 3, 3)
        assert jr_committees_constructive(e) == [(0, 1, 2)]

    def test_needs_every_candidate_approved(self):
        with pytest.raises(PreconditionError):
            jr_committees_constructive(ApprovalElection.from_ballots([(0,)], 2, 1))

    def test_random_instances(self):
        rng = np.random.default_rng(9)
        seen = 0
        while seen < 100:
            e = random_ic(rng, 40, 12, 4, 0.4)
            if not all(e.supporter_masks):
                continue
            seen += 1
            out = jr_committees_constructive(e)
            assert len(set(out)) == len(out) >= e.m - e.k + 1
            assert all(is_jr_committee(e, w) for w in out)

    @given(elections(max_n=12, max_m=7))
    def test_any_instance(self, e):
        if not all(e.supporter_masks):
            return
        out = jr_committees_constructive(e)
        assert len(set(out)) == len(out) >= e.m - e.k + 1
        assert set(out) <= oracles.jr_committees(e)


class TestBothGenders:
    def test_example3(self):
        e, genders = fixture_example3(8)
        w = committee_both_genders(e)
        assert is_jr_committee(e, w) and set(range(7)) <= set(w)
        assert imbalance(w, genders) == 6

    def test_mixed_justifying_prefix(self):
        # the k-1 prefix is justifying and already mixed: pad with the lowest index
        e = ApprovalElection.from_ballots([(0,), (0,), (1,), (1,)], 5, 3, "MFMFM")
        assert committee_both_genders(e) == (0, 1, 2)

    def test_preconditions(self):
        e = ApprovalElection.from_ballots([(0,)], 2, 2, "MF")
        with pytest.raises(PreconditionError):
            committee_both_genders(e)
        with pytest.raises(PreconditionError):
            committee_both_genders(ApprovalElection.from_ballots([(0, 1)], 2, 1, "MF"))
        with pytest.raises(PreconditionError):
            committee_both_genders(ApprovalElection.from_ballots([(0,)], 2, 1))

    def test_block_swap(self):
        # two blocks of two voters each; the block heads are both male
        e = ApprovalElection.from_ballots([(0,), (0, 3), (1,), (1,)], 4, 2, "MMMF")
        w = committee_both_genders(e)
        assert w == (1, 3) and is_jr_committee(e, w)

    def test_random_instances(self):
        rng = np.random.default_rng(17)
        seen = 0
        while seen < 200:
            m = int(rng.integers(4, 13))
            e = random_ic(rng, int(rng.integers(4, 30)), m, int(rng.integers(2, m + 1)), rng.uniform(0.05, 0.5))
            genders = random_genders(rng, m)
            if not any(e.supporter_masks[c] for c in genders.of("M")) or not any(
                e.supporter_masks[c] for c in genders.of("F")
            ):
                continue
            seen += 1
            w = committee_both_genders(e, genders)
            assert is_jr_committee(e, w)
            assert {genders[c] for c in w} == {"M", "F"}
            assert imbalance(min_imbalance_heuristic(e, genders), genders) <= imbalance(w, genders)


class TestHeuristic:
    def test_example3(self):
        e, genders = fixture_example3(8)
        w = min_imbalance_heuristic(e)
        assert is_jr_committee(e, w) and imbalance(w, genders) == 6

    def test_parity_when_nothing_is_deficient(self):
        e = ApprovalElection.from_ballots([(0,), (1,), (2,)], 5, 3, "MFMFM")
        w = min_imbalance_heuristic(e)
        assert imbalance(w, e.genders) == 1

    def test_small_group_balances(self):
        rng = np.random.default_rng(23)
        tested = 0
        while tested < 50:
            e = random_ic(rng, 40, 40, 8, 0.3)
            genders = random_genders(rng, 40)
            g = min(greedy_cc(e), greedy_candidate(e), key=len)
            if len(g) > 4 or min(len(genders.of("M")), len(genders.of("F"))) < 8:
                continue
            tested += 1
            assert imbalance(min_imbalance_heuristic(e, genders), genders) == 0

    @given(elections(max_n=15, max_m=9))
    def test_reaches_the_floor(self, e):
        genders = GenderAssignment("".join("MF"[c % 2] for c in range(e.m)))
        w = min_imbalance_heuristic(e, genders)
        by_cc, by_cand = greedy_cc(e), greedy_candidate(e)
        g = by_cc if len(by_cc) < len(by_cand) else by_cand
        assert is_jr_committee(e, w)
        assert imbalance(w, genders) == imbalance_floor(e, g, genders)
        outside = [c for c in range(e.m) if c not in g]
        best = min(imbalance((*g, *extra), genders) for extra in combinations(outside, e.k - len(g)))
        assert imbalance(w, genders) == best
