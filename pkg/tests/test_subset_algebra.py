"""
Tests for subset-sum tables and the three-condition decision.
"""
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pushforward_convexity.core.errors import MeasureError, TooManyAtoms
from pushforward_convexity.core.subset_algebra import (
    CommonSumAssignment,
    ConvexDecision,
    LabelMismatch,
    NonconvexDecision,
    NonUniqueCouple,
    NotSigmaAlgebra,
    atom_blocks,
    check_condition_ii,
    check_condition_iii,
    common_sums,
    decide_disjoint,
    enumerate_sums,
    is_sigma_algebra,
)

F = Fraction


def fractions(*values):
    return [F(v) for v in values]


def normalized(counts):
    total = sum(counts)
    return [F(c, total) for c in counts]


weight_counts = st.lists(st.integers(1, 6), min_size=1, max_size=4)


class TestEnumerateSums:
    def test_halves(self):
        table = enumerate_sums(fractions("1/2", "1/2"))
        assert table.subsets(F(1, 2)) == ((0,), (1,))
        assert table.subsets(F(0)) == ((),)
        assert table.subsets(F(1)) == ((0, 1),)
        assert table.mass == 1
        assert table.universe == (0, 1)

    def test_every_subset_listed_once(self):
        table = enumerate_sums(fractions("1/6", "1/3", "1/2"))
        assert sum(len(s) for s in table.sums.values()) == 8
        assert table.subsets(F(1, 2)) == ((0, 1), (2,))

    def test_cap(self):
        with pytest.raises(TooManyAtoms) as info:
            enumerate_sums(fractions(1, 1, 1), max_atoms=2)
        assert (info.value.n, info.value.cap) == (3, 2)

    def test_nonpositive_weight(self):
        with pytest.raises(MeasureError):
            enumerate_sums(fractions("1/2", 0))

    def test_common_sums(self):
        alpha = enumerate_sums(fractions("1/2", "1/2"))
        beta = enumerate_sums(fractions("1/3", "2/3"))
        assert common_sums(alpha, beta) == [F(0), F(1)]

    def test_four_quarters(self):
        table = enumerate_sums([F(1, 4)] * 4)
        assert len(table.subsets(F(1, 2))) == 6

    @given(weight_counts)
    def test_complement_duality(self, counts):
        table = enumerate_sums(normalized(counts))
        for gamma, subsets in table.sums.items():
            complements = sorted(tuple(i for i in table.universe if i not in s) for s in subsets)
            assert tuple(complements) == table.subsets(table.mass - gamma)

    @given(weight_counts)
    def test_endpoints_unique(self, counts):
        table = enumerate_sums(normalized(counts))
        assert table.subsets(F(0)) == ((),)
        assert table.subsets(table.mass) == (table.universe,)


class TestDecideDisjoint:
    def test_two_halves_ambiguous_on_beta_side(self):
        decision = decide_disjoint(fractions("1/2", "1/2"), fractions("1/2", "1/2"))
        assert isinstance(decision, NonconvexDecision)
        violation = decision.violation
        assert isinstance(violation, NonUniqueCouple)
        assert violation.side == "beta"
        assert violation.gamma == F(1, 2)
        assert (violation.first, violation.second, violation.other) == ((0,), (1,), (0,))

    def test_alpha_side_ambiguity(self):
        decision = decide_disjoint(fractions("1/4", "1/4", "1/2"), fractions("1/4", "3/4"))
        violation = decision.violation
        assert (violation.side, violation.gamma) == ("alpha", F(1, 4))
        assert (violation.first, violation.second, violation.other) == ((0,), (1,), (0,))

    def test_coprime_uniform_is_trivial(self):
        decision = decide_disjoint([F(1, 2)] * 2, [F(1, 3)] * 3)
        assert isinstance(decision, ConvexDecision)
        assert decision.assignment.is_trivial

    def test_thirds_structured(self):
        decision = decide_disjoint(fractions("1/3", "2/3"), fractions("1/3", "2/3"))
        assert decision.convex
        assert decision.assignment.gammas == (F(0), F(1, 3), F(2, 3), F(1))
        assert decision.assignment.couple(F(1, 3)) == ((0,), (0,))

    def test_intersection_not_indexed(self):
        decision = decide_disjoint(fractions("1/10", "3/10", "3/5"), fractions("2/5", "1/10", "1/2"))
        violation = decision.violation
        assert isinstance(violation, NotSigmaAlgebra)
        assert (violation.side, violation.kind) == ("alpha", "intersection")
        assert (violation.first, violation.second) == ((0, 1), (1, 2))
        assert (violation.gamma1, violation.gamma2) == (F(2, 5), F(9, 10))

    def test_mass_mismatch(self):
        with pytest.raises(MeasureError):
            decide_disjoint(fractions(1), fractions("1/2"))


class TestHandBuiltAssignments:
    def test_missing_endpoint(self):
        assignment = CommonSumAssignment(((F(0), (), ()), (F(1, 2), (0,), (0,))), 2, 2)
        violation = check_condition_ii(assignment)
        assert (violation.side, violation.kind, violation.first) == ("alpha", "endpoint", (0, 1))

    def test_missing_complement(self):
        assignment = CommonSumAssignment(
            ((F(0), (), ()), (F(1, 3), (0,), (0,)), (F(1), (0, 1), (0, 1))), 2, 2)
        violation = check_condition_ii(assignment)
        assert violation.kind == "complement"
        assert (violation.first, violation.second, violation.gamma1) == ((0,), (1,), F(1, 3))

    def test_crossed_labels(self):
        assignment = CommonSumAssignment((
            (F(0), (), ()),
            (F(1, 7), (0,), (0,)),
            (F(2, 7), (1,), (1,)),
            (F(3, 7), (0, 1), (0, 2)),
        ), 3, 3)
        violation = check_condition_iii(assignment)
        assert violation == LabelMismatch(F(2, 7), F(3, 7), F(2, 7), F(0))

    def test_consistent_labels(self):
        assignment = CommonSumAssignment((
            (F(0), (), ()),
            (F(1, 3), (0,), (1,)),
            (F(2, 3), (1,), (0,)),
            (F(1), (0, 1), (0, 1)),
        ), 2, 2)
        assert check_condition_ii(assignment) is True
        assert check_condition_iii(assignment) is True
        assert assignment.family("beta")[(1,)] == F(1, 3)


def closed_under_operations(family, size):
    members = set(family)
    universe = tuple(range(size))
    if () not in members:
        return False
    for a in members:
        if tuple(i for i in universe if i not in a) not in members:
            return False
        for b in members:
            if tuple(sorted(set(a) & set(b))) not in members:
                return False
    return True


subsets_of_four = st.lists(st.integers(0, 3), max_size=4, unique=True).map(lambda s: tuple(sorted(s)))


class TestSigmaAlgebras:
    def test_atom_blocks(self):
        assert atom_blocks([(), (0, 1), (2, 3), (0, 1, 2, 3)], 4) == [(0, 1), (2, 3)]
        assert atom_blocks([(0,), (0, 1)], 3) == [(0,), (1,), (2,)]
        assert atom_blocks([], 2) == [(0, 1)]

    def test_counting_members(self):
        assert is_sigma_algebra([(), (0,), (1, 2), (0, 1, 2)], 3)
        assert not is_sigma_algebra([(), (0,), (0, 1, 2)], 3)
        assert not is_sigma_algebra([(), (0, 1), (1, 2), (0, 1, 2)], 3)

    @given(st.lists(subsets_of_four, max_size=8))
    def test_matches_closure_check(self, family):
        assert is_sigma_algebra(family, 4) == closed_under_operations(family, 4)

    def test_many_atoms_stay_fast(self):
        # every sum is unique and common, so both families have 2^12 members
        n = 12
        weights = [F(2 ** i, 2 ** n - 1) for i in range(n)]
        decision = decide_disjoint(weights, weights)
        assert isinstance(decision, ConvexDecision)
        assert len(decision.assignment.entries) == 2 ** n

    def test_many_atoms_with_crossed_pairing(self):
        n = 10
        alpha = [F(2 ** i, 2 ** n - 1) for i in range(n)]
        decision = decide_disjoint(alpha, list(reversed(alpha)))
        assert decision.convex
        assert decision.assignment.couple(F(1, 2 ** n - 1)) == ((0,), (n - 1,))


class TestSymmetry:
    @settings(max_examples=60)
    @given(weight_counts, weight_counts)
    def test_swapping_sides_keeps_the_verdict(self, a, b):
        alpha, beta = normalized(a), normalized(b)
        forward, backward = decide_disjoint(alpha, beta), decide_disjoint(beta, alpha)
        assert forward.convex == backward.convex
        if forward.convex:
            swapped = tuple((g, j, i) for g, i, j in forward.assignment.entries)
            assert backward.assignment.entries == swapped

    def test_condition_i_side_swaps(self):
        forward = decide_disjoint(fractions("1/4", "1/4", "1/2"), fractions("1/4", "3/4")).violation
        backward = decide_disjoint(fractions("1/4", "3/4"), fractions("1/4", "1/4", "1/2")).violation
        assert (forward.side, backward.side) == ("alpha", "beta")
        assert forward.gamma == backward.gamma
