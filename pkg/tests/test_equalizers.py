"""
Tests for the end-to-end equalizer decision and its witnesses.
"""
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pushforward_convexity.core import equalizers
from pushforward_convexity.core.equalizers import (
    ALL_FUNCTIONS,
    CONVEX_STRUCTURED,
    CONVEX_TRIVIAL,
    NONCONVEX,
    Z1,
    analyze_equalizers,
    build_witness,
    is_equalizer,
)
from pushforward_convexity.core.errors import DimensionMismatch, InternalInconsistency, MeasureError
from pushforward_convexity.core.measures import DiscreteMeasure, FiniteMap, push_forward, reduce_pair
from pushforward_convexity.core.selftest import source, target
from pushforward_convexity.core.subset_algebra import NotSigmaAlgebra

F = Fraction


@pytest.fixture
def halves():
    return source("1/2", "1/2"), target("1/2", "1/2")


def image(measure):
    return {str(p.coords[0]): str(w) for p, w in measure.atoms}


class TestVerdicts:
    def test_equal_measures(self):
        mu = source("1/3", "2/3")
        report = analyze_equalizers(mu, mu)
        assert (report.verdict, report.decided_by) == (ALL_FUNCTIONS, "p_equals_q")
        assert report.is_convex

    def test_halves_vs_thirds(self):
        report = analyze_equalizers(source("1/2", "1/2"), target("1/3", "2/3"))
        assert (report.verdict, report.decided_by) == (CONVEX_TRIVIAL, "thm_A")

    def test_coprime_fast_path_agrees_with_general_decision(self):
        report = analyze_equalizers(source("1/2", "1/2"), target("1/3", "1/3", "1/3"), crosscheck=True)
        assert (report.verdict, report.decided_by) == (CONVEX_TRIVIAL, "coprime_uniform")

    def test_thirds_structure(self):
        report = analyze_equalizers(source("1/3", "2/3"), target("1/3", "2/3"))
        assert report.verdict == CONVEX_STRUCTURED
        blocks = [(b.gamma, [p.id for p in b.p_points], [q.id for q in b.q_points])
                  for b in report.structure]
        assert blocks == [(F(1, 3), ["x1"], ["y1"]), (F(2, 3), ["x2"], ["y2"])]

    def test_shared_atom(self):
        p = DiscreteMeasure.from_atoms([((0,), "1/2"), ((1,), "1/2")])
        q = DiscreteMeasure.from_atoms([((0,), "1/2"), ((2,), "1/2")])
        assert analyze_equalizers(p, q).verdict == CONVEX_TRIVIAL

    def test_mismatches(self):
        with pytest.raises(MeasureError):
            analyze_equalizers(source(1), target("1/2"))
        with pytest.raises(DimensionMismatch):
            analyze_equalizers(source(1), DiscreteMeasure.dirac((0, 0)))


class TestWitnesses:
    def test_two_halves_witness(self, halves):
        p, q = halves
        report = analyze_equalizers(p, q)
        assert (report.verdict, report.decided_by) == (NONCONVEX, "thm_A_condition_i")
        w = report.witness
        assert {x.id: v[0] for x, v in w.f.entries} == {"x1": 0, "x2": 1, "y1": 0, "y2": 1}
        assert {x.id: v[0] for x, v in w.g.entries} == {"x1": 0, "x2": 1, "y1": 1, "y2": 0}
        assert image(w.mid_p) == {"0": "1/2", "1": "1/2"}
        assert image(w.mid_q) == {"1/2": "1"}
        assert w.verify(p, q)

    def test_shared_atoms_sent_to_first_value(self):
        third = F(1, 3)
        p = DiscreteMeasure.from_atoms([((0,), third), ((1,), third), ((2,), third)])
        q = DiscreteMeasure.from_atoms([((0,), third), ((3,), third), ((4,), third)])
        report = analyze_equalizers(p, q)
        assert report.verdict == NONCONVEX
        assert report.witness.f((0,)) == report.witness.g((0,)) == Z1
        assert report.witness.verify(p, q)

    def test_intersection_witness(self):
        p, q = source("1/10", "3/10", "3/5"), target("2/5", "1/10", "1/2")
        report = analyze_equalizers(p, q)
        assert report.decided_by == "thm_A_condition_ii"
        assert isinstance(report.violation, NotSigmaAlgebra)
        w = report.witness
        assert w.holds
        assert w.mid_p.weight_of((0,)) == F(3, 10)
        assert w.mid_q.weight_of((0,)) == F(2, 5)

    def test_members_are_equalizers(self, halves):
        p, q = halves
        w = analyze_equalizers(p, q).witness
        assert is_equalizer(w.f, p, q)
        assert is_equalizer(w.g, p, q)
        assert not is_equalizer(w.f, p, target("1/3", "2/3"))
        assert is_equalizer(FiniteMap.constant(w.f.domain, (7,)), p, q)

    def test_complement_violation_has_no_construction(self, halves):
        p, q = halves
        p_res, q_res, _ = reduce_pair(p, q)
        violation = NotSigmaAlgebra("alpha", "complement", (0,), (1,), F(1, 2))
        with pytest.raises(InternalInconsistency):
            build_witness(p_res, q_res, violation)

    def test_tampered_witness_fails_verification(self, halves):
        p, q = halves
        w = analyze_equalizers(p, q).witness
        other_q = target("1/4", "3/4")
        assert not w.verify(p, other_q)


def normalized(counts):
    total = sum(counts)
    return [F(c, total) for c in counts]


def with_shared(base, shared, c):
    """Scale `base` by 1 - c and add atoms at 100, 101, ... carrying c times `shared`."""
    return DiscreteMeasure.from_atoms(
        [(x, (1 - c) * w) for x, w in base.atoms]
        + [((100 + k,), c * w) for k, w in enumerate(shared)])


weight_counts = st.lists(st.integers(1, 6), min_size=1, max_size=3)
shares = st.fractions(min_value=F(1, 8), max_value=F(7, 8), max_denominator=8)


class TestInvariants:
    @settings(max_examples=200)
    @given(weight_counts, weight_counts, weight_counts, shares)
    def test_shared_atoms_do_not_change_the_verdict(self, a, b, s, c):
        p, q = source(*normalized(a)), target(*normalized(b))
        shared = normalized(s)
        before = analyze_equalizers(p, q)
        after = analyze_equalizers(with_shared(p, shared, c), with_shared(q, shared, c))
        assert (after.verdict, after.decided_by) == (before.verdict, before.decided_by)
        assert after.reduction[2] == 1 - c
        if after.witness is not None:
            assert after.witness.verify(with_shared(p, shared, c), with_shared(q, shared, c))

    @settings(max_examples=80)
    @given(weight_counts, weight_counts)
    def test_swapping_measures_keeps_the_verdict(self, a, b):
        p, q = source(*normalized(a)), target(*normalized(b))
        assert analyze_equalizers(p, q).verdict == analyze_equalizers(q, p).verdict

    @given(weight_counts, weight_counts, st.integers(-5, 5))
    def test_constant_maps_equalize(self, a, b, c):
        p, q = source(*normalized(a)), target(*normalized(b))
        constant = FiniteMap.constant(p.points + q.points, (c,))
        assert is_equalizer(constant, p, q)
        assert push_forward(constant, p) == DiscreteMeasure.dirac((c,))

    @given(st.integers(-5, 5), st.integers(-5, 5))
    def test_post_composition_keeps_equalizers(self, u, v):
        p, q = source("1/2", "1/4", "1/4"), target("1/4", "3/4")
        w = analyze_equalizers(p, q).witness
        psi = FiniteMap.from_dict({Z1: (u,), (F(1),): (v,)})
        assert is_equalizer(w.f.compose(psi), p, q)
        assert is_equalizer(w.g.compose(psi), p, q)


class TestWitnessAssignment:
    def test_decision_assignment_is_reused(self, monkeypatch):
        def no_tables(*args, **kwargs):
            raise AssertionError("sum tables rebuilt")

        monkeypatch.setattr(equalizers, "enumerate_sums", no_tables)
        p, q = source("1/10", "3/10", "3/5"), target("2/5", "1/10", "1/2")
        report = analyze_equalizers(p, q)
        assert report.decided_by == "thm_A_condition_ii"
        assert report.witness.verify(p, q)

    def test_rebuilt_assignment_gives_the_same_witness(self):
        p, q = source("1/10", "3/10", "3/5"), target("2/5", "1/10", "1/2")
        report = analyze_equalizers(p, q)
        p_res, q_res, _ = report.reduction
        assert build_witness(p_res, q_res, report.violation, p, q) == report.witness
