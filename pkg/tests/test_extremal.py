"""Tests for the near-extremal two-point constructions."""

from fractions import Fraction as F

import pytest

from maxmix import (
    Assembly,
    ExtremalSpec,
    FiniteDistribution,
    PreconditionError,
    build,
    full_report,
    gap,
    phi,
    theta_sup,
)


class TestThetaSup:
    @pytest.mark.parametrize("n,expected", [(1, F(1)), (2, F(3, 2)), (10, F(19, 10))])
    def test_values(self, n, expected):
        assert theta_sup(n) == expected


class TestGap:
    def test_identical_members_have_full_slack(self):
        d = FiniteDistribution.from_pairs([(0, F(1, 2)), (2, F(1, 2))])
        a = Assembly((d, d, d))
        m = d.similar_max_mean(3)
        assert gap(a) == F(2, 3) * m

    def test_gap_never_negative(self):
        import random

        from genutil import random_assembly

        rng = random.Random(41)
        for _ in range(60):
            assert gap(random_assembly(rng)) >= 0


class TestExplicitSchedules:
    def test_moderate_schedule_matches_hand_computation(self):
        spec = ExtremalSpec((F(1), F(1)), F(1), p_schedule=(F(1, 2),))
        a = build(spec)
        # the two-point member sits at 4/3 above the constant member at 1
        assert a.members[0] == FiniteDistribution.from_pairs(
            [(0, F(1, 2)), (F(4, 3), F(1, 2))]
        )
        assert a.members[1] == FiniteDistribution.point_mass(1)
        r = full_report(a)
        assert r.theta == F(7, 6)
        assert gap(a) == F(1, 3)

    def test_tight_schedule_shrinks_the_gap(self):
        p = 1 - F(1, 10**4)
        a = build(ExtremalSpec((F(1), F(1)), F(1), p_schedule=(p,)))
        assert gap(a) < F(1, 10**3)
        # closed form: the assembly performance is the payoff curve at p
        assert a.expected_max() == phi(F(1), F(1), p, 2)

    def test_gap_strictly_decreasing_in_delta(self):
        gaps = []
        for k in (1, 2, 3):
            p = 1 - F(1, 10**k)
            gaps.append(gap(build(ExtremalSpec((F(1), F(1)), F(1), (p,)))))
        assert gaps[0] > gaps[1] > gaps[2]

    def test_similar_means_hit_targets_exactly(self):
        targets = (F(1, 2), F(2, 3), F(1))
        schedule = (F(9, 10), F(19, 20))
        a = build(ExtremalSpec(targets, F(1), schedule))
        assert a.similar_means() == targets

    def test_rejects_unordered_values(self):
        # equal targets with equal masses give equal non-zero values
        spec = ExtremalSpec((F(1), F(1), F(1)), F(1), (F(1, 2), F(1, 2)))
        with pytest.raises(PreconditionError, match="order"):
            build(spec)

    def test_rejects_value_below_the_constant(self):
        # p too small: the induced value 1/(1 - 1/4) falls below the top target
        spec = ExtremalSpec((F(1), F(2)), F(1), (F(1, 2),))
        with pytest.raises(PreconditionError):
            build(spec)


class TestAutoBuilder:
    @pytest.mark.parametrize("n,eps", [(2, F(1, 1000)), (3, F(1, 100)), (4, F(1, 10))])
    def test_reaches_the_requested_gap(self, n, eps):
        a = build(ExtremalSpec((F(1),) * n, eps))
        assert a.n == n
        assert gap(a) <= eps
        assert a.similar_means() == (F(1),) * n
        assert full_report(a).chain.all_ok

    def test_theta_approaches_the_supremum(self):
        a = build(ExtremalSpec((F(1), F(1)), F(1, 10**6)))
        assert full_report(a).theta >= theta_sup(2) - F(1, 10**6)

    def test_unequal_targets(self):
        targets = (F(1, 2), F(3, 4), F(3, 2))
        a = build(ExtremalSpec(targets, F(1, 100)))
        assert a.similar_means() == targets
        assert gap(a) <= F(1, 100)

    def test_single_member(self):
        a = build(ExtremalSpec((F(5),), F(1, 10)))
        assert a.members == (FiniteDistribution.point_mass(5),)
        assert gap(a) == 0


class TestSpecValidation:
    def test_rejects_nonpositive_epsilon(self):
        with pytest.raises(PreconditionError):
            ExtremalSpec((F(1),), F(0))

    def test_rejects_descending_targets(self):
        with pytest.raises(PreconditionError):
            ExtremalSpec((F(2), F(1)), F(1))

    def test_rejects_bad_schedule(self):
        with pytest.raises(PreconditionError):
            ExtremalSpec((F(1), F(1)), F(1), (F(1, 2), F(1, 2)))
        with pytest.raises(PreconditionError):
            ExtremalSpec((F(1), F(1)), F(1), (F(1),))
