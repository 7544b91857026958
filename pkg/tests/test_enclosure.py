"""Tests for the rational enclosure arithmetic and the n-th root bracketing."""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maxmix import Enclosure, PreconditionError, int_nth_root, nth_root


class TestIntNthRoot:
    @pytest.mark.parametrize("x,n", [(0, 3), (1, 5), (8, 3), (81, 4), (1024, 10)])
    def test_exact_powers(self, x, n):
        r, exact = int_nth_root(x, n)
        assert exact and r**n == x

    @pytest.mark.parametrize("x,n", [(2, 2), (7, 3), (80, 4), (10**18 + 1, 2)])
    def test_floor_root(self, x, n):
        r, exact = int_nth_root(x, n)
        assert not exact
        assert r**n <= x < (r + 1) ** n

    def test_large_input(self):
        x = 12345678901234567890123456789
        r, _ = int_nth_root(x, 7)
        assert r**7 <= x < (r + 1) ** 7

    def test_rejects_negative(self):
        with pytest.raises(PreconditionError):
            int_nth_root(-1, 2)


class TestNthRoot:
    def test_perfect_rational_power_is_exact(self):
        got = nth_root(F(8, 27), 3)
        assert got.is_exact and got.lo == F(2, 3)

    def test_zero_and_one(self):
        assert nth_root(F(0), 4).lo == 0
        assert nth_root(F(1), 4).lo == 1

    def test_order_one_is_identity(self):
        assert nth_root(F(7, 5), 1) == Enclosure.exact(F(7, 5))

    @given(st.fractions(min_value=0, max_value=100, max_denominator=1000),
           st.integers(2, 6))
    @settings(max_examples=80)
    def test_enclosure_brackets_and_is_tight(self, x, n):
        tol = F(1, 10**9)
        got = nth_root(x, n, tol)
        assert got.width <= tol
        assert got.lo**n <= x <= got.hi**n

    def test_rejects_negative_radicand(self):
        with pytest.raises(PreconditionError):
            nth_root(F(-1, 2), 2)


class TestEnclosureArithmetic:
    def test_midpoint_radius(self):
        e = Enclosure(F(1, 4), F(3, 4))
        assert e.midpoint == F(1, 2) and e.radius == F(1, 4) and e.width == F(1, 2)

    def test_add_sub(self):
        e = Enclosure(F(0), F(1)) + Enclosure(F(1), F(2))
        assert (e.lo, e.hi) == (F(1), F(3))
        d = F(5) - Enclosure(F(1), F(2))
        assert (d.lo, d.hi) == (F(3), F(4))

    def test_scaling_is_sign_aware(self):
        e = Enclosure(F(1), F(2)).scaled(F(-3))
        assert (e.lo, e.hi) == (F(-6), F(-3))

    def test_contains(self):
        assert Enclosure(F(0), F(1)).contains(F(1, 2))
        assert not Enclosure(F(0), F(1)).contains(F(2))

    def test_rejects_empty(self):
        with pytest.raises(PreconditionError):
            Enclosure(F(1), F(0))
