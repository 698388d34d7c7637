import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circcensor.exceptions import InvalidAngleError, InvalidArcError
from circcensor.geometry import (
    TWO_PI,
    Arc,
    arc_contains,
    arc_length,
    in_window,
    normalize_angle,
)

angles = st.floats(min_value=0.0, max_value=TWO_PI, exclude_max=True, allow_nan=False)


def indicator_identity(l, u, x):
    """Right-hand side of 1{x in [l,u]} = 1{l<=x} - 1{u<x} + 1{l>=u}."""
    return (l <= x).astype(int) - (u < x).astype(int) + (l >= u).astype(int)


class TestNormalize:
    def test_examples(self):
        assert normalize_angle(0.0) == 0.0
        assert normalize_angle(TWO_PI) == 0.0
        assert normalize_angle(-np.pi / 2) == pytest.approx(3 * np.pi / 2, abs=1e-15)

    @pytest.mark.parametrize("bad", [np.nan, np.inf, -np.inf])
    def test_non_finite(self, bad):
        with pytest.raises(InvalidAngleError):
            normalize_angle(bad)

    def test_tiny_negative_maps_below_two_pi(self):
        assert normalize_angle(-1e-300) == 0.0
        assert 0.0 <= normalize_angle(-1e-17) < TWO_PI

    def test_near_two_pi_kept(self):
        v = np.nextafter(TWO_PI, 0.0)
        assert normalize_angle(v) == v

    @given(st.floats(-1e6, 1e6), st.integers(-50, 50))
    def test_periodic_and_idempotent(self, v, k):
        a = normalize_angle(v)
        assert 0.0 <= a < TWO_PI
        assert normalize_angle(a) == a
        b = normalize_angle(v + k * TWO_PI)
        # one rounding of 2pi per added turn
        d = abs(a - b)
        assert min(d, TWO_PI - d) <= 1e-9


class TestArc:
    def test_rejects_degenerate(self):
        with pytest.raises(InvalidArcError):
            Arc(1.0, 1.0)
        with pytest.raises(InvalidArcError):
            Arc(0.0, TWO_PI)

    def test_contains_examples(self):
        assert arc_contains(Arc(np.pi / 6, np.pi / 3), np.pi / 4)
        assert arc_contains(Arc(np.pi / 3, np.pi / 6), 0.0)
        assert not arc_contains(Arc(np.pi / 3, np.pi / 6), np.pi / 4)

    def test_endpoints_closed(self):
        a = Arc(1.0, 2.0)
        assert a.contains(1.0) and a.contains(2.0)
        w = Arc(5.0, 1.0)
        assert w.contains(5.0) and w.contains(1.0)

    def test_lengths(self):
        assert arc_length(Arc(0.0, np.pi)) == pytest.approx(np.pi)
        assert arc_length(Arc(np.pi, 0.0)) == pytest.approx(np.pi)
        assert arc_length(Arc(2 * np.pi / 3, 4 * np.pi / 3)) == pytest.approx(2.0943951, abs=1e-7)
        assert round(arc_length(Arc(2 * np.pi / 3, 4 * np.pi / 3)), 2) == 2.09

    def test_nearly_full_arc_stays_below_two_pi(self):
        a = Arc(6.4e-41, 0.0)
        assert 0.0 < a.length < TWO_PI
        assert a.complement().length == 6.4e-41

    @given(angles, angles)
    def test_lengths_complementary(self, l, u):
        if l == u:
            return
        a = Arc(l, u)
        assert 0.0 < a.length < TWO_PI
        assert a.length + a.complement().length == pytest.approx(TWO_PI, abs=1e-12)


def test_indicator_identity_exact():
    rng = np.random.default_rng(20)
    x, l, u = rng.uniform(0, TWO_PI, (3, 100_000))
    keep = l != u
    got = in_window(l[keep], u[keep], x[keep]).astype(int)
    assert np.array_equal(got, indicator_identity(l[keep], u[keep], x[keep]))


def test_indicator_identity_on_endpoints():
    # force endpoint coincidences, which random draws never hit
    rng = np.random.default_rng(21)
    l, u = rng.uniform(0, TWO_PI, (2, 1000))
    for x in (l, u):
        assert np.array_equal(in_window(l, u, x).astype(int), indicator_identity(l, u, x))


@settings(max_examples=500)
@given(angles, angles, angles)
def test_partition(x, l, u):
    if len({x, l, u}) < 3:
        return
    assert arc_contains(Arc(l, u), x) != arc_contains(Arc(u, l), x)


@settings(max_examples=500)
@given(angles, angles, angles, st.floats(-20, 20))
def test_rotation_covariance(x, l, u, shift):
    eps = 1e-12
    rx, rl, ru = (normalize_angle(v + shift) for v in (x, l, u))

    def close(a, b):
        d = abs(a - b)
        return min(d, TWO_PI - d) < eps

    if close(l, u) or close(x, l) or close(x, u) or close(rl, ru):
        return
    assert arc_contains(Arc(l, u), x) == arc_contains(Arc(rl, ru), rx)
