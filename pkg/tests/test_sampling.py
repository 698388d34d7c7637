import math

import mpmath
import numpy as np
import pytest
from scipy import integrate

from circcensor.evaluation import observation_probability, replication_rng
from circcensor.exceptions import (
    DegenerateModelError,
    DomainError,
    InvalidArcError,
    InvalidInputError,
    UnsupportedDensityError,
)
from circcensor.geometry import TWO_PI, Arc, in_window, window_length
from circcensor.sampling import (
    REFERENCE_MODELS,
    CensoredObservation,
    CensoredSample,
    Deterministic,
    IndependentPair,
    Mixture,
    PointMass,
    UniformAnchorFixedArc,
    UniformCircle,
    VonMises,
    bessel_i0,
    density,
    draw_censoring_arc,
    generate_sample,
    sample,
    vonmises_pdf,
)


def i0_series(k, terms=30):
    """Power series sum (k/2)^{2j} / (j!)^2 in exact-ish arithmetic."""
    return float(sum((mpmath.mpf(k) / 2) ** (2 * j) / mpmath.factorial(j) ** 2 for j in range(terms)))


# frozen from i0_series with 30 terms at 30 decimal digits
I0_1 = 1.2660658777520083
I0_3 = 4.880792585865024


class TestBessel:
    def test_frozen_values(self):
        assert bessel_i0(0.0) == 1.0
        assert bessel_i0(1.0) == pytest.approx(I0_1, rel=1e-12)
        assert bessel_i0(3.0) == pytest.approx(I0_3, rel=1e-12)

    @pytest.mark.parametrize("k", [0.1, 0.5, 2.0, 7.5, 15.0])
    def test_series_oracle(self, k):
        assert bessel_i0(k) == pytest.approx(i0_series(k, 60), rel=1e-12)

    @pytest.mark.parametrize("k", [30.0, 120.0, 499.0, 500.0])
    def test_large_arguments(self, k):
        ref = float(mpmath.besseli(0, k))
        assert bessel_i0(k) == pytest.approx(ref, rel=1e-12)

    def test_monotone(self):
        k = np.linspace(0, 500, 5001)
        assert np.all(np.diff(bessel_i0(k)) >= 0)

    @pytest.mark.parametrize("bad", [-1e-9, np.nan, np.inf, 500.5])
    def test_domain(self, bad):
        with pytest.raises(DomainError):
            bessel_i0(bad)


class TestVonMisesPdf:
    def test_uniform_limit(self):
        for mu, x in [(0.0, 1.0), (3.0, 5.5)]:
            assert vonmises_pdf(mu, 0.0, x) == pytest.approx(1 / TWO_PI, rel=1e-15)

    def test_frozen(self):
        assert vonmises_pdf(np.pi, 1.0, np.pi) == pytest.approx(math.e / (TWO_PI * I0_1), rel=1e-13)
        assert vonmises_pdf(2.0, 3.0, 2.0 + np.pi) == pytest.approx(
            math.exp(-3) / (TWO_PI * I0_3), rel=1e-13
        )

    @pytest.mark.parametrize("kappa", [0.0, 0.5, 1.0, 3.0, 10.0, 100.0])
    def test_integrates_to_one(self, kappa):
        val, _ = integrate.quad(lambda t: vonmises_pdf(1.0, kappa, t), 0, TWO_PI, limit=200)
        assert val == pytest.approx(1.0, abs=1e-9)

    def test_symmetric_peak(self):
        d = np.linspace(0.01, 3.0, 50)
        assert np.allclose(vonmises_pdf(2.0, 3.0, 2.0 + d), vonmises_pdf(2.0, 3.0, 2.0 - d))
        assert np.all(vonmises_pdf(2.0, 3.0, 2.0 + d) < vonmises_pdf(2.0, 3.0, 2.0))


class TestDensity:
    def test_uniform(self):
        assert density(UniformCircle(), 1.0) == pytest.approx(1 / TWO_PI)

    def test_mixture(self):
        mix = REFERENCE_MODELS[3].distribution
        x = np.pi / 3
        expect = 0.6 * vonmises_pdf(np.pi / 3, 3, x) + 0.4 * vonmises_pdf(15 * np.pi / 9, 3, x)
        assert density(mix, x) == pytest.approx(expect, rel=1e-15)

    def test_degenerate_mixture(self):
        mix = Mixture(((1.0, VonMises(np.pi, 1.0)),))
        x = np.linspace(0, 6, 13)
        assert np.array_equal(density(mix, x), vonmises_pdf(np.pi, 1.0, x))

    def test_point_mass_has_no_density(self):
        with pytest.raises(UnsupportedDensityError):
            density(PointMass(1.0), 1.0)

    def test_mixture_weights_validated(self):
        with pytest.raises(InvalidInputError):
            Mixture(((0.5, UniformCircle()), (0.4, UniformCircle())))
        with pytest.raises(InvalidInputError):
            Mixture(((1.5, UniformCircle()), (-0.5, UniformCircle())))


class TestSample:
    def test_point_mass(self):
        rng = np.random.default_rng(0)
        assert sample(PointMass(np.pi / 2), rng) == np.pi / 2
        assert np.all(sample(PointMass(np.pi / 2), rng, 10) == np.pi / 2)

    def test_vonmises_mean_direction(self):
        draws = sample(VonMises(np.pi, 1.0), np.random.default_rng(1), 100_000)
        assert np.all((draws >= 0) & (draws < TWO_PI))
        mean_dir = np.arctan2(np.sin(draws).mean(), np.cos(draws).mean()) % TWO_PI
        assert mean_dir == pytest.approx(np.pi, abs=0.05)

    def test_vonmises_resultant_matches_quadrature(self):
        draws = sample(VonMises(1.0, 3.0), np.random.default_rng(2), 100_000)
        r = np.hypot(np.sin(draws).mean(), np.cos(draws).mean())
        ref, _ = integrate.quad(lambda t: np.cos(t - 1.0) * vonmises_pdf(1.0, 3.0, t), 0, TWO_PI)
        assert r == pytest.approx(ref, abs=0.01)

    def test_uniform_ks(self):
        draws = np.sort(sample(UniformCircle(), np.random.default_rng(3), 100_000))
        ecdf = np.arange(1, draws.size + 1) / draws.size
        ks = np.max(np.abs(ecdf - draws / TWO_PI))
        assert ks < 0.01

    def test_mixture_weights_respected(self):
        mix = Mixture(((0.25, PointMass(1.0)), (0.75, PointMass(2.0))))
        draws = sample(mix, np.random.default_rng(4), 40_000)
        assert np.mean(draws == 1.0) == pytest.approx(0.25, abs=0.01)

    def test_seeded_determinism(self):
        d = REFERENCE_MODELS[3].distribution
        a = sample(d, np.random.default_rng(9), 1000)
        b = sample(d, np.random.default_rng(9), 1000)
        assert np.array_equal(a, b)


class TestCensoringArcs:
    def test_deterministic(self):
        rng = np.random.default_rng(0)
        for _ in range(5):
            arc = draw_censoring_arc(Deterministic(2 * np.pi / 3, 4 * np.pi / 3), rng)
            assert arc == Arc(2 * np.pi / 3, 4 * np.pi / 3)

    def test_deterministic_rejects_degenerate(self):
        with pytest.raises(InvalidArcError):
            Deterministic(1.0, 1.0)

    def test_fixed_arc_length(self):
        l, u = UniformAnchorFixedArc(1.0).draw(np.random.default_rng(1), 10_000)
        assert np.allclose(window_length(u, l), 1.0, atol=1e-12)
        assert np.allclose(window_length(l, u), TWO_PI - 1.0, atol=1e-12)

    @pytest.mark.parametrize("alpha", [0.0, TWO_PI, -1.0])
    def test_fixed_arc_alpha_range(self, alpha):
        with pytest.raises(InvalidInputError):
            UniformAnchorFixedArc(alpha)

    def test_model1_complement_length(self):
        l, u = REFERENCE_MODELS[1].censoring.draw(np.random.default_rng(2), 100_000)
        assert np.mean(window_length(u, l)) == pytest.approx(3.48, abs=0.05)

    def test_degenerate_model_detected(self):
        same = IndependentPair(PointMass(1.0), PointMass(1.0))
        with pytest.raises(DegenerateModelError):
            same.draw(np.random.default_rng(0), 3)


class TestGenerateSample:
    def test_point_inside(self):
        s = generate_sample(PointMass(np.pi), Deterministic(2 * np.pi / 3, 4 * np.pi / 3), 50,
                            np.random.default_rng(0))
        assert s.delta.all() and np.all(s.x == np.pi)

    def test_point_outside(self):
        s = generate_sample(PointMass(0.0), Deterministic(2 * np.pi / 3, 4 * np.pi / 3), 50,
                            np.random.default_rng(0))
        assert not s.delta.any() and np.all(np.isnan(s.x))

    def test_model1_censoring_rate(self):
        m = REFERENCE_MODELS[1]
        s = generate_sample(m.distribution, m.censoring, 10_000, np.random.default_rng(5))
        assert s.censored_fraction == pytest.approx(0.44, abs=0.02)

    def test_reproducible(self):
        m = REFERENCE_MODELS[2]
        a = generate_sample(m.distribution, m.censoring, 500, replication_rng(7))
        b = generate_sample(m.distribution, m.censoring, 500, replication_rng(7))
        assert a == b
        for col in ("x", "delta", "l", "u"):
            assert getattr(a, col).tobytes() == getattr(b, col).tobytes()

    def test_delta_consistency(self):
        for m in REFERENCE_MODELS.values():
            s = generate_sample(m.distribution, m.censoring, 2000, np.random.default_rng(6))
            obs = s.x[s.delta]
            assert np.all(in_window(s.l[s.delta], s.u[s.delta], obs))
            assert np.all(np.isnan(s.x[~s.delta]))

    @pytest.mark.parametrize("idx", [1, 2, 3, 4])
    def test_censoring_rate_matches_quadrature(self, idx):
        m = REFERENCE_MODELS[idx]
        s = generate_sample(m.distribution, m.censoring, 100_000, np.random.default_rng(idx))
        assert s.delta_bar == pytest.approx(observation_probability(m.distribution, m.censoring),
                                            abs=0.02)

    def test_observations_round_trip(self):
        m = REFERENCE_MODELS[1]
        s = generate_sample(m.distribution, m.censoring, 100, np.random.default_rng(8))
        assert CensoredSample.from_observations(s.observations) == s

    def test_invariants_enforced(self):
        with pytest.raises(InvalidInputError):
            CensoredObservation(x_prime=3.0, delta=True, l=0.0, u=1.0)
        with pytest.raises(InvalidInputError):
            CensoredObservation(x_prime=0.5, delta=False, l=0.0, u=1.0)
        with pytest.raises(InvalidInputError):
            CensoredSample(x=[0.5], delta=[False], l=[0.0], u=[1.0])
        with pytest.raises(InvalidInputError):
            CensoredSample(x=[], delta=[], l=[], u=[])
