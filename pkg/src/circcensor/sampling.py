"""Circular laws, censoring mechanisms and censored-sample generation.

Observations follow the arc-censoring scheme: a direction ``X`` is seen
exactly when it falls inside its observation window ``[L, U]``; otherwise
only the window is recorded.  ``X`` and the windows are drawn independently.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from scipy import special

from .exceptions import (
    DegenerateModelError,
    DomainError,
    InvalidArcError,
    InvalidInputError,
    UnsupportedDensityError,
)
from .geometry import TWO_PI, Arc, in_window, normalize_angle, window_length

__all__ = [
    "bessel_i0",
    "vonmises_pdf",
    "VonMises",
    "UniformCircle",
    "PointMass",
    "Mixture",
    "density",
    "sample",
    "IndependentPair",
    "Deterministic",
    "UniformAnchorFixedArc",
    "draw_censoring_arc",
    "CensoredObservation",
    "CensoredSample",
    "generate_sample",
    "ReferenceModel",
    "REFERENCE_MODELS",
]

BESSEL_MAX_ARG = 500.0
MAX_REDRAWS = 1000


def _check_bessel_arg(k):
    k = np.asarray(k, dtype=float)
    if not np.all(np.isfinite(k)) or np.any(k < 0) or np.any(k > BESSEL_MAX_ARG):
        raise DomainError(f"Bessel argument must lie in [0, {BESSEL_MAX_ARG}], got {k!r}")
    return k


def bessel_i0(k):
    """Modified Bessel function of the first kind, order 0, on [0, 500]."""
    k = _check_bessel_arg(k)
    out = special.i0(k)
    return float(out) if out.ndim == 0 else out


def vonmises_pdf(mu, kappa, x):
    """Von Mises density ``exp(kappa cos(x - mu)) / (2 pi I0(kappa))``."""
    kappa = _check_bessel_arg(kappa)
    x = np.asarray(x, dtype=float)
    # exponentially scaled form avoids overflow for large kappa
    out = np.exp(kappa * (np.cos(x - mu) - 1.0)) / (TWO_PI * special.i0e(kappa))
    return float(out) if out.ndim == 0 else out


def _as_size(size):
    return () if size is None else size


def _finish(draws, size):
    draws = normalize_angle(draws)
    return float(draws) if size is None else draws


@dataclass(frozen=True)
class VonMises:
    mu: float
    kappa: float

    def __post_init__(self):
        object.__setattr__(self, "mu", normalize_angle(self.mu))
        _check_bessel_arg(self.kappa)
        object.__setattr__(self, "kappa", float(self.kappa))

    def pdf(self, x):
        return vonmises_pdf(self.mu, self.kappa, x)

    def sample(self, rng: np.random.Generator, size=None):
        # numpy implements the Best-Fisher wrapped-Cauchy rejection sampler
        return _finish(self.mu + rng.vonmises(0.0, self.kappa, _as_size(size)), size)


@dataclass(frozen=True)
class UniformCircle:
    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.full(x.shape, 1.0 / TWO_PI)
        return float(out) if out.ndim == 0 else out

    def sample(self, rng: np.random.Generator, size=None):
        return _finish(rng.uniform(0.0, TWO_PI, _as_size(size)), size)


@dataclass(frozen=True)
class PointMass:
    at: float

    def __post_init__(self):
        object.__setattr__(self, "at", normalize_angle(self.at))

    def pdf(self, x):
        raise UnsupportedDensityError("a point mass has no density")

    def sample(self, rng: np.random.Generator, size=None):
        if size is None:
            return self.at
        return np.full(size, self.at)


@dataclass(frozen=True)
class Mixture:
    """Finite mixture; ``components`` is a sequence of ``(weight, law)`` pairs."""

    components: Tuple[Tuple[float, "CircularDistribution"], ...]

    def __post_init__(self):
        comps = tuple((float(w), d) for w, d in self.components)
        if not comps:
            raise InvalidInputError("mixture needs at least one component")
        weights = np.array([w for w, _ in comps])
        if np.any(weights < 0) or np.any(weights > 1):
            raise InvalidInputError(f"mixture weights must lie in [0, 1], got {weights}")
        if abs(weights.sum() - 1.0) > 1e-12:
            raise InvalidInputError(f"mixture weights sum to {weights.sum()!r}, not 1")
        object.__setattr__(self, "components", comps)

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for w, _ in self.components])

    def pdf(self, x):
        total = 0.0
        for w, dist in self.components:
            total = total + w * np.asarray(dist.pdf(x))
        return float(total) if np.ndim(total) == 0 else total

    def sample(self, rng: np.random.Generator, size=None):
        count = 1 if size is None else int(np.prod(size))
        p = self.weights
        labels = rng.choice(len(p), size=count, p=p / p.sum())
        out = np.empty(count)
        for i, (_, dist) in enumerate(self.components):
            mask = labels == i
            k = int(mask.sum())
            if k:
                out[mask] = dist.sample(rng, k)
        if size is None:
            return float(out[0])
        return out.reshape(size)


CircularDistribution = Union[VonMises, UniformCircle, PointMass, Mixture]


def density(dist: CircularDistribution, x):
    """Evaluate the density of ``dist`` at ``x``."""
    return dist.pdf(x)


def sample(dist: CircularDistribution, rng: np.random.Generator, size=None):
    """Draw from ``dist``; a scalar when ``size`` is None."""
    return dist.sample(rng, size)


# ---------------------------------------------------------------------------
# censoring mechanisms


def _redraw_degenerate(draw, rng, size):
    l, u = draw(rng, size)
    bad = l == u
    attempts = 0
    while np.any(bad):
        attempts += 1
        if attempts > MAX_REDRAWS:
            raise DegenerateModelError(
                f"censoring model produced l == u after {MAX_REDRAWS} redraws"
            )
        k = int(bad.sum())
        l2, u2 = draw(rng, k)
        l[bad] = l2
        u[bad] = u2
        bad = l == u
    return l, u


@dataclass(frozen=True)
class IndependentPair:
    """``L`` and ``U`` drawn independently from their own laws."""

    law_l: CircularDistribution
    law_u: CircularDistribution

    def _draw(self, rng, size):
        return (
            np.atleast_1d(self.law_l.sample(rng, size)).astype(float),
            np.atleast_1d(self.law_u.sample(rng, size)).astype(float),
        )

    def draw(self, rng: np.random.Generator, size: int):
        return _redraw_degenerate(self._draw, rng, size)


@dataclass(frozen=True)
class Deterministic:
    """The same window ``[l, u]`` for every observation."""

    l: float
    u: float

    def __post_init__(self):
        arc = Arc(self.l, self.u)
        object.__setattr__(self, "l", arc.l)
        object.__setattr__(self, "u", arc.u)

    def draw(self, rng: np.random.Generator, size: int):
        return np.full(size, self.l), np.full(size, self.u)


@dataclass(frozen=True)
class UniformAnchorFixedArc:
    """``L`` uniform and ``U = L - alpha``: the unobserved arc has length ``alpha``."""

    alpha: float

    def __post_init__(self):
        if not 0.0 < self.alpha < TWO_PI:
            raise InvalidInputError(f"alpha must lie in (0, 2pi), got {self.alpha!r}")

    def _draw(self, rng, size):
        l = rng.uniform(0.0, TWO_PI, size)
        return normalize_angle(l), normalize_angle(l - self.alpha)

    def draw(self, rng: np.random.Generator, size: int):
        l, u = _redraw_degenerate(self._draw, rng, size)
        return np.atleast_1d(l), np.atleast_1d(u)


CensoringModel = Union[IndependentPair, Deterministic, UniformAnchorFixedArc]


def draw_censoring_arc(model: CensoringModel, rng: np.random.Generator) -> Arc:
    """Draw a single observation window."""
    l, u = model.draw(rng, 1)
    return Arc(l[0], u[0])


# ---------------------------------------------------------------------------
# samples


@dataclass(frozen=True)
class CensoredObservation:
    """One observed triplet. ``x_prime`` is None when the direction is censored."""

    x_prime: Optional[float]
    delta: bool
    l: float
    u: float

    def __post_init__(self):
        arc = Arc(self.l, self.u)
        object.__setattr__(self, "l", arc.l)
        object.__setattr__(self, "u", arc.u)
        if self.delta:
            if self.x_prime is None:
                raise InvalidInputError("uncensored observation needs a direction")
            x = normalize_angle(self.x_prime)
            if not arc.contains(x):
                raise InvalidInputError(f"direction {x!r} lies outside its window")
            object.__setattr__(self, "x_prime", x)
        elif self.x_prime is not None:
            raise InvalidInputError("censored observation must not carry a direction")


@dataclass(frozen=True, eq=False)
class CensoredSample:
    """Arc-censored sample stored column-wise.

    Attributes
    ----------
    x : ndarray
        Observed directions, NaN where censored.
    delta : ndarray of bool
        True where the direction fell inside its window.
    l, u : ndarray
        Window endpoints.
    """

    x: np.ndarray
    delta: np.ndarray
    l: np.ndarray
    u: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float).copy()
        delta = np.asarray(self.delta, dtype=bool).copy()
        l = normalize_angle(np.atleast_1d(np.asarray(self.l, dtype=float)))
        u = normalize_angle(np.atleast_1d(np.asarray(self.u, dtype=float)))
        x = np.atleast_1d(x)
        delta = np.atleast_1d(delta)
        if not (x.shape == delta.shape == l.shape == u.shape) or x.ndim != 1:
            raise InvalidInputError("sample columns must be 1-d and of equal length")
        if x.size == 0:
            raise InvalidInputError("a sample needs at least one observation")
        if np.any(l == u):
            raise InvalidArcError("window with coincident endpoints in sample")
        if np.any(np.isnan(x) == delta):
            raise InvalidInputError("x must be present exactly where delta is true")
        x[delta] = normalize_angle(x[delta])
        if not np.all(in_window(l[delta], u[delta], x[delta])):
            raise InvalidInputError("an uncensored direction lies outside its window")
        for arr in (x, delta, l, u):
            arr.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "l", l)
        object.__setattr__(self, "u", u)

    @classmethod
    def from_observations(cls, observations: Sequence[CensoredObservation]):
        obs = list(observations)
        return cls(
            x=[np.nan if o.x_prime is None else o.x_prime for o in obs],
            delta=[o.delta for o in obs],
            l=[o.l for o in obs],
            u=[o.u for o in obs],
        )

    @property
    def n(self) -> int:
        return int(self.x.size)

    def __len__(self):
        return self.n

    @property
    def observations(self):
        return [
            CensoredObservation(
                None if not d else float(x), bool(d), float(l), float(u)
            )
            for x, d, l, u in zip(self.x, self.delta, self.l, self.u)
        ]

    @property
    def delta_bar(self) -> float:
        """Fraction of uncensored observations."""
        return int(self.delta.sum()) / self.n

    @property
    def censored_fraction(self) -> float:
        return int((~self.delta).sum()) / self.n

    def window_lengths(self) -> np.ndarray:
        return window_length(self.l, self.u)

    def complement_lengths(self) -> np.ndarray:
        return window_length(self.u, self.l)

    def __eq__(self, other):
        if not isinstance(other, CensoredSample):
            return NotImplemented
        return (
            np.array_equal(self.x, other.x, equal_nan=True)
            and np.array_equal(self.delta, other.delta)
            and np.array_equal(self.l, other.l)
            and np.array_equal(self.u, other.u)
        )

    __hash__ = None


def generate_sample(
    dist: CircularDistribution, model: CensoringModel, n: int, rng: np.random.Generator
) -> CensoredSample:
    """Simulate ``n`` censored observations of ``dist`` under ``model``."""
    if n < 1:
        raise InvalidInputError(f"n must be positive, got {n}")
    x = np.atleast_1d(dist.sample(rng, n)).astype(float)
    l, u = model.draw(rng, n)
    delta = in_window(l, u, x)
    return CensoredSample(x=np.where(delta, x, np.nan), delta=delta, l=l, u=u)


@dataclass(frozen=True)
class ReferenceModel:
    name: str
    distribution: CircularDistribution
    censoring: CensoringModel


_M_PI_1 = VonMises(np.pi, 1.0)

REFERENCE_MODELS = {
    1: ReferenceModel(
        "model1",
        _M_PI_1,
        IndependentPair(VonMises(2 * np.pi / 3, 1.0), VonMises(4 * np.pi / 3, 1.0)),
    ),
    2: ReferenceModel(
        "model2",
        _M_PI_1,
        IndependentPair(VonMises(4 * np.pi / 3, 1.0), VonMises(2 * np.pi / 3, 1.0)),
    ),
    3: ReferenceModel(
        "model3",
        Mixture(((0.6, VonMises(np.pi / 3, 3.0)), (0.4, VonMises(15 * np.pi / 9, 3.0)))),
        IndependentPair(VonMises(2 * np.pi / 3, 3.0), VonMises(4 * np.pi / 3, 3.0)),
    ),
    4: ReferenceModel("model4", _M_PI_1, Deterministic(2 * np.pi / 3, 4 * np.pi / 3)),
}
