"""Trigonometric projection estimator with penalized model selection.

The estimator works in two steps.  ``psi = f * sigma`` is estimated by
projection onto the trigonometric space of degree ``m``.  Here ``sigma(x)``
is the probability that ``x`` lies in a random observation window, and the
coefficients are empirical means of ``delta * phi(x')``.  The degree is picked by
minimizing the penalized contrast

    -sum_{lambda <= 2m} a_lambda**2 + kappa * Phi0**2 * (2m + 1) / n * delta_bar

and the density is recovered as ``max(psi_hat, 0) / max(sigma_hat, n**-0.5)``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .exceptions import CalibrationFailed, InvalidInputError, SampleTooSmallError
from .geometry import TWO_PI, normalize_angle
from .sampling import CensoredSample

__all__ = [
    "PHI0",
    "DEFAULT_KAPPA",
    "KAPPA_RANGE",
    "trig_basis_eval",
    "default_m_max",
    "fit_coefficients",
    "CoverageFunction",
    "build_coverage",
    "contrast_value",
    "contrast_path",
    "penalty_value",
    "select_model",
    "selection_path",
    "calibrate_kappa",
    "SieveFit",
    "fit_sieve",
    "psi_hat_eval",
    "DensityEstimate",
    "density_eval",
    "estimate_density",
]

logger = logging.getLogger(__name__)

PHI0 = 1.0 / np.sqrt(TWO_PI)
_INV_SQRT_PI = 1.0 / np.sqrt(np.pi)

DEFAULT_KAPPA = 16.0
KAPPA_RANGE = (2.0**-4, 2.0**8)
MIN_MODELS_FOR_CALIBRATION = 10

# rows of harmonics evaluated at once; bounds memory at large n
_BLOCK = 256


def trig_basis_eval(lam: int, x):
    """Orthonormal trigonometric basis function ``phi_lambda`` at ``x``.

    ``phi_0 = 1/sqrt(2pi)``, ``phi_{2j-1} = cos(j x)/sqrt(pi)`` and
    ``phi_{2j} = sin(j x)/sqrt(pi)``.
    """
    if lam < 0:
        raise InvalidInputError(f"basis index must be >= 0, got {lam}")
    x = np.asarray(x, dtype=float)
    if lam == 0:
        out = np.full(x.shape, PHI0)
    else:
        j = (lam + 1) // 2
        trig = np.cos if lam % 2 else np.sin
        out = trig(j * x) * _INV_SQRT_PI
    return float(out) if out.ndim == 0 else out


def default_m_max(n: int) -> int:
    """Largest degree in the model collection ``{1, ..., n//2 - 1}``."""
    return max(1, n // 2 - 1)


def fit_coefficients(sample: CensoredSample, m_max: Optional[int] = None) -> np.ndarray:
    """Empirical Fourier coefficients ``a_hat[lambda]`` for ``lambda <= 2 m_max``.

    Censored observations contribute nothing.  Directions are sorted before
    summation so the result does not depend on the order of the sample.
    """
    n = sample.n
    if n < 1:
        raise InvalidInputError("empty sample")
    if m_max is None:
        m_max = default_m_max(n)
    if m_max < 1:
        raise InvalidInputError(f"m_max must be >= 1, got {m_max}")
    xo = np.sort(sample.x[sample.delta])
    a = np.empty(2 * m_max + 1)
    a[0] = PHI0 * (int(sample.delta.sum()) / n)
    scale = _INV_SQRT_PI / n
    for start in range(1, m_max + 1, _BLOCK):
        j = np.arange(start, min(start + _BLOCK, m_max + 1), dtype=float)
        phase = np.outer(j, xo)
        idx = 2 * j.astype(int)
        a[idx - 1] = np.cos(phase).sum(axis=1) * scale
        a[idx] = np.sin(phase).sum(axis=1) * scale
    return a


def _max_degree(a_hat) -> int:
    size = len(a_hat)
    if size < 3 or size % 2 == 0:
        raise InvalidInputError(f"coefficient vector must have odd length >= 3, got {size}")
    return (size - 1) // 2


def contrast_value(a_hat, m: int) -> float:
    """Empirical contrast of ``psi_hat_m``, i.e. ``-sum_{lambda <= 2m} a_hat**2``."""
    a_hat = np.asarray(a_hat, dtype=float)
    if not 0 <= m <= _max_degree(a_hat):
        raise InvalidInputError(f"degree {m} outside the fitted range")
    return float(-np.cumsum(a_hat[: 2 * m + 1] ** 2)[-1])


def contrast_path(a_hat) -> np.ndarray:
    """Contrast for every degree ``m = 1, ..., m_max`` (index ``m - 1``)."""
    a_hat = np.asarray(a_hat, dtype=float)
    m_max = _max_degree(a_hat)
    return -np.cumsum(a_hat**2)[2 * np.arange(1, m_max + 1)]


def penalty_value(m, n: int, delta_bar: float, kappa: float):
    """Penalty ``kappa * Phi0**2 * D_m / n * delta_bar`` with ``D_m = 2m + 1``."""
    if kappa <= 0:
        raise InvalidInputError(f"kappa must be positive, got {kappa}")
    if not 0.0 <= delta_bar <= 1.0:
        raise InvalidInputError(f"delta_bar must lie in [0, 1], got {delta_bar}")
    dim = 2 * np.asarray(m) + 1
    out = kappa * PHI0**2 * dim * delta_bar / n
    return float(out) if np.ndim(out) == 0 else out


def _models(n: int, m_max: int) -> np.ndarray:
    top = n // 2 - 1
    if top < 1:
        raise SampleTooSmallError(f"need n >= 4 for a non-empty model collection, got n={n}")
    return np.arange(1, min(top, m_max) + 1)


def select_model(a_hat, n: int, delta_bar: float, kappa: float) -> int:
    """Degree minimizing contrast plus penalty; ties go to the smaller degree."""
    ms = _models(n, _max_degree(a_hat))
    crit = contrast_path(a_hat)[ms - 1] + penalty_value(ms, n, delta_bar, kappa)
    return int(ms[np.argmin(crit)])


def selection_path(a_hat, n: int, delta_bar: float):
    """Exact piecewise-constant path ``kappa -> m_hat(kappa)``.

    Returns
    -------
    breaks : ndarray
        Increasing values of kappa at which the selected degree changes.  At
        a break the smaller degree is already selected.
    degrees : ndarray
        ``degrees[0]`` is selected as kappa -> 0+, ``degrees[i + 1]`` from
        ``breaks[i]`` onward.
    """
    ms = _models(n, _max_degree(a_hat))
    crit = contrast_path(a_hat)[ms - 1]
    slope = PHI0**2 * delta_bar / n
    dims = 2 * ms + 1
    if slope <= 0:
        return np.empty(0), np.array([int(ms[np.argmin(crit)])])
    # kappa -> 0+: lowest contrast, then smallest penalty among ties
    cur = int(np.lexsort((dims, crit))[0])
    breaks, degrees = [], [int(ms[cur])]
    kappa = 0.0
    while cur > 0:
        lower = np.arange(cur)
        # kappa at which each smaller model starts beating the current one
        cross = (crit[lower] - crit[cur]) / (slope * (dims[cur] - dims[lower]))
        cross = np.maximum(cross, kappa)
        nxt_kappa = cross.min()
        # among models crossing simultaneously the smallest wins
        cur = int(lower[np.flatnonzero(cross == nxt_kappa)[0]])
        kappa = float(nxt_kappa)
        breaks.append(kappa)
        degrees.append(int(ms[cur]))
    return np.array(breaks), np.array(degrees)


def calibrate_kappa(a_hat, n: int, delta_bar: float, kappa_range=KAPPA_RANGE) -> float:
    """Penalty constant from the dimension-jump heuristic.

    Follows the selected dimension as kappa grows over ``kappa_range`` and
    returns twice the kappa at which it drops the most.

    Raises
    ------
    CalibrationFailed
        If fewer than 10 models are available or the dimension never drops
        inside ``kappa_range``.
    """
    ms = _models(n, _max_degree(a_hat))
    if ms.size < MIN_MODELS_FOR_CALIBRATION:
        raise CalibrationFailed(f"only {ms.size} models; need {MIN_MODELS_FOR_CALIBRATION}")
    breaks, degrees = selection_path(a_hat, n, delta_bar)
    lo, hi = kappa_range
    inside = (breaks >= lo) & (breaks <= hi)
    if not inside.any():
        raise CalibrationFailed("selected dimension is flat over the kappa range")
    drops = 2 * (degrees[:-1] - degrees[1:])
    drops = np.where(inside, drops, -1)
    return 2.0 * float(breaks[int(np.argmax(drops))])


@dataclass(frozen=True)
class SieveFit:
    """Fitted coefficients together with the model-selection outcome."""

    a_hat: np.ndarray
    n: int
    delta_bar: float
    kappa: float
    kappa_source: str
    m_selected: int

    @property
    def m_max(self) -> int:
        return _max_degree(self.a_hat)

    @property
    def models(self) -> np.ndarray:
        return _models(self.n, self.m_max)

    @property
    def contrast(self) -> np.ndarray:
        return contrast_path(self.a_hat)[self.models - 1]

    @property
    def penalty(self) -> np.ndarray:
        return penalty_value(self.models, self.n, self.delta_bar, self.kappa)

    @property
    def selected_coefficients(self) -> np.ndarray:
        return self.a_hat[: 2 * self.m_selected + 1]

    def psi(self, x):
        return psi_hat_eval(self, x)


def fit_sieve(
    sample: CensoredSample,
    m_max: Optional[int] = None,
    kappa: Union[str, float] = "auto",
    default_kappa: float = DEFAULT_KAPPA,
) -> SieveFit:
    """Fit coefficients and select the degree.

    ``kappa="auto"`` calibrates the penalty constant by dimension jump and
    falls back to ``default_kappa`` when no jump is found.
    """
    n = sample.n
    a_hat = fit_coefficients(sample, m_max)
    delta_bar = sample.delta_bar
    if kappa == "auto":
        try:
            value, source = calibrate_kappa(a_hat, n, delta_bar), "calibrated"
        except CalibrationFailed as exc:
            logger.warning("kappa calibration failed (%s); using %g", exc, default_kappa)
            value, source = float(default_kappa), "default"
    else:
        value, source = float(kappa), "fixed"
    m_hat = select_model(a_hat, n, delta_bar, value)
    return SieveFit(a_hat, n, delta_bar, value, source, m_hat)


def psi_hat_eval(fit: SieveFit, x):
    """Projection estimate of ``psi`` at the selected degree; may be negative."""
    x = np.asarray(normalize_angle(x), dtype=float)
    a = fit.selected_coefficients
    out = np.full(x.shape, a[0] * PHI0)
    for j in range(1, fit.m_selected + 1):
        out = out + (a[2 * j - 1] * np.cos(j * x) + a[2 * j] * np.sin(j * x)) * _INV_SQRT_PI
    return float(out) if out.ndim == 0 else out


class CoverageFunction:
    """Empirical coverage ``sigma_hat(x) = #{i : x in [l_i, u_i]} / n``.

    Summing the identity ``1{x in [l, u]} = 1{l <= x} - 1{u < x} + 1{l >= u}``
    over the windows turns each query into two binary searches over the
    sorted starts and ends.
    """

    def __init__(self, l, u):
        l = normalize_angle(np.atleast_1d(np.asarray(l, dtype=float)))
        u = normalize_angle(np.atleast_1d(np.asarray(u, dtype=float)))
        if l.shape != u.shape or l.size == 0:
            raise InvalidInputError("need matching, non-empty window endpoints")
        self.n = int(l.size)
        self.starts = np.sort(l)
        self.ends = np.sort(u)
        self.wrapping = int(np.count_nonzero(l >= u))

    def counts(self, x):
        """Number of windows containing each ``x``."""
        x = np.asarray(normalize_angle(x), dtype=float)
        started = np.searchsorted(self.starts, x, side="right")
        ended = np.searchsorted(self.ends, x, side="left")
        out = started - ended + self.wrapping
        return int(out) if out.ndim == 0 else out

    def __call__(self, x):
        c = np.asarray(self.counts(x))
        out = c / self.n
        return float(out) if out.ndim == 0 else out

    def breakpoints(self) -> np.ndarray:
        """Angles where the step function may jump (sorted, unique)."""
        return np.unique(np.concatenate([self.starts, self.ends]))


def build_coverage(sample: CensoredSample) -> CoverageFunction:
    return CoverageFunction(sample.l, sample.u)


@dataclass(frozen=True)
class DensityEstimate:
    """Quotient density estimate.

    ``variant="threshold"`` divides by ``max(sigma_hat, n**-0.5)``.
    ``variant="window"`` divides by ``sigma_hat`` and returns 0 where no
    window covers the point; it suits fixed, known windows.
    """

    fit: SieveFit
    coverage: CoverageFunction
    variant: str = "threshold"

    def __post_init__(self):
        if self.variant not in ("threshold", "window"):
            raise InvalidInputError(f"unknown variant {self.variant!r}")

    @property
    def threshold(self) -> float:
        return self.fit.n ** -0.5

    def __call__(self, x):
        return density_eval(self, x)


def density_eval(est: DensityEstimate, x):
    """Evaluate the density estimate; always non-negative."""
    psi = np.maximum(np.asarray(psi_hat_eval(est.fit, x)), 0.0)
    sigma = np.asarray(est.coverage(x), dtype=float)
    if est.variant == "threshold":
        out = psi / np.maximum(sigma, est.threshold)
    else:
        covered = sigma > 0
        out = np.where(covered, psi / np.where(covered, sigma, 1.0), 0.0)
    return float(out) if out.ndim == 0 else out


def estimate_density(
    sample: CensoredSample,
    m_max: Optional[int] = None,
    kappa: Union[str, float] = "auto",
    variant: str = "threshold",
    default_kappa: float = DEFAULT_KAPPA,
) -> DensityEstimate:
    """Run the full adaptive pipeline on a censored sample."""
    if sample.n < 4:
        raise SampleTooSmallError(f"need n >= 4, got n={sample.n}")
    fit = fit_sieve(sample, m_max=m_max, kappa=kappa, default_kappa=default_kappa)
    return DensityEstimate(fit, build_coverage(sample), variant)
