"""Angles and oriented arcs on the unit circle.

The circle is identified with ``[0, 2*pi)`` and arcs are traversed
anticlockwise: ``Arc(l, u)`` is the closed set of points met when going from
``l`` to ``u``.  When ``l > u`` the arc wraps through 0, so that
``Arc(l, u)`` and ``Arc(u, l)`` always cover the circle and only share their
endpoints.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidAngleError, InvalidArcError

__all__ = [
    "TWO_PI",
    "normalize_angle",
    "Arc",
    "arc_contains",
    "arc_length",
    "in_window",
    "window_length",
]

TWO_PI = 2.0 * np.pi


def normalize_angle(v):
    """Map an angle (or array of angles) to its representative in [0, 2pi).

    Parameters
    ----------
    v : float or array_like
        Angle(s) in radians. Must be finite.

    Returns
    -------
    float or ndarray
        Same shape as the input.
    """
    arr = np.asarray(v, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise InvalidAngleError(f"angle must be finite, got {v!r}")
    out = np.mod(arr, TWO_PI)
    # np.mod rounds tiny negatives up to exactly 2pi
    out = np.where(out >= TWO_PI, 0.0, out)
    if out.ndim == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class Arc:
    """Closed anticlockwise arc from ``l`` to ``u``; endpoints are normalized."""

    l: float
    u: float

    def __post_init__(self):
        l = normalize_angle(self.l)
        u = normalize_angle(self.u)
        if l == u:
            raise InvalidArcError(f"arc endpoints coincide ({l!r})")
        object.__setattr__(self, "l", l)
        object.__setattr__(self, "u", u)

    def contains(self, x):
        return arc_contains(self, x)

    @property
    def length(self) -> float:
        return arc_length(self)

    def complement(self) -> "Arc":
        """The arc from ``u`` back to ``l``."""
        return Arc(self.u, self.l)


def in_window(l, u, x):
    """Vectorized membership test ``x in [l, u]`` for normalized angles.

    Endpoints count as inside.  Inputs broadcast against each other and are
    assumed to already lie in [0, 2pi).
    """
    l = np.asarray(l, dtype=float)
    u = np.asarray(u, dtype=float)
    x = np.asarray(x, dtype=float)
    plain = (l <= x) & (x <= u)
    wrapped = (x >= l) | (x <= u)
    return np.where(l <= u, plain, wrapped)


def arc_contains(arc: Arc, x):
    """True where ``x`` lies on the closed arc (scalar or array ``x``)."""
    res = in_window(arc.l, arc.u, normalize_angle(x))
    if res.ndim == 0:
        return bool(res)
    return res


_BELOW_TWO_PI = np.nextafter(TWO_PI, 0.0)


def window_length(l, u):
    """Anticlockwise length from ``l`` to ``u``, vectorized.

    A difference just below zero would round up to a full turn; such lengths
    are clamped to the largest float below ``2 pi``.
    """
    out = np.mod(np.asarray(u, dtype=float) - np.asarray(l, dtype=float), TWO_PI)
    return np.minimum(out, _BELOW_TWO_PI)


def arc_length(arc: Arc) -> float:
    """Length of the arc in radians, in (0, 2pi)."""
    return float(window_length(arc.l, arc.u))
