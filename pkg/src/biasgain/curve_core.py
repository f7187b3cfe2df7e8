"""
Schlick's bias/gain and their two-parameter generalization.

The generalized curve ``curve(x, (s, t))`` maps [0, 1] onto itself with
fixed points at 0, t and 1.  ``t`` is the threshold where the curve
switches from its lower to its upper branch, and ``s`` is the slope there.
``s = 1`` gives the identity, ``t = 1/2`` gives Schlick's gain and
``t`` in {0, 1} gives Schlick's bias.

Every function here is scalar, pure and works in 64-bit floats.  Invalid
inputs (out of range, NaN, infinite) raise :class:`DomainError`; nothing
is silently clamped except the final ulp-level overshoot of a result.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

__all__ = [
    "MACHINE_EPS",
    "DomainError",
    "ShapeParam",
    "CurveParams",
    "EpsilonPolicy",
    "schlick_bias",
    "schlick_gain",
    "curve",
    "curve_array",
    "curve_inverse",
    "curve_derivative",
    "reflect_params",
    "bias_as_curve",
    "gain_as_curve",
]

MACHINE_EPS = sys.float_info.epsilon


class DomainError(ValueError):
    """An argument is outside the domain of a curve function."""


def _finite(name: str, value) -> float:
    try:
        v = float(value)
    except (TypeError, ValueError):
        raise DomainError(f"{name} must be a real number, got {value!r}") from None
    if not math.isfinite(v):
        raise DomainError(f"{name} must be finite, got {v!r}")
    return v


def unit_interval(value, name: str = "x") -> float:
    """Validate that ``value`` is a finite float in [0, 1] and return it."""
    v = _finite(name, value)
    if not 0.0 <= v <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {v!r}")
    return v


def _clamp01(y: float) -> float:
    return min(max(y, 0.0), 1.0)


@dataclass(frozen=True)
class ShapeParam:
    """Shape parameter ``a`` of Schlick's bias and gain, in the open interval (0, 1)."""

    a: float

    def __post_init__(self):
        a = _finite("a", self.a)
        if not 0.0 < a < 1.0:
            raise DomainError(f"a must lie in the open interval (0, 1), got {a!r}")
        object.__setattr__(self, "a", a)


@dataclass(frozen=True)
class CurveParams:
    """Slope ``s >= 0`` at the threshold and threshold ``t`` in [0, 1]."""

    s: float
    t: float

    def __post_init__(self):
        s = _finite("s", self.s)
        if s < 0.0:
            raise DomainError(f"s must be >= 0, got {s!r}")
        t = unit_interval(self.t, "t")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "t", t)

    def __iter__(self):
        yield self.s
        yield self.t


@dataclass(frozen=True)
class EpsilonPolicy:
    """Denominator guard for the generalized curve."""

    eps: float = MACHINE_EPS

    def __post_init__(self):
        eps = _finite("eps", self.eps)
        if eps <= 0.0:
            raise DomainError(f"eps must be > 0, got {eps!r}")
        object.__setattr__(self, "eps", eps)


ParamsLike = Union[CurveParams, Tuple[float, float]]
EpsLike = Union[EpsilonPolicy, float]


def as_params(p: ParamsLike) -> CurveParams:
    if isinstance(p, CurveParams):
        return p
    try:
        s, t = p
    except (TypeError, ValueError):
        raise DomainError(f"expected CurveParams or an (s, t) pair, got {p!r}") from None
    return CurveParams(s, t)


def _shape(a) -> float:
    return a.a if isinstance(a, ShapeParam) else ShapeParam(a).a


def _eps(eps: EpsLike) -> float:
    return eps.eps if isinstance(eps, EpsilonPolicy) else EpsilonPolicy(eps).eps


# ---------------------------------------------------------------------------
# Schlick's one-parameter forms
# ---------------------------------------------------------------------------

def _bias(x: float, a: float) -> float:
    return x / ((1.0 / a - 2.0) * (1.0 - x) + 1.0)


def schlick_bias(x, a) -> float:
    """
    Schlick's bias ``x / ((1/a - 2)(1 - x) + 1)``.

    Pushes ``x`` toward 0 for ``a < 1/2`` and toward 1 for ``a > 1/2``;
    ``a = 1/2`` is the identity.
    """
    x = unit_interval(x)
    return _clamp01(_bias(x, _shape(a)))


def schlick_gain(x, a) -> float:
    """
    Schlick's gain: two bias curves joined at ``x = 1/2``.

    The lower half uses ``a`` and the upper half ``1 - a``, each scaled and
    shifted into its quadrant.
    """
    x = unit_interval(x)
    a = _shape(a)
    if x < 0.5:
        y = _bias(2.0 * x, a) / 2.0
    else:
        y = (_bias(2.0 * x - 1.0, 1.0 - a) + 1.0) / 2.0
    return _clamp01(y)


# ---------------------------------------------------------------------------
# Generalized curve
# ---------------------------------------------------------------------------
#
# Lower branch t*x / (x + s*(t - x) + eps) is evaluated as
# t / (1 + s*(t/x - 1) + eps/x).  Each step is monotone in x, so the
# rounded result stays non-decreasing even on the flat s -> 0 plateau.
# The upper branch is the lower branch reflected through (1/2, 1/2):
# with u = 1 - x and v = 1 - t its denominator 1 - x - s*(t - x) + eps
# equals u + s*(v - u) + eps.

def _lower(x: float, s: float, t: float, eps: float) -> float:
    if x <= 0.0:
        return 0.0
    d = 1.0 + eps / x
    if s != 0.0:
        d += s * (t / x - 1.0)
    return t / d


def _curve(x: float, s: float, t: float, eps: float) -> float:
    if x < t:
        y = _lower(x, s, t, eps)
    else:
        y = 1.0 - _lower(1.0 - x, s, 1.0 - t, eps)
    return _clamp01(y)


def curve(x, p: ParamsLike, eps: EpsLike = MACHINE_EPS) -> float:
    """
    Evaluate the generalized bias/gain curve at ``x``.

    Uses the lower branch for ``x < t`` and the upper one for ``x >= t``.
    The result is clamped into [0, 1] to absorb rounding overshoot.

    >>> round(curve(0.25, (2.0, 0.5)), 12)
    0.166666666667
    >>> curve(0.0, (2.0, 0.5)), curve(1.0, (2.0, 0.5))
    (0.0, 1.0)
    """
    x = unit_interval(x)
    p = as_params(p)
    return _curve(x, p.s, p.t, _eps(eps))


def curve_array(x, p: ParamsLike, eps: EpsLike = MACHINE_EPS) -> np.ndarray:
    """
    Elementwise :func:`curve` over an array of inputs.

    Uses the same operation sequence as the scalar path, so results are
    bit-identical to calling :func:`curve` on each element.
    """
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)) or np.any((x < 0.0) | (x > 1.0)):
        raise DomainError("all x must be finite and lie in [0, 1]")
    p = as_params(p)
    return _curve_array(x, p.s, p.t, _eps(eps))


def _lower_array(x, s, t, eps):
    # s and t may be broadcastable arrays (used by the fitter's grid scan).
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        d = 1.0 + eps / x
        d = np.where(s != 0.0, d + s * (t / x - 1.0), d)
        return np.where(x > 0.0, t / d, 0.0)


def _curve_array(x, s, t, eps):
    y = np.where(x < t, _lower_array(x, s, t, eps),
                 1.0 - _lower_array(1.0 - x, s, 1.0 - t, eps))
    return np.clip(y, 0.0, 1.0)


def curve_inverse(y, p: ParamsLike, eps: EpsLike = MACHINE_EPS) -> float:
    """
    Invert the curve: evaluating with the reciprocal slope undoes ``curve``.

    ``s = 0`` is rejected since the plateau it produces is not invertible.
    """
    y = unit_interval(y, "y")
    p = as_params(p)
    if p.s == 0.0:
        raise DomainError("curve_inverse requires s > 0")
    inv = 1.0 / p.s
    if not math.isfinite(inv):
        raise DomainError(f"reciprocal of s={p.s!r} overflows")
    return _curve(y, inv, p.t, _eps(eps))


def _lower_slope(x: float, s: float, t: float, eps: float) -> float:
    # d/dx of t*x / (x + s*(t - x) + eps)
    d = x + s * (t - x) + eps
    return t * (s * t + eps) / (d * d)


def curve_derivative(x, p: ParamsLike, eps: EpsLike = MACHINE_EPS, branch: str = "auto") -> float:
    """
    Analytic ``d curve / dx``.

    ``branch`` selects which formula is used: ``"auto"`` follows the same
    ``x < t`` split as :func:`curve`; ``"lower"`` and ``"upper"`` force one
    branch, which is how the slope match at the knot is checked.  Both
    branches give ``s`` at ``x = t``.
    """
    x = unit_interval(x)
    p = as_params(p)
    e = _eps(eps)
    if branch == "auto":
        branch = "lower" if x < p.t else "upper"
    if branch == "lower":
        return _lower_slope(x, p.s, p.t, e)
    if branch == "upper":
        return _lower_slope(1.0 - x, p.s, 1.0 - p.t, e)
    raise ValueError(f"branch must be 'auto', 'lower' or 'upper', got {branch!r}")


# ---------------------------------------------------------------------------
# Identities
# ---------------------------------------------------------------------------

def reflect_params(p: ParamsLike) -> CurveParams:
    """Parameters of the point-reflected curve: ``curve(x, p) == 1 - curve(1 - x, reflect_params(p))``."""
    p = as_params(p)
    return CurveParams(p.s, 1.0 - p.t)


def _slope_from_shape(a: float) -> float:
    # a = 1 / (s + 1)
    return 1.0 / a - 1.0


def bias_as_curve(a) -> Tuple[CurveParams, CurveParams]:
    """
    The two curve parameterizations that reproduce ``schlick_bias(., a)``.

    Returns ``((1/s, 0), (s, 1))`` with ``s = 1/a - 1``.
    """
    s = _slope_from_shape(_shape(a))
    return CurveParams(1.0 / s, 0.0), CurveParams(s, 1.0)


def gain_as_curve(a) -> CurveParams:
    """Curve parameters ``(1/a - 1, 1/2)`` reproducing ``schlick_gain(., a)``."""
    return CurveParams(_slope_from_shape(_shape(a)), 0.5)
