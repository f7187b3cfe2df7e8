"""Sampling, lookup tables and least-squares parameter recovery for the generalized curve."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, List, Tuple

import numpy as np

from .curve_core import (
    MACHINE_EPS,
    CurveParams,
    DomainError,
    ParamsLike,
    _curve,
    _curve_array,
    as_params,
    unit_interval,
)

__all__ = [
    "SampleSeries",
    "Lut",
    "FitResult",
    "sample_curve",
    "build_lut",
    "lut_eval",
    "fit_params",
    "FIT_S_MIN",
    "FIT_S_MAX",
]

FIT_S_MIN = 1.0 / 64.0
FIT_S_MAX = 64.0
FIT_GRID = 64
FIT_MAX_ITER = 200
FIT_PARAM_TOL = 1e-6
FIT_POLISH_STEPS = 20
# rmse gap below which pinning t = 1/2 counts as a tie (s = 1 makes t unidentifiable)
FIT_TIE_RMSE = 1e-12


@dataclass(frozen=True)
class SampleSeries:
    """Ordered ``(x, y)`` points on the unit square with strictly increasing ``x``."""

    points: Tuple[Tuple[float, float], ...]

    def __post_init__(self):
        pts = tuple((unit_interval(x, "x"), unit_interval(y, "y")) for x, y in self.points)
        if len(pts) < 2:
            raise DomainError(f"a sample series needs at least 2 points, got {len(pts)}")
        for (x0, _), (x1, _) in zip(pts, pts[1:]):
            if not x1 > x0:
                raise DomainError(f"x must be strictly increasing ({x0!r} then {x1!r})")
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_xy(cls, xs: Iterable[float], ys: Iterable[float]) -> "SampleSeries":
        return cls(tuple(zip(xs, ys)))

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def xs(self) -> List[float]:
        return [x for x, _ in self.points]

    @property
    def ys(self) -> List[float]:
        return [y for _, y in self.points]


@dataclass(frozen=True)
class Lut:
    """Curve values at ``resolution`` equally spaced knots ``x = i / (resolution - 1)``."""

    resolution: int
    values: Tuple[float, ...]
    params: CurveParams

    def __post_init__(self):
        if int(self.resolution) != self.resolution or self.resolution < 2:
            raise DomainError(f"resolution must be an integer >= 2, got {self.resolution!r}")
        values = tuple(float(v) for v in self.values)
        if len(values) != self.resolution:
            raise DomainError("values length must equal resolution")
        if any(b < a for a, b in zip(values, values[1:])):
            raise DomainError("LUT values must be non-decreasing")
        object.__setattr__(self, "resolution", int(self.resolution))
        object.__setattr__(self, "values", values)

    def knots(self) -> List[float]:
        n = self.resolution - 1
        return [i / n for i in range(self.resolution)]


@dataclass(frozen=True)
class FitResult:
    params: CurveParams
    rmse: float
    iterations: int


def _count(n, name: str) -> int:
    if isinstance(n, bool) or int(n) != n or n < 2:
        raise DomainError(f"{name} must be an integer >= 2, got {n!r}")
    return int(n)


def sample_curve(p: ParamsLike, n: int) -> SampleSeries:
    """``n`` evenly spaced samples ``(i/(n-1), curve(i/(n-1), p))``."""
    p = as_params(p)
    n = _count(n, "n")
    xs = [i / (n - 1) for i in range(n)]
    return SampleSeries(tuple((x, _curve(x, p.s, p.t, MACHINE_EPS)) for x in xs))


def build_lut(p: ParamsLike, resolution: int) -> Lut:
    p = as_params(p)
    resolution = _count(resolution, "resolution")
    n = resolution - 1
    values = tuple(_curve(i / n, p.s, p.t, MACHINE_EPS) for i in range(resolution))
    return Lut(resolution, values, p)


def lut_eval(lut: Lut, x) -> float:
    """
    Linearly interpolate ``lut`` at ``x``.

    Knot inputs return the stored value exactly.  Within a cell the result
    is capped at the right knot value so the table stays monotone under
    rounding.
    """
    x = unit_interval(x)
    n = lut.resolution - 1
    pos = x * n
    i = round(pos)
    if abs(pos - i) <= 4 * MACHINE_EPS * max(1.0, pos):
        return lut.values[i]
    i = min(int(math.floor(pos)), n - 1)
    a, b = lut.values[i], lut.values[i + 1]
    return min(b, a + (pos - i) * (b - a))


# ---------------------------------------------------------------------------
# Fitting
# ---------------------------------------------------------------------------

def _sse(xs: np.ndarray, ys: np.ndarray, log_s: float, t: float) -> float:
    r = _curve_array(xs, math.exp(log_s), t, MACHINE_EPS) - ys
    return float(r @ r)


def _lower_partials(x, s, t, eps):
    # d/ds and d/dt of t*x / (x + s*(t - x) + eps)
    d = x + s * (t - x) + eps
    d2 = d * d
    return -t * x * (t - x) / d2, x * (x * (1.0 - s) + eps) / d2


def _jacobian(xs: np.ndarray, s: float, t: float) -> np.ndarray:
    """Partials of the curve at ``xs`` with respect to ``(log s, t)``."""
    lower = xs < t
    ds_lo, dt_lo = _lower_partials(xs, s, t, MACHINE_EPS)
    ds_up, dt_up = _lower_partials(1.0 - xs, s, 1.0 - t, MACHINE_EPS)
    ds = np.where(lower, ds_lo, -ds_up)
    dt = np.where(lower, dt_lo, dt_up)
    return np.column_stack((ds * s, dt))


def _gauss_newton(xs, ys, u, t, best, lo_u, hi_u, fit_t=True):
    steps = 0
    while steps < FIT_POLISH_STEPS:
        s = math.exp(u)
        r = _curve_array(xs, s, t, MACHINE_EPS) - ys
        J = _jacobian(xs, s, t)
        if not fit_t:
            J = J[:, :1]
        step, *_ = np.linalg.lstsq(J, -r, rcond=None)
        u_new = min(max(u + step[0], lo_u), hi_u)
        t_new = min(max(t + step[1], 0.0), 1.0) if fit_t else t
        cand = _sse(xs, ys, u_new, t_new)
        if not cand < best:
            break
        steps += 1
        u, t, best = u_new, t_new, cand
    return u, t, best, steps


_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def _line_search(f, lo: float, hi: float, tol: float = 1e-10) -> float:
    """Golden-section minimizer of ``f`` on ``[lo, hi]``."""
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    return c if fc <= fd else d


def fit_params(samples: SampleSeries) -> FitResult:
    """
    Least-squares ``(s, t)`` for a sample series.

    A 64 x 64 scan over ``log s`` in [log(1/64), log 64] and ``t`` in [0, 1]
    picks a starting cell; coordinate descent then alternates bounded 1-D
    minimizations in ``log s`` and ``t`` until neither moves by more than
    1e-6 (or 200 sweeps), and a few Gauss-Newton steps on the residuals
    finish the convergence.  When ``t`` is unidentifiable (``s`` = 1) the fit
    prefers ``t = 1/2``.  The procedure is deterministic.
    """
    if not isinstance(samples, SampleSeries):
        samples = SampleSeries(tuple(samples))
    if len(samples) < 3:
        raise DomainError(f"fitting needs at least 3 samples, got {len(samples)}")
    xs = np.array(samples.xs)
    ys = np.array(samples.ys)

    lo_u, hi_u = math.log(FIT_S_MIN), math.log(FIT_S_MAX)
    u_grid = np.linspace(lo_u, hi_u, FIT_GRID)
    t_grid = np.linspace(0.0, 1.0, FIT_GRID)
    pred = _curve_array(xs[None, None, :], np.exp(u_grid)[:, None, None],
                        t_grid[None, :, None], MACHINE_EPS)
    sse = ((pred - ys) ** 2).sum(axis=-1)
    # lexicographic tie-break: lowest sse, then t closest to 1/2
    order = np.lexsort((np.abs(t_grid[None, :] - 0.5).repeat(FIT_GRID, 0).ravel(), sse.ravel()))
    iu, it = np.unravel_index(order[0], sse.shape)
    u, t = float(u_grid[iu]), float(t_grid[it])
    du = u_grid[1] - u_grid[0]
    dt = t_grid[1] - t_grid[0]
    best = _sse(xs, ys, u, t)

    iterations = 0
    while iterations < FIT_MAX_ITER:
        iterations += 1
        u_new = _line_search(lambda v: _sse(xs, ys, v, t),
                             max(lo_u, u - 2 * du), min(hi_u, u + 2 * du))
        t_new = _line_search(lambda v: _sse(xs, ys, u_new, v),
                             max(0.0, t - 2 * dt), min(1.0, t + 2 * dt))
        cand = _sse(xs, ys, u_new, t_new)
        if cand > best:
            break
        delta = max(abs(u_new - u), abs(t_new - t))
        u, t, best = u_new, t_new, cand
        if delta < FIT_PARAM_TOL:
            break

    u, t, best, polish = _gauss_newton(xs, ys, u, t, best, lo_u, hi_u)
    iterations += polish

    rmse = math.sqrt(best / len(xs))
    u_half = _line_search(lambda v: _sse(xs, ys, v, 0.5), max(lo_u, u - 2 * du), min(hi_u, u + 2 * du))
    u_half, _, sse_half, _ = _gauss_newton(xs, ys, u_half, 0.5, _sse(xs, ys, u_half, 0.5),
                                           lo_u, hi_u, fit_t=False)
    rmse_half = math.sqrt(sse_half / len(xs))
    if rmse_half <= rmse + FIT_TIE_RMSE:
        u, t, rmse = u_half, 0.5, rmse_half

    return FitResult(CurveParams(math.exp(u), t), rmse, iterations)
