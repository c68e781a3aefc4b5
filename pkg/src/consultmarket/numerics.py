"""Deterministic numeric kernels: tail quadrature, bisection, RK4 stepping.

Kept deliberately simple: the closed forms elsewhere are primary and these
routines serve as the independent cross-check path, so robustness and
bit-reproducibility beat sophistication.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, NoBracketError, NumericError

__all__ = [
    "DensityGrid",
    "Bracket",
    "integrate_tail",
    "find_root",
    "rk4_step",
    "step_path",
    "DEFAULT_PRICE_TOL",
    "DEFAULT_GRID_POINTS",
]

# Root tolerance for price solves: far below any economic significance.
DEFAULT_PRICE_TOL = 1e-6
# Default sample count for density grids.
DEFAULT_GRID_POINTS = 512


@dataclass(frozen=True)
class DensityGrid:
    """Sampled density over a strictly increasing axis.

    ``axis`` holds the sample points (typically log-spaced), ``values`` the
    non-negative density samples.  Arrays are copied and frozen on
    construction, so grids can be shared across threads.
    """

    axis: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        axis = np.asarray(self.axis, dtype=float).copy()
        values = np.asarray(self.values, dtype=float).copy()
        if axis.ndim != 1 or values.shape != axis.shape:
            raise DomainError("axis and values must be 1-d arrays of equal length")
        if axis.size < 16:
            raise DomainError(f"grid needs at least 16 points, got {axis.size}")
        if not np.all(np.diff(axis) > 0):
            raise DomainError("axis must be strictly increasing")
        if not np.all(values >= 0):
            raise DomainError("density values must be non-negative")
        if not (np.all(np.isfinite(axis)) and np.all(np.isfinite(values))):
            raise DomainError("axis and values must be finite")
        axis.flags.writeable = False
        values.flags.writeable = False
        object.__setattr__(self, "axis", axis)
        object.__setattr__(self, "values", values)

    @property
    def lower_bound(self) -> float:
        return float(self.axis[0])

    @property
    def upper_bound(self) -> float:
        return float(self.axis[-1])

    @classmethod
    def log_spaced(
        cls,
        lower: float,
        upper: float,
        fn: Callable[[np.ndarray], np.ndarray],
        points: int = DEFAULT_GRID_POINTS,
    ) -> "DensityGrid":
        """Sample ``fn`` on a log-spaced axis from ``lower`` to ``upper``."""
        if lower <= 0 or upper <= lower:
            raise DomainError("log-spaced axis needs 0 < lower < upper")
        axis = np.exp(np.linspace(math.log(lower), math.log(upper), points))
        # pin the endpoints exactly despite exp/log round-trip noise
        axis[0], axis[-1] = lower, upper
        return cls(axis=axis, values=np.asarray(fn(axis), dtype=float))

    def interp(self, x: float) -> float:
        """Linearly interpolated density at ``x`` (must lie on the axis span)."""
        if not self.lower_bound <= x <= self.upper_bound:
            raise DomainError(
                f"{x!r} outside grid domain [{self.lower_bound!r}, {self.upper_bound!r}]"
            )
        return float(np.interp(x, self.axis, self.values))


def integrate_tail(grid: DensityGrid, from_: float, weight: str = "none") -> float:
    """Trapezoidal integral of the grid density from ``from_`` to the upper edge.

    ``weight="identity"`` multiplies the density by the axis value first
    (the employee-weighted supply integrand).  The partial cell at ``from_``
    is cut by interpolating the integrand linearly, which keeps the result
    additive over adjacent intervals.
    """
    if weight not in ("none", "identity"):
        raise DomainError(f"weight must be 'none' or 'identity', got {weight!r}")
    if not grid.lower_bound <= from_ <= grid.upper_bound:
        raise DomainError(
            f"integration start {from_!r} outside grid domain"
            f" [{grid.lower_bound!r}, {grid.upper_bound!r}]"
        )
    integrand = grid.values if weight == "none" else grid.axis * grid.values
    if from_ == grid.upper_bound:
        return 0.0
    # first axis index strictly right of from_
    i = int(np.searchsorted(grid.axis, from_, side="right"))
    tail = float(np.trapezoid(integrand[i - 1 :], grid.axis[i - 1 :]))
    if from_ > grid.axis[i - 1]:
        # remove the sliver [axis[i-1], from_] of the cut cell
        y0, y1 = integrand[i - 1], integrand[i]
        x0, x1 = grid.axis[i - 1], grid.axis[i]
        y_from = y0 + (y1 - y0) * (from_ - x0) / (x1 - x0)
        tail -= 0.5 * (y0 + y_from) * (from_ - x0)
    return tail


@dataclass(frozen=True)
class Bracket:
    """Interval [lo, hi] with residuals of opposite (or zero) sign."""

    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise DomainError(f"bracket needs lo < hi, got [{self.lo!r}, {self.hi!r}]")
        if self.f_lo * self.f_hi > 0:
            raise DomainError("bracket residuals must not share a sign")

    @classmethod
    def from_fn(cls, residual: Callable[[float], float], lo: float, hi: float) -> "Bracket":
        """Evaluate ``residual`` at both ends; raise if no sign change."""
        f_lo, f_hi = residual(lo), residual(hi)
        if f_lo * f_hi > 0:
            raise NoBracketError("no equilibrium in bracket", lo, hi, f_lo, f_hi)
        return cls(lo=lo, hi=hi, f_lo=f_lo, f_hi=f_hi)


def find_root(
    residual: Callable[[float], float],
    bracket: Bracket,
    tol_abs: float = DEFAULT_PRICE_TOL,
) -> float:
    """Bisection root of a monotone residual; returns the final midpoint.

    Runs until the bracket is narrower than ``tol_abs``.  Purely
    deterministic: identical inputs give bit-identical output.
    """
    if tol_abs <= 0:
        raise DomainError(f"tol_abs must be > 0, got {tol_abs!r}")
    lo, hi, f_lo = bracket.lo, bracket.hi, bracket.f_lo
    while hi - lo > tol_abs:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:  # interval no longer splittable in float
            break
        f_mid = residual(mid)
        if f_lo * f_mid <= 0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    return 0.5 * (lo + hi)


def rk4_step(
    slope_fn: Callable[[float, float], float], t: float, y: float, dt: float
) -> float:
    """One classical Runge-Kutta step of size ``dt``.

    Raises NumericError with the offending (t, y) if any stage slope is
    non-finite.
    """
    k1 = slope_fn(t, y)
    k2 = slope_fn(t + 0.5 * dt, y + 0.5 * dt * k1)
    k3 = slope_fn(t + 0.5 * dt, y + 0.5 * dt * k2)
    k4 = slope_fn(t + dt, y + dt * k3)
    for k in (k1, k2, k3, k4):
        if not math.isfinite(k):
            raise NumericError(f"non-finite slope near t={t!r}, value={y!r}")
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def step_path(
    slope_fn: Callable[[float, float], float],
    t0: float,
    y0: float,
    dt: float,
    steps: int,
) -> np.ndarray:
    """Integrate dy/dt = slope_fn(t, y) with fixed-step RK4.

    Returns an array of shape (steps + 1, 2) holding (t, y) including the
    initial point.  Global error is O(dt^4) on smooth slopes.
    """
    if dt <= 0:
        raise DomainError(f"dt must be > 0, got {dt!r}")
    if steps < 1:
        raise DomainError(f"steps must be >= 1, got {steps!r}")
    out = np.empty((steps + 1, 2), dtype=float)
    out[0] = (t0, y0)
    t, y = t0, y0
    for k in range(1, steps + 1):
        y = rk4_step(slope_fn, t, y, dt)
        t = t0 + k * dt
        out[k] = (t, y)
    return out
