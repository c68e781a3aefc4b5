"""Market path over a horizon: flat price with entry, or integrated decline.

A scenario starts from the t = 0 cleared state.  Under fixed closed-form
parameters the regime classifier is time-invariant, so a path is either
emerging throughout (price pinned at the smallest provider's cost, entry
recorded) or mature throughout (price integrated downward with the
configured slope mode, exits and the required offshore share tracked).
The regime is still re-evaluated every step; a switch can only go from
emerging to mature.

The price never crosses the cost floor n*(c - delta_c): a step that would
cross stops the simulation and marks the trajectory, so downstream
statistics are never computed from a saturated path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterator

import numpy as np

from .calibration import AnchorConditions, anchored_params
from .curves import DemandSide, SupplySide
from .equilibrium import (
    SLOPE_MODES,
    classify_regime,
    entry_rate,
    exit_rate,
    price_slope,
    solve_equilibrium,
)
from .errors import DomainError
from .model import ModelParams, min_viable_size, profitability_threshold_size
from .numerics import rk4_step

__all__ = [
    "TrajectoryPoint",
    "Trajectory",
    "TrajectorySummary",
    "ScenarioConfig",
    "SweepRow",
    "simulate",
    "summarize",
    "sweep",
]


@dataclass(frozen=True)
class TrajectoryPoint:
    """One time step of the simulated market path."""

    t: float
    price: float
    price_slope: float
    required_share: float
    marginal_size: float
    demand: float
    supply: float
    entry_rate: float
    exit_rate: float
    profit_frontier: float


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything a simulation run needs.

    When ``anchors`` is set, the normalization solve is applied to
    ``params`` before anything else, so swept parameters re-anchor
    consistently.
    """

    params: ModelParams
    mode: str = "capacity"
    horizon: float = 10.0
    dt: float = 0.01
    anchors: AnchorConditions | None = None

    def __post_init__(self) -> None:
        if self.mode not in SLOPE_MODES:
            raise DomainError(f"mode must be one of {SLOPE_MODES}, got {self.mode!r}")
        if not self.horizon > 0:
            raise DomainError(f"horizon must be > 0, got {self.horizon!r}")
        if not 0 < self.dt <= self.horizon:
            raise DomainError(f"dt must be in (0, horizon], got {self.dt!r}")

    def resolved_params(self) -> ModelParams:
        if self.anchors is None:
            return self.params
        return anchored_params(self.params, self.anchors)


@dataclass(frozen=True)
class Trajectory:
    points: tuple[TrajectoryPoint, ...]
    floor_reached: bool
    mode: str

    def __iter__(self) -> Iterator[TrajectoryPoint]:
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class TrajectorySummary:
    final_price: float
    span: float
    price_drift_pct_per_year: float
    share_gain_pp_per_year: float
    total_exits: float
    total_entries: float
    floor_reached: bool


class _FloorCrossed(Exception):
    """Internal signal: an integration stage dipped to or below the floor."""


def _clamped_share(price: float, params: ModelParams) -> float:
    share = (params.n * params.c - price) / (params.n * params.delta_c)
    return min(max(share, 0.0), 1.0)


def _frontier(slope: float, params: ModelParams) -> float:
    if slope >= 0 or params.mu == 0:
        return 0.0
    return profitability_threshold_size(slope, params)


def simulate(config: ScenarioConfig) -> Trajectory:
    """Run the scenario and return the recorded path.

    Deterministic: identical configs produce bit-identical trajectories.
    """
    params = config.resolved_params()
    demand = DemandSide.closed_form(params)
    supply = SupplySide.closed_form(params)
    steps = int(round(config.horizon / config.dt))
    if steps < 1:
        raise DomainError("horizon shorter than one step")
    floor = params.cost_floor

    label = classify_regime(demand, supply, 0.0)
    if label.is_emerging:
        price = params.entry_price
    else:
        price = solve_equilibrium(demand, supply, 0.0, slope_mode=config.mode).price

    def declining_slope(t: float, p: float) -> float:
        if p <= floor:
            raise _FloorCrossed
        return price_slope(demand, supply, t, p, config.mode)

    points: list[TrajectoryPoint] = []
    floor_reached = False
    mature = label.is_mature
    for k in range(steps + 1):
        t = k * config.dt
        if not mature and classify_regime(demand, supply, t).is_mature:
            # one-way switch: from here on the price declines from its
            # current (emerging) level
            mature = True
        if mature:
            slope = price_slope(demand, supply, t, price, config.mode)
            exits = exit_rate(supply, t, price, slope)
            entries = 0.0
        else:
            slope = 0.0
            exits = 0.0
            entries = entry_rate(demand, supply, t)
        points.append(
            TrajectoryPoint(
                t=t,
                price=price,
                price_slope=slope,
                required_share=_clamped_share(price, params),
                marginal_size=min_viable_size(price, params),
                demand=demand.at(t, price),
                supply=supply.at(t, price),
                entry_rate=entries,
                exit_rate=exits,
                profit_frontier=_frontier(slope, params),
            )
        )
        if k == steps:
            break
        if mature:
            try:
                nxt = rk4_step(declining_slope, t, price, config.dt)
            except _FloorCrossed:
                floor_reached = True
                break
            if nxt <= floor:
                floor_reached = True
                break
            price = nxt
    return Trajectory(points=tuple(points), floor_reached=floor_reached, mode=config.mode)


def summarize(traj: Trajectory) -> TrajectorySummary:
    """Headline statistics of a trajectory.

    Drift is the total relative price change per year of simulated span;
    the share gain is in percentage points per year; exits and entries are
    the trapezoid-integrated flow totals.
    """
    first, last = traj.points[0], traj.points[-1]
    span = last.t - first.t
    ts = np.array([p.t for p in traj.points])
    exits = float(np.trapezoid(np.array([p.exit_rate for p in traj.points]), ts))
    entries = float(np.trapezoid(np.array([p.entry_rate for p in traj.points]), ts))
    if span > 0:
        drift = 100.0 * (last.price - first.price) / (first.price * span)
        gain = 100.0 * (last.required_share - first.required_share) / span
    else:
        drift = 0.0
        gain = 0.0
    return TrajectorySummary(
        final_price=last.price,
        span=span,
        price_drift_pct_per_year=drift,
        share_gain_pp_per_year=gain,
        total_exits=exits,
        total_entries=entries,
        floor_reached=traj.floor_reached,
    )


@dataclass(frozen=True)
class SweepRow:
    """One grid point of a parameter sweep; ``error`` is set when that
    point failed instead of aborting the sweep."""

    value: float
    final_price: float | None = None
    price_drift_pct_per_year: float | None = None
    share_gain_pp_per_year: float | None = None
    total_exits: float | None = None
    floor_reached: bool | None = None
    error: str | None = None


def sweep_values(lo: float, hi: float, step: float) -> list[float]:
    if step <= 0:
        raise DomainError(f"step must be > 0, got {step!r}")
    if hi < lo:
        raise DomainError(f"range is empty: [{lo!r}, {hi!r}]")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [lo + k * step for k in range(count)]


def sweep(base: ScenarioConfig, name: str, lo: float, hi: float, step: float) -> list[SweepRow]:
    """Re-run the scenario across a parameter grid, one row per value.

    ``name`` must be a model parameter field.  Anchored scenarios
    re-anchor at every grid point, so f0/g0 follow the varied parameter.
    Per-point failures are recorded in their row; rows come back ordered
    by parameter value regardless of evaluation order.
    """
    if name not in ModelParams.field_names():
        raise DomainError(f"unknown parameter {name!r}; valid: {ModelParams.field_names()}")
    rows: list[SweepRow] = []
    for value in sweep_values(lo, hi, step):
        try:
            params = base.params.replace(**{name: value})
            traj = simulate(replace(base, params=params))
            s = summarize(traj)
            rows.append(
                SweepRow(
                    value=value,
                    final_price=s.final_price,
                    price_drift_pct_per_year=s.price_drift_pct_per_year,
                    share_gain_pp_per_year=s.share_gain_pp_per_year,
                    total_exits=s.total_exits,
                    floor_reached=s.floor_reached,
                )
            )
        except Exception as exc:  # noqa: BLE001 - recorded per-point by contract
            rows.append(SweepRow(value=value, error=f"{type(exc).__name__}: {exc}"))
    return rows
