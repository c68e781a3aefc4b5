"""Built-in calibrated scenario: consulting for the German transportation sector.

Point estimates behind the constants (OECD-derived sector records and
public salary data): client firms grow revenue at about 3.6%/year with a
7.3%/year birth rate and entrants near 1.3M EUR revenue; a consulting
engagement needs one worker at about 50k EUR/year locally, half of that
saved per fully displaced worker; displaceable work scales with provider
size at 0.02% per employee; the engagement is worth about 2.5% of client
revenue (general costs near 25% of revenue, cut by 10%).

The provider workforce growth rate is only bounded by the data (sector
employment has grown at 7%+ while the regime threshold sits at
alpha - psi = 3.7%), so it is exposed as an argument; 0.05 is the working
default and the sweep facility covers the plausible range.

Anchors: the 7500 largest client firms served at a 37k EUR price, which
pins f0 and g0.
"""

from __future__ import annotations

from .calibration import AnchorConditions, anchored_params
from .dynamics import ScenarioConfig
from .model import ModelParams

__all__ = [
    "german_transport_anchors",
    "german_transport_params",
    "german_transport_scenario",
]

_GERMAN_CONSTANTS = dict(
    v=0.025,
    n=1.0,
    c=50_000.0,
    delta_c=25_000.0,
    beta=0.0002,
    psi=0.036,
    alpha=0.073,
    r_m=1.3e6,
)


def german_transport_anchors() -> AnchorConditions:
    return AnchorConditions(served0=7500.0, price0=37_000.0)


def german_transport_params(mu: float = 0.05) -> ModelParams:
    """Calibrated parameters with (f0, g0) already anchored."""
    provisional = ModelParams(mu=mu, f0=1.0, g0=1.0, **_GERMAN_CONSTANTS)
    return anchored_params(provisional, german_transport_anchors())


def german_transport_scenario(
    mu: float = 0.05,
    mode: str = "capacity",
    horizon: float = 10.0,
    dt: float = 0.01,
) -> ScenarioConfig:
    return ScenarioConfig(
        params=german_transport_params(mu),
        mode=mode,
        horizon=horizon,
        dt=dt,
        anchors=german_transport_anchors(),
    )
