"""Market constants and the pointwise cost algebra of provider firms.

A provider with ``e`` employees can displace a fraction ``min(beta*e, 1)``
of its delivery work to a lower-cost location, which prices one client
engagement (``n`` workers) at ``n*(c - phi(e)*delta_c)``.  Everything here
is a pure function of its arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

from .errors import BelowCostFloorError, DomainError, RegimeError

__all__ = [
    "ModelParams",
    "ProviderBounds",
    "offshore_fraction",
    "engagement_cost",
    "min_viable_size",
    "required_offshore_share",
    "profitability_threshold_size",
]


@dataclass(frozen=True)
class ModelParams:
    """All market constants in one validated record.

    v:        benefit factor, fraction of client revenue
    n:        workers per client engagement
    c:        local unit labor cost, currency/worker/year
    delta_c:  savings per fully displaced worker, currency/worker/year
    beta:     displaceable activity fraction per employee of provider size, 1/employee
    psi:      client revenue growth rate, 1/year
    mu:       provider workforce growth rate, 1/year
    alpha:    client birth rate, 1/year (must exceed psi for the demand
              tail integral to converge)
    r_m:      entrant client revenue, currency/year
    f0:       demand density normalization, firms
    g0:       supply (Zipf) normalization, firms
    """

    v: float
    n: float
    c: float
    delta_c: float
    beta: float
    psi: float
    mu: float
    alpha: float
    r_m: float
    f0: float
    g0: float

    def __post_init__(self) -> None:
        checks = [
            (self.v > 0, "v must be > 0"),
            (self.n >= 1, "n must be >= 1"),
            (self.c > 0, "c must be > 0"),
            (0 < self.delta_c <= self.c, "delta_c must be in (0, c]"),
            (self.beta > 0, "beta must be > 0"),
            (self.beta * self.n <= 1, "beta*n must be <= 1"),
            (self.psi > 0, "psi must be > 0"),
            (self.mu >= 0, "mu must be >= 0"),
            (self.alpha > self.psi, "alpha must exceed psi (demand tail diverges otherwise)"),
            (self.r_m > 0, "r_m must be > 0"),
            (self.f0 > 0, "f0 must be > 0"),
            (self.g0 > 0, "g0 must be > 0"),
        ]
        for ok, msg in checks:
            if not ok:
                raise DomainError(msg)

    @property
    def cost_floor(self) -> float:
        """n*(c - delta_c): engagement cost under full displacement."""
        return self.n * (self.c - self.delta_c)

    @property
    def full_local_cost(self) -> float:
        """n*c: engagement cost with no displacement at all."""
        return self.n * self.c

    @property
    def entry_price(self) -> float:
        """Cost of the smallest viable provider, n*(c - phi(n)*delta_c)."""
        return engagement_cost(self.n, self)

    @property
    def bounds(self) -> "ProviderBounds":
        return ProviderBounds(e_min_domain=self.n, e_max_domain=1.0 / self.beta)

    def replace(self, **changes: float) -> "ModelParams":
        return replace(self, **changes)

    @classmethod
    def field_names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))


@dataclass(frozen=True)
class ProviderBounds:
    """Provider size domain [n, 1/beta].

    The upper edge is where displacement saturates at 100%; beyond it extra
    size buys no further cost advantage, and the Zipf-weighted supply
    integral only stays finite with this truncation.
    """

    e_min_domain: float
    e_max_domain: float

    def __post_init__(self) -> None:
        if self.e_min_domain > self.e_max_domain:
            raise DomainError("provider size domain is empty (n > 1/beta)")


def offshore_fraction(e: float, params: ModelParams) -> float:
    """Fraction of delivery work a provider of size ``e`` can displace.

    Proportional to size and capped at full displacement: min(beta*e, 1).
    """
    if e < 0:
        raise DomainError(f"provider size must be >= 0, got {e!r}")
    return min(params.beta * e, 1.0)


def engagement_cost(e: float, params: ModelParams) -> float:
    """Yearly cost of one engagement for a provider of size ``e``.

    n*(c - phi(e)*delta_c); non-increasing in e, floored at n*(c - delta_c).
    """
    return params.n * (params.c - offshore_fraction(e, params) * params.delta_c)


def min_viable_size(p: float, params: ModelParams) -> float:
    """Smallest provider size able to break even at price ``p``.

    Inverts the engagement cost: (n*c - p)/(n*beta*delta_c), clamped below
    at n because smaller practices cannot exist.
    """
    if p <= params.cost_floor:
        raise BelowCostFloorError(
            f"price {p!r} is at or below the cost floor {params.cost_floor!r};"
            " no provider is viable"
        )
    raw = (params.n * params.c - p) / (params.n * params.beta * params.delta_c)
    return max(raw, params.n)


def required_offshore_share(p: float, params: ModelParams) -> float:
    """Displacement share the marginal provider needs to break even at ``p``.

    (n*c - p)/(n*delta_c), affine in p; 0 at full local cost, 1 at the floor.
    """
    if not params.cost_floor <= p <= params.full_local_cost:
        raise DomainError(
            f"price {p!r} outside [{params.cost_floor!r}, {params.full_local_cost!r}]"
        )
    return (params.n * params.c - p) / (params.n * params.delta_c)


def profitability_threshold_size(price_slope: float, params: ModelParams) -> float:
    """Provider size above which displacement gains outpace a price decline.

    A provider growing at rate mu adds displacement savings worth
    beta*mu*e*n*delta_c per year; sizes above |price_slope| divided by that
    coefficient see their per-engagement margin improve.  Returns 0 when
    prices are flat or rising.
    """
    if not math.isfinite(price_slope):
        raise DomainError(f"price slope must be finite, got {price_slope!r}")
    if price_slope >= 0:
        return 0.0
    if params.mu == 0:
        raise RegimeError(
            "no provider outruns the price decline: provider growth rate mu is zero"
        )
    return abs(price_slope) / (params.beta * params.mu * params.n * params.delta_c)
