"""Clearing, regime classification, entry/exit flows, price slope modes."""

import math
from dataclasses import dataclass

import numpy as np
import pytest

from consultmarket import (
    DemandSide,
    DomainError,
    ModelParams,
    NumericError,
    RegimeError,
    SupplySide,
    classify_regime,
    entry_rate,
    exit_rate,
    price_slope,
    solve_equilibrium,
)
from consultmarket.numerics import DensityGrid, integrate_tail
from consultmarket.scenarios import german_transport_params


def exit_rate_by_mass_crossing(supply, t, price, slope, dt=1e-6):
    """Oracle: count the density mass swept across the viability threshold
    by a price move of slope*dt, via quadrature over the swept band."""
    p = supply.params
    e0 = (p.n * p.c - price) / (p.n * p.beta * p.delta_c)
    e1 = (p.n * p.c - (price + slope * dt)) / (p.n * p.beta * p.delta_c)
    lo, hi = sorted((e0, e1))
    axis = np.linspace(lo, hi, 2001)
    band = DensityGrid(axis=axis, values=np.array([supply.density(t, e) for e in axis]))
    return integrate_tail(band, lo) / dt


class TestSolveEquilibrium:
    def test_calibrated_scenario(self, german_demand, german_supply):
        eq = solve_equilibrium(german_demand, german_supply, 0.0)
        assert eq.price == pytest.approx(37_000.0, abs=1e-6)
        assert eq.served == pytest.approx(7500.0, rel=1e-8)
        assert eq.marginal_size == pytest.approx(2600.0, rel=1e-9)
        assert eq.required_share == pytest.approx(0.52, rel=1e-9)
        assert eq.required_share_complement == pytest.approx(0.48, rel=1e-9)
        assert eq.regime.is_mature
        assert eq.exit_rate is not None and eq.entry_rate is None

    def test_cleared_stocks_match(self, german_demand, german_supply):
        eq = solve_equilibrium(german_demand, german_supply, 0.0)
        supply_there = german_supply.at(0.0, eq.price)
        assert abs(eq.served - supply_there) < 1e-3

    def test_time_invariant_price_when_growth_rates_match(self):
        params = german_transport_params(mu=0.073)  # mu == alpha
        demand, supply = DemandSide.closed_form(params), SupplySide.closed_form(params)
        p0 = solve_equilibrium(demand, supply, 0.0).price
        p3 = solve_equilibrium(demand, supply, 3.0).price
        assert p3 == pytest.approx(p0, abs=1e-5)

    def test_synthetic_linear_curves(self):
        params = ModelParams(
            v=0.5, n=1.0, c=60.0, delta_c=30.0, beta=0.002,
            psi=0.03, mu=0.04, alpha=0.05, r_m=10.0, f0=1.0, g0=1.0,
        )

        @dataclass
        class LinearDemand:
            params: ModelParams

            def at(self, t, p, mode=None):
                return 100.0 - p

            def density(self, t, r):
                return 1.0

        @dataclass
        class LinearSupply:
            params: ModelParams

            def at(self, t, p, mode=None):
                return p

            def density(self, t, e):
                return 1.0

        eq = solve_equilibrium(LinearDemand(params), LinearSupply(params), 0.0)
        assert eq.price == pytest.approx(50.0, abs=1e-6)
        assert eq.served == pytest.approx(50.0, abs=1e-5)

    def test_market_cannot_clear(self, german_params):
        # demand blown up far beyond any supply on the price domain
        params = german_params.replace(f0=german_params.f0 * 1e6)
        demand, supply = DemandSide.closed_form(params), SupplySide.closed_form(params)
        with pytest.raises(NumericError, match="cannot clear"):
            solve_equilibrium(demand, supply, 0.0)

    def test_mismatched_params_rejected(self, german_demand, german_params):
        other = SupplySide.closed_form(german_params.replace(g0=1.0))
        with pytest.raises(DomainError):
            solve_equilibrium(german_demand, other, 0.0)


class TestClassifyRegime:
    def test_calibrated_growth_is_mature(self, german_demand, german_supply):
        label = classify_regime(german_demand, german_supply, 0.0)
        assert label.is_mature
        assert label.margin == pytest.approx(0.037 / 0.05 - 1.0, rel=1e-9)

    def test_slow_provider_growth_is_emerging(self):
        params = german_transport_params(mu=0.03)
        demand, supply = DemandSide.closed_form(params), SupplySide.closed_form(params)
        label = classify_regime(demand, supply, 0.0)
        assert label.is_emerging
        # oracle: direct flux evaluation at an arbitrary price
        for p_test in (34_000.0, 40_000.0, 49_000.0):
            flux = params.psi * (p_test / params.v) * demand.density(0.0, p_test / params.v)
            assert flux >= params.mu * demand.at(0.0, p_test)

    def test_tie_classifies_emerging(self):
        params = german_transport_params(mu=0.073 - 0.036)
        demand, supply = DemandSide.closed_form(params), SupplySide.closed_form(params)
        assert classify_regime(demand, supply, 0.0).is_emerging

    def test_label_independent_of_test_price(self, german_demand, german_supply, german_params):
        lo = german_params.cost_floor
        hi = german_params.full_local_cost
        labels = {
            classify_regime(german_demand, german_supply, 0.0, p_test).tag
            for p_test in np.linspace(lo + 1.0, hi, 25)
        }
        assert labels == {"mature"}

    def test_margin_constant_over_prices_and_time(self, german_demand, german_supply, german_params):
        # flux/(mu*stock) reduces to (alpha - psi)/mu for every p and t
        p = german_params
        expected = (p.alpha - p.psi) / p.mu - 1.0
        for t in (0.0, 3.0):
            for p_test in np.geomspace(p.v * p.r_m, p.full_local_cost, 10):
                label = classify_regime(german_demand, german_supply, t, p_test)
                assert label.margin == pytest.approx(expected, rel=1e-12)

    def test_zero_mu_is_emerging_with_infinite_margin(self):
        params = german_transport_params(mu=0.0)
        demand, supply = DemandSide.closed_form(params), SupplySide.closed_form(params)
        label = classify_regime(demand, supply, 0.0)
        assert label.is_emerging
        assert math.isinf(label.margin)


class TestEntryRate:
    def test_wrong_regime_rejected(self, german_demand, german_supply):
        with pytest.raises(RegimeError):
            entry_rate(german_demand, german_supply, 0.0)

    def test_zero_mu_entry_equals_net_demand_growth(self):
        params = german_transport_params(mu=0.0)
        demand, supply = DemandSide.closed_form(params), SupplySide.closed_form(params)
        got = entry_rate(demand, supply, 0.0)
        p_star = params.entry_price
        expected = (params.alpha - params.psi) * demand.at(0.0, p_star)
        assert got == pytest.approx(expected, rel=1e-9)
        # cross-check the flux identity by finite-differencing D in t:
        # psi*(p/v)*f = dD/dt - psi*D
        h = 1e-6
        dD_dt = (demand.at(h, p_star) - demand.at(0.0, p_star)) / h
        assert got == pytest.approx(dD_dt - params.psi * demand.at(0.0, p_star), rel=1e-4)

    def test_boundary_growth_rate_gives_zero_entry(self):
        params = german_transport_params(mu=0.073 - 0.036)
        demand, supply = DemandSide.closed_form(params), SupplySide.closed_form(params)
        assert abs(entry_rate(demand, supply, 0.0)) < 1e-9 * demand.at(0.0, params.entry_price)


class TestExitRate:
    def test_calibrated_example_vs_mass_crossing_oracle(self, german_supply):
        got = exit_rate(german_supply, 0.0, 37_000.0, -185.0)
        assert got == pytest.approx(0.0444711538461, rel=1e-9)
        oracle = exit_rate_by_mass_crossing(german_supply, 0.0, 37_000.0, -185.0)
        assert got == pytest.approx(oracle, rel=1e-6)

    def test_zero_slope(self, german_supply):
        assert exit_rate(german_supply, 0.0, 37_000.0, 0.0) == 0.0

    def test_linear_in_slope(self, german_supply):
        one = exit_rate(german_supply, 0.0, 37_000.0, -185.0)
        two = exit_rate(german_supply, 0.0, 37_000.0, -370.0)
        assert two == pytest.approx(2 * one, rel=1e-12)

    def test_positive_slope_rejected(self, german_supply):
        with pytest.raises(RegimeError):
            exit_rate(german_supply, 0.0, 37_000.0, 5.0)


class TestPriceSlope:
    def test_capacity_mode_calibrated(self, german_demand, german_supply):
        got = price_slope(german_demand, german_supply, 0.0, 37_000.0, "capacity")
        assert got == pytest.approx(-156.0, rel=1e-9)

    def test_literal_mode_calibrated(self, german_demand, german_supply):
        got = price_slope(german_demand, german_supply, 0.0, 37_000.0, "literal")
        assert got == pytest.approx(-405_600.0, rel=1e-9)
        # identical balance, weighted by the marginal firm's e_min/n capacity
        capacity = price_slope(german_demand, german_supply, 0.0, 37_000.0, "capacity")
        assert got == pytest.approx(capacity * 2600.0, rel=1e-9)

    def test_capacity_mode_closed_form_identity(self, german_demand, german_supply, german_params):
        # dP/dt = (alpha - psi - mu) * (P - floor) for closed-form curves
        p = german_params
        rate = p.alpha - p.psi - p.mu
        for t in (0.0, 2.5, 7.0):
            for price in np.linspace(p.cost_floor + 500.0, p.entry_price - 5.0, 9):
                got = price_slope(german_demand, german_supply, t, price, "capacity")
                assert got == pytest.approx(rate * (price - p.cost_floor), rel=1e-9)

    def test_balanced_rates_give_flat_price(self):
        params = german_transport_params(mu=0.073 - 0.036)
        demand, supply = DemandSide.closed_form(params), SupplySide.closed_form(params)
        got = price_slope(demand, supply, 0.0, 37_000.0, "capacity")
        assert abs(got) < 1e-9 * 12_000.0

    def test_unknown_mode_rejected(self, german_demand, german_supply):
        with pytest.raises(DomainError):
            price_slope(german_demand, german_supply, 0.0, 37_000.0, "hybrid")
