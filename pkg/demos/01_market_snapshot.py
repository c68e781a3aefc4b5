"""Clear the calibrated market once and look at the result.

The built-in scenario covers consulting services for the German
transportation sector: 7500 client firms served at a 37k EUR price pins
the two free curve normalizations, and everything else follows from the
closed forms.  We also dump the demand/supply curves on a price grid so
the crossing can be plotted with any tool.
"""

from pathlib import Path

import numpy as np

from consultmarket import DemandSide, SupplySide, solve_equilibrium
from consultmarket.scenarios import german_transport_params

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

params = german_transport_params(mu=0.05)
demand = DemandSide.closed_form(params)
supply = SupplySide.closed_form(params)

eq = solve_equilibrium(demand, supply, t=0.0)

print("calibrated parameters")
print(f"  client growth psi      = {params.psi:.3f}/yr")
print(f"  client birth rate alpha= {params.alpha:.3f}/yr")
print(f"  provider growth mu     = {params.mu:.3f}/yr")
print(f"  anchored f0, g0        = {params.f0:.5f}, {params.g0}")
print()
print("cleared market at t = 0")
print(f"  price                  = {eq.price:,.2f} EUR/engagement/yr")
print(f"  served clients         = {eq.served:,.1f}")
print(f"  regime                 = {eq.regime.tag} (margin {eq.regime.margin:+.3f})")
print(f"  marginal provider size = {eq.marginal_size:,.0f} employees")
print(f"  required offshore share= {eq.required_share:.2%} (complement {eq.required_share_complement:.2%})")
print(f"  price slope            = {eq.price_slope:,.1f} EUR/yr^2")
print(f"  exit rate              = {eq.exit_rate:.4f} firms/yr")

# the crossing, as plot-ready data
prices = np.linspace(params.cost_floor, params.full_local_cost, 251)
rows = ["price,demand,supply"]
for p in prices:
    rows.append(f"{p:.2f},{demand.at(0.0, p):.2f},{supply.at(0.0, p):.2f}")
curve_path = OUT / "market_curves.csv"
curve_path.write_text("\n".join(rows) + "\n", encoding="utf-8")
print(f"\nwrote {curve_path} (demand falls, supply rises; they cross at the price above)")
