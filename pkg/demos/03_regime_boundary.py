"""Find the provider growth rate at which the market stops emerging.

A market emerges while the inflow of newly affordable clients outruns
provider training capacity; the classifier compares the two flows.  Under
the closed forms the comparison reduces to mu <= alpha - psi, so bisecting
mu recovers 3.7%/yr to machine precision - consulting employment growing
at 7%+ therefore implies a mature, price-declining market.
"""

from consultmarket import DemandSide, SupplySide, classify_regime
from consultmarket.scenarios import german_transport_params


def label_at(mu: float) -> str:
    params = german_transport_params(mu=mu)
    d, s = DemandSide.closed_form(params), SupplySide.closed_form(params)
    return classify_regime(d, s, 0.0).tag


print("mu      regime")
for mu in (0.00, 0.02, 0.03, 0.037, 0.04, 0.05, 0.07):
    print(f"{mu:.3f}   {label_at(mu)}")

lo, hi = 0.02, 0.08
for _ in range(60):
    mid = 0.5 * (lo + hi)
    if label_at(mid) == "emerging":
        lo = mid
    else:
        hi = mid

flip = 0.5 * (lo + hi)
print(f"\nboundary at mu = {flip:.12f}  (alpha - psi = {0.073 - 0.036:.12f})")
