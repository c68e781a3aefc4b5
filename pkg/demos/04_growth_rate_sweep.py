"""Sweep the one parameter the data only bounds: provider growth mu.

Sector records bound mu from below (7%+ employment growth across all
consulting) but do not pin the transport-practice value, so we sweep the
plausible range and read off which mu reproduces a -0.5%/yr price decline
with a +0.7pp/yr rise in the required offshore share.
"""

from pathlib import Path

from consultmarket import sweep
from consultmarket.scenarios import german_transport_scenario

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

base = german_transport_scenario(mu=0.05, mode="capacity", horizon=10.0, dt=0.01)
rows = sweep(base, "mu", 0.040, 0.080, 0.005)

print("mu      drift %/yr   share gain pp/yr   exits   drift in [-0.55,-0.45] & gain in [0.65,0.80]?")
lines = ["mu,price_drift_pct_per_year,share_gain_pp_per_year,total_exits"]
for row in rows:
    hit = -0.55 <= row.price_drift_pct_per_year <= -0.45 and 0.65 <= row.share_gain_pp_per_year <= 0.80
    print(
        f"{row.value:.3f}   {row.price_drift_pct_per_year:+.4f}      "
        f"{row.share_gain_pp_per_year:+.4f}            {row.total_exits:.3f}   {'<-- yes' if hit else ''}"
    )
    lines.append(
        f"{row.value:.3f},{row.price_drift_pct_per_year:.4f},"
        f"{row.share_gain_pp_per_year:.4f},{row.total_exits:.4f}"
    )

path = OUT / "mu_sweep.csv"
path.write_text("\n".join(lines) + "\n", encoding="utf-8")
print(f"\nwrote {path}")
