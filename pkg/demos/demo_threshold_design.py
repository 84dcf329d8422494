"""Design the dual sensing thresholds from a collision-ratio constraint.

The miss-detection target comes out of the collision budget; the two
thresholds then follow in closed form, the one used while transmitting
lifted above the residual self-interference floor.  The end of the script
sweeps transmit power to show the false alarm (and with it the wasted
fraction of spectrum holes) climbing as the RSI grows.
"""

import numpy as np

from latcr import (
    RadioParams,
    TransitionProbs,
    collision_ratio,
    error_profile_from_pm,
    required_pm,
    thresholds_from_pm,
    waste_ratio,
)

t = TransitionProbs(mu=1 / 500, nu=6 / 500)
pc_budget = 0.1

pm_approx = required_pm(pc_budget, t, "approx")
print(f"collision budget {pc_budget}: miss-detection target {pm_approx:.4f} "
      f"(= pc - nu/2)")

for power_db in (0.0, 10.0, 20.0, 30.0):
    p = RadioParams(
        ns=300, gamma_s=10**-0.5, chi2=0.01, sigma_u2=1.0,
        sigma_s2=10 ** (power_db / 10),
    )
    pm_exact = required_pm(pc_budget, t, "exact", p)
    th = thresholds_from_pm(pm_approx, p)
    e = error_profile_from_pm(pm_approx, p)
    print(
        f"power {power_db:5.1f} dB: gamma_i={p.gamma_i:8.3f}  "
        f"eps0={th.eps0:.4f}  eps1={th.eps1:.4f}  "
        f"pf0={e.pf0:.2e}  pf1={e.pf1:.4f}  "
        f"pm_exact={pm_exact:.4f}  "
        f"pc={collision_ratio(e, t):.4f}  pw={waste_ratio(e, t):.4f}"
    )

print("\nthe silent-state threshold never moves; the transmitting-state one")
print("tracks the RSI, and once the RSI dominates, false alarms waste about")
print("half of every spectrum hole:")
for power_db in (35.0, 40.0, 50.0):
    p = RadioParams(ns=300, gamma_s=10**-0.5, chi2=0.1, sigma_u2=1.0,
                    sigma_s2=10 ** (power_db / 10))
    e = error_profile_from_pm(pm_approx, p)
    print(f"  chi2=0.1, power {power_db:g} dB -> pw = {waste_ratio(e, t):.4f}")
