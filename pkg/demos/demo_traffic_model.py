"""Walk through the primary-user traffic model.

Samples a stationary busy/idle trace, slices it into sensing slots, and
checks the empirical per-slot arrival/departure statistics against the
closed-form slot transition probabilities.
"""

import numpy as np

from latcr import PuTraffic, sample_trace, slotize, transition_probs

traffic = PuTraffic(tau0=499.5, tau1=82.8, slot=1.0)
probs = transition_probs(traffic)
print(f"mean idle {traffic.m0:.1f} slots, mean busy {traffic.m1:.1f} slots")
print(f"arrival probability per slot  mu = {probs.mu:.6f} (~1/m0 = {1 / traffic.m0:.6f})")
print(f"departure probability per slot nu = {probs.nu:.6f} (~1/m1 = {1 / traffic.m1:.6f})")
print(f"departure/arrival ratio        r = {probs.r:.3f}")

n_slots = 200_000
trace = sample_trace(traffic, float(n_slots), seed=7)
occ = slotize(trace, traffic.slot)

busy_share = occ.busy_fraction.mean()
print(f"\n{len(trace.intervals)} intervals over {n_slots} slots")
print(f"busy share: empirical {busy_share:.4f}, "
      f"stationary {traffic.tau1 / (traffic.tau0 + traffic.tau1):.4f}")

idle_start = ~occ.busy_at_start
arrivals = (idle_start & (occ.busy_fraction > 0)).sum()
print(f"arrival rate in idle slots: empirical {arrivals / idle_start.sum():.6f}, "
      f"closed form {probs.mu:.6f}")

partial = (occ.busy_fraction > 0) & (occ.busy_fraction < 1)
print(f"slots containing a state change: {partial.sum()} "
      f"({partial.mean():.2%}); mean busy fraction inside them "
      f"{occ.busy_fraction[partial].mean():.3f} (about one half)")
