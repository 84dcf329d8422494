"""Validate the closed forms against the Monte Carlo protocol engine.

The slot-statistical mode replays the model's own assumptions, so it should
land within a few standard errors of the closed forms; the sample-level
mode synthesizes the physics (partial slots, exact detector statistics) and
carries a small, documented accounting gap.
"""

import numpy as np

from latcr import (
    PuTraffic,
    RadioParams,
    SimConfig,
    TransitionProbs,
    collision_ratio,
    error_profile_from_pm,
    run,
    throughput,
    thresholds_from_pm,
    waste_ratio,
)

t = TransitionProbs(mu=1 / 500, nu=6 / 500)
pm = 0.1 - t.nu / 2
radio = RadioParams(ns=300, gamma_s=10**-0.5, chi2=0.01, sigma_u2=1.0,
                    sigma_s2=10.0, sigma_t2=9.3)
traffic = PuTraffic(tau0=-1 / np.log1p(-t.mu), tau1=-1 / np.log1p(-t.nu), slot=1.0)
thresholds = thresholds_from_pm(pm, radio)

e = error_profile_from_pm(pm, radio)
pc_th, pw_th = collision_ratio(e, t), waste_ratio(e, t)
c_th = throughput(radio, t, pm).c
print(f"closed forms: Pc={pc_th:.5f}  Pw={pw_th:.5f}  C={c_th:.4f}\n")

for mode in ("slot_statistical", "sample_level"):
    cfg = SimConfig(traffic=traffic, radio=radio, thresholds=thresholds,
                    slots=300_000, seed=2024, mode=mode)
    m = run(cfg)
    print(f"{mode}:")
    print(f"  Pc = {m.empirical_pc:.5f} (gap {m.empirical_pc - pc_th:+.5f}, "
          f"se {m.pc_se:.5f})")
    print(f"  Pw = {m.empirical_pw:.5f} (gap {m.empirical_pw - pw_th:+.5f}, "
          f"se {m.pw_se:.5f})")
    print(f"  C  = {m.throughput:.4f} (gap {m.throughput - c_th:+.4f})")
    print(f"  times: busy {m.pu_busy_time:.0f}s, idle {m.pu_idle_time:.0f}s, "
          f"SU on air {m.su_tx_time:.0f}s of {m.total_time:.0f}s\n")
