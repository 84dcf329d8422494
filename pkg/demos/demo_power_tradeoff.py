"""Explore the transmit-power / throughput tradeoff.

More power means a faster link but also more residual self-interference,
which spoils sensing and wastes spectrum holes.  For moderate RSI factors
the throughput has an interior local maximum; for very good or very bad
cancellation it is monotone.
"""

from dataclasses import replace

import numpy as np

from latcr import RadioParams, TransitionProbs, existence_curves, optimal_power, throughput

t = TransitionProbs(mu=1 / 500, nu=6 / 500)
pm = 0.1 - t.nu / 2
base = RadioParams(ns=300, gamma_s=10**-0.5, chi2=0.01, sigma_u2=1.0,
                   sigma_s2=1.0, sigma_t2=9.3)

print("throughput along the power axis (chi2 = -20 dB):")
for db in range(-10, 45, 5):
    pt = throughput(replace(base, sigma_s2=10 ** (db / 10)), t, pm)
    bar = "#" * int(40 * pt.c / 9.0)
    print(f"  {db:4d} dB  C={pt.c:6.3f}  waste={pt.waste:.3f}  {bar}")

print("\nlocal optima per RSI factor:")
for chi2 in (0.0, 0.001, 0.01, 0.1, 0.9):
    res = optimal_power(replace(base, chi2=chi2), t, pm)
    if res.exists:
        print(f"  chi2={chi2:<6g} optimum at {10 * np.log10(res.local_max):5.1f} dB, "
              f"C={res.c_at_max:.3f} (local minimum at "
              f"{10 * np.log10(res.local_min):5.1f} dB)")
    else:
        print(f"  chi2={chi2:<6g} no interior optimum (monotone in the window)")

print("\nexistence condition: tradeoff while the left side clears the right")
for pt in existence_curves(base, t, pm, [0.5, 0.7, 0.8, 0.85, 0.9, 1.0]):
    verdict = "tradeoff" if pt.has_tradeoff else "monotone"
    print(f"  chi2={pt.chi2:<5g} left={pt.left_max:8.4f} right={pt.right_at_argmax:8.4f} "
          f"-> {verdict}")
