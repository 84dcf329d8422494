"""Acceptance suite: one test per release criterion, at fixed tolerances.

Run with `pytest tests/test_acceptance.py -v -s` to see the one-line
PASS/FAIL report per criterion alongside the measured margins.
"""

import time
from dataclasses import replace

import numpy as np
import pytest

from latcr import (
    ErrorProfile,
    PuTraffic,
    RadioParams,
    SimConfig,
    TransitionProbs,
    build_transition_matrix,
    collision_ratio,
    detector_occupied_rate,
    dthroughput,
    dthroughput_compact,
    error_probs,
    error_profile_from_pm,
    existence_curves,
    optimal_power,
    required_pm,
    run,
    steady_state_closed_form,
    steady_state_numeric,
    throughput,
    thresholds_from_pm,
    waste_ratio,
)

LINK_GAIN = 9.3  # secondary-link channel gain of the power-tradeoff scenario


def report(name: str, ok: bool, detail: str):
    print(f"[acceptance] {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"{name}: {detail}"


def random_grid(n: int, seed: int = 20250809):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        mu = rng.uniform(1e-4, 0.05)
        nu = min(mu * rng.uniform(1.0, 10.0), 0.999)
        e = ErrorProfile(*rng.uniform(0.001, 0.5, size=4))
        out.append((e, TransitionProbs(mu=mu, nu=nu)))
    return out


def fig4_defaults(chi2: float, sigma_s2: float = 1.0) -> RadioParams:
    return RadioParams(
        ns=300, gamma_s=10**-0.5, chi2=chi2, sigma_u2=1.0,
        sigma_s2=sigma_s2, sigma_t2=LINK_GAIN,
    )


T_FIG4 = TransitionProbs(mu=1 / 500, nu=6 / 500)
PM_FIG4 = 0.094


def test_steady_state_equivalence():
    t0 = time.perf_counter()
    worst = 0.0
    for e, t in random_grid(1000):
        a = steady_state_closed_form(e, t).as_array()
        b = steady_state_numeric(build_transition_matrix(e, t)).as_array()
        worst = max(worst, float(np.max(np.abs(a - b))))
    took = time.perf_counter() - t0
    report(
        "steady-state closed form vs numeric",
        worst <= 1e-10 and took < 5.0,
        f"Linf={worst:.2e} over 1000 sets in {took:.2f}s",
    )


def test_busy_idle_consistency():
    worst = 0.0
    for e, t in random_grid(1000, seed=777):
        share = t.mu / (t.mu + t.nu)
        for ss in (
            steady_state_closed_form(e, t),
            steady_state_numeric(build_transition_matrix(e, t)),
        ):
            worst = max(worst, abs(ss.busy - share))
    report("busy/idle split of the stationary law", worst <= 1e-10, f"max|err|={worst:.2e}")


def test_fig3_exact_vs_approx_pm():
    t0 = time.perf_counter()
    p = RadioParams(ns=200, gamma_s=0.1, chi2=10**0.5, sigma_u2=1.0, sigma_s2=1.0)
    pcs = np.linspace(0.02, 0.2, 19)
    gaps = {}
    for mu in (1e-5, 1e-4, 1e-3, 1e-2):
        t = TransitionProbs(mu=mu, nu=6 * mu)
        feasible = [pc for pc in pcs if pc > t.nu / 2 + 1e-9]
        gaps[mu] = max(
            abs(required_pm(pc, t, "exact", p) - (pc - t.nu / 2)) for pc in feasible
        )
    took = time.perf_counter() - t0
    monotone = gaps[1e-5] < gaps[1e-4] < gaps[1e-3] < gaps[1e-2]
    report(
        "required pm: exact vs rare-arrival approximation",
        gaps[1e-5] <= 1e-3 and monotone and took < 10.0,
        f"gap(1e-5)={gaps[1e-5]:.2e}, gaps monotone={monotone}, {took:.2f}s",
    )


def test_fig4a_power_throughput_landmarks():
    t0 = time.perf_counter()
    # (a) tradeoff exists for the three moderate RSI factors, optimum power
    # rises as the RSI is suppressed further
    res = {c: optimal_power(fig4_defaults(c), T_FIG4, PM_FIG4) for c in (0.1, 0.01, 0.001)}
    exists_ok = all(r.exists for r in res.values())
    order_ok = res[0.1].local_max < res[0.01].local_max < res[0.001].local_max
    # (b) heavy RSI: monotone throughput, no optimum
    heavy = optimal_power(fig4_defaults(0.9), T_FIG4, PM_FIG4)
    dc_heavy = [
        dthroughput(fig4_defaults(0.9, sigma_s2=10 ** (db / 10)), T_FIG4, PM_FIG4)
        for db in np.linspace(-10, 40, 101)
    ]
    heavy_ok = (not heavy.exists) and min(dc_heavy) > 0
    # (c) saturated waste at 40 dB for every RSI curve: the waste ratio sits
    # in [0.43, 0.52], i.e. C in [0.48, 0.57] * log2(1 + gamma_t)
    wastes = {
        c: throughput(fig4_defaults(c, sigma_s2=1e4), T_FIG4, PM_FIG4).waste
        for c in (0.001, 0.01, 0.1, 0.9)
    }
    waste_ok = all(0.43 <= w <= 0.52 for w in wastes.values())
    took = time.perf_counter() - t0
    report(
        "power-throughput curve landmarks",
        exists_ok and order_ok and heavy_ok and waste_ok and took < 10.0,
        f"optima(dB)={[f'{10 * np.log10(r.local_max):.1f}' for r in res.values()]}, "
        f"min dc(0.9)={min(dc_heavy):.1e}, waste@40dB={[f'{w:.3f}' for w in wastes.values()]}, "
        f"{took:.2f}s",
    )


def test_fig4b_existence_crossing():
    t0 = time.perf_counter()
    grid = np.linspace(0.70, 1.00, 61)
    pts = existence_curves(fig4_defaults(1.0), T_FIG4, PM_FIG4, grid)
    diff = np.array([p.left_max - p.right_at_argmax for p in pts])
    sign = np.sign(diff)
    idx = np.flatnonzero(sign[:-1] * sign[1:] < 0)
    crossing = float("nan")
    if len(idx) == 1:
        lo, hi = grid[idx[0]], grid[idx[0] + 1]
        gap = lambda c: (
            lambda p: p.left_max - p.right_at_argmax
        )(existence_curves(fig4_defaults(1.0), T_FIG4, PM_FIG4, [c])[0])
        glo = gap(lo)
        for _ in range(30):
            mid = 0.5 * (lo + hi)
            if (gap(mid) > 0) == (glo > 0):
                lo = mid
            else:
                hi = mid
        crossing = 0.5 * (lo + hi)
    took = time.perf_counter() - t0
    ok = len(idx) == 1 and 0.80 <= crossing <= 0.90
    report(
        "tradeoff-existence crossing",
        ok and took < 10.0,
        f"crossing at chi2={crossing:.4f}, {took:.2f}s",
    )


def test_derivative_against_finite_differences():
    rng = np.random.default_rng(314159)
    worst_fd = 0.0
    worst_forms = 0.0
    for _ in range(20):
        mu = rng.uniform(5e-4, 0.02)
        t = TransitionProbs(mu=mu, nu=min(mu * rng.uniform(2.0, 8.0), 0.5))
        pm = rng.uniform(0.02, 0.3)
        p0 = RadioParams(
            ns=int(rng.integers(100, 800)),
            gamma_s=10 ** rng.uniform(-1.2, 0.0),
            chi2=10 ** rng.uniform(-3.0, -0.3),
            sigma_u2=1.0,
            sigma_s2=1.0,
            sigma_t2=10 ** rng.uniform(-0.5, 1.0),
        )
        grid = np.logspace(-2, 5, 200)
        dcs = np.array([dthroughput(replace(p0, sigma_s2=x), t, pm) for x in grid])
        scale = np.max(np.abs(dcs))
        for x, dc in zip(grid, dcs):
            p = replace(p0, sigma_s2=x)
            other = dthroughput_compact(p, t, pm)
            if abs(dc) > 0:
                worst_forms = max(worst_forms, abs(other - dc) / abs(dc))
            if abs(dc) < 1e-6 * scale:
                continue
            h = x * 1e-6
            fd = (
                throughput(replace(p0, sigma_s2=x + h), t, pm).c
                - throughput(replace(p0, sigma_s2=x - h), t, pm).c
            ) / (2 * h)
            worst_fd = max(worst_fd, abs(dc - fd) / max(abs(dc), abs(fd)))
    report(
        "analytic throughput derivative",
        worst_fd <= 1e-4 and worst_forms <= 1e-12,
        f"max rel err vs finite differences={worst_fd:.2e}, "
        f"long vs grouped form={worst_forms:.2e}",
    )


def test_detector_calibration():
    t0 = time.perf_counter()
    p = fig4_defaults(0.01, sigma_s2=10.0)
    th = thresholds_from_pm(PM_FIG4, p)
    e = error_probs(p, th)
    expected = {"H00": e.pf0, "H01": 1 - e.pm0, "H10": e.pf1, "H11": 1 - e.pm1}
    n = 10**5
    margins = {}
    ok = True
    for hyp, target in expected.items():
        rate = detector_occupied_rate(p, th, hyp, n, seed=1000 + hash(hyp) % 100)
        tol = 0.01 + 3 * np.sqrt(max(target * (1 - target), 1e-12) / n)
        margins[hyp] = f"{abs(rate - target):.4f}<{tol:.4f}"
        ok = ok and abs(rate - target) < tol
    took = time.perf_counter() - t0
    report(
        "detector calibration at 1e5 slots per hypothesis",
        ok and took < 60.0,
        f"{margins}, {took:.1f}s",
    )


def test_monte_carlo_vs_closed_forms():
    t0 = time.perf_counter()
    p = fig4_defaults(0.01, sigma_s2=10.0)  # chi2 = -20 dB, power 10 dB
    t = T_FIG4
    pm = required_pm(0.1, t, "approx")
    e = error_profile_from_pm(pm, p)
    pc_th = collision_ratio(e, t)
    pw_th = waste_ratio(e, t)
    c_th = throughput(p, t, pm).c
    traffic = PuTraffic(
        tau0=-1.0 / np.log1p(-t.mu), tau1=-1.0 / np.log1p(-t.nu), slot=1.0
    )
    th = thresholds_from_pm(pm, p)
    slots = 10**6

    stat = run(SimConfig(traffic=traffic, radio=p, thresholds=th, slots=slots,
                         seed=101, mode="slot_statistical"))
    samp = run(SimConfig(traffic=traffic, radio=p, thresholds=th, slots=slots,
                         seed=202, mode="sample_level"))
    took = time.perf_counter() - t0

    stat_ok = (
        abs(stat.empirical_pc - pc_th) < 3 * stat.pc_se
        and abs(stat.empirical_pw - pw_th) < 3 * stat.pw_se
    )
    samp_ok = (
        abs(samp.empirical_pc - pc_th) < 0.02
        and abs(samp.empirical_pw - pw_th) < 0.02
    )
    thr_ok = (
        abs(samp.throughput - c_th) / c_th < 0.05
        and abs(stat.throughput - c_th) / c_th < 0.05
    )
    report(
        "Monte Carlo vs closed forms at 1e6 slots",
        stat_ok and samp_ok and thr_ok and took < 300.0,
        f"slot-statistical dPc={abs(stat.empirical_pc - pc_th):.2e} (3se={3 * stat.pc_se:.2e}), "
        f"dPw={abs(stat.empirical_pw - pw_th):.2e} (3se={3 * stat.pw_se:.2e}); "
        f"sample-level dPc={abs(samp.empirical_pc - pc_th):.3f}, "
        f"dPw={abs(samp.empirical_pw - pw_th):.3f}, "
        f"dC/C={abs(samp.throughput - c_th) / c_th:.3f}; {took:.1f}s",
    )


def _roc(mu: float, chi2: float, pms: np.ndarray):
    t = TransitionProbs(mu=mu, nu=6 * mu)
    p = RadioParams(ns=300, gamma_s=10**-0.8, chi2=chi2, sigma_u2=1.0, sigma_s2=10.0)
    pcs, pws = [], []
    for pm in pms:
        e = error_profile_from_pm(float(pm), p)
        pcs.append(collision_ratio(e, t))
        pws.append(waste_ratio(e, t))
    return np.array(pcs), np.array(pws)


def _max_excess(curve_a, curve_b):
    """max over the common collision range of (Pw_a - Pw_b) at matched Pc."""
    pc_a, pw_a = curve_a
    pc_b, pw_b = curve_b
    ia, ib = np.argsort(pc_a), np.argsort(pc_b)
    lo = max(pc_a.min(), pc_b.min())
    hi = min(pc_a.max(), pc_b.max())
    xs = np.linspace(lo, hi, 256)
    ya = np.interp(xs, pc_a[ia], pw_a[ia])
    yb = np.interp(xs, pc_b[ib], pw_b[ib])
    return float(np.max(ya - yb))


def test_fig5_roc_orderings():
    t0 = time.perf_counter()
    pms = np.logspace(-3, np.log10(0.5), 30)
    curves = {
        (mu, chi2): _roc(mu, chi2, pms)
        for mu in (1 / 500, 1 / 100)
        for chi2 in (0.1, 0.01)
    }
    slow_below_fast = max(
        _max_excess(curves[(1 / 500, c)], curves[(1 / 100, c)]) for c in (0.1, 0.01)
    )
    clean_below_dirty = max(
        _max_excess(curves[(m, 0.01)], curves[(m, 0.1)]) for m in (1 / 500, 1 / 100)
    )
    took = time.perf_counter() - t0
    report(
        "operating-curve orderings",
        slow_below_fast <= 1e-12 and clean_below_dirty <= 1e-12 and took < 10.0,
        f"slow-PU excess={slow_below_fast:.2e}, low-RSI excess={clean_below_dirty:.2e}, "
        f"{took:.2f}s",
    )


def test_fig6_waste_vs_rsi():
    t0 = time.perf_counter()
    ok = True
    details = []
    for ns, mu in ((300, 1 / 500), (500, 1 / 300)):
        t = TransitionProbs(mu=mu, nu=6 * mu)
        pm = required_pm(0.1, t, "approx")
        for power_db in (10.0, 20.0):
            power = 10 ** (power_db / 10)
            chi2s = np.logspace(-5, 2, 57)
            pws = np.array([
                waste_ratio(
                    error_profile_from_pm(
                        pm,
                        RadioParams(ns=ns, gamma_s=10**-0.5, chi2=float(c),
                                    sigma_u2=1.0, sigma_s2=power),
                    ),
                    t,
                )
                for c in chi2s
            ])
            nrsi = chi2s * power
            monotone = bool(np.all(np.diff(pws) >= -1e-12))
            low = float(pws[nrsi <= 0.01 + 1e-12].max())
            high = pws[nrsi >= 1e3 - 1e-9]
            plateau = bool(np.all((high >= 0.4) & (high <= 0.55)))
            # the steep rise happens inside normalized RSI in [0.1, 10]
            at_01 = float(np.interp(0.1, nrsi, pws))
            at_10 = float(np.interp(10.0, nrsi, pws))
            steep = at_01 < 0.05 and at_10 > 0.35
            ok = ok and monotone and low < 0.05 and plateau and steep
            details.append(
                f"ns={ns},{power_db:g}dB: mono={monotone}, low={low:.3f}, "
                f"edge=({at_01:.3f},{at_10:.3f})"
            )
    took = time.perf_counter() - t0
    report(
        "waste ratio vs RSI factor",
        ok and took < 10.0,
        "; ".join(details) + f"; {took:.2f}s",
    )
