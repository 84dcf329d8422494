import math
from dataclasses import replace

import numpy as np
import pytest

import latcr.power as power_mod
from latcr import (
    AmbiguousLandscape,
    PowerSearch,
    RadioParams,
    TransitionProbs,
    dthroughput,
    dthroughput_compact,
    error_profile_from_pm,
    existence_curves,
    optimal_power,
    throughput,
    waste_ratio,
)

T_DEFAULT = TransitionProbs(mu=1 / 500, nu=6 / 500)
PM_DEFAULT = 0.094  # pc = 0.1 under the rare-arrival approximation
LINK_GAIN = 9.3     # secondary-link channel gain of the tradeoff scenario


def params(chi2, sigma_s2=10.0, sigma_t2=LINK_GAIN, ns=300):
    return RadioParams(
        ns=ns, gamma_s=10**-0.5, chi2=chi2, sigma_u2=1.0,
        sigma_s2=sigma_s2, sigma_t2=sigma_t2,
    )


def central_difference(p, t, pm, rel_step=1e-6):
    h = p.sigma_s2 * rel_step
    hi = throughput(replace(p, sigma_s2=p.sigma_s2 + h), t, pm).c
    lo = throughput(replace(p, sigma_s2=p.sigma_s2 - h), t, pm).c
    return (hi - lo) / (2 * h)


class TestThroughput:
    def test_point_is_internally_consistent(self):
        pt = throughput(params(0.01), T_DEFAULT, PM_DEFAULT)
        assert pt.rate == pytest.approx(math.log2(1 + 93.0), rel=1e-14)
        assert pt.c == pytest.approx(pt.rate * (1 - pt.waste), rel=1e-12)

    def test_waste_matches_markov_route(self):
        for chi2 in (0.0, 0.01, 0.5):
            for s2 in (0.5, 10.0, 1e3):
                p = params(chi2, sigma_s2=s2)
                pt = throughput(p, T_DEFAULT, PM_DEFAULT)
                w = waste_ratio(error_profile_from_pm(PM_DEFAULT, p), T_DEFAULT)
                assert pt.waste == pytest.approx(w, abs=1e-12)

    def test_unit_snr_with_zero_waste(self):
        # gamma_t = 1 and a vanishing waste ratio pin C at log2(2) = 1
        p = RadioParams(ns=300, gamma_s=100.0, chi2=0.0, sigma_u2=1.0,
                        sigma_s2=1.0, sigma_t2=1.0)
        pt = throughput(p, T_DEFAULT, 0.5)
        assert pt.rate == 1.0
        assert pt.c == pytest.approx(1.0 - pt.waste, rel=1e-12)
        assert pt.waste < 0.01

    def test_ideal_cancellation_monotone(self):
        cs = [
            throughput(params(0.0, sigma_s2=s2), T_DEFAULT, PM_DEFAULT).c
            for s2 in np.logspace(0, 4, 50)
        ]
        assert all(b > a for a, b in zip(cs, cs[1:]))

    def test_high_power_approaches_saturated_waste(self):
        # at 60 dB every RSI curve sits at the saturated waste plateau
        p = params(0.1, sigma_s2=1e6)
        pt = throughput(p, T_DEFAULT, PM_DEFAULT)
        e_inf = error_profile_from_pm(PM_DEFAULT, params(1e12, sigma_s2=1.0))
        pw_inf = waste_ratio(e_inf, T_DEFAULT)
        assert pt.waste == pytest.approx(pw_inf, abs=1e-3)


class TestDerivative:
    def test_matches_finite_differences_on_random_sets(self):
        rng = np.random.default_rng(99)
        for _ in range(8):
            mu = rng.uniform(5e-4, 0.02)
            t = TransitionProbs(mu=mu, nu=min(mu * rng.uniform(2, 8), 0.5))
            pm = rng.uniform(0.02, 0.3)
            p0 = RadioParams(
                ns=int(rng.integers(100, 800)),
                gamma_s=10 ** rng.uniform(-1.2, 0.0),
                chi2=10 ** rng.uniform(-3, -0.3),
                sigma_u2=1.0,
                sigma_s2=1.0,
                sigma_t2=10 ** rng.uniform(-0.5, 1.0),
            )
            grid = np.logspace(-2, 5, 60)
            dcs = np.array([dthroughput(replace(p0, sigma_s2=x), t, pm) for x in grid])
            scale = np.max(np.abs(dcs))
            for x, dc in zip(grid, dcs):
                if abs(dc) < 1e-6 * scale:
                    continue
                fd = central_difference(replace(p0, sigma_s2=x), t, pm)
                assert abs(dc - fd) <= 1e-4 * max(abs(dc), abs(fd))

    def test_compact_form_equals_long_form(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            p = params(
                chi2=10 ** rng.uniform(-4, 0), sigma_s2=10 ** rng.uniform(-2, 5)
            )
            t = TransitionProbs(mu=rng.uniform(1e-4, 0.05), nu=0.2)
            pm = rng.uniform(0.01, 0.5)
            a = dthroughput(p, t, pm)
            b = dthroughput_compact(p, t, pm)
            assert b == pytest.approx(a, rel=1e-12, abs=1e-300)

    def test_ideal_cancellation_always_positive(self):
        for s2 in np.logspace(0, 4, 60):
            assert dthroughput(params(0.0, sigma_s2=s2), T_DEFAULT, PM_DEFAULT) > 0

    def test_heavy_rsi_always_positive(self):
        for db in np.linspace(-10, 40, 101):
            p = params(0.9, sigma_s2=10 ** (db / 10))
            assert dthroughput(p, T_DEFAULT, PM_DEFAULT) > 0

    def test_sign_change_brackets_the_tradeoff(self):
        dcs = [
            dthroughput(params(0.01, sigma_s2=10 ** (db / 10)), T_DEFAULT, PM_DEFAULT)
            for db in np.arange(10, 30, 0.1)
        ]
        signs = np.sign(dcs)
        assert np.any(signs[:-1] * signs[1:] < 0)


class TestOptimalPower:
    def test_existence_and_ordering_across_rsi(self):
        res = {
            chi2: optimal_power(params(chi2), T_DEFAULT, PM_DEFAULT)
            for chi2 in (0.1, 0.01, 0.001)
        }
        for chi2, r in res.items():
            assert r.exists, chi2
            assert r.local_max < r.local_min
        assert res[0.1].local_max < res[0.01].local_max < res[0.001].local_max

    def test_no_optimum_for_heavy_or_zero_rsi(self):
        assert not optimal_power(params(0.9), T_DEFAULT, PM_DEFAULT).exists
        assert not optimal_power(params(0.0), T_DEFAULT, PM_DEFAULT).exists

    def test_root_quality(self):
        r = optimal_power(params(0.01), T_DEFAULT, PM_DEFAULT)
        p_at = lambda x: throughput(params(0.01, sigma_s2=x), T_DEFAULT, PM_DEFAULT).c
        assert abs(dthroughput(params(0.01, sigma_s2=r.local_max), T_DEFAULT, PM_DEFAULT)) < 1e-8
        for bump in (0.99, 1.01):
            assert p_at(r.local_max) >= p_at(r.local_max * bump)
            assert p_at(r.local_min) <= p_at(r.local_min * bump)
        assert r.c_at_max == pytest.approx(p_at(r.local_max), rel=1e-12)

    def test_search_validation(self):
        with pytest.raises(ValueError):
            PowerSearch(lo=1.0, hi=0.5)
        with pytest.raises(ValueError):
            PowerSearch(lo=0.1, hi=10.0, points=50)

    def test_ambiguous_landscape_reported(self, monkeypatch):
        wiggle = lambda p, t, pm: math.sin(3.0 * math.log10(p.sigma_s2))
        monkeypatch.setattr(power_mod, "dthroughput", wiggle)
        with pytest.raises(AmbiguousLandscape) as info:
            power_mod.optimal_power(params(0.01), T_DEFAULT, PM_DEFAULT)
        assert len(info.value.roots) > 2


class TestExistenceCurves:
    def test_small_rsi_margin_grows(self):
        # left/right ~ log(1/chi2): the margin keeps widening as RSI vanishes
        # (grid chosen so the left side's argmax stays inside the window)
        pts = existence_curves(params(1.0), T_DEFAULT, PM_DEFAULT, [1e-4, 1e-3, 1e-2])
        ratios = [p.left_max / p.right_at_argmax for p in reversed(pts)]
        assert all(p.has_tradeoff for p in pts)
        assert ratios[0] > 1.0
        assert ratios[0] < ratios[1] < ratios[2]

    def test_crossing_location(self):
        grid = np.linspace(0.4, 1.0, 25)
        pts = existence_curves(params(1.0), T_DEFAULT, PM_DEFAULT, grid)
        diff = np.array([p.left_max - p.right_at_argmax for p in pts])
        signs = np.sign(diff)
        idx = np.flatnonzero(signs[:-1] * signs[1:] < 0)
        assert len(idx) == 1
        assert 0.80 <= grid[idx[0]] <= 0.90 or 0.80 <= grid[idx[0] + 1] <= 0.90

    def test_agrees_with_optimal_power_away_from_threshold(self):
        grid = np.array([0.01, 0.1, 0.3, 0.6, 0.95])
        pts = existence_curves(params(1.0), T_DEFAULT, PM_DEFAULT, grid)
        for pt in pts:
            res = optimal_power(params(pt.chi2), T_DEFAULT, PM_DEFAULT)
            assert res.exists == pt.has_tradeoff, pt.chi2

    def test_rejects_empty_grid(self):
        with pytest.raises(ValueError):
            existence_curves(params(1.0), T_DEFAULT, PM_DEFAULT, [])


def test_small_mu_collapse():
    # at mu = 1e-6 the located optimum satisfies the simplified stationarity
    # condition to within 1e-6 of either side's magnitude
    t = TransitionProbs(mu=1e-6, nu=6e-6)
    pm = 0.1 - 3e-6
    p = params(0.01)
    res = optimal_power(p, t, pm)
    assert res.exists
    pt = existence_curves(p, t, pm, [0.01],
                          search=PowerSearch(lo=res.local_max * 0.999,
                                             hi=res.local_max * 1.001,
                                             points=101))
    # evaluate both sides exactly at the located optimum
    from latcr.power import _existence_sides

    left, right = _existence_sides(replace(p, sigma_s2=res.local_max), t, pm)
    assert abs(left - right) <= 1e-6 * max(abs(left), abs(right))
    assert pt[0].left_max >= left
