"""Secondary throughput and the transmit-power tradeoff.

Raising the secondary transmit power raises the link rate log2(1+gamma_t)
but also raises the residual self-interference, which inflates the
transmitting-state false alarm and with it the spectrum waste ratio.  The
product C = rate * (1 - waste) can therefore have an interior local maximum.
This module evaluates C, its analytic derivative in the transmit power
(holding the designed miss-detection probability fixed, so only the
false-alarm probabilities move), locates the stationary points by a sign
scan plus bisection, and evaluates the two sides of the small-mu existence
condition whose crossing separates tradeoff from no-tradeoff regimes.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .markov import waste_ratio
from .sensing import RadioParams, error_profile_from_pm, pf0_of_pm, q, q_inv, _rho
from .traffic import TransitionProbs
from .errors import AmbiguousLandscape

__all__ = [
    "ThroughputPoint",
    "OptimalPowerResult",
    "ExistencePoint",
    "PowerSearch",
    "throughput",
    "dthroughput",
    "dthroughput_compact",
    "optimal_power",
    "existence_curves",
]

_SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class ThroughputPoint:
    """Throughput and its ingredients at one transmit power."""

    sigma_s2: float
    rate: float
    waste: float
    c: float
    dc: float


@dataclass(frozen=True)
class OptimalPowerResult:
    """Stationary points of the power-throughput curve, if any."""

    exists: bool
    local_max: float | None = None
    local_min: float | None = None
    c_at_max: float | None = None


@dataclass(frozen=True)
class ExistencePoint:
    """Existence-condition curves at one RSI factor."""

    chi2: float
    left_max: float
    right_at_argmax: float
    argmax_sigma_s2: float

    @property
    def has_tradeoff(self) -> bool:
        return self.left_max > self.right_at_argmax


@dataclass(frozen=True)
class PowerSearch:
    """Log-spaced transmit-power scan window (linear watts)."""

    lo: float
    hi: float
    points: int = 400

    def __post_init__(self):
        if not (0 < self.lo < self.hi):
            raise ValueError("need 0 < lo < hi")
        if self.points < 100:
            raise ValueError("need at least 100 grid points")

    def grid(self) -> np.ndarray:
        return np.logspace(np.log10(self.lo), np.log10(self.hi), self.points)


def default_search(sigma_u2: float) -> PowerSearch:
    """Default window sigma_s2/sigma_u2 from -20 dB to +60 dB."""
    return PowerSearch(lo=1e-2 * sigma_u2, hi=1e6 * sigma_u2, points=400)


def throughput(p: RadioParams, t: TransitionProbs, pm: float) -> ThroughputPoint:
    """Rate, waste ratio, throughput and its power derivative at p.sigma_s2."""
    e = error_profile_from_pm(pm, p)
    rate = math.log2(1.0 + p.gamma_t)
    inv = 1.0 / t.mu - 1.0
    waste = t.mu / 2.0 + (inv * e.pf1 + 1.0 - pm) / (1.0 + inv * e.xi)
    c = rate * (1.0 - waste)
    return ThroughputPoint(
        sigma_s2=p.sigma_s2, rate=rate, waste=waste, c=c, dc=dthroughput(p, t, pm)
    )


def dthroughput(p: RadioParams, t: TransitionProbs, pm: float) -> float:
    """Analytic dC/d(sigma_s2), long form.

    The first term is -rate * d(waste)/d(sigma_s2) through the RSI-lifted
    false alarm; the second is d(rate)/d(sigma_s2) * (1 - waste).
    """
    gt, gi = p.gamma_t, p.gamma_i
    rho = _rho(pm, p)
    qrho = float(q(rho))
    pf0 = pf0_of_pm(pm, p)
    inv = 1.0 / t.mu - 1.0
    xi_big = p.gamma_s * p.chi2 * (float(q_inv(1.0 - pm)) + math.sqrt(p.ns))
    alpha = inv * (qrho - pf0 + 1.0) + 1.0
    term1 = (
        -math.log2(gt + 1.0)
        * (math.exp(-rho * rho / 2.0) * inv * xi_big / (gi + 1.0) ** 2)
        / (_SQRT_2PI * alpha * alpha)
        * (inv * (1.0 - pf0) + pm)
    )
    term2 = (
        -p.sigma_t2
        / (math.log(2.0) * (gt + 1.0))
        * (t.mu / 2.0 + (qrho * inv - pm + 1.0) / alpha - 1.0)
    )
    return (term1 + term2) / p.sigma_u2


def dthroughput_compact(p: RadioParams, t: TransitionProbs, pm: float) -> float:
    """Analytic dC/d(sigma_s2) via the kappa/alpha/Xi grouping.

    Algebraically identical to dthroughput; kept as an independent route so
    the two transcriptions check each other.
    """
    gt, gi = p.gamma_t, p.gamma_i
    rho = _rho(pm, p)
    qrho = float(q(rho))
    pf0 = pf0_of_pm(pm, p)
    inv = 1.0 / t.mu - 1.0
    xi_big = p.gamma_s * p.chi2 * (float(q_inv(1.0 - pm)) + math.sqrt(p.ns))
    alpha = inv * (qrho - pf0 + 1.0) + 1.0
    kappa = (inv * (1.0 - pf0) + pm) / alpha
    grouped = kappa * math.log(gt + 1.0) * math.exp(-rho * rho / 2.0) * inv * xi_big / (
        _SQRT_2PI * (gi + 1.0) ** 2 * alpha
    ) + p.sigma_t2 * (t.mu / 2.0 - kappa) / (gt + 1.0)
    return -grouped / (math.log(2.0) * p.sigma_u2)


def _bisect_root(f, lo: float, hi: float, rel_tol: float = 1e-10) -> float:
    flo = f(lo)
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def optimal_power(
    p: RadioParams,
    t: TransitionProbs,
    pm: float,
    search: PowerSearch | None = None,
) -> OptimalPowerResult:
    """Locate the local throughput maximum over transmit power, if one exists.

    Scans the analytic derivative on a log grid and refines each sign change
    by bisection.  A falling crossing (+ to -) is a local maximum, a rising
    one a local minimum; no crossing means the throughput is monotone in the
    window.  More than two crossings is reported as AmbiguousLandscape with
    all refined roots attached, since the model predicts at most two.
    """
    if search is None:
        search = default_search(p.sigma_u2)
    grid = search.grid()
    f = lambda x: dthroughput(replace(p, sigma_s2=float(x)), t, pm)
    dc = np.array([f(x) for x in grid])
    sign = np.sign(dc)
    crossings = [
        (i, "max" if sign[i] > 0 else "min")
        for i in np.flatnonzero(sign[:-1] * sign[1:] < 0)
    ]
    roots = [(_bisect_root(f, grid[i], grid[i + 1]), kind) for i, kind in crossings]
    if len(roots) > 2:
        raise AmbiguousLandscape(
            f"{len(roots)} stationary points in the search window",
            roots=tuple(r for r, _ in roots),
        )
    maxima = [r for r, kind in roots if kind == "max"]
    minima = [r for r, kind in roots if kind == "min"]
    if not maxima:
        return OptimalPowerResult(exists=False)
    local_max = min(maxima)
    c_at_max = throughput(replace(p, sigma_s2=local_max), t, pm).c
    return OptimalPowerResult(
        exists=True,
        local_max=local_max,
        local_min=min(minima) if minima else None,
        c_at_max=c_at_max,
    )


def _existence_sides(p: RadioParams, t: TransitionProbs, pm: float):
    rho = _rho(pm, p)
    gt, gi = p.gamma_t, p.gamma_i
    left = (
        math.exp(-rho * rho / 2.0) * (gt + 1.0) * math.log(gt + 1.0) / (gi + 1.0) ** 2
    )
    xi_big = p.gamma_s * p.chi2 * (float(q_inv(1.0 - pm)) + math.sqrt(p.ns))
    right = _SQRT_2PI * p.sigma_t2 * (1.0 - pf0_of_pm(pm, p) + float(q(rho))) / xi_big
    return left, right


def existence_curves(
    p: RadioParams,
    t: TransitionProbs,
    pm: float,
    chi2_grid,
    search: PowerSearch | None = None,
) -> list[ExistencePoint]:
    """Existence-condition sides per RSI factor.

    For each chi2, maximizes the left side of the small-mu stationarity
    condition over transmit power (grid scan plus golden-section refinement
    in log power) and evaluates the right side at that argmax.  A tradeoff
    exists roughly where left_max exceeds the right side.
    """
    chi2_grid = list(chi2_grid)
    if not chi2_grid:
        raise ValueError("chi2_grid must be nonempty")
    if search is None:
        search = default_search(p.sigma_u2)
    grid = search.grid()
    out = []
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    for chi2 in chi2_grid:
        left_of = lambda x: _existence_sides(
            replace(p, chi2=float(chi2), sigma_s2=float(x)), t, pm
        )[0]
        vals = np.array([left_of(x) for x in grid])
        k = int(np.argmax(vals))
        a = math.log(grid[max(k - 1, 0)])
        b = math.log(grid[min(k + 1, len(grid) - 1)])
        # golden-section on log power
        c1, c2 = b - phi * (b - a), a + phi * (b - a)
        f1, f2 = left_of(math.exp(c1)), left_of(math.exp(c2))
        while b - a > 1e-10:
            if f1 < f2:
                a, c1, f1 = c1, c2, f2
                c2 = a + phi * (b - a)
                f2 = left_of(math.exp(c2))
            else:
                b, c2, f2 = c2, c1, f1
                c1 = b - phi * (b - a)
                f1 = left_of(math.exp(c1))
        x_star = math.exp(0.5 * (a + b))
        left, right = _existence_sides(
            replace(p, chi2=float(chi2), sigma_s2=x_star), t, pm
        )
        out.append(
            ExistencePoint(
                chi2=float(chi2),
                left_max=left,
                right_at_argmax=right,
                argmax_sigma_s2=x_star,
            )
        )
    return out
