"""Energy detection for the full-duplex secondary user.

The sensing antenna averages the received power of ns samples per slot and
compares it to a threshold.  Four hypotheses arise from (PU busy/idle) x
(SU transmitting/silent); residual self-interference of power chi2*sigma_s2
raises both the mean and the spread of the statistic while the SU transmits,
so a separate threshold is used for each SU state.  With ns large, the
statistic is treated as Gaussian with variance mean^2/ns, which yields
closed-form false-alarm and miss-detection probabilities and lets the
thresholds be designed from a target miss-detection probability.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import erfc, ndtri

from .errors import InfeasibleConstraint, NoRoot
from .traffic import TransitionProbs

__all__ = [
    "HYPOTHESES",
    "RadioParams",
    "HypothesisStats",
    "ThresholdPair",
    "ErrorProfile",
    "q",
    "q_inv",
    "hypothesis_stats",
    "error_probs",
    "pf0_of_pm",
    "pf1_of_pm",
    "error_profile_from_pm",
    "required_pm",
    "thresholds_from_pm",
]

#: joint states H<su><pu>: first digit 1 when the SU transmits, second
#: digit 1 when the PU is busy (H01 = PU busy while the SU is silent)
HYPOTHESES = ("H00", "H01", "H10", "H11")

_SQRT2 = np.sqrt(2.0)


def q(x):
    """Standard normal tail probability Q(x) = P(Z > x)."""
    return 0.5 * erfc(np.asarray(x, dtype=float) / _SQRT2)


def q_inv(p):
    """Inverse of q on (0, 1)."""
    p = np.asarray(p, dtype=float)
    if np.any(p <= 0.0) or np.any(p >= 1.0):
        raise ValueError("q_inv requires 0 < p < 1")
    return -ndtri(p)


@dataclass(frozen=True)
class RadioParams:
    """Detector and link parameters (all linear units).

    ns: samples averaged per slot; gamma_s: sensing SNR of the primary
    signal; chi2: residual self-interference suppression factor (RSI power
    divided by transmit power); sigma_u2: noise power; sigma_s2: secondary
    transmit power; sigma_t2: secondary link channel gain.
    """

    ns: int
    gamma_s: float
    chi2: float
    sigma_u2: float
    sigma_s2: float
    sigma_t2: float = 1.0

    def __post_init__(self):
        if int(self.ns) != self.ns or self.ns < 50:
            # Gaussian statistics below ~50 samples are indefensible.
            raise ValueError("ns must be an integer >= 50")
        if self.gamma_s < 0 or self.chi2 < 0 or self.sigma_s2 < 0 or self.sigma_t2 < 0:
            raise ValueError("gamma_s, chi2, sigma_s2, sigma_t2 must be >= 0")
        if self.sigma_u2 <= 0:
            raise ValueError("sigma_u2 must be positive")

    @property
    def gamma_i(self) -> float:
        """Interference-to-noise ratio of the residual self-interference."""
        return self.chi2 * self.sigma_s2 / self.sigma_u2

    @property
    def gamma_t(self) -> float:
        """SNR of the secondary link."""
        return self.sigma_s2 * self.sigma_t2 / self.sigma_u2


@dataclass(frozen=True)
class HypothesisStats:
    """Mean and variance of the per-slot average-power statistic."""

    mean: float
    var: float


@dataclass(frozen=True)
class ThresholdPair:
    """Detection thresholds: eps0 while silent, eps1 while transmitting."""

    eps0: float
    eps1: float

    def __post_init__(self):
        if self.eps0 <= 0 or self.eps1 <= 0:
            raise ValueError("thresholds must be positive")


@dataclass(frozen=True)
class ErrorProfile:
    """The four sensing error probabilities.

    pf*: false alarm (idle judged busy); pm*: miss detection (busy judged
    idle); suffix 0 while the SU is silent, 1 while it transmits.
    """

    pf0: float
    pm0: float
    pf1: float
    pm1: float

    def __post_init__(self):
        for name in ("pf0", "pm0", "pf1", "pm1"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be a probability, got {v}")

    @property
    def xi(self) -> float:
        """1 - pf0 + pf1, the silent/transmit false-alarm contrast."""
        return 1.0 - self.pf0 + self.pf1

    @property
    def zeta(self) -> float:
        """1 + pm0 - pm1, the silent/transmit miss-detection contrast."""
        return 1.0 + self.pm0 - self.pm1


def hypothesis_stats(p: RadioParams, hypothesis: str) -> HypothesisStats:
    """Statistic mean/variance under one of the four joint states."""
    if hypothesis not in HYPOTHESES:
        raise ValueError(f"hypothesis must be one of {HYPOTHESES}")
    su_active = hypothesis[1] == "1"
    pu_busy = hypothesis[2] == "1"
    mean = p.sigma_u2 * (
        1.0 + (p.gamma_s if pu_busy else 0.0) + (p.gamma_i if su_active else 0.0)
    )
    return HypothesisStats(mean=mean, var=mean * mean / p.ns)


def error_probs(p: RadioParams, th: ThresholdPair) -> ErrorProfile:
    """False-alarm and miss-detection probabilities for a threshold pair."""
    rt = np.sqrt(p.ns)
    su2 = p.sigma_u2
    pm0 = 1.0 - q((th.eps0 / ((1.0 + p.gamma_s) * su2) - 1.0) * rt)
    pf0 = q((th.eps0 / su2 - 1.0) * rt)
    pm1 = 1.0 - q((th.eps1 / ((1.0 + p.gamma_s + p.gamma_i) * su2) - 1.0) * rt)
    pf1 = q((th.eps1 / ((1.0 + p.gamma_i) * su2) - 1.0) * rt)
    return ErrorProfile(pf0=float(pf0), pm0=float(pm0), pf1=float(pf1), pm1=float(pm1))


def pf0_of_pm(pm: float, p: RadioParams) -> float:
    """Silent-state false alarm implied by a miss-detection target.

    Eliminating the threshold between the miss and false-alarm expressions
    gives pf0 = Q(-Q^-1(pm) (1+gamma_s) + gamma_s sqrt(ns)), strictly
    decreasing in pm.
    """
    a = q_inv(pm)
    return float(q(-a * (1.0 + p.gamma_s) + p.gamma_s * np.sqrt(p.ns)))


def _rho(pm: float, p: RadioParams) -> float:
    """Gaussian argument whose tail is the transmitting-state false alarm."""
    a = q_inv(pm)
    g = p.gamma_s / (1.0 + p.gamma_i)
    return float(-a * (1.0 + g) + g * np.sqrt(p.ns))


def pf1_of_pm(pm: float, p: RadioParams) -> float:
    """Transmitting-state false alarm implied by a miss-detection target.

    Equals pf0_of_pm when gamma_i = 0 and rises toward 1 - pm as the
    residual self-interference grows: the RSI inflates the statistic under
    both hypotheses, eroding the detector's margin.
    """
    return float(q(_rho(pm, p)))


def error_profile_from_pm(pm: float, p: RadioParams) -> ErrorProfile:
    """Error profile of the threshold pair designed for a common pm."""
    return ErrorProfile(
        pf0=pf0_of_pm(pm, p), pm0=float(pm), pf1=pf1_of_pm(pm, p), pm1=float(pm)
    )


def thresholds_from_pm(pm: float, p: RadioParams) -> ThresholdPair:
    """Thresholds achieving miss-detection pm in both SU states.

    eps1 exceeds eps0 by (Q^-1(1-pm)/sqrt(ns) + 1) gamma_i sigma_u2: the
    threshold is lifted to sit above the self-interference floor.
    """
    scale = q_inv(1.0 - pm) / np.sqrt(p.ns) + 1.0
    eps0 = float(scale * (1.0 + p.gamma_s) * p.sigma_u2)
    eps1 = float(scale * (1.0 + p.gamma_s + p.gamma_i) * p.sigma_u2)
    return ThresholdPair(eps0=eps0, eps1=eps1)


def _collision_ratio_at(pm: float, t: TransitionProbs, p: RadioParams) -> float:
    # Single-pm version of the collision closed form; the markov module owns
    # the general expression, duplicated here to avoid an import cycle.
    e = error_profile_from_pm(pm, p)
    xi = e.xi
    num = pm * (1.0 - xi * t.delta) + (1.0 - e.pf0) * t.r
    den = 1.0 + (1.0 / t.mu - 1.0) * xi
    return t.nu / 2.0 + num / den


def required_pm(
    constraint_pc: float,
    t: TransitionProbs,
    mode: str = "approx",
    p: RadioParams | None = None,
) -> float:
    """Miss-detection target meeting a collision-ratio constraint.

    approx mode returns constraint_pc - nu/2, valid when arrivals per slot
    are rare.  exact mode solves the full collision closed form (with
    pm0 = pm1) for pm by bisection on (1e-12, 1 - 1e-12) to 1e-10 absolute;
    it needs radio parameters to map pm to the false-alarm probabilities.
    """
    if constraint_pc <= t.nu / 2.0:
        raise InfeasibleConstraint(
            f"constraint pc={constraint_pc:g} <= nu/2={t.nu / 2.0:g}"
        )
    if mode == "approx":
        return constraint_pc - t.nu / 2.0
    if mode != "exact":
        raise ValueError("mode must be 'approx' or 'exact'")
    if p is None:
        raise ValueError("exact mode requires radio parameters")

    lo, hi = 1e-12, 1.0 - 1e-12
    f = lambda pm: _collision_ratio_at(pm, t, p) - constraint_pc
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if np.sign(flo) == np.sign(fhi):
        raise NoRoot(
            f"collision constraint pc={constraint_pc:g} has no pm solution in (0, 1)"
        )
    while hi - lo > 1e-10:
        mid = 0.5 * (lo + hi)
        if np.sign(f(mid)) == np.sign(flo):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
