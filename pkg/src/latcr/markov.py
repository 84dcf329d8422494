"""Four-state Markov model of spectrum utilization.

Joint (PU, SU) activity per slot gives four states, ordered

    S0 waste      PU idle, SU silent (hole goes unused)
    S1 PU only    PU busy, SU silent
    S2 SU only    PU idle, SU transmitting
    S3 collision  PU busy, SU transmitting

The next state factorizes: the PU side transitions with per-slot
probabilities (mu, nu) regardless of the SU, and the SU's next activity is
the complement of this slot's detection decision, whose law depends on the
current state's hypothesis.  The stationary distribution has a closed form;
the numeric fixed-point solve is kept alongside it as the ground truth.

The collision ratio Pc (fraction of PU transmission time collided) and the
spectrum waste ratio Pw (fraction of idle time left unused) add half-slot
corrections for the slots in which the PU changes state: an arrival or
departure inside a slot contributes on average half a slot of collision or
waste on top of the whole-slot state counts.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ColumnSumViolation, DegenerateDenominator, SingularSystem
from .sensing import ErrorProfile
from .traffic import TransitionProbs

__all__ = [
    "TransitionMatrix",
    "SteadyState",
    "UtilizationReport",
    "build_transition_matrix",
    "steady_state_numeric",
    "steady_state_closed_form",
    "collision_ratio",
    "waste_ratio",
    "utilization_report",
]


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    """Column-stochastic 4x4 matrix; column = from-state, row = to-state."""

    psi: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.psi, dtype=float)
        if m.shape != (4, 4):
            raise ValueError("psi must be 4x4")
        if np.any(m < -1e-15) or np.any(m > 1.0 + 1e-15):
            raise ValueError("entries must lie in [0, 1]")
        sums = m.sum(axis=0)
        if np.any(np.abs(sums - 1.0) > 1e-9):
            raise ColumnSumViolation(f"column sums deviate from 1: {sums}")
        object.__setattr__(self, "psi", m)


@dataclass(frozen=True)
class SteadyState:
    """Stationary distribution over [S0 waste, S1 PU, S2 SU, S3 collision]."""

    p0: float
    p1: float
    p2: float
    p3: float

    def __post_init__(self):
        vals = (self.p0, self.p1, self.p2, self.p3)
        if any(v < -1e-12 or v > 1.0 + 1e-12 for v in vals):
            raise ValueError("probabilities must lie in [0, 1]")
        if abs(sum(vals) - 1.0) > 1e-12:
            raise ValueError("probabilities must sum to 1")

    @property
    def busy(self) -> float:
        """PU duty cycle p1 + p3."""
        return self.p1 + self.p3

    @property
    def idle(self) -> float:
        return self.p0 + self.p2

    def as_array(self) -> np.ndarray:
        return np.array([self.p0, self.p1, self.p2, self.p3])


@dataclass(frozen=True)
class UtilizationReport:
    """Collision and waste ratios with the underlying state distribution."""

    pc: float
    pw: float
    steady: SteadyState


def build_transition_matrix(e: ErrorProfile, t: TransitionProbs) -> TransitionMatrix:
    """Assemble the joint-state transition matrix.

    From each state the SU is silent next with the correct-decision
    probability of a busy verdict (pf for idle states, 1-pm for busy ones),
    and the PU side moves independently with mu or nu.
    """
    mu, nu = t.mu, t.nu
    # probability the SU stays silent next slot, per current state
    silent = np.array([e.pf0, 1.0 - e.pm0, e.pf1, 1.0 - e.pm1])
    # probability the PU is busy next slot, per current state
    busy = np.array([mu, 1.0 - nu, mu, 1.0 - nu])
    psi = np.empty((4, 4))
    psi[0] = silent * (1.0 - busy)   # -> S0: idle, silent
    psi[1] = silent * busy           # -> S1: busy, silent
    psi[2] = (1.0 - silent) * (1.0 - busy)  # -> S2: idle, transmitting
    psi[3] = (1.0 - silent) * busy   # -> S3: busy, transmitting
    return TransitionMatrix(psi=psi)


def steady_state_numeric(m: TransitionMatrix) -> SteadyState:
    """Stationary distribution via the linear fixed-point solve.

    Solves (psi - I) p = 0 with the last equation replaced by sum(p) = 1.
    Raises SingularSystem for reducible chains without a unique stationary
    vector instead of regularizing silently.
    """
    a = m.psi - np.eye(4)
    a[3, :] = 1.0
    b = np.array([0.0, 0.0, 0.0, 1.0])
    try:
        p = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem("stationary system is singular") from exc
    if not np.all(np.isfinite(p)) or np.max(np.abs(m.psi @ p - p)) > 1e-8:
        raise SingularSystem("stationary solve failed its residual check")
    p = np.clip(p, 0.0, None)
    p = p / p.sum()
    return SteadyState(*map(float, p))


def _denominator(e: ErrorProfile, t: TransitionProbs) -> float:
    return (1.0 - e.xi * t.delta) * e.zeta + e.xi * t.r


def steady_state_closed_form(e: ErrorProfile, t: TransitionProbs) -> SteadyState:
    """Stationary distribution in closed form.

    Exact for the assembled transition matrix (not an approximation), which
    the test suite verifies against the numeric solver.
    """
    r = t.r
    xi, zeta = e.xi, e.zeta
    den = _denominator(e, t)
    if abs(den) <= 1e-12:
        raise DegenerateDenominator("closed-form denominator vanished")
    one_m_xid = 1.0 - xi * t.delta
    r_m_zd = r - zeta * t.delta
    scale = 1.0 / (r + 1.0) / den
    p = scale * np.array(
        [
            r * (e.pf1 * r_m_zd + 1.0 - e.pm1),
            (1.0 - e.pm1) * one_m_xid + e.pf1 * r,
            r * ((1.0 - e.pf0) * r_m_zd + e.pm0),
            e.pm0 * one_m_xid + (1.0 - e.pf0) * r,
        ]
    )
    # renormalize away accumulated rounding before the type's sum check
    p = p / p.sum()
    return SteadyState(*map(float, p))


def collision_ratio(e: ErrorProfile, t: TransitionProbs) -> float:
    """Fraction of PU transmission time overlapped by the SU.

    nu/2 covers the arrival slots (average half-slot overlap before the SU
    reacts); the second term is the stationary collision share
    p3 / (p1 + p3) of whole busy slots.
    """
    den = _denominator(e, t)
    if abs(den) <= 1e-12:
        raise DegenerateDenominator("collision-ratio denominator vanished")
    num = e.pm0 * (1.0 - e.xi * t.delta) + (1.0 - e.pf0) * t.r
    return t.nu / 2.0 + num / den


def waste_ratio(e: ErrorProfile, t: TransitionProbs) -> float:
    """Fraction of idle (spectrum-hole) time the SU leaves unused.

    Requires a common miss-detection probability in both SU states, the
    regime in which the thresholds are designed.
    """
    if abs(e.pm0 - e.pm1) > 1e-12:
        raise ValueError("waste_ratio assumes pm0 == pm1")
    inv = 1.0 / t.mu - 1.0
    den = 1.0 + inv * e.xi
    if abs(den) <= 1e-12:
        raise DegenerateDenominator("waste-ratio denominator vanished")
    return t.mu / 2.0 + (inv * e.pf1 + 1.0 - e.pm0) / den


def utilization_report(e: ErrorProfile, t: TransitionProbs) -> UtilizationReport:
    """Bundle collision ratio, waste ratio and the steady state."""
    return UtilizationReport(
        pc=collision_ratio(e, t),
        pw=waste_ratio(e, t),
        steady=steady_state_closed_form(e, t),
    )
