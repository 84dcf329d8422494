"""Primary-user channel occupancy: alternating exponential busy/idle process.

The licensed user holds the channel for Exp(tau1)-distributed bursts and
leaves it idle for Exp(tau0)-distributed gaps.  Dividing time into sensing
slots of length T gives per-slot transition probabilities

    mu = 1 - exp(-T/tau0)   (arrival within a slot that starts idle)
    nu = 1 - exp(-T/tau1)   (departure within a slot that starts busy)

which drive the analytical layer.  Random traces of the same process feed
the Monte Carlo simulator.
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "PuTraffic",
    "TransitionProbs",
    "PuTrace",
    "SlotOccupancy",
    "transition_probs",
    "sample_trace",
    "slotize",
]


@dataclass(frozen=True)
class PuTraffic:
    """Mean idle/busy durations and sensing slot length, in seconds."""

    tau0: float
    tau1: float
    slot: float

    def __post_init__(self):
        if not (self.tau0 > 0 and self.tau1 > 0 and self.slot > 0):
            raise ValueError("tau0, tau1 and slot must all be positive")
        if self.m0 < 1 or self.m1 < 1:
            # Closed forms assume many slots per holding time; sub-slot
            # means put every downstream formula outside its regime.
            raise ValueError("mean holding times must be at least one slot")

    @property
    def m0(self) -> float:
        """Mean idle duration in slots."""
        return self.tau0 / self.slot

    @property
    def m1(self) -> float:
        """Mean busy duration in slots."""
        return self.tau1 / self.slot


@dataclass(frozen=True)
class TransitionProbs:
    """Per-slot arrival/departure probabilities of the primary user."""

    mu: float
    nu: float

    def __post_init__(self):
        if not (0.0 < self.mu < 1.0 and 0.0 < self.nu < 1.0):
            raise ValueError("mu and nu must lie strictly in (0, 1)")

    @property
    def r(self) -> float:
        """Departure-to-arrival ratio nu/mu."""
        return self.nu / self.mu

    @property
    def delta(self) -> float:
        """Derived constant 1 + r - 1/mu used by the steady-state forms."""
        return 1.0 + self.r - 1.0 / self.mu


@dataclass(frozen=True)
class PuTrace:
    """One realization of the busy/idle process.

    intervals: ordered (state, duration) pairs with strictly alternating
    states ("busy" or "idle"); durations sum to total.
    """

    intervals: tuple[tuple[str, float], ...]
    total: float

    def __post_init__(self):
        if not self.intervals:
            raise ValueError("trace needs at least one interval")
        for state, dur in self.intervals:
            if state not in ("busy", "idle"):
                raise ValueError(f"unknown state {state!r}")
            if dur <= 0:
                raise ValueError("interval durations must be positive")
        states = [s for s, _ in self.intervals]
        if any(a == b for a, b in zip(states, states[1:])):
            raise ValueError("states must strictly alternate")
        if abs(sum(d for _, d in self.intervals) - self.total) > 1e-9 * max(self.total, 1.0):
            raise ValueError("durations must sum to total")

    def boundaries(self) -> tuple[np.ndarray, np.ndarray]:
        """Interval start times and a busy flag per interval."""
        durs = np.array([d for _, d in self.intervals])
        starts = np.concatenate([[0.0], np.cumsum(durs)[:-1]])
        busy = np.array([s == "busy" for s, _ in self.intervals])
        return starts, busy


@dataclass(frozen=True)
class SlotOccupancy:
    """Per-slot occupancy summary of a trace (arrays indexed by slot)."""

    busy_fraction: np.ndarray
    busy_at_start: np.ndarray
    busy_at_end: np.ndarray
    slot: float

    def __len__(self) -> int:
        return len(self.busy_fraction)


def transition_probs(t: PuTraffic) -> TransitionProbs:
    """Per-slot arrival/departure probabilities of the exponential process."""
    mu = -np.expm1(-t.slot / t.tau0)
    nu = -np.expm1(-t.slot / t.tau1)
    return TransitionProbs(mu=float(mu), nu=float(nu))


def sample_trace(t: PuTraffic, total: float, seed: int) -> PuTrace:
    """Draw a stationary busy/idle trace covering at least `total` seconds.

    The initial state is busy with probability tau1/(tau0+tau1); exponential
    holding times are memoryless, so no residual-time correction is needed
    for stationarity.  The last interval is truncated at `total`.
    """
    if total <= 0:
        raise ValueError("total must be positive")
    rng = np.random.default_rng(seed)
    busy = bool(rng.random() < t.tau1 / (t.tau0 + t.tau1))
    intervals = []
    elapsed = 0.0
    while elapsed < total:
        dur = float(rng.exponential(t.tau1 if busy else t.tau0))
        if dur <= 0.0:  # exponential(0.0) cannot occur, guard for fp anyway
            continue
        if elapsed + dur > total:
            dur = total - elapsed
        intervals.append(("busy" if busy else "idle", dur))
        elapsed += dur
        busy = not busy
    return PuTrace(intervals=tuple(intervals), total=total)


def _cumulative_busy(trace: PuTrace):
    starts, busy = trace.boundaries()
    durs = np.array([d for _, d in trace.intervals])
    cum = np.concatenate([[0.0], np.cumsum(np.where(busy, durs, 0.0))])
    return starts, busy, cum


def busy_time_before(trace: PuTrace, times: np.ndarray) -> np.ndarray:
    """Total busy seconds in [0, t] for each t (piecewise-linear exact)."""
    starts, busy, cum = _cumulative_busy(trace)
    idx = np.clip(np.searchsorted(starts, times, side="right") - 1, 0, len(busy) - 1)
    return cum[idx] + np.where(busy[idx], times - starts[idx], 0.0)


def busy_at(trace: PuTrace, times: np.ndarray) -> np.ndarray:
    """Busy indicator of the trace at each queried time."""
    starts, busy, _ = _cumulative_busy(trace)
    idx = np.clip(np.searchsorted(starts, times, side="right") - 1, 0, len(busy) - 1)
    return busy[idx]


def slotize(trace: PuTrace, slot: float) -> SlotOccupancy:
    """Exact per-slot busy fractions of a trace.

    Covers the n = floor(total/slot) whole slots; a trailing partial slot is
    dropped.  Fractions are exact interval overlaps, so slots containing
    several transitions are still represented faithfully.
    """
    if slot <= 0:
        raise ValueError("slot must be positive")
    n = int(np.floor(trace.total / slot + 1e-9))
    if n < 1:
        raise ValueError("trace shorter than one slot")
    edges = np.arange(n + 1) * slot
    cum = busy_time_before(trace, edges)
    frac = np.diff(cum) / slot
    # guard fp droop just outside [0, 1]
    frac = np.clip(frac, 0.0, 1.0)
    state = busy_at(trace, edges)
    return SlotOccupancy(
        busy_fraction=frac,
        busy_at_start=state[:-1],
        busy_at_end=state[1:],
        slot=slot,
    )
