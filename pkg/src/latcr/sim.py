"""Slot-level Monte Carlo engine for the listen-and-talk protocol.

Two modes validate the analytical layer from different directions:

sample_level
    Physical mode.  A continuous busy/idle trace is drawn, each slot's
    average-power statistic is synthesized from its exact sample-level law
    (primary signal of fixed power on the busy samples, circular Gaussian
    noise everywhere, circular Gaussian residual self-interference while
    transmitting), and the secondary user follows the protocol: sense every
    slot with the threshold matching its own activity, transmit next slot
    iff the spectrum was judged idle.  Collision and waste times are exact
    interval overlaps, so slots containing primary-user transitions are
    handled physically.

slot_statistical
    Model-faithful mode.  Primary-user state changes only at slot
    boundaries, detection outcomes are coin flips with the closed-form
    error probabilities, and the half-slot arrival/departure corrections
    are added to the collision and waste clocks, so the closed-form ratios
    are this mode's exact expectations.

Per-slot statistics are drawn from the exact distribution of the average
power of ns samples (noncentral chi-square for the constant-modulus primary
part plus central chi-square for noise and RSI) instead of materializing
every sample; a brute-force per-sample path is kept for cross-validation.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .sensing import RadioParams, ThresholdPair, error_probs
from .traffic import PuTraffic, busy_at, sample_trace, slotize

__all__ = [
    "MODES",
    "SimConfig",
    "SimMetrics",
    "SlotTrace",
    "run",
    "run_batch",
    "detector_occupied_rate",
]

MODES = ("sample_level", "slot_statistical")

_SE_BATCHES = 50


@dataclass(frozen=True)
class SimConfig:
    """One simulation run: who transmits, how it senses, for how long."""

    traffic: PuTraffic
    radio: RadioParams
    thresholds: ThresholdPair
    slots: int
    seed: int
    mode: str = "sample_level"

    def __post_init__(self):
        if self.slots < 1000:
            raise ValueError("need at least 1000 slots for meaningful metrics")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")


@dataclass(frozen=True)
class SimMetrics:
    """Accumulated times (seconds) and the derived utilization metrics."""

    collision_time: float
    waste_time: float
    pu_busy_time: float
    pu_idle_time: float
    su_tx_time: float
    total_time: float
    empirical_pc: float
    empirical_pw: float
    throughput: float
    pc_se: float
    pw_se: float


@dataclass(frozen=True)
class SlotTrace:
    """Optional per-slot detail for diagnostics and invariants tests."""

    transmitting: np.ndarray
    judged_occupied: np.ndarray
    busy_fraction: np.ndarray


def _child_seeds(seed: int, n: int) -> list[int]:
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(n, np.uint64)]


def _slot_statistic(radio: RadioParams, k: np.ndarray, tx_active: bool, rng) -> np.ndarray:
    """Per-slot average power, drawn from its exact law.

    k busy samples carry the constant-modulus primary term of power
    gamma_s*sigma_u2 on top of circular Gaussian noise (variance sigma_u2,
    plus gamma_i*sigma_u2 of RSI while transmitting): the slot sum is
    (v/2) * [chi'2_{2k}(2 k m^2 / v) + chi2_{2(ns-k)}].
    """
    ns = radio.ns
    var = radio.sigma_u2 * (1.0 + (radio.gamma_i if tx_active else 0.0))
    m2 = radio.gamma_s * radio.sigma_u2
    total = np.zeros(len(k))
    central = k < ns
    if np.any(central):
        total[central] = rng.chisquare(2 * (ns - k[central]))
    noncentral = k > 0
    if np.any(noncentral):
        kk = k[noncentral]
        total[noncentral] += rng.noncentral_chisquare(2 * kk, 2.0 * kk * m2 / var)
    return (var / 2.0) * total / ns


def _slot_statistic_bruteforce(
    radio: RadioParams, k: np.ndarray, tx_active: bool, rng
) -> np.ndarray:
    """Reference path: materialize every complex sample (tests only)."""
    ns = radio.ns
    n_slots = len(k)
    var = radio.sigma_u2 * (1.0 + (radio.gamma_i if tx_active else 0.0))
    amp = np.sqrt(radio.gamma_s * radio.sigma_u2)
    re = rng.normal(0.0, np.sqrt(var / 2.0), (n_slots, ns))
    im = rng.normal(0.0, np.sqrt(var / 2.0), (n_slots, ns))
    phase = rng.uniform(0.0, 2.0 * np.pi, (n_slots, ns))
    busy_mask = np.arange(ns)[None, :] < k[:, None]
    re = re + amp * np.cos(phase) * busy_mask
    im = im + amp * np.sin(phase) * busy_mask
    return np.mean(re * re + im * im, axis=1)


def _decision_loop(m_silent, m_tx, eps0: float, eps1: float):
    """Sequential protocol loop: today's verdict gates tomorrow's activity."""
    n = len(m_silent)
    tx_arr = np.empty(n, dtype=bool)
    occ_arr = np.empty(n, dtype=bool)
    ms = m_silent.tolist()
    mt = m_tx.tolist()
    tx = False  # the SU starts silent
    for i in range(n):
        tx_arr[i] = tx
        occupied = (mt[i] >= eps1) if tx else (ms[i] >= eps0)
        occ_arr[i] = occupied
        tx = not occupied
    return tx_arr, occ_arr


def _ratio_se(num: np.ndarray, den: np.ndarray, batches: int = _SE_BATCHES) -> float:
    """Batch-means standard error of sum(num)/sum(den) (correlation-safe)."""
    edges = np.linspace(0, len(num), batches + 1, dtype=int)
    vals = []
    for a, b in zip(edges[:-1], edges[1:]):
        d = den[a:b].sum()
        if d > 0:
            vals.append(num[a:b].sum() / d)
    if len(vals) < 2:
        return float("nan")
    return float(np.std(vals, ddof=1) / np.sqrt(len(vals)))


def _metrics(busy_sec, tx, slot, rate, coll_extra=None, waste_extra=None):
    idle_sec = slot - busy_sec
    coll = busy_sec * tx
    waste = idle_sec * ~tx
    if coll_extra is not None:
        coll = coll + coll_extra
    if waste_extra is not None:
        waste = waste + waste_extra
    busy_t = float(busy_sec.sum())
    idle_t = float(idle_sec.sum())
    coll_t = float(coll.sum())
    waste_t = float(waste.sum())
    pc = coll_t / busy_t if busy_t > 0 else float("nan")
    pw = waste_t / idle_t if idle_t > 0 else float("nan")
    return SimMetrics(
        collision_time=coll_t,
        waste_time=waste_t,
        pu_busy_time=busy_t,
        pu_idle_time=idle_t,
        su_tx_time=float(tx.sum()) * slot,
        total_time=len(tx) * slot,
        empirical_pc=pc,
        empirical_pw=pw,
        # delivered rate over spectrum-hole time: estimates rate * (1 - Pw)
        throughput=rate * (idle_t - waste_t) / idle_t if idle_t > 0 else float("nan"),
        pc_se=_ratio_se(coll, busy_sec),
        pw_se=_ratio_se(waste, idle_sec),
    )


def _run_sample_level(cfg: SimConfig, rate: float):
    seeds = _child_seeds(cfg.seed, 3)
    slot = cfg.traffic.slot
    ns = cfg.radio.ns
    trace = sample_trace(cfg.traffic, cfg.slots * slot, seeds[0])
    occ = slotize(trace, slot)
    busy_sec = occ.busy_fraction * slot

    # busy samples per slot; only transition slots need sample-time marking
    k = np.where(occ.busy_fraction >= 1.0, ns, 0).astype(np.int64)
    partial = np.flatnonzero((occ.busy_fraction > 0.0) & (occ.busy_fraction < 1.0))
    if len(partial):
        offsets = (np.arange(ns) + 0.5) / ns * slot
        times = partial[:, None] * slot + offsets[None, :]
        k[partial] = busy_at(trace, times.ravel()).reshape(len(partial), ns).sum(axis=1)

    rng = np.random.default_rng(seeds[1])
    m_silent = _slot_statistic(cfg.radio, k, tx_active=False, rng=rng)
    m_tx = _slot_statistic(cfg.radio, k, tx_active=True, rng=rng)
    tx, judged = _decision_loop(m_silent, m_tx, cfg.thresholds.eps0, cfg.thresholds.eps1)
    metrics = _metrics(busy_sec, tx, slot, rate)
    return metrics, SlotTrace(tx, judged, occ.busy_fraction)


def _pu_state_sequence(mu: float, nu: float, slots: int, rng) -> np.ndarray:
    """Boundary-sampled PU state per slot: geometric busy/idle run lengths."""
    busy = bool(rng.random() < mu / (mu + nu))
    chunks = []
    remaining = slots
    while remaining > 0:
        run = int(rng.geometric(nu if busy else mu))
        run = min(run, remaining)
        chunks.append((busy, run))
        remaining -= run
        busy = not busy
    out = np.empty(slots, dtype=bool)
    pos = 0
    for state, run in chunks:
        out[pos : pos + run] = state
        pos += run
    return out


def _run_slot_statistical(cfg: SimConfig, rate: float):
    from .traffic import transition_probs

    seeds = _child_seeds(cfg.seed, 2)
    slot = cfg.traffic.slot
    t = transition_probs(cfg.traffic)
    e = error_probs(cfg.radio, cfg.thresholds)

    rng = np.random.default_rng(seeds[0])
    s = _pu_state_sequence(t.mu, t.nu, cfg.slots, rng)
    u = rng.random(cfg.slots)

    # P(judged occupied) per slot given (PU state, SU activity)
    p_occ = {
        (False, False): e.pf0,
        (False, True): e.pf1,
        (True, False): 1.0 - e.pm0,
        (True, True): 1.0 - e.pm1,
    }
    tx_arr = np.empty(cfg.slots, dtype=bool)
    occ_arr = np.empty(cfg.slots, dtype=bool)
    s_list = s.tolist()
    u_list = u.tolist()
    tx = False
    for i in range(cfg.slots):
        tx_arr[i] = tx
        occupied = u_list[i] < p_occ[(s_list[i], tx)]
        occ_arr[i] = occupied
        tx = not occupied
    # half-slot bookkeeping for the slots in which the PU changes state
    arrivals = np.concatenate([[False], s[1:] & ~s[:-1]])
    departures = np.concatenate([[False], ~s[1:] & s[:-1]])
    busy_sec = np.where(s, slot, 0.0)
    metrics = _metrics(
        busy_sec,
        tx_arr,
        slot,
        rate,
        coll_extra=0.5 * slot * arrivals,
        waste_extra=0.5 * slot * departures,
    )
    return metrics, SlotTrace(tx_arr, occ_arr, s.astype(float))


def run(cfg: SimConfig, return_trace: bool = False):
    """Simulate one configuration; deterministic in cfg.seed."""
    rate = float(np.log2(1.0 + cfg.radio.gamma_t))
    if cfg.mode == "sample_level":
        metrics, trace = _run_sample_level(cfg, rate)
    else:
        metrics, trace = _run_slot_statistical(cfg, rate)
    return (metrics, trace) if return_trace else metrics


def run_batch(cfgs: list[SimConfig], workers: int = 1) -> list[SimMetrics]:
    """Run configurations independently; order of results matches input."""
    if not cfgs:
        raise ValueError("run_batch needs at least one config")
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(run, cfgs))
    return [run(c) for c in cfgs]


def detector_occupied_rate(
    radio: RadioParams,
    thresholds: ThresholdPair,
    hypothesis: str,
    slots: int,
    seed: int,
) -> float:
    """Empirical P(statistic >= threshold) under a pinned hypothesis.

    Uses the sample-level synthesis with the PU presence and SU activity
    held fixed, so the rate estimates the closed-form error probabilities
    (false alarm for idle hypotheses, complement of miss for busy ones).
    """
    if hypothesis not in ("H00", "H01", "H10", "H11"):
        raise ValueError("hypothesis must be one of H00, H01, H10, H11")
    tx_active = hypothesis[1] == "1"
    pu_busy = hypothesis[2] == "1"
    rng = np.random.default_rng(seed)
    k = np.full(slots, radio.ns if pu_busy else 0, dtype=np.int64)
    m = _slot_statistic(radio, k, tx_active=tx_active, rng=rng)
    eps = thresholds.eps1 if tx_active else thresholds.eps0
    return float(np.mean(m >= eps))
