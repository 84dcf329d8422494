"""Listen-and-talk full-duplex cognitive radio analysis toolkit.

The secondary user senses and transmits simultaneously; residual
self-interference couples its transmit power to its sensing quality.  This
package provides the detector statistics and threshold design, the
four-state spectrum-utilization Markov model with closed-form collision and
waste ratios, the throughput/transmit-power tradeoff solver, and a slot
level Monte Carlo simulator that validates every closed form.
"""

from .errors import (
    AmbiguousLandscape,
    ColumnSumViolation,
    DegenerateDenominator,
    InfeasibleConstraint,
    LatcrError,
    NoRoot,
    SingularSystem,
)
from .traffic import (
    PuTraffic,
    PuTrace,
    SlotOccupancy,
    TransitionProbs,
    sample_trace,
    slotize,
    transition_probs,
)
from .sensing import (
    HYPOTHESES,
    ErrorProfile,
    HypothesisStats,
    RadioParams,
    ThresholdPair,
    error_probs,
    error_profile_from_pm,
    hypothesis_stats,
    pf0_of_pm,
    pf1_of_pm,
    q,
    q_inv,
    required_pm,
    thresholds_from_pm,
)
from .markov import (
    SteadyState,
    TransitionMatrix,
    UtilizationReport,
    build_transition_matrix,
    collision_ratio,
    steady_state_closed_form,
    steady_state_numeric,
    utilization_report,
    waste_ratio,
)
from .power import (
    ExistencePoint,
    OptimalPowerResult,
    PowerSearch,
    ThroughputPoint,
    default_search,
    dthroughput,
    dthroughput_compact,
    existence_curves,
    optimal_power,
    throughput,
)
from .sim import (
    MODES,
    SimConfig,
    SimMetrics,
    SlotTrace,
    detector_occupied_rate,
    run,
    run_batch,
)

__version__ = "0.1.0"

__all__ = [
    "AmbiguousLandscape",
    "ColumnSumViolation",
    "DegenerateDenominator",
    "InfeasibleConstraint",
    "LatcrError",
    "NoRoot",
    "SingularSystem",
    "PuTraffic",
    "PuTrace",
    "SlotOccupancy",
    "TransitionProbs",
    "sample_trace",
    "slotize",
    "transition_probs",
    "HYPOTHESES",
    "ErrorProfile",
    "HypothesisStats",
    "RadioParams",
    "ThresholdPair",
    "error_probs",
    "error_profile_from_pm",
    "hypothesis_stats",
    "pf0_of_pm",
    "pf1_of_pm",
    "q",
    "q_inv",
    "required_pm",
    "thresholds_from_pm",
    "SteadyState",
    "TransitionMatrix",
    "UtilizationReport",
    "build_transition_matrix",
    "collision_ratio",
    "steady_state_closed_form",
    "steady_state_numeric",
    "utilization_report",
    "waste_ratio",
    "ExistencePoint",
    "OptimalPowerResult",
    "PowerSearch",
    "ThroughputPoint",
    "default_search",
    "dthroughput",
    "dthroughput_compact",
    "existence_curves",
    "optimal_power",
    "throughput",
    "MODES",
    "SimConfig",
    "SimMetrics",
    "SlotTrace",
    "detector_occupied_rate",
    "run",
    "run_batch",
    "__version__",
]
