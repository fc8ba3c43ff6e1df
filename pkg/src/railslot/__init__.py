"""Revenue-maximizing slot allocation for a single-track corridor with competing operators."""

from .model import (
    ConflictSemantics,
    Corridor,
    MarketParams,
    ProblemInstance,
    RailwayUndertaking,
    ServiceRequest,
    Station,
    Stop,
    derive_times,
    deviation_metrics,
)
from .revenue import RevenueBreakdown, penalty_curve, service_revenue, total_revenue, x_dt, x_tt
from .conflict import ConflictMatrix, TrainPath, conflict_matrix, interpolate_time, pair_conflict
from .scheduling import (
    ScheduleResult,
    decode_vector,
    evaluate_proposal,
    exhaustive_oracle,
    greedy_schedule,
    repair_service,
    validate_service,
)
from .optimize import Algorithm, AlgorithmConfig, Bounds, ConvergenceTrace, encode, run
from .generate import MADRID_BARCELONA, GenerationSpec, fee_of, generate_instance
from .stats import ks_two_sample, wilcoxon_signed_rank
from .bench import ExperimentReport, run_experiment, sensitivity_grid

__version__ = "0.1.0"
