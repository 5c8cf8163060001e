from harness.compare import CompareResult, ComparePoint, coding_gain_holds, compare
from harness.gradcheck import GradCheckSummary, run_gradcheck
from harness.runner import ExperimentRunner, with_seed
from harness.stability import StabilityResult, run_stability
from harness.sweep import BerPoint, SweepResult, run_sweep, simulate_frames

__all__ = [
    "BerPoint",
    "ComparePoint",
    "CompareResult",
    "ExperimentRunner",
    "GradCheckSummary",
    "StabilityResult",
    "SweepResult",
    "coding_gain_holds",
    "compare",
    "run_gradcheck",
    "run_stability",
    "run_sweep",
    "simulate_frames",
    "with_seed",
]
