# anonpram/__init__.py

"""
anonpram
========

A deterministic, seedable simulator of anonymous synchronous PRAMs (Common and
Arbitrary concurrent writes) together with randomized naming algorithms that
assign n identical processors distinct names from [1..n], and a statistical
harness that measures their time, memory, random bits and error rates.

Quick start (programmatic)::

    import anonpram as ap

    result = ap.run_trials(ap.ExperimentConfig("com-unb-lv", n_values=(64,), trials=20, seed=7))
    print(result.stats[64].mean_rounds)
"""

__version__ = "0.1.0"

from .errors import (
    AnonPramError,
    ConfigError,
    DegenerateFit,
    IllegalCommonWrite,
    MalformedOp,
    ModelViolation,
    ReadWriteClash,
    RoundCapExceeded,
    WindowExceeded,
    WordOverflow,
)
from .harness import ExperimentResult, classify_outcome, run_trial, run_trials
from .machine import ProcessorContext, SimulationLimits, run_program
from .memory import (
    Idle,
    Read,
    SharedMemory,
    Write,
    WritePolicy,
    WriteSelector,
    resolve_concurrent_writes,
    submit_round,
)
from .models import (
    AggregateStats,
    AlgoConfig,
    ExecutionMetrics,
    ExperimentConfig,
    GrowthFunction,
    NameAssignment,
    Outcome,
    SizeEstimate,
    TrialReport,
)
from .registry import ALGORITHMS, AlgorithmSpec, get_algorithm
from .rng import ProcessorRng, ScriptedBits, derive_seed, draw_uniform
from .statistics import ScalingModel, estimate_probability, fit_scaling

__all__ = [
    "__version__",
    # Simulator
    "SharedMemory",
    "Read",
    "Write",
    "Idle",
    "WritePolicy",
    "WriteSelector",
    "submit_round",
    "resolve_concurrent_writes",
    "ProcessorContext",
    "SimulationLimits",
    "run_program",
    "ProcessorRng",
    "ScriptedBits",
    "derive_seed",
    "draw_uniform",
    # Algorithms
    "ALGORITHMS",
    "AlgorithmSpec",
    "get_algorithm",
    # Harness
    "run_trial",
    "run_trials",
    "classify_outcome",
    "ExperimentResult",
    "estimate_probability",
    "fit_scaling",
    "ScalingModel",
    # Models
    "AlgoConfig",
    "ExperimentConfig",
    "ExecutionMetrics",
    "NameAssignment",
    "SizeEstimate",
    "TrialReport",
    "AggregateStats",
    "GrowthFunction",
    "Outcome",
    # Exceptions
    "AnonPramError",
    "ModelViolation",
    "IllegalCommonWrite",
    "ReadWriteClash",
    "WindowExceeded",
    "WordOverflow",
    "MalformedOp",
    "RoundCapExceeded",
    "ConfigError",
    "DegenerateFit",
]
