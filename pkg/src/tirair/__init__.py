"""Time and amplitude irreversibility of time series from joint ordinal patterns."""

__version__ = "0.1.0"

from .errors import (
    ConfigurationError,
    DegenerateInputError,
    DomainError,
    InputFormatError,
    NumericOverflowError,
    PreconditionError,
    TirairError,
)
from .irreversibility import IrrevReport, PairContribution, air, des, irreversibility, tir, ys_index
from .ordinal import (
    EmbeddingConfig,
    JointPattern,
    PatternDistribution,
    amplitude_permutation,
    joint_pattern,
    original_permutation,
    pattern_distribution,
    symmetric_counterpart,
)
from .series import (
    GeneratorSpec,
    TimeSeries,
    center,
    default_spec,
    generate,
    generate_map,
    generate_stochastic,
    integrate_lorenz,
    reverse,
)
from .stats import TestResult, mann_whitney_u, summarize, wilcoxon_signed_rank
from .surrogate import SurrogateTestResult, iaaft, surrogate_test, surrogate_tests

__all__ = [
    "air",
    "amplitude_permutation",
    "center",
    "ConfigurationError",
    "default_spec",
    "DegenerateInputError",
    "des",
    "DomainError",
    "EmbeddingConfig",
    "generate",
    "generate_map",
    "generate_stochastic",
    "GeneratorSpec",
    "iaaft",
    "InputFormatError",
    "integrate_lorenz",
    "irreversibility",
    "IrrevReport",
    "joint_pattern",
    "JointPattern",
    "mann_whitney_u",
    "NumericOverflowError",
    "original_permutation",
    "PairContribution",
    "pattern_distribution",
    "PatternDistribution",
    "PreconditionError",
    "reverse",
    "summarize",
    "surrogate_test",
    "surrogate_tests",
    "SurrogateTestResult",
    "symmetric_counterpart",
    "TestResult",
    "TimeSeries",
    "tir",
    "TirairError",
    "wilcoxon_signed_rank",
    "ys_index",
]
