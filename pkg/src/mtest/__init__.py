"""Two-sample testing with a calibrated maximum Bayes factor statistic.

The test compares two alternative models of a pair of samples (different
means; different means and variances) against a pooled null, scores each by
its Monte Carlo marginal likelihood, and rejects the null when the largest
Bayes factor exceeds a threshold calibrated on simulated null data so the
Type I error is exact. Classical t and Welch baselines and a power-study
harness are included.
"""

__version__ = "0.1.0"

from .calibration import (
    CalibrationKey,
    CalibrationTable,
    TableStore,
    build_table,
    jeffreys_type1,
    load_table,
    p_value,
    save_table,
    threshold,
)
from .core import (
    NormalizedSamplePair,
    SamplePair,
    SummaryStats,
    normalize,
    sigma_3sem,
    summary,
)
from .errors import (
    ChainDegenerate,
    CorruptTable,
    DegenerateData,
    FormatVersionMismatch,
    GridTooSparse,
    InvalidAlpha,
    InvalidPrior,
    MissingCalibration,
    MTestError,
    NumericalUnderflow,
    ScenarioMismatch,
    TooFewSamples,
)
from .estimator import (
    BOTH_ALTERNATIVES,
    EstimatorMethod,
    EstimatorSettings,
    MTestResult,
    log_marginal,
    log_marginal_harmonic,
    m_statistic,
)
from .experiments import (
    ALL_DESCRIPTORS,
    PowerGrid,
    PowerScenario,
    ablation_study,
    diff_grid,
    parse_descriptor,
    prior_variant_study,
    run_power,
    trapezoid_average,
)
from .models import (
    EPSILON,
    HypothesisId,
    ParamVector,
    PriorSpec,
    PriorVariant,
    build_prior,
    log_likelihood,
    log_prior_density,
    sample_prior,
)
from .reference import (
    ClassicalResult,
    ClassicalTest,
    regularized_incomplete_beta,
    student_t_cdf,
    t_test,
    welch_test,
)

__all__ = [
    "__version__",
    "BOTH_ALTERNATIVES",
    "ALL_DESCRIPTORS",
    "EPSILON",
    "CalibrationKey",
    "CalibrationTable",
    "ChainDegenerate",
    "ClassicalResult",
    "ClassicalTest",
    "CorruptTable",
    "DegenerateData",
    "EstimatorMethod",
    "EstimatorSettings",
    "FormatVersionMismatch",
    "GridTooSparse",
    "HypothesisId",
    "InvalidAlpha",
    "InvalidPrior",
    "MTestError",
    "MTestResult",
    "MissingCalibration",
    "NormalizedSamplePair",
    "NumericalUnderflow",
    "ParamVector",
    "PowerGrid",
    "PowerScenario",
    "PriorSpec",
    "PriorVariant",
    "SamplePair",
    "ScenarioMismatch",
    "SummaryStats",
    "TableStore",
    "TooFewSamples",
    "ablation_study",
    "build_prior",
    "build_table",
    "diff_grid",
    "jeffreys_type1",
    "load_table",
    "log_likelihood",
    "log_marginal",
    "log_marginal_harmonic",
    "log_prior_density",
    "m_statistic",
    "normalize",
    "p_value",
    "parse_descriptor",
    "prior_variant_study",
    "run_power",
    "sample_prior",
    "save_table",
    "sigma_3sem",
    "student_t_cdf",
    "summary",
    "t_test",
    "threshold",
    "trapezoid_average",
    "welch_test",
]
