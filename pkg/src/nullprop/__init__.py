"""Lower confidence bounds for the proportion of false null hypotheses among
independently tested hypotheses, from the empirical distribution of p-values."""

__version__ = "0.1.0"

from .bounding import (
    BoundingFunctionSpec,
    BoundingSequenceSpec,
    analytic_beta,
    daniels_beta,
    dkw_beta,
    eval_delta,
    gumbel_beta,
    n_beta_monotone_check,
)
from .calibration import (
    CalibrationEntry,
    CalibrationRequest,
    CalibrationTable,
    cached_calibrate,
    calibrate_beta,
    weighted_sup_stat,
)
from .estimator import (
    EstimateConfig,
    EstimateReport,
    PValueSample,
    default_interval,
    estimate_lambda,
    fwer_lambda,
    hc_reject,
    resolve_beta,
)
from .simlab import (
    PowerCurveResult,
    RegimeQuery,
    ShiftModel,
    daniels_check,
    fwer_detects,
    power_curve,
    quantile_scaling_check,
    regime_classify,
    regime_grid,
    sample_shift_model,
    subbotin_sf,
)

__all__ = [name for name in dir() if not name.startswith("_")]
