"""Lower confidence bound for the proportion of false null hypotheses.

Given n p-values with empirical CDF F_n, the estimate is

    lambda_hat = sup_{t in (a,b)} (F_n(t) - t - beta * delta(t)) / (1 - t),

a valid lower 100(1-alpha)% confidence bound for the proportion of false null
hypotheses whenever beta is a bounding sequence for delta at level alpha.  The
supremum is evaluated on the candidate set {a+} u {p-value jump points inside
(a, b)} u {b-}, optionally refined with extra grid points between jumps; any
subset supremum stays a valid (conservative) bound.

Also provides the familywise-error-rate counting baseline and the
higher-criticism style global-null test {lambda_hat_raw > 0}.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bounding import (
    BoundingFunctionSpec,
    BoundingSequenceSpec,
    analytic_beta,
    eval_delta,
)
from .calibration import CalibrationRequest, CalibrationTable, cached_calibrate


@dataclass(frozen=True)
class PValueSample:
    """Sorted p-values in [0, 1] with free-text provenance."""

    values: np.ndarray
    source: str = ""

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("p-value sample must be a nonempty 1-D array")
        if np.any(arr < 0.0) or np.any(arr > 1.0):
            raise ValueError("p-values must lie in [0, 1]")
        if np.any(np.diff(arr) < 0.0):
            arr = np.sort(arr)
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def n(self) -> int:
        return int(self.values.size)


def default_interval(n: int) -> tuple[float, float]:
    """The recommended truncated range (1/n, 1 - 1/n)."""
    if n < 2:
        return (0.0, 1.0)
    return (1.0 / n, 1.0 - 1.0 / n)


@dataclass(frozen=True)
class EstimateConfig:
    delta: BoundingFunctionSpec
    sequence: BoundingSequenceSpec
    interval: tuple[float, float] | None = None  # None -> (1/n, 1 - 1/n)
    refine_grid: int = 0
    clamp: bool = True

    def __post_init__(self):
        if self.interval is not None:
            a, b = self.interval
            if not (0.0 <= a < b <= 1.0):
                raise ValueError(f"interval must satisfy 0 <= a < b <= 1, got {self.interval}")
        if self.refine_grid < 0:
            raise ValueError("refine_grid must be nonnegative")

    def resolved_interval(self, n: int) -> tuple[float, float]:
        if self.interval is not None:
            return self.interval
        if self.sequence.interval is not None:
            return self.sequence.interval
        return default_interval(n)


@dataclass(frozen=True)
class EstimateReport:
    lambda_hat_raw: float
    lambda_hat: float
    argmax_t: float
    n: int
    beta_used: float
    alpha: float
    config: dict
    hc_reject: bool | None = None
    fwer_lambda: float | None = None
    empty_interval: bool = False


def resolve_beta(
    sequence: BoundingSequenceSpec,
    delta: BoundingFunctionSpec,
    n: int,
    interval: tuple[float, float],
    table: CalibrationTable | None = None,
    workers: int = 1,
) -> float:
    """beta_{n,alpha} for the given method, weight and interval."""
    sequence.check_compatible(delta)
    if sequence.method == "monte_carlo":
        if sequence.mc_seed is None:
            raise ValueError("monte_carlo bounding sequence requires mc_seed")
        req = CalibrationRequest(
            n=n,
            delta=delta,
            interval=interval,
            alpha=sequence.alpha,
            replicates=sequence.mc_replicates,
            seed=sequence.mc_seed,
        )
        return cached_calibrate(req, table=table, workers=workers).beta
    return analytic_beta(sequence.method, n, sequence.alpha)


def _candidates(p: np.ndarray, a: float, b: float, refine_grid: int):
    """Candidate points (t, F_n(t)) for the supremum over (a, b).

    F_n is right-continuous: at a k-fold tie the jump point carries the
    post-jump value, which dominates the tied duplicates in the maximum.
    """
    n = p.size
    f_all = np.arange(1, n + 1, dtype=float) / n
    inside = (p > a) & (p < b)
    ts = [np.array([a])]
    fs = [np.array([(p <= a).sum() / n])]
    if inside.any():
        ts.append(p[inside])
        fs.append(f_all[inside])
    if b < 1.0:
        ts.append(np.array([b]))
        fs.append(np.array([(p < b).sum() / n]))
    t = np.concatenate(ts)
    f = np.concatenate(fs)
    if refine_grid > 0:
        order = np.argsort(t, kind="stable")
        t_sorted, f_sorted = t[order], f[order]
        extra_t, extra_f = [], []
        bounds = np.append(t_sorted, b)
        for left, right, fval in zip(bounds[:-1], bounds[1:], f_sorted):
            if right > left:
                grid = left + (right - left) * (np.arange(1, refine_grid + 1) / (refine_grid + 1))
                extra_t.append(grid)
                extra_f.append(np.full(refine_grid, fval))
        if extra_t:
            t = np.concatenate([t, *extra_t])
            f = np.concatenate([f, *extra_f])
    return t, f


def estimate_lambda(
    sample: PValueSample,
    config: EstimateConfig,
    beta: float | None = None,
    table: CalibrationTable | None = None,
    workers: int = 1,
    with_hc: bool = True,
) -> EstimateReport:
    """Evaluate the lower confidence bound on the proportion of false nulls.

    `beta` overrides the configured bounding sequence (useful for fixed-beta
    experiments); otherwise it is resolved from `config.sequence`.
    """
    n = sample.n
    a, b = config.resolved_interval(n)
    if beta is None:
        beta = resolve_beta(config.sequence, config.delta, n, (a, b), table=table, workers=workers)
    beta = float(beta)

    p = sample.values
    t, f = _candidates(p, a, b, config.refine_grid)
    keep = t < 1.0
    t, f = t[keep], f[keep]
    empty = not np.any((p > a) & (p < b))
    vals = (f - t - beta * eval_delta(config.delta, t)) / (1.0 - t)
    idx = int(np.argmax(vals))
    raw = float(vals[idx])
    clamped = min(1.0, max(0.0, raw))

    echo = {
        "delta_kind": config.delta.kind,
        "method": config.sequence.method,
        "alpha": config.sequence.alpha,
        "interval": [a, b],
        "refine_grid": config.refine_grid,
        "clamp": config.clamp,
        "mc_replicates": config.sequence.mc_replicates,
        "mc_seed": config.sequence.mc_seed,
        "log_convention": "natural",
    }

    hc = None
    if with_hc:
        try:
            hc = hc_reject(sample, config.sequence.alpha, sequence=config.sequence, table=table)
        except ValueError:
            hc = None

    return EstimateReport(
        lambda_hat_raw=raw,
        lambda_hat=clamped if config.clamp else raw,
        argmax_t=float(t[idx]),
        n=n,
        beta_used=beta,
        alpha=config.sequence.alpha,
        config=echo,
        hc_reject=hc,
        fwer_lambda=fwer_lambda(sample, config.sequence.alpha),
        empty_interval=empty,
    )


def fwer_lambda(sample: PValueSample, alpha: float) -> float:
    """Counting baseline: the fraction of p-values at or below alpha/n."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    return float(np.mean(sample.values <= alpha / sample.n))


def hc_reject(
    sample: PValueSample,
    alpha: float,
    sequence: BoundingSequenceSpec | None = None,
    table: CalibrationTable | None = None,
) -> bool:
    """Global-null test: reject iff the stddev-weighted raw estimate is positive."""
    if sequence is None or sequence.method not in ("gumbel", "monte_carlo"):
        sequence = BoundingSequenceSpec(method="gumbel", alpha=alpha)
    if sequence.method == "gumbel" and sample.n < 16:
        raise ValueError("need n >= 16 for the Gumbel sequence; supply a monte_carlo sequence")
    config = EstimateConfig(
        delta=BoundingFunctionSpec("stddev"),
        sequence=sequence,
        interval=sequence.interval,
    )
    report = estimate_lambda(sample, config, table=table, with_hc=False)
    return report.lambda_hat_raw > 0.0
