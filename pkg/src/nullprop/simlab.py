"""Simulation lab: shift-location sampling, detection-regime classification,
power curves and the exact-identity check for the linear weight.

Test statistics follow a standardized Subbotin (generalized Gaussian) law
with density proportional to exp(-|x|^kappa / kappa); kappa=2 is Gaussian,
kappa=1 double exponential.  Alternatives are shifted by
mu_n = (kappa * r * log n)^(1/kappa) and converted to one-sided p-values
through the Subbotin survival function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .bounding import BoundingFunctionSpec
from .calibration import CalibrationTable
from .estimator import EstimateConfig, PValueSample, estimate_lambda
from .incgamma import regularized_upper_gamma

REGIMES = ("full_detection", "no_detection", "boundary", "not_covered")


def subbotin_sf(kappa: float, x):
    """Survival function of the standardized Subbotin law.

    For x >= 0 this is 0.5 * Q(1/kappa, x^kappa / kappa) with Q the
    regularized upper incomplete gamma function; symmetric completion below 0.
    """
    if kappa <= 0.0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    arr = np.asarray(x, dtype=float)
    scalar = np.isscalar(x) or arr.ndim == 0
    arr = np.atleast_1d(arr)
    tail = 0.5 * regularized_upper_gamma(1.0 / kappa, np.abs(arr) ** kappa / kappa)
    out = np.where(arr >= 0.0, tail, 1.0 - tail)
    if scalar:
        return float(out[0])
    return out


def subbotin_isf(kappa: float, q: float) -> float:
    """Inverse survival function (scalar), by root bracketing."""
    if not 0.0 < q < 1.0:
        raise ValueError(f"q must lie in (0, 1), got {q}")
    if q == 0.5:
        return 0.0
    qq = min(q, 1.0 - q)
    hi = 1.0
    while subbotin_sf(kappa, hi) > qq:
        hi *= 2.0
        if hi > 1e6:
            raise RuntimeError("failed to bracket Subbotin quantile")
    x = brentq(lambda v: subbotin_sf(kappa, v) - qq, 0.0, hi, xtol=1e-14, rtol=1e-14)
    return x if q < 0.5 else -x


def shift_mu(kappa: float, r: float, n: int) -> float:
    """Shift amount (kappa * r * log n)^(1/kappa)."""
    return (kappa * r * math.log(n)) ** (1.0 / kappa)


@dataclass(frozen=True)
class ShiftModel:
    """Shift-location mixture: a fraction lambda_true of test statistics is
    shifted by mu; the rest follow the standardized null law."""

    kappa: float
    r: float
    n: int
    lambda_true: float
    seed: int
    mu: float | None = None  # override; default derives from (kappa, r, n)

    def __post_init__(self):
        if self.kappa <= 0.0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")
        if not 0.0 <= self.lambda_true <= 1.0:
            raise ValueError(f"lambda_true must lie in [0, 1], got {self.lambda_true}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if 0.0 < self.lambda_true and self.lambda_true * self.n < 1.0:
            raise ValueError("lambda_true * n must be at least 1")

    @property
    def shift(self) -> float:
        if self.mu is not None:
            return self.mu
        return shift_mu(self.kappa, self.r, self.n)


def _subbotin_draws(rng: np.random.Generator, kappa: float, size: int) -> np.ndarray:
    # |X| = (kappa * Gamma(1/kappa, 1))^(1/kappa) with a random sign: exact,
    # no rejection tuning
    g = rng.gamma(1.0 / kappa, 1.0, size)
    absx = (kappa * g) ** (1.0 / kappa)
    signs = np.where(rng.random(size) < 0.5, -1.0, 1.0)
    return signs * absx


def sample_shift_model(model: ShiftModel, rng: np.random.Generator | None = None) -> PValueSample:
    """Draw ceil(lambda*n) shifted statistics plus nulls and return their
    sorted one-sided p-values; deterministic given the model seed."""
    if rng is None:
        rng = np.random.default_rng(model.seed)
    n1 = math.ceil(model.lambda_true * model.n)
    n0 = model.n - n1
    z = np.empty(model.n)
    z[:n0] = _subbotin_draws(rng, model.kappa, n0)
    z[n0:] = model.shift + _subbotin_draws(rng, model.kappa, n1)
    p = subbotin_sf(model.kappa, z)
    p.sort()
    return PValueSample(p, source=f"shift-model kappa={model.kappa} mu={model.shift:.6g}")


def alt_pvalue_quantile(kappa: float, r: float, q: float, n: int) -> float:
    """q-quantile of the p-value distribution under the shifted alternative."""
    return subbotin_sf(kappa, shift_mu(kappa, r, n) + subbotin_isf(kappa, q))


def quantile_scaling_check(kappa: float, r: float, q: float, n_grid) -> list[tuple[int, float]]:
    """log of the alternative p-value quantile over log n; approaches -r."""
    if not 0.0 < q < 1.0:
        raise ValueError(f"q must lie in (0, 1), got {q}")
    grid = [int(n) for n in n_grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("n_grid must be strictly increasing")
    out = []
    for n in grid:
        g_inv = alt_pvalue_quantile(kappa, r, q, n)
        out.append((n, math.log(g_inv) / math.log(n)))
    return out


@dataclass(frozen=True)
class RegimeQuery:
    nu: float
    gamma: float
    r: float

    def __post_init__(self):
        if not 0.0 <= self.nu <= 1.0:
            raise ValueError(f"nu must lie in [0, 1], got {self.nu}")
        if not 0.0 <= self.gamma < 1.0:
            raise ValueError(f"gamma must lie in [0, 1), got {self.gamma}")
        if not 0.0 < self.r < 1.0:
            raise ValueError(f"r must lie in (0, 1), got {self.r}")


def regime_classify(q: RegimeQuery) -> str:
    """Asymptotic detection regime of lambda_hat / lambda on the (gamma, r)
    plane for a weight with regular-variation exponent nu."""
    nu, gamma, r = q.nu, q.gamma, q.r
    if nu <= 0.5:
        if gamma < 0.5:
            return "full_detection"
        if nu == 0.0:
            return "no_detection"  # threshold (gamma - 1/2)/nu is infinite
        threshold = (gamma - 0.5) / nu
        if r > threshold:
            return "full_detection"
        if r < threshold:
            return "no_detection"
        return "boundary"
    # nu in (1/2, 1]
    if 1.0 - nu < gamma < 0.5:
        return "no_detection"
    if nu == 1.0 and gamma >= 0.5:
        if r > gamma:
            return "full_detection"
        if r < gamma:
            return "no_detection"
        return "boundary"
    return "not_covered"


def fwer_detects(r: float) -> bool:
    """The counting baseline reaches full detection only on the half-plane r > 1."""
    return r > 1.0


def regime_grid(nu: float, gamma_points: int = 100, r_points: int = 100) -> list[dict]:
    """Classification over an evenly spaced (gamma, r) grid, with the
    counting-baseline flag alongside."""
    gammas = np.linspace(0.0, 1.0, gamma_points, endpoint=False)
    rs = np.linspace(0.0, 1.0, r_points + 2)[1:-1]
    rows = []
    for gamma in gammas:
        for r in rs:
            rows.append(
                {
                    "nu": nu,
                    "gamma": float(gamma),
                    "r": float(r),
                    "regime": regime_classify(RegimeQuery(nu=nu, gamma=float(gamma), r=float(r))),
                    "fwer_full_detection": fwer_detects(float(r)),
                }
            )
    return rows


@dataclass(frozen=True)
class PowerCurveResult:
    rows: list = field(default_factory=list)
    replicates: int = 0

    COLUMNS = (
        "mu",
        "lambda_true",
        "n",
        "kappa",
        "delta_kind",
        "method",
        "alpha",
        "mean_ratio",
        "median_ratio",
        "p10",
        "p90",
    )


def power_curve(
    models: list[ShiftModel],
    configs: list[EstimateConfig],
    replicates: int,
    table: CalibrationTable | None = None,
) -> PowerCurveResult:
    """Detected-proportion summaries lambda_hat / lambda_true over independent
    replicates, for every (model, config) pair.

    Replicate k of a model uses the generator seeded with [model.seed, k], so
    results do not depend on evaluation order.
    """
    if replicates < 1:
        raise ValueError("replicates must be >= 1")
    rows = []
    for model in models:
        if model.lambda_true <= 0.0:
            raise ValueError("power_curve needs lambda_true > 0")
        samples = [
            sample_shift_model(model, rng=np.random.default_rng([model.seed, k]))
            for k in range(replicates)
        ]
        for config in configs:
            ratios = np.array(
                [
                    estimate_lambda(s, config, table=table, with_hc=False).lambda_hat
                    / model.lambda_true
                    for s in samples
                ]
            )
            rows.append(
                {
                    "mu": model.shift,
                    "lambda_true": model.lambda_true,
                    "n": model.n,
                    "kappa": model.kappa,
                    "delta_kind": config.delta.kind,
                    "method": config.sequence.method,
                    "alpha": config.sequence.alpha,
                    "mean_ratio": float(ratios.mean()),
                    "median_ratio": float(np.median(ratios)),
                    "p10": float(np.percentile(ratios, 10)),
                    "p90": float(np.percentile(ratios, 90)),
                }
            )
    return PowerCurveResult(rows=rows, replicates=replicates)


def daniels_check(n: int, lam: float, replicates: int, seed: int) -> float:
    """Monte Carlo estimate of P(sup_t U_n(t)/t >= lam); equals 1/lam exactly.

    The supremum of U_n(t)/t is attained at the order statistics, so each
    replicate reduces to max_i (i/n) / u_(i).
    """
    if lam <= 1.0:
        raise ValueError(f"lam must exceed 1, got {lam}")
    if replicates < 1:
        raise ValueError("replicates must be >= 1")
    steps = np.arange(1, n + 1, dtype=float) / n
    chunk = max(1, 2_000_000 // max(n, 1))
    hits = 0
    done = 0
    idx = 0
    while done < replicates:
        size = min(chunk, replicates - done)
        rng = np.random.default_rng([seed, idx])
        u = np.sort(rng.random((size, n)), axis=1)
        with np.errstate(divide="ignore"):
            stat = (steps / u).max(axis=1)
        hits += int((stat >= lam).sum())
        done += size
        idx += 1
    return hits / replicates
