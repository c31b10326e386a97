"""Bounding functions delta(t) and closed-form bounding sequences beta_{n,alpha}.

Three weight functions are supported for shaping the allowed excursion of the
uniform empirical process: linear (t), constant (1) and standard-deviation
proportional (sqrt(t(1-t))).  Each comes with a matching analytic bounding
sequence: the Daniels constant for linear, the DKW bound for constant and a
Gumbel-limit sequence for the stddev weight.  Natural logarithms are used
throughout the Gumbel constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

DELTA_KINDS = ("linear", "constant", "stddev")

# regular-variation exponent at the origin for each weight
NU_BY_KIND = {"linear": 1.0, "constant": 0.0, "stddev": 0.5}

SEQUENCE_METHODS = ("daniels", "dkw", "gumbel", "monte_carlo")

# analytic sequences are only valid bounding sequences for their own weight
COMPATIBLE_DELTA = {
    "daniels": ("linear",),
    "dkw": ("constant",),
    "gumbel": ("stddev",),
    "monte_carlo": DELTA_KINDS,
}

GUMBEL_MIN_N = 16


@dataclass(frozen=True)
class BoundingFunctionSpec:
    """One of the three supported weight functions."""

    kind: str

    def __post_init__(self):
        if self.kind not in DELTA_KINDS:
            raise ValueError(f"unknown bounding function kind: {self.kind!r}")

    @property
    def nu(self) -> float:
        return NU_BY_KIND[self.kind]

    def __call__(self, t):
        return eval_delta(self, t)


@dataclass(frozen=True)
class BoundingSequenceSpec:
    """How beta_{n,alpha} is obtained, at which level and over which interval.

    ``interval`` is the range over which the supremum is taken.  ``None``
    means the per-sample default (1/n, 1 - 1/n).  For ``monte_carlo`` the
    calibration replicate count and seed are part of the spec so results are
    reproducible.
    """

    method: str
    alpha: float
    interval: tuple[float, float] | None = None
    mc_replicates: int = 1000
    mc_seed: int | None = None

    def __post_init__(self):
        if self.method not in SEQUENCE_METHODS:
            raise ValueError(f"unknown bounding sequence method: {self.method!r}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.interval is not None:
            lo, hi = self.interval
            if not (0.0 <= lo < hi <= 1.0):
                raise ValueError(f"interval must satisfy 0 <= lo < hi <= 1, got {self.interval}")

    def check_compatible(self, delta: BoundingFunctionSpec) -> None:
        if delta.kind not in COMPATIBLE_DELTA[self.method]:
            raise ValueError(
                f"bounding sequence {self.method!r} is only valid for "
                f"{COMPATIBLE_DELTA[self.method]}, got delta kind {delta.kind!r}"
            )


def eval_delta(spec: BoundingFunctionSpec, t):
    """Evaluate the weight function at t (scalar or array) in [0, 1]."""
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError("t must lie in [0, 1]")
    if spec.kind == "linear":
        out = arr
    elif spec.kind == "constant":
        out = np.ones_like(arr)
    else:  # stddev
        out = np.sqrt(arr * (1.0 - arr))
    if np.isscalar(t) or arr.ndim == 0:
        return float(out)
    return out


def daniels_beta(alpha: float) -> float:
    """Optimal bounding sequence for the linear weight: 1/alpha - 1 (n-free)."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    return 1.0 / alpha - 1.0


def dkw_beta(n: int, alpha: float) -> float:
    """DKW bounding sequence for the constant weight: sqrt(log(2/alpha)/(2n))."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    return math.sqrt(math.log(2.0 / alpha) / (2.0 * n))


def gumbel_quantile(p: float) -> float:
    """Inverse of the Gumbel law exp(-exp(-x))."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    return -math.log(-math.log(p))


def gumbel_scaling(n: int) -> tuple[float, float]:
    """Centering/scaling constants (a_n, b_n) of the Gumbel limit for the
    stddev-weighted supremum."""
    if n < GUMBEL_MIN_N:
        raise ValueError(f"n must be >= {GUMBEL_MIN_N} for the Gumbel sequence, got {n}")
    ll = math.log(math.log(n))
    a_n = math.sqrt(2.0 * n * ll)
    b_n = 2.0 * ll + 0.5 * math.log(ll) - 0.5 * math.log(4.0 * math.pi)
    return a_n, b_n


def gumbel_beta(n: int, alpha: float) -> float:
    """Asymptotic bounding sequence for the stddev weight,
    (GumbelQuantile(1 - alpha) + b_n) / a_n."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    a_n, b_n = gumbel_scaling(n)
    return (gumbel_quantile(1.0 - alpha) + b_n) / a_n


_ANALYTIC_BETA = {
    "daniels": lambda n, alpha: daniels_beta(alpha),
    "dkw": dkw_beta,
    "gumbel": gumbel_beta,
}


def analytic_beta(method: str, n: int, alpha: float) -> float:
    """Closed-form beta_{n,alpha} for one of the analytic methods."""
    if method not in _ANALYTIC_BETA:
        raise ValueError(f"no closed form for method {method!r}")
    return _ANALYTIC_BETA[method](n, alpha)


@dataclass(frozen=True)
class MonotoneCheckResult:
    ok: bool
    first_violation: int | None = None  # index into n_grid of the offending n


def n_beta_monotone_check(method: str, alpha: float, n_grid) -> MonotoneCheckResult:
    """Check that n * beta_{n,alpha} is nondecreasing along a strictly
    increasing grid of sample sizes (a defining property of a bounding
    sequence)."""
    grid = [int(n) for n in n_grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("n_grid must be strictly increasing")
    prev = None
    for idx, n in enumerate(grid):
        cur = n * analytic_beta(method, n, alpha)
        if prev is not None and cur < prev:
            return MonotoneCheckResult(False, idx)
        prev = cur
    return MonotoneCheckResult(True, None)
