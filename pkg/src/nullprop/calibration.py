"""Monte Carlo bounding sequences over restricted intervals, with a JSON cache.

The calibrated beta for an interval (a, b) is the smallest value such that the
empirical exceedance probability of the weighted supremum statistic

    sup_{t in (a,b)} (U_n(t) - t) / delta(t)

over the simulation replicates is at most alpha.  The supremum over each
constancy segment of the empirical CDF is attained at the segment's left
endpoint for all three supported weights, so the statistic is computed exactly
on the candidate set {a+} u {order statistics inside (a,b)} u {b-}.  The
estimator uses the identical candidate policy, so calibration and estimation
measure the same discretized statistic.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bounding import BoundingFunctionSpec, eval_delta

# Replicates are simulated in fixed-size chunks; chunk i uses the generator
# seeded with SeedSequence([seed, i]).  Results are therefore bit-identical
# regardless of how many workers process the chunks.
GENERATOR_TAG = "numpy-pcg64-seedseq-chunked-v1"

CACHE_SCHEMA_VERSION = 1


def _chunk_size(n: int) -> int:
    # cap per-chunk memory around 2M doubles
    return max(1, min(256, 2_000_000 // max(n, 1)))


class CacheError(RuntimeError):
    pass


@dataclass(frozen=True)
class CalibrationRequest:
    n: int
    delta: BoundingFunctionSpec
    interval: tuple[float, float]
    alpha: float
    replicates: int
    seed: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        a, b = self.interval
        if not (0.0 <= a < b <= 1.0):
            raise ValueError(f"interval must satisfy 0 <= a < b <= 1, got {self.interval}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.replicates < 100:
            raise ValueError(f"need at least 100 replicates, got {self.replicates}")


@dataclass(frozen=True)
class CalibrationEntry:
    beta: float
    achieved_level: float
    replicates_used: int


def _sup_stats(u_sorted: np.ndarray, delta: BoundingFunctionSpec, a: float, b: float) -> np.ndarray:
    """Weighted supremum statistic for each row of a sorted sample matrix."""
    u = np.atleast_2d(u_sorted)
    r, n = u.shape
    steps = np.arange(1, n + 1, dtype=float) / n

    inside = (u > a) & (u < b)
    dvals = eval_delta(delta, np.where(inside, u, 0.5))
    with np.errstate(invalid="ignore"):
        vals = np.where(inside, (steps - u) / dvals, -np.inf)
    best = vals.max(axis=1)

    # supremum limit at t -> a+ with the current step value U_n(a)
    f_a = (u <= a).sum(axis=1) / n
    d_a = eval_delta(delta, a)
    if d_a > 0.0:
        cand_a = (f_a - a) / d_a
    else:
        # a == 0 with a vanishing weight: the limit is +inf if there is mass
        # at zero, otherwise -1 for the linear weight and 0 for stddev
        flat = -1.0 if delta.kind == "linear" else 0.0
        cand_a = np.where(f_a > a, np.inf, flat)
    best = np.maximum(best, cand_a)

    # supremum limit at t -> b- with the step value just below b
    d_b = eval_delta(delta, b)
    if d_b > 0.0:
        f_b = (u < b).sum(axis=1) / n
        best = np.maximum(best, (f_b - b) / d_b)
    # d_b == 0 only at b == 1 for stddev, where the limit is dominated by the
    # left-endpoint candidates

    return best


def weighted_sup_stat(
    uniform_sample, delta: BoundingFunctionSpec, interval: tuple[float, float]
) -> float:
    """sup over t in (a, b) of (U_n(t) - t)/delta(t) for one sorted sample."""
    u = np.asarray(uniform_sample, dtype=float)
    if u.ndim != 1 or u.size == 0:
        raise ValueError("sample must be a nonempty 1-D array")
    if np.any(u < 0.0) or np.any(u > 1.0):
        raise ValueError("sample values must lie in [0, 1]")
    if np.any(np.diff(u) < 0.0):
        raise ValueError("sample must be sorted ascending")
    a, b = interval
    if not (0.0 <= a < b <= 1.0):
        raise ValueError(f"interval must satisfy 0 <= a < b <= 1, got {interval}")
    return float(_sup_stats(u[None, :], delta, a, b)[0])


def simulate_sup_stats(req: CalibrationRequest, workers: int = 1) -> np.ndarray:
    """Sorted supremum statistics for `replicates` independent uniform samples."""
    a, b = req.interval
    chunk = _chunk_size(req.n)
    n_chunks = math.ceil(req.replicates / chunk)
    sizes = [chunk] * (n_chunks - 1) + [req.replicates - chunk * (n_chunks - 1)]

    def run_chunk(idx: int) -> np.ndarray:
        rng = np.random.default_rng([req.seed, idx])
        u = np.sort(rng.random((sizes[idx], req.n)), axis=1)
        return _sup_stats(u, req.delta, a, b)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run_chunk, range(n_chunks)))
    else:
        parts = [run_chunk(i) for i in range(n_chunks)]
    stats = np.concatenate(parts)
    stats.sort()
    return stats


def calibrate_beta(req: CalibrationRequest, workers: int = 1) -> CalibrationEntry:
    """Monte Carlo bounding value: the ceil((1-alpha) R)-th order statistic of
    the replicate suprema, guaranteeing empirical exceedance <= alpha."""
    k = math.ceil((1.0 - req.alpha) * req.replicates)
    if k >= req.replicates and req.alpha * req.replicates < 1.0:
        raise ValueError(
            f"replicates={req.replicates} cannot resolve alpha={req.alpha}; "
            "increase the replicate count"
        )
    stats = simulate_sup_stats(req, workers=workers)
    beta = float(stats[k - 1])
    achieved = float(np.mean(stats > beta))
    return CalibrationEntry(beta=beta, achieved_level=achieved, replicates_used=req.replicates)


def _sig12(x: float) -> str:
    return f"{float(x):.12g}"


def _key(req: CalibrationRequest) -> tuple:
    # replicate count is deliberately not part of the key: entries may be
    # upgraded in place with larger replicate counts
    a, b = req.interval
    return (req.n, req.delta.kind, _sig12(a), _sig12(b), _sig12(req.alpha), req.seed)


class CalibrationTable:
    """Exact-key store of calibrated bounding values."""

    def __init__(self):
        self._entries: dict[tuple, tuple[CalibrationRequest, CalibrationEntry]] = {}

    def __len__(self) -> int:
        return len(self._entries)

    def get(self, req: CalibrationRequest) -> CalibrationEntry | None:
        hit = self._entries.get(_key(req))
        if hit is None:
            return None
        _, entry = hit
        if entry.replicates_used < req.replicates:
            return None
        return entry

    def put(self, req: CalibrationRequest, entry: CalibrationEntry) -> None:
        key = _key(req)
        stored = self._entries.get(key)
        if stored is not None and stored[1].replicates_used >= entry.replicates_used:
            return
        self._entries[key] = (req, entry)

    def to_dict(self) -> dict:
        rows = []
        for req, entry in self._entries.values():
            a, b = req.interval
            rows.append(
                {
                    "n": req.n,
                    "delta_kind": req.delta.kind,
                    "a": a,
                    "b": b,
                    "alpha": req.alpha,
                    "replicates": entry.replicates_used,
                    "seed": req.seed,
                    "beta": entry.beta,
                    "achieved_level": entry.achieved_level,
                }
            )
        return {
            "schema_version": CACHE_SCHEMA_VERSION,
            "generator": GENERATOR_TAG,
            "entries": rows,
        }

    @classmethod
    def from_dict(cls, doc: dict, path: str = "<memory>") -> "CalibrationTable":
        try:
            if doc["schema_version"] != CACHE_SCHEMA_VERSION:
                raise CacheError(f"unsupported cache schema in {path}: {doc['schema_version']}")
            if doc["generator"] != GENERATOR_TAG:
                raise CacheError(f"cache {path} was produced by generator {doc['generator']!r}")
            table = cls()
            for row in doc["entries"]:
                req = CalibrationRequest(
                    n=int(row["n"]),
                    delta=BoundingFunctionSpec(row["delta_kind"]),
                    interval=(float(row["a"]), float(row["b"])),
                    alpha=float(row["alpha"]),
                    replicates=int(row["replicates"]),
                    seed=int(row["seed"]),
                )
                entry = CalibrationEntry(
                    beta=float(row["beta"]),
                    achieved_level=float(row["achieved_level"]),
                    replicates_used=int(row["replicates"]),
                )
                table.put(req, entry)
            return table
        except CacheError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise CacheError(f"corrupted calibration cache {path}: {exc}") from exc

    def save(self, path: str) -> None:
        """Atomic whole-file replace."""
        directory = os.path.dirname(os.path.abspath(path))
        fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(self.to_dict(), fh, indent=1)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    @classmethod
    def load(cls, path: str) -> "CalibrationTable":
        try:
            with open(path, encoding="utf-8") as fh:
                doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise CacheError(f"corrupted calibration cache {path}: {exc}") from exc
        return cls.from_dict(doc, path=path)


def cached_calibrate(
    req: CalibrationRequest, table: CalibrationTable | None = None, workers: int = 1
) -> CalibrationEntry:
    """Look up the table first; calibrate and store on a miss."""
    if table is not None:
        hit = table.get(req)
        if hit is not None:
            return hit
    entry = calibrate_beta(req, workers=workers)
    if table is not None:
        table.put(req, entry)
    return entry
