"""Render figures from the CSV files the nullprop CLI emits.

These are pure views: no statistic is ever recomputed here. Each figure kind
expects the schema of the CLI command that produces it, and rendering is
deterministic (fixed style, pinned SVG hash salt, no timestamp metadata), so
regenerating a figure from the same CSV gives a byte-identical file.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

KINDS = ("power-curve", "bounding-seq", "regime-map")

REQUIRED_COLUMNS = {
    "power-curve": (
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
    ),
    "bounding-seq": ("n", "delta_kind", "alpha", "beta_mc", "beta_analytic"),
    "regime-map": ("nu", "gamma", "r", "regime", "fwer_full_detection"),
}

REGIME_COLORS = {
    "full_detection": "#4878b0",
    "boundary": "#b0b0b0",
    "no_detection": "#ffffff",
    "not_covered": "#e8e8e8",
}


class SchemaError(ValueError):
    """A CSV is missing columns the figure kind requires."""


@dataclass(frozen=True)
class FigureSpec:
    inputs: tuple[str, ...]
    kind: str
    output: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; expected one of {KINDS}")
        if not self.inputs:
            raise ValueError("at least one input CSV is required")
        object.__setattr__(self, "inputs", tuple(self.inputs))


def _read_rows(path: str, kind: str) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        have = reader.fieldnames or []
        missing = [c for c in REQUIRED_COLUMNS[kind] if c not in have]
        if missing:
            raise SchemaError(f"{path}: missing columns for {kind}: {', '.join(missing)}")
        return list(reader)


def _pin_determinism() -> None:
    plt.rcParams["svg.hashsalt"] = "npfigures"
    plt.rcParams["figure.dpi"] = 100


def _save(fig, output: str) -> None:
    fig.savefig(output, metadata={"Date": None} if output.endswith(".svg") else None)
    plt.close(fig)


def _render_power_curve(rows: list[dict], output: str) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    for kind in sorted({r["delta_kind"] for r in rows}):
        sub = sorted((r for r in rows if r["delta_kind"] == kind), key=lambda r: float(r["mu"]))
        mu = [float(r["mu"]) for r in sub]
        med = [float(r["median_ratio"]) for r in sub]
        lo = [float(r["p10"]) for r in sub]
        hi = [float(r["p90"]) for r in sub]
        (line,) = ax.plot(mu, med, marker="o", label=f"delta = {kind}")
        ax.fill_between(mu, lo, hi, alpha=0.15, color=line.get_color())
    ax.set_xlabel(r"shift $\mu$")
    ax.set_ylabel("detected proportion (median, 10-90% band)")
    ax.set_ylim(bottom=0)
    ax.legend()
    fig.tight_layout()
    _save(fig, output)


def _render_bounding_seq(rows: list[dict], output: str) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    sub = sorted(rows, key=lambda r: int(r["n"]))
    n = [int(r["n"]) for r in sub]
    ax.loglog(n, [float(r["beta_mc"]) for r in sub], "o-", label="calibrated")
    analytic = [(ni, float(r["beta_analytic"])) for ni, r in zip(n, sub) if r["beta_analytic"] not in ("", "nan")]
    if analytic:
        ax.loglog(*zip(*analytic), "s--", label="asymptotic")
    ax.set_xlabel("sample size n")
    ax.set_ylabel(r"bounding sequence $\beta_{n,\alpha}$")
    ax.legend()
    fig.tight_layout()
    _save(fig, output)


def _render_regime_map(rows: list[dict], output: str) -> None:
    nus = sorted({float(r["nu"]) for r in rows})
    fig, axes = plt.subplots(1, len(nus), figsize=(4 * len(nus), 3.6), squeeze=False)
    for ax, nu in zip(axes[0], nus):
        sub = [r for r in rows if float(r["nu"]) == nu]
        for regime, color in REGIME_COLORS.items():
            pts = [(float(r["gamma"]), float(r["r"])) for r in sub if r["regime"] == regime]
            if pts:
                g, rr = zip(*pts)
                ax.scatter(g, rr, s=6, marker="s", color=color, label=regime, linewidths=0)
        ax.set_title(rf"$\nu = {nu:g}$")
        ax.set_xlabel(r"sparsity $\gamma$")
        ax.set_xlim(0, 1)
        ax.set_ylim(0, 1)
    axes[0][0].set_ylabel(r"shift exponent $r$")
    axes[0][-1].legend(loc="lower right", fontsize=7, markerscale=2)
    fig.tight_layout()
    _save(fig, output)


_RENDERERS = {
    "power-curve": _render_power_curve,
    "bounding-seq": _render_bounding_seq,
    "regime-map": _render_regime_map,
}


def render(spec: FigureSpec) -> str:
    """Render the figure described by ``spec`` and return the output path."""
    rows = []
    for path in spec.inputs:
        rows.extend(_read_rows(path, spec.kind))
    if not rows:
        raise SchemaError(f"no data rows in {', '.join(spec.inputs)}")
    _pin_determinism()
    _RENDERERS[spec.kind](rows, spec.output)
    return spec.output
