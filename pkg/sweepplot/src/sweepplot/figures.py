"""Render sweep-metric figures from the simulator's CSV output.

The input schema is the flat sweep table

    d_lambda,separation_m,delta_aaoa_rad,delta_eaoa_rad,chordal,cmd,seed

and each figure draws one labeled curve per decorrelation distance over
user separation: ``angles`` (azimuth and elevation panels side by side),
``chordal`` (log scale), and ``cmd`` (fixed [0, 1] range). Curves are
drawn per seed, or seed-averaged when requested. Rendering is read-only
and deterministic: fixed style, no timestamps.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

__all__ = ["FigureSpec", "SchemaError", "load_records", "build_figure", "render"]

COLUMNS = ("d_lambda", "separation_m", "delta_aaoa_rad", "delta_eaoa_rad",
           "chordal", "cmd", "seed")
FIGURE_IDS = ("angles", "chordal", "cmd")

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


class SchemaError(ValueError):
    """Input CSV does not match the sweep schema."""


@dataclass(frozen=True)
class FigureSpec:
    csv_path: str
    out_path: str
    figure: str
    mean_over_seeds: bool = False

    def __post_init__(self):
        if self.figure not in FIGURE_IDS:
            raise ValueError(
                f"unknown figure id '{self.figure}' (choose from {', '.join(FIGURE_IDS)})")


def load_records(path: str) -> dict[str, np.ndarray]:
    """Read the sweep table into column arrays, validating the schema."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for column in COLUMNS:
            if column not in header:
                raise SchemaError(f"missing column '{column}' in {path}")
        rows = [[float(row[c]) for c in COLUMNS] for row in reader]
    data = np.array(rows, dtype=float) if rows else np.empty((0, len(COLUMNS)))
    return {c: data[:, i] for i, c in enumerate(COLUMNS)}


def _series(data, metric, mean_over_seeds):
    """Per-curve (label, x, y) series grouped by decorrelation distance."""
    out = []
    for dl in np.unique(data["d_lambda"]):
        sel = data["d_lambda"] == dl
        label = f"$d_\\lambda$ = {dl:g} m"
        if mean_over_seeds:
            seps = np.unique(data["separation_m"][sel])
            y = np.array([data[metric][sel & (data["separation_m"] == s)].mean()
                          for s in seps])
            out.append((label, [(seps, y)]))
        else:
            branches = []
            for seed in np.unique(data["seed"][sel]):
                pick = sel & (data["seed"] == seed)
                order = np.argsort(data["separation_m"][pick], kind="stable")
                branches.append((data["separation_m"][pick][order],
                                 data[metric][pick][order]))
            out.append((label, branches))
    return out


def _draw(ax, data, metric, mean_over_seeds):
    for i, (label, branches) in enumerate(_series(data, metric, mean_over_seeds)):
        color = PALETTE[i % len(PALETTE)]
        alpha = 1.0 if mean_over_seeds or len(branches) == 1 else 0.7
        for k, (x, y) in enumerate(branches):
            ax.plot(x, y, color=color, alpha=alpha, linewidth=1.2,
                    label=label if k == 0 else None)
    ax.set_xlabel("user separation (m)")
    ax.grid(True, alpha=0.3)
    if ax.get_legend_handles_labels()[0]:
        ax.legend(fontsize=9)


def build_figure(data: dict[str, np.ndarray], figure: str,
                 mean_over_seeds: bool = False) -> plt.Figure:
    """Assemble one of the three figures from loaded columns."""
    if figure == "angles":
        fig, (ax_az, ax_el) = plt.subplots(1, 2, figsize=(9.6, 4.0), sharex=True)
        _draw(ax_az, data, "delta_aaoa_rad", mean_over_seeds)
        _draw(ax_el, data, "delta_eaoa_rad", mean_over_seeds)
        ax_az.set_ylabel("mean azimuth AoA distance (rad)")
        ax_el.set_ylabel("mean elevation AoA distance (rad)")
    elif figure == "chordal":
        fig, ax = plt.subplots(figsize=(6.4, 4.2))
        _draw(ax, data, "chordal", mean_over_seeds)
        ax.set_yscale("log")
        ax.set_ylabel("chordal distance")
    else:
        fig, ax = plt.subplots(figsize=(6.4, 4.2))
        _draw(ax, data, "cmd", mean_over_seeds)
        ax.set_ylim(0.0, 1.0)
        ax.set_ylabel("covariance similarity")
    fig.tight_layout()
    return fig


def render(spec: FigureSpec) -> str:
    """Render the figure described by ``spec``; returns the output path."""
    data = load_records(spec.csv_path)
    fig = build_figure(data, spec.figure, spec.mean_over_seeds)
    try:
        fig.savefig(spec.out_path, dpi=120, metadata={"Software": "sweepplot"})
    finally:
        plt.close(fig)
    return spec.out_path
