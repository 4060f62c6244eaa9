"""PNG rendering of experiment tables.

Each subcommand's CSV schema has a matching plot so `--plot` can drop a
figure next to the data file. Purely a convenience view; the CSV stays
the authoritative output.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .experiments import CsvTable


def _columns(table: CsvTable) -> dict:
    data = np.array(table.rows, dtype=float).reshape(len(table.rows),
                                                     len(table.header))
    return {name: data[:, k] for k, name in enumerate(table.header)}


def _per_q(cols: dict):
    qs = cols["q"]
    for q in sorted(set(qs.tolist())):
        yield q, qs == q


def _histogram_axes(ax, cols: dict) -> None:
    for q, mask in _per_q(cols):
        ax.plot(cols["bin_center"][mask], cols["density"][mask],
                drawstyle="steps-mid", label=f"q={q:g}")
    ax.set_ylabel("density")
    ax.legend()


def _sweep_axes(axes, cols: dict, param: str) -> None:
    top, bottom = axes
    for q, mask in _per_q(cols):
        top.plot(cols[param][mask], cols["D_q"][mask], label=f"q={q:g}")
        bottom.plot(cols["S_L"][mask], cols["D_q"][mask], label=f"q={q:g}")
    top.set_xlabel(param)
    top.set_ylabel("D_q")
    top.legend()
    bottom.set_xlabel("S_L")
    bottom.set_ylabel("D_q")


def render(subcommand: str, table: CsvTable, path: str) -> str:
    """Render the table for this subcommand to a PNG; returns the path."""
    cols = _columns(table)
    if subcommand in ("werner-sweep", "alpha-sweep"):
        fig, axes = plt.subplots(2, 1, figsize=(6.0, 7.0))
        _sweep_axes(axes, cols, "c" if subcommand == "werner-sweep" else "alpha")
    elif subcommand in ("concavity", "pdf"):
        fig, ax = plt.subplots(figsize=(6.5, 4.5))
        _histogram_axes(ax, cols)
        ax.set_xlabel("Delta_q" if subcommand == "concavity" else "D_q")
    elif subcommand == "ordering":
        fig, ax = plt.subplots(figsize=(6.5, 4.5))
        grid = cols["is_crossing"] == 0.0
        ax.plot(cols["q"][grid], cols["D_diff"][grid])
        ax.axhline(0.0, color="gray", lw=0.8)
        cross = ~grid
        ax.plot(cols["q"][cross], cols["D_diff"][cross], "o", color="crimson",
                label="crossing")
        if cross.any():
            ax.legend()
        ax.set_xlabel("q")
        ax.set_ylabel("D_diff")
    elif subcommand in ("scatter", "diff-scatter"):
        fig, ax = plt.subplots(figsize=(5.5, 5.5))
        xcol, ycol = (("D_1", "D_q") if subcommand == "scatter"
                      else ("dD_1", "dD_q"))
        for q, mask in _per_q(cols):
            ax.plot(cols[xcol][mask], cols[ycol][mask], ".", ms=2.0,
                    label=f"q={q:g}")
        ax.axhline(0.0, color="gray", lw=0.8)
        ax.axvline(0.0, color="gray", lw=0.8)
        ax.set_xlabel(xcol)
        ax.set_ylabel(ycol)
        ax.legend(markerscale=4)
    elif subcommand == "alphabeta-scatter":
        fig, ax = plt.subplots(figsize=(5.5, 5.5))
        ax.plot(cols["D_1"], cols["D_2"], ".", ms=2.0)
        ax.set_xlabel("D_1")
        ax.set_ylabel("D_2")
    elif subcommand == "compute":
        raise ValueError("single-point compute output has no plot")
    else:
        raise ValueError(f"no renderer for subcommand {subcommand!r}")
    fig.suptitle(table.provenance, fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=140)
    plt.close(fig)
    return path
