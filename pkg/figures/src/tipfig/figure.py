"""Rendering of analysis figures and phase portraits from pipeline CSVs.

Figures follow a fixed four-panel layout: (A) state time series, (B)
estimated eigenvalue real parts with +-1 SE bands and analytic star
markers, (C) lag-1 autocorrelation per channel, (D) the leading real
part overlaid with the AR(1)-implied decay rate of one channel. Every
panel carries a vertical marker at the bifurcation time. Output bytes
are deterministic for a pinned renderer version: embedded metadata
timestamps are suppressed and the SVG hash salt is fixed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .schema import read_portrait, read_records, read_trajectory

__all__ = [
    "FigureSpec",
    "bifurcation_time_from_trajectory",
    "build_analysis_figure",
    "render_analysis_figure",
    "render_phase_portrait",
]

PANELS = "ABCD"

plt.rcParams["svg.hashsalt"] = "tipfig"

_STAR_COUNT = 12  # analytic markers are thinned to this many stars


@dataclass(frozen=True)
class FigureSpec:
    """One analysis figure: input CSVs, panel subset, markers, output."""

    records_path: str
    trajectory_path: str
    output_path: str
    panels: str = PANELS
    bifurcation_time: Optional[float] = None
    d_channel: str = "y"

    def validate(self):
        if not self.panels or any(p not in PANELS for p in self.panels):
            raise ValueError(f"panels must be a nonempty subset of {PANELS!r}")
        if len(set(self.panels)) != len(self.panels):
            raise ValueError("panels must not repeat")
        if self.d_channel not in ("x", "y"):
            raise ValueError("d_channel must be 'x' or 'y'")


def bifurcation_time_from_trajectory(traj: dict) -> Optional[float]:
    """Time at which the linearly ramped forcing reaches zero.

    Recovered from the trajectory columns as lambda0 / r; None for an
    autonomous run (r = 0) or a ramp that never reaches zero in forward
    time.
    """
    t, lam = traj["t"], traj["lambda"]
    if len(t) < 2:
        return None
    r = (lam[0] - lam[-1]) / (t[-1] - t[0])
    if r <= 0:
        return None
    return float(lam[0] / r + t[0])


def _vline(ax, t_bif):
    if t_bif is not None:
        ax.axvline(t_bif, color="black", linewidth=1.2)


def _annotate_empty(ax):
    ax.text(
        0.5,
        0.5,
        "no successful windows",
        transform=ax.transAxes,
        ha="center",
        va="center",
        color="0.4",
    )


def _star_indices(n):
    if n <= _STAR_COUNT:
        return np.arange(n)
    return np.linspace(0, n - 1, _STAR_COUNT).round().astype(int)


def _panel_a(ax, traj, t_bif):
    ax.plot(traj["t"], traj["x"], color="tab:blue", linewidth=0.8, label="x")
    ax.plot(traj["t"], traj["y"], color="tab:orange", linewidth=0.8, label="y")
    _vline(ax, t_bif)
    ax.set_ylabel("state")
    ax.legend(loc="upper left", fontsize=8)


def _panel_b(ax, rec, ok, t_bif):
    _vline(ax, t_bif)
    ax.set_ylabel("Re(mu)")
    if not ok.any():
        _annotate_empty(ax)
        return
    t = rec["end_time"][ok]
    for key, se_key, color, label in (
        ("re_mu1", "se_re_mu1", "tab:red", "Re(mu1)"),
        ("re_mu2", "se_re_mu2", "tab:purple", "Re(mu2)"),
    ):
        v = rec[key][ok]
        se = rec[se_key][ok]
        ax.plot(t, v, color=color, linewidth=1.0, label=label)
        ax.fill_between(t, v - se, v + se, color=color, alpha=0.25, linewidth=0)
    stars = _star_indices(len(t))
    for key, color in (("analytic_re_mu1", "tab:red"), ("analytic_re_mu2", "tab:purple")):
        a = rec[key][ok]
        have = ~np.isnan(a[stars])
        ax.plot(t[stars][have], a[stars][have], "*", color=color, markersize=7,
                markeredgecolor="black", markeredgewidth=0.3, linestyle="none")
    ax.axhline(0.0, color="0.6", linewidth=0.6)
    ax.legend(loc="lower right", fontsize=8)


def _panel_c(ax, rec, ok, t_bif):
    _vline(ax, t_bif)
    ax.set_ylabel("AR(1)")
    if not ok.any():
        _annotate_empty(ax)
        return
    t = rec["end_time"][ok]
    ax.plot(t, rec["ar1_x"][ok], color="tab:blue", linewidth=1.0, label="AR(1) on x")
    ax.plot(t, rec["ar1_y"][ok], color="tab:orange", linewidth=1.0, label="AR(1) on y")
    ax.legend(loc="lower right", fontsize=8)


def _panel_d(ax, rec, ok, t_bif, channel):
    _vline(ax, t_bif)
    ax.set_ylabel("rate")
    if not ok.any():
        _annotate_empty(ax)
        return
    t = rec["end_time"][ok]
    ax.plot(t, rec["re_mu1"][ok], color="tab:red", linewidth=1.0, label="Re(mu1)")
    rate = rec[f"ar1_rate_{channel}"][ok]
    have = ~np.isnan(rate)
    ax.plot(t[have], rate[have], color="tab:green", linewidth=1.0,
            label=f"AR(1) rate ({channel})")
    ax.axhline(0.0, color="0.6", linewidth=0.6)
    ax.legend(loc="lower right", fontsize=8)


def render_analysis_figure(spec: FigureSpec) -> str:
    """Render the analysis figure described by ``spec``; returns the path."""
    fig = build_analysis_figure(spec)
    _save(fig, spec.output_path)
    return spec.output_path


def build_analysis_figure(spec: FigureSpec):
    """Build (without saving) the matplotlib figure for ``spec``."""
    spec.validate()
    rec = read_records(spec.records_path)
    traj = read_trajectory(spec.trajectory_path)
    t_bif = spec.bifurcation_time
    if t_bif is None:
        t_bif = bifurcation_time_from_trajectory(traj)
    ok = rec["failed"] != 1.0

    n = len(spec.panels)
    fig, axes = plt.subplots(n, 1, figsize=(7.0, 2.2 * n), sharex=True, squeeze=False)
    axes = axes[:, 0]
    for ax, panel in zip(axes, spec.panels):
        if panel == "A":
            _panel_a(ax, traj, t_bif)
        elif panel == "B":
            _panel_b(ax, rec, ok, t_bif)
        elif panel == "C":
            _panel_c(ax, rec, ok, t_bif)
        else:
            _panel_d(ax, rec, ok, t_bif, spec.d_channel)
        ax.set_title(panel, loc="left", fontsize=10, fontweight="bold")
    axes[-1].set_xlabel("t")
    fig.tight_layout()
    return fig


def render_phase_portrait(portrait_csv, output_path) -> str:
    """Render a phase portrait CSV (manifold, nullcline, trajectories)."""
    data = read_portrait(portrait_csv)
    names = data["set"]
    fig, ax = plt.subplots(figsize=(5.0, 5.0))
    for name in dict.fromkeys(names):  # preserve file order
        mask = names == name
        x, y = data["x"][mask], data["y"][mask]
        if name == "critical_manifold":
            ax.plot(x, y, color="black", linewidth=2.0, label="critical manifold")
        elif name == "nullcline_y":
            ax.plot(x, y, color="0.5", linestyle="--", linewidth=1.2, label="y-nullcline")
        else:
            ax.plot(x, y, linewidth=0.9)
            ax.plot(x[:1], y[:1], "o", markersize=4, color=ax.lines[-1].get_color())
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    _save(fig, output_path)
    return output_path


def _save(fig, path):
    # identical inputs must give identical bytes: strip volatile metadata
    if str(path).endswith(".svg"):
        fig.savefig(path, metadata={"Date": None})
    else:
        fig.savefig(path)
    plt.close(fig)
