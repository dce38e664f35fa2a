"""End-to-end sliding-window analysis of a ramped simulation.

Simulate, subsample, slide fixed-length windows, fit each window with the
VAR estimator and AR(1) indicators, attach uncertainty and the analytical
eigenvalues of the tracked equilibrium, and stop at a configurable rule.
Window failures are recorded with a flag instead of aborting the run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import List, Optional

import numpy as np

from .models import EquilibriumError, ModelSpec, make_model
from .sde import FLOAT_FMT, SimConfig, TimeSeriesFrame, integrate, subsample
from .uncertainty import McConfig, McDiscardError, SePair, delta_se, monte_carlo_se
from .varfit import (
    RankDeficiencyError,
    Window,
    ZeroVarianceError,
    ar1_rate,
    fit_var,
    jacobian_from_var,
    lag1_autocorrelation,
)

__all__ = [
    "PipelineConfig",
    "WindowRecord",
    "CrossingEstimate",
    "InsufficientDataError",
    "RECORDS_HEADER",
    "run_pipeline",
    "extrapolate_crossing",
    "departure_time",
    "write_records_csv",
    "read_records_csv",
]

STOP_RULES = ("lambda_zero", "departure", "end_of_series")
SE_METHODS = ("monte_carlo", "delta", "both")


class InsufficientDataError(ValueError):
    """Not enough successful records for a regression."""


@dataclass(frozen=True)
class PipelineConfig:
    """Full configuration of one analysis run."""

    model: str
    sim: SimConfig
    sub: int
    block_size: int
    stride: int = 1
    detrend: str = "mean"
    se_method: str = "monte_carlo"
    mc: McConfig = field(default_factory=McConfig)
    stop_rule: str = "lambda_zero"
    departure_delta: Optional[float] = None

    def validate(self):
        self.sim.validate()
        if self.sub < 1:
            raise ValueError("sub must be >= 1")
        if self.block_size < 8:
            raise ValueError("block_size must be >= 8")
        if self.stride < 1:
            raise ValueError("stride must be >= 1")
        if self.detrend not in ("mean", "linear"):
            raise ValueError("detrend must be 'mean' or 'linear'")
        if self.se_method not in SE_METHODS:
            raise ValueError(f"se_method must be one of {SE_METHODS}")
        if self.stop_rule not in STOP_RULES:
            raise ValueError(f"stop_rule must be one of {STOP_RULES}")
        if self.stop_rule == "departure":
            if self.departure_delta is None or not self.departure_delta > 0:
                raise ValueError("departure_delta must be positive for the departure rule")
        self.mc.validate()


@dataclass
class WindowRecord:
    """One row of pipeline output."""

    end_time: float
    end_lambda: float
    re_mu1: Optional[float] = None
    im_mu1: Optional[float] = None
    re_mu2: Optional[float] = None
    im_mu2: Optional[float] = None
    se_re_mu1: Optional[float] = None
    se_re_mu2: Optional[float] = None
    is_complex_pair: Optional[bool] = None
    method: Optional[str] = None
    ar1_x: Optional[float] = None
    ar1_y: Optional[float] = None
    ar1_rate_x: Optional[float] = None
    ar1_rate_y: Optional[float] = None
    analytic_re_mu1: Optional[float] = None
    analytic_re_mu2: Optional[float] = None
    a11: Optional[float] = None
    a12: Optional[float] = None
    a21: Optional[float] = None
    a22: Optional[float] = None
    se_a11: Optional[float] = None
    se_a12: Optional[float] = None
    se_a21: Optional[float] = None
    se_a22: Optional[float] = None
    failed: bool = False
    # not serialized; populated when se_method == "both"
    delta_se_pair: Optional[SePair] = None


RECORDS_HEADER = (
    "end_time,end_lambda,re_mu1,im_mu1,re_mu2,im_mu2,se_re_mu1,se_re_mu2,"
    "is_complex_pair,method,ar1_x,ar1_y,ar1_rate_x,ar1_rate_y,"
    "analytic_re_mu1,analytic_re_mu2,a11,a12,a21,a22,"
    "se_a11,se_a12,se_a21,se_a22,failed"
)


def _build_model(cfg: PipelineConfig) -> ModelSpec:
    return make_model(cfg.model, epsilon=cfg.sim.epsilon, omega=cfg.sim.omega)


def run_pipeline(cfg: PipelineConfig, frame: Optional[TimeSeriesFrame] = None) -> List[WindowRecord]:
    """Run the full sliding-window analysis.

    ``frame`` may inject a pre-computed trajectory (it is still
    subsampled); otherwise one is simulated from ``cfg.sim``. Records are
    ordered by window end time and truncated at the configured stop rule.
    """
    cfg.validate()
    model = _build_model(cfg)
    if frame is None:
        frame = integrate(model, cfg.sim)
    frame = subsample(frame, cfg.sub)
    samples = frame.states()
    n = len(frame)
    records: List[WindowRecord] = []
    for end in range(cfg.block_size - 1, n, cfg.stride):
        end_time = float(frame.t[end])
        end_lambda = float(frame.lam[end])
        if cfg.stop_rule == "lambda_zero" and end_lambda <= 0.0:
            break
        if cfg.stop_rule == "departure" and _departed(
            model, samples[end], end_lambda, cfg.departure_delta
        ):
            break
        window = Window(
            samples=samples[end - cfg.block_size + 1 : end + 1],
            dt_sample=frame.dt_sample,
            end_time=end_time,
            end_lambda=end_lambda,
        )
        records.append(_analyze_window(window, model, cfg, len(records)))
    return records


def _departed(model, state, lam, delta):
    try:
        eq = model.equilibrium(lam)
    except EquilibriumError:
        return True
    return math.hypot(state[0] - eq[0], state[1] - eq[1]) > delta


def departure_time(frame: TimeSeriesFrame, model: ModelSpec, delta: float) -> Optional[float]:
    """First time the trajectory leaves a delta-ball around the tracked equilibrium."""
    for i in range(len(frame)):
        if _departed(model, (frame.x[i], frame.y[i]), float(frame.lam[i]), delta):
            return float(frame.t[i])
    return None


def _analyze_window(window: Window, model: ModelSpec, cfg: PipelineConfig, index: int) -> WindowRecord:
    rec = WindowRecord(end_time=window.end_time, end_lambda=window.end_lambda)
    try:
        rec.analytic_re_mu1, rec.analytic_re_mu2 = _analytic_real_parts(model, window.end_lambda)
    except EquilibriumError:
        pass
    try:
        fit = fit_var(window)
        est = jacobian_from_var(fit, window.dt_sample)
        se = _standard_errors(fit, est, window.dt_sample, cfg, index, rec)
        rec.re_mu1 = est.eigen.mu1.real
        rec.im_mu1 = est.eigen.mu1.imag
        rec.re_mu2 = est.eigen.mu2.real
        rec.im_mu2 = est.eigen.mu2.imag
        rec.se_re_mu1 = se.se_re_mu1
        rec.se_re_mu2 = se.se_re_mu2
        rec.is_complex_pair = est.eigen.is_complex_pair
        rec.method = est.method
        rec.a11, rec.a12 = fit.A_hat[0]
        rec.a21, rec.a22 = fit.A_hat[1]
        rec.se_a11, rec.se_a12 = fit.se_A[0]
        rec.se_a21, rec.se_a22 = fit.se_A[1]
        rec.ar1_x = lag1_autocorrelation(window, 0, cfg.detrend)
        rec.ar1_y = lag1_autocorrelation(window, 1, cfg.detrend)
        if rec.ar1_x > 0:
            rec.ar1_rate_x = ar1_rate(rec.ar1_x, window.dt_sample)
        if rec.ar1_y > 0:
            rec.ar1_rate_y = ar1_rate(rec.ar1_y, window.dt_sample)
    except (RankDeficiencyError, ZeroVarianceError, McDiscardError, ValueError):
        rec.failed = True
    return rec


def _standard_errors(fit, est, dt_sample, cfg: PipelineConfig, index: int, rec: WindowRecord) -> SePair:
    if cfg.se_method in ("monte_carlo", "both"):
        # per-window seed derived from (base seed, window index) so results
        # do not depend on analysis order
        mc_cfg = replace(cfg.mc, seed=np.random.SeedSequence([cfg.mc.seed, index]))
        se = monte_carlo_se(fit.A_hat, fit.se_A, dt_sample, mc_cfg)
        if cfg.se_method == "both":
            rec.delta_se_pair = delta_se(est.J, est.se_J)
        return se
    return delta_se(est.J, est.se_J)


def _analytic_real_parts(model: ModelSpec, lam: float):
    pair = model.eigenvalues_at(lam)
    return pair.mu1.real, pair.mu2.real


# --- crossing extrapolation -----------------------------------------------


@dataclass(frozen=True)
class CrossingEstimate:
    """Linear trend of an eigenvalue real part and its zero crossing."""

    slope: float
    intercept: float
    se_slope: float
    t_cross: Optional[float]
    lambda_cross: Optional[float]


def extrapolate_crossing(records, which="leading", fit_range=None) -> CrossingEstimate:
    """Extrapolate the instability crossing of one eigenvalue trend.

    Fits an OLS line to (end_time, Re mu) over the successful records in
    ``fit_range`` (a (t_min, t_max) interval, or all records). The zero
    crossing ``t_cross = -intercept / slope`` is reported only when the
    trend is rising.
    """
    if which not in ("leading", "nonleading"):
        raise ValueError("which must be 'leading' or 'nonleading'")
    ts, vals, lams = [], [], []
    for rec in records:
        if rec.failed or rec.re_mu1 is None:
            continue
        if fit_range is not None and not fit_range[0] <= rec.end_time <= fit_range[1]:
            continue
        ts.append(rec.end_time)
        vals.append(rec.re_mu1 if which == "leading" else rec.re_mu2)
        lams.append(rec.end_lambda)
    if len(ts) < 10:
        raise InsufficientDataError(
            f"need >= 10 successful records in range, got {len(ts)}"
        )
    t = np.asarray(ts)
    v = np.asarray(vals)
    slope, intercept = np.polyfit(t, v, 1)
    resid = v - (slope * t + intercept)
    dof = len(t) - 2
    tc = t - t.mean()
    denom = float(tc @ tc)
    se_slope = math.sqrt(float(resid @ resid) / dof / denom) if dof > 0 and denom > 0 else 0.0
    t_cross = None
    lambda_cross = None
    if slope > 0:
        t_cross = -intercept / slope
        lam_slope, lam_intercept = np.polyfit(t, np.asarray(lams), 1)
        lambda_cross = lam_slope * t_cross + lam_intercept
    return CrossingEstimate(
        slope=float(slope),
        intercept=float(intercept),
        se_slope=se_slope,
        t_cross=t_cross,
        lambda_cross=lambda_cross,
    )


# --- records CSV ----------------------------------------------------------


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, str):
        return value
    return FLOAT_FMT % value


def write_records_csv(records, path):
    """Write records with the exact pipeline CSV schema."""
    cols = RECORDS_HEADER.split(",")
    with open(path, "w") as fh:
        fh.write(RECORDS_HEADER + "\n")
        for rec in records:
            fh.write(",".join(_fmt(getattr(rec, col)) for col in cols) + "\n")


def read_records_csv(path) -> List[WindowRecord]:
    """Load a records CSV written by :func:`write_records_csv`."""
    with open(path) as fh:
        header = fh.readline().strip()
        if header != RECORDS_HEADER:
            raise ValueError(f"unexpected records header: {header!r}")
        cols = header.split(",")
        records = []
        for line in fh:
            parts = line.rstrip("\n").split(",")
            kwargs = {}
            for col, raw in zip(cols, parts):
                if raw == "":
                    kwargs[col] = None
                elif col == "method":
                    kwargs[col] = raw
                elif col in ("is_complex_pair", "failed"):
                    kwargs[col] = raw == "1"
                else:
                    kwargs[col] = float(raw)
            if kwargs.get("failed") is None:
                kwargs["failed"] = False
            records.append(WindowRecord(**kwargs))
    return records
