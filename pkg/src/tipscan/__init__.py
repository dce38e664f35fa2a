"""Eigenvalue-based early warning indicators for ramped fast-slow stochastic systems."""

from .mat2 import EigenPair, eig2, logm2
from .models import ModelSpec, make_model
from .pipeline import PipelineConfig, WindowRecord, extrapolate_crossing, run_pipeline
from .presets import preset_config
from .sde import SimConfig, TimeSeriesFrame, integrate, subsample, wiener_increments
from .uncertainty import McConfig, SePair, delta_se, monte_carlo_se
from .varfit import VarFit, Window, ar1_rate, fit_var, jacobian_from_var, lag1_autocorrelation

__version__ = "0.1.0"

__all__ = [
    "EigenPair",
    "eig2",
    "logm2",
    "ModelSpec",
    "make_model",
    "PipelineConfig",
    "WindowRecord",
    "extrapolate_crossing",
    "run_pipeline",
    "preset_config",
    "SimConfig",
    "TimeSeriesFrame",
    "integrate",
    "subsample",
    "wiener_increments",
    "McConfig",
    "SePair",
    "delta_se",
    "monte_carlo_se",
    "VarFit",
    "Window",
    "ar1_rate",
    "fit_var",
    "jacobian_from_var",
    "lag1_autocorrelation",
]
