"""Window-level estimation: VAR(2,1) least squares and AR(1) indicators.

A window of samples is fitted with the order-one vector autoregression
X_{n+1} = c + A X_n + xi by per-equation ordinary least squares. The local
Jacobian is recovered from the coefficient matrix through the principal
2x2 matrix logarithm divided by the sampling interval, falling back to the
linear truncation (A - I) / dt when the logarithm does not exist.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import math

import numpy as np

from .mat2 import EigenPair, eig2, logm2

__all__ = [
    "MIN_WINDOW_LENGTH",
    "Window",
    "VarFit",
    "JacobianEstimate",
    "RankDeficiencyError",
    "ZeroVarianceError",
    "fit_var",
    "jacobian_from_var",
    "lag1_autocorrelation",
    "ar1_rate",
]

# OLS with intercept on k=2 channels needs k^2 + k rows for the
# coefficients plus residual degrees of freedom.
MIN_WINDOW_LENGTH = 8


class RankDeficiencyError(ValueError):
    """Regressor matrix is rank deficient (e.g. a constant window)."""


class ZeroVarianceError(ValueError):
    """A channel has no variance left after detrending."""


@dataclass(frozen=True)
class Window:
    """One analysis window of consecutive 2-vector samples."""

    samples: np.ndarray  # (n, 2)
    dt_sample: float
    end_time: float = 0.0
    end_lambda: float = 0.0

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if s.ndim != 2 or s.shape[1] != 2:
            raise ValueError("samples must be an (n, 2) array")
        if len(s) < MIN_WINDOW_LENGTH:
            raise ValueError(f"window needs >= {MIN_WINDOW_LENGTH} samples, got {len(s)}")
        object.__setattr__(self, "samples", s)

    def __len__(self):
        return len(self.samples)


@dataclass(frozen=True)
class VarFit:
    """OLS fit of X_{n+1} = c + A X_n + xi on one window."""

    c_hat: np.ndarray  # (2,)
    A_hat: np.ndarray  # (2, 2), per-step coefficients
    se_A: np.ndarray  # (2, 2) entrywise standard errors
    resid_cov: np.ndarray  # (2, 2)
    n_obs: int


@dataclass(frozen=True)
class JacobianEstimate:
    """Jacobian recovered from a VAR fit, with eigenvalues.

    ``method`` records whether the principal matrix logarithm was used or
    the linear-truncation fallback (only when the log was inadmissible).
    ``se_re_mu`` is filled later by the uncertainty propagation step.
    """

    J: np.ndarray
    se_J: np.ndarray
    method: str  # "matrix_log" | "linear_truncation"
    eigen: EigenPair
    se_re_mu: Optional[tuple] = None


def fit_var(window: Window) -> VarFit:
    """Fit the window by per-equation OLS with intercept.

    Coefficients are solved through a numerically stable orthogonal
    factorization (SVD least squares). The standard error of coefficient
    (i, j) is sqrt(Sigma_ii [ (Z^T Z)^{-1} ]_{(j+1)(j+1)}) with Sigma the
    residual covariance U^T U / (N - 3).
    """
    samples = window.samples
    if not np.all(np.isfinite(samples)):
        raise ValueError("window contains non-finite samples")
    n = len(samples) - 1
    z = np.column_stack([np.ones(n), samples[:-1]])
    yy = samples[1:]
    coeffs, _, rank, _ = np.linalg.lstsq(z, yy, rcond=None)
    if rank < 3:
        raise RankDeficiencyError("regressors are rank deficient (constant window?)")
    resid = yy - z @ coeffs
    resid_cov = resid.T @ resid / (n - 3)
    ztz_inv = np.linalg.inv(z.T @ z)
    a_hat = coeffs[1:].T
    se_a = np.sqrt(np.outer(np.diag(resid_cov), np.diag(ztz_inv)[1:]))
    return VarFit(
        c_hat=coeffs[0].copy(),
        A_hat=a_hat.copy(),
        se_A=se_a,
        resid_cov=resid_cov,
        n_obs=n,
    )


def jacobian_from_var(fit: VarFit, dt_sample: float) -> JacobianEstimate:
    """Recover the Jacobian estimate J = ln(A) / dt from a VAR fit.

    When A has an eigenvalue on the closed negative real axis the
    principal log does not exist; the linear truncation (A - I) / dt is
    used instead and flagged. Coefficient standard errors propagate by
    division by dt in both cases (first-order, A close to identity).
    """
    if not dt_sample > 0:
        raise ValueError("dt_sample must be positive")
    log_a, admissible = logm2(fit.A_hat)
    if admissible:
        j = log_a / dt_sample
        method = "matrix_log"
    else:
        j = (fit.A_hat - np.eye(2)) / dt_sample
        method = "linear_truncation"
    return JacobianEstimate(
        J=j,
        se_J=fit.se_A / dt_sample,
        method=method,
        eigen=eig2(j),
    )


def lag1_autocorrelation(window: Window, channel: int, detrend: str = "mean") -> float:
    """Lag-1 autocorrelation of one channel after detrending.

    ``detrend`` removes the window mean (default) or a least-squares
    linear trend, then the Pearson correlation of the series with its
    one-step shift is returned.
    """
    if len(window) < 3:
        raise ValueError("window must have length >= 3")
    s = window.samples[:, channel]
    if detrend == "mean":
        s = s - s.mean()
    elif detrend == "linear":
        idx = np.arange(len(s), dtype=float)
        slope, intercept = np.polyfit(idx, s, 1)
        s = s - (slope * idx + intercept)
    else:
        raise ValueError(f"unknown detrend {detrend!r}; expected 'mean' or 'linear'")
    a, b = s[:-1], s[1:]
    da = a - a.mean()
    db = b - b.mean()
    va = float(da @ da)
    vb = float(db @ db)
    if va == 0.0 or vb == 0.0:
        raise ZeroVarianceError("zero variance after detrending")
    rho = float(da @ db) / math.sqrt(va * vb)
    return min(1.0, max(-1.0, rho))


def ar1_rate(rho1: float, dt_sample: float) -> float:
    """Decay rate ln(rho1) / dt implied by a lag-1 autocorrelation.

    This maps a scalar AR(1) coefficient onto the same axis as the real
    part of an eigenvalue of the continuous-time linearization.
    """
    if not 0.0 < rho1 <= 1.0:
        raise ValueError("rho1 must lie in (0, 1]")
    if not dt_sample > 0:
        raise ValueError("dt_sample must be positive")
    return math.log(rho1) / dt_sample
