"""Stochastic Heun integration of ramped two-dimensional SDEs.

The integrator handles systems with additive noise and a linearly ramped
forcing lambda(t) = lambda0 - r t. The forcing is advanced in closed form
(it is an exactly integrable auxiliary variable), while the state is
stepped with the improved Euler (Heun) predictor-corrector scheme reusing
the same Wiener increment in both stages.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .models import ModelSpec

__all__ = [
    "SimConfig",
    "TimeSeriesFrame",
    "SimulationDiverged",
    "wiener_increments",
    "integrate",
    "subsample",
    "write_trajectory_csv",
    "read_trajectory_csv",
]

BLOWUP_LIMIT = 1e6

FLOAT_FMT = "%.17g"


class SimulationDiverged(RuntimeError):
    """State magnitude exceeded the post-tipping blowup guard."""


@dataclass(frozen=True)
class SimConfig:
    """Parameters of one stochastic simulation.

    ``epsilon`` is the timescale ratio (ignored by models without a
    split), ``r`` the ramp rate of the forcing, ``omega`` the rotation
    frequency (Hopf model only). Noise amplitudes ``alpha_x``/``alpha_y``
    are in state units per sqrt(time).
    """

    r: float
    dt: float
    lambda0: float
    alpha_x: float
    alpha_y: float
    tspan: float
    seed: int
    epsilon: float = 1.0
    omega: Optional[float] = None

    def validate(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if not self.tspan > 0:
            raise ValueError("tspan must be positive")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.r < 0:
            raise ValueError("r must be nonnegative")
        if self.alpha_x < 0:
            raise ValueError("alpha_x must be nonnegative")
        if self.alpha_y < 0:
            raise ValueError("alpha_y must be nonnegative")


@dataclass(frozen=True)
class TimeSeriesFrame:
    """Uniformly sampled trajectory with its forcing values.

    Immutable after construction; all vectors have equal length and
    ``lam[i] = lambda0 - r * t[i]`` as constructed by the integrator.
    """

    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    lam: np.ndarray
    dt_sample: float

    def __post_init__(self):
        n = len(self.t)
        if n < 2 or len(self.x) != n or len(self.y) != n or len(self.lam) != n:
            raise ValueError("frame vectors must have equal length >= 2")

    def __len__(self):
        return len(self.t)

    def states(self) -> np.ndarray:
        """Samples as an (n, 2) array of (x, y) rows."""
        return np.column_stack([self.x, self.y])


def wiener_increments(n, dt, seed) -> np.ndarray:
    """n i.i.d. Gaussian increments with standard deviation sqrt(dt).

    Identical seeds give bit-identical sequences.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not dt > 0:
        raise ValueError("dt must be positive")
    rng = np.random.default_rng(seed)
    return rng.standard_normal(int(n)) * math.sqrt(dt)


def integrate(model: ModelSpec, cfg: SimConfig, dw: Optional[np.ndarray] = None) -> TimeSeriesFrame:
    """Integrate one trajectory with the stochastic Heun scheme.

    The initial state is the tracked stable equilibrium at lambda0,
    refined by Newton iteration. ``dw`` optionally injects a pre-drawn
    (n_steps, 2) array of raw Wiener increments (used for convergence
    tests on a common Brownian path); by default increments are drawn
    from a generator seeded with ``cfg.seed``.

    Raises SimulationDiverged if any state component exceeds 1e6 in
    magnitude and EquilibriumError if the equilibrium solve fails.
    """
    cfg.validate()
    n_steps = int(math.floor(cfg.tspan / cfg.dt + 1e-9))
    dt = cfg.dt
    x, y = model.equilibrium(cfg.lambda0)
    fx0, fy0 = model.drift(x, y, cfg.lambda0)
    if not (math.isfinite(fx0) and math.isfinite(fy0)):
        raise ValueError("model drift is not finite at the initial condition")

    if dw is None:
        rng = np.random.default_rng(cfg.seed)
        dw = rng.standard_normal((n_steps, 2)) * math.sqrt(dt)
    elif dw.shape != (n_steps, 2):
        raise ValueError(f"dw must have shape ({n_steps}, 2)")

    gx, gy = model.diffusion(cfg.alpha_x, cfg.alpha_y)
    drift = model.drift
    lambda0, r = cfg.lambda0, cfg.r

    xs = np.empty(n_steps + 1)
    ys = np.empty(n_steps + 1)
    xs[0], ys[0] = x, y
    half_dt = 0.5 * dt
    for i in range(n_steps):
        lam = lambda0 - r * (i * dt)
        lam_next = lambda0 - r * ((i + 1) * dt)
        dwx = gx * dw[i, 0]
        dwy = gy * dw[i, 1]
        fx, fy = drift(x, y, lam)
        xp = x + fx * dt + dwx
        yp = y + fy * dt + dwy
        fxp, fyp = drift(xp, yp, lam_next)
        x = x + half_dt * (fx + fxp) + dwx
        y = y + half_dt * (fy + fyp) + dwy
        if abs(x) > BLOWUP_LIMIT or abs(y) > BLOWUP_LIMIT:
            raise SimulationDiverged(
                f"state exceeded {BLOWUP_LIMIT:g} at t={(i + 1) * dt:g}"
            )
        xs[i + 1] = x
        ys[i + 1] = y

    t = np.arange(n_steps + 1) * dt
    lam = lambda0 - r * t
    return TimeSeriesFrame(t=t, x=xs, y=ys, lam=lam, dt_sample=dt)


def subsample(frame: TimeSeriesFrame, sub: int) -> TimeSeriesFrame:
    """Keep every sub-th sample starting at index 0."""
    if sub < 1:
        raise ValueError("sub must be >= 1")
    if sub == 1:
        return frame
    return TimeSeriesFrame(
        t=frame.t[::sub],
        x=frame.x[::sub],
        y=frame.y[::sub],
        lam=frame.lam[::sub],
        dt_sample=frame.dt_sample * sub,
    )


def write_trajectory_csv(frame: TimeSeriesFrame, path):
    """Export a trajectory as CSV with header ``t,x,y,lambda``."""
    with open(path, "w") as fh:
        fh.write("t,x,y,lambda\n")
        for i in range(len(frame)):
            fh.write(
                "%s,%s,%s,%s\n"
                % (
                    FLOAT_FMT % frame.t[i],
                    FLOAT_FMT % frame.x[i],
                    FLOAT_FMT % frame.y[i],
                    FLOAT_FMT % frame.lam[i],
                )
            )


def read_trajectory_csv(path) -> TimeSeriesFrame:
    """Load a trajectory CSV written by :func:`write_trajectory_csv`."""
    data = np.genfromtxt(path, delimiter=",", names=True)
    t = np.atleast_1d(data["t"])
    return TimeSeriesFrame(
        t=t,
        x=np.atleast_1d(data["x"]),
        y=np.atleast_1d(data["y"]),
        lam=np.atleast_1d(data["lambda"]),
        dt_sample=float(t[1] - t[0]),
    )
