"""Benchmark two-dimensional systems used for ramped-tipping experiments.

Three systems, each with drift, analytical Jacobian and a locator for the
tracked (stable) equilibrium branch:

* ``fold``: fast x relaxing onto a cubic manifold, slow y, losing the
  tracked equilibrium in a fold at lambda = 0.
* ``subcritical_hopf``: planar normal form with a subcritical Hopf at
  lambda = 0 and a saddle-node of periodic orbits at lambda = 1/4.
* ``singular_hopf``: fast-slow system whose fast and slow eigenvalues
  merge into a complex pair near the fold of the fast subsystem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .mat2 import EigenPair, eig2

__all__ = [
    "MODEL_NAMES",
    "ModelSpec",
    "EquilibriumError",
    "make_model",
    "fold_drift",
    "fold_jacobian",
    "fold_eigenvalues",
    "fold_equilibrium",
    "hopf_drift",
    "hopf_jacobian",
    "hopf_limit_cycles",
    "singular_hopf_drift",
    "singular_hopf_jacobian",
    "critical_manifold_and_nullclines",
]

MODEL_NAMES = ("fold", "subcritical_hopf", "singular_hopf")


class EquilibriumError(RuntimeError):
    """Raised when the tracked equilibrium cannot be located."""


# --- fold -----------------------------------------------------------------


def fold_drift(x, y, lam, eps):
    """Drift of the fold system: ((y^2 (1+y) - x) / eps, lam - x)."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    return ((y * y * (1.0 + y) - x) / eps, lam - x)


def fold_jacobian(y, eps):
    """Jacobian of the fold system; depends only on y and eps."""
    return np.array([[-1.0 / eps, (2.0 * y + 3.0 * y * y) / eps], [-1.0, 0.0]])


def fold_eigenvalues(y, eps) -> EigenPair:
    """Eigenvalues (-1 +- sqrt(1 - 4 eps (2y + 3y^2))) / (2 eps), ordered."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    disc = 1.0 - 4.0 * eps * (2.0 * y + 3.0 * y * y)
    if disc < 0.0:
        q = math.sqrt(-disc) / (2.0 * eps)
        re = -1.0 / (2.0 * eps)
        return EigenPair(complex(re, q), complex(re, -q), True)
    s = math.sqrt(disc)
    return EigenPair(
        complex((-1.0 + s) / (2.0 * eps)),
        complex((-1.0 - s) / (2.0 * eps)),
        False,
    )


def fold_equilibrium(lam, tol=1e-12, max_iter=100):
    """Tracked fold equilibrium (x*, y*) = (lam, y*) with y*^2 (1+y*) = lam.

    Newton on the scalar cubic, seeded at sqrt(lam): the branch that is
    destroyed in the fold at lam = 0. Fails for lam < 0 where the branch
    no longer exists.
    """
    if lam < 0:
        raise EquilibriumError("tracked fold branch does not exist for lam < 0")
    if lam == 0:
        return (0.0, 0.0)
    y = math.sqrt(lam)
    for _ in range(max_iter):
        g = y * y * (1.0 + y) - lam
        if abs(g) < tol:
            return (lam, y)
        dg = 2.0 * y + 3.0 * y * y
        if dg == 0.0:
            break
        y -= g / dg
    raise EquilibriumError(f"fold equilibrium Newton solve failed for lam={lam}")


# --- subcritical Hopf -----------------------------------------------------


def hopf_drift(x, y, lam, omega):
    """Drift of the planar subcritical Hopf system in Cartesian form."""
    fx = -lam * x - omega * y + x**3 + x * y * y - x**5 - 2.0 * x**3 * y * y - x * y**4
    fy = -lam * y + omega * x + y**3 + x * x * y - x**4 * y - y**5 - 2.0 * x * x * y**3
    return (fx, fy)


def hopf_jacobian(x, y, lam, omega):
    """Analytical Jacobian of the subcritical Hopf drift."""
    j11 = -lam + 3.0 * x * x + y * y - 5.0 * x**4 - 6.0 * x * x * y * y - y**4
    j12 = -omega + 2.0 * x * y - 4.0 * x**3 * y - 4.0 * x * y**3
    j21 = omega + 2.0 * x * y - 4.0 * x**3 * y - 4.0 * x * y**3
    j22 = -lam + 3.0 * y * y + x * x - x**4 - 5.0 * y**4 - 6.0 * x * x * y * y
    return np.array([[j11, j12], [j21, j22]])


def hopf_limit_cycles(lam):
    """Radii of the circular limit cycles of the Hopf system.

    The radial dynamics rho' = -lam rho + rho^3 - rho^5 have zeros at
    rho = 0 and rho_+- = sqrt((1 +- sqrt(1 - 4 lam)) / 2) when real.
    Returns a dict with keys ``rho0``, ``rho_minus``, ``rho_plus``; the
    latter two are None where no real radius exists.
    """
    out = {"rho0": 0.0, "rho_minus": None, "rho_plus": None}
    disc = 1.0 - 4.0 * lam
    if disc < 0.0:
        return out
    s = math.sqrt(disc)
    out["rho_plus"] = math.sqrt((1.0 + s) / 2.0)
    inner = (1.0 - s) / 2.0
    if inner >= 0.0:
        out["rho_minus"] = math.sqrt(inner)
    return out


# --- singular Hopf --------------------------------------------------------


def singular_hopf_drift(x, y, lam, eps):
    """Drift of the singular Hopf system: ((y - x^2 (1+x)) / eps, lam - x)."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    return ((y - x * x * (1.0 + x)) / eps, lam - x)


def singular_hopf_jacobian(x, eps):
    """Jacobian [[(-2x - 3x^2)/eps, 1/eps], [-1, 0]]."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    return np.array([[(-2.0 * x - 3.0 * x * x) / eps, 1.0 / eps], [-1.0, 0.0]])


# --- model bundle ---------------------------------------------------------


@dataclass(frozen=True)
class ModelSpec:
    """One benchmark system with parameters already bound.

    ``drift`` and ``jacobian`` take (x, y, lam). The drift of a split
    system already carries the 1/eps division on its fast channel; the
    configured noise amplitudes enter the state equations directly (the
    reported tipping times of the benchmark runs pin this convention).
    ``eq_seed`` is the analytic starting point for the Newton refinement
    of the tracked equilibrium.
    """

    name: str
    drift: Callable[[float, float, float], tuple]
    jacobian: Callable[[float, float, float], np.ndarray]
    eq_seed: Callable[[float], tuple]
    has_timescale_split: bool
    state_box: tuple
    epsilon: Optional[float] = None
    omega: Optional[float] = None

    def diffusion(self, alpha_x, alpha_y):
        """Effective additive diffusion vector applied per channel."""
        return (alpha_x, alpha_y)

    def equilibrium(self, lam, tol=1e-12, max_iter=100):
        """Tracked equilibrium at forcing lam, refined by 2D Newton."""
        x, y = self.eq_seed(lam)
        for _ in range(max_iter):
            fx, fy = self.drift(x, y, lam)
            if max(abs(fx), abs(fy)) < tol:
                return (x, y)
            j = self.jacobian(x, y, lam)
            try:
                step = np.linalg.solve(j, [fx, fy])
            except np.linalg.LinAlgError as exc:
                raise EquilibriumError(
                    f"singular Jacobian in Newton solve for {self.name} at lam={lam}"
                ) from exc
            x -= step[0]
            y -= step[1]
        raise EquilibriumError(
            f"equilibrium Newton solve failed for {self.name} at lam={lam}"
        )

    def eigenvalues_at(self, lam) -> EigenPair:
        """Eigenvalues of the Jacobian at the tracked equilibrium for lam."""
        x, y = self.equilibrium(lam)
        return eig2(self.jacobian(x, y, lam))


def make_model(name, epsilon=None, omega=None) -> ModelSpec:
    """Build a ModelSpec for one of the benchmark systems.

    ``epsilon`` is required for the split models (fold, singular_hopf) and
    ignored by the Hopf model; ``omega`` is required for the Hopf model.
    """
    if name == "fold":
        if epsilon is None or epsilon <= 0:
            raise ValueError("fold model requires epsilon > 0")
        eps = float(epsilon)
        return ModelSpec(
            name="fold",
            drift=lambda x, y, lam: fold_drift(x, y, lam, eps),
            jacobian=lambda x, y, lam: fold_jacobian(y, eps),
            eq_seed=lambda lam: _fold_seed(lam),
            has_timescale_split=True,
            state_box=(-1.5, 1.5),
            epsilon=eps,
        )
    if name == "subcritical_hopf":
        if omega is None:
            raise ValueError("subcritical_hopf model requires omega")
        w = float(omega)
        return ModelSpec(
            name="subcritical_hopf",
            drift=lambda x, y, lam: hopf_drift(x, y, lam, w),
            jacobian=lambda x, y, lam: hopf_jacobian(x, y, lam, w),
            eq_seed=lambda lam: (0.0, 0.0),
            has_timescale_split=False,
            state_box=(-1.2, 1.2),
            omega=w,
        )
    if name == "singular_hopf":
        if epsilon is None or epsilon <= 0:
            raise ValueError("singular_hopf model requires epsilon > 0")
        eps = float(epsilon)
        return ModelSpec(
            name="singular_hopf",
            drift=lambda x, y, lam: singular_hopf_drift(x, y, lam, eps),
            jacobian=lambda x, y, lam: singular_hopf_jacobian(x, eps),
            eq_seed=lambda lam: (lam, lam * lam * (1.0 + lam)),
            has_timescale_split=True,
            state_box=(-1.5, 1.5),
            epsilon=eps,
        )
    raise ValueError(f"unknown model {name!r}; expected one of {MODEL_NAMES}")


def _fold_seed(lam):
    x, y = fold_equilibrium(lam)
    return (x, y)


# --- phase-portrait geometry ----------------------------------------------


def critical_manifold_and_nullclines(model: ModelSpec, lam, grid) -> dict:
    """Sample the critical manifold {x' = 0} and the y-nullcline {y' = 0}.

    ``grid`` parameterizes the manifold (y values for the fold model,
    x values for the singular Hopf model). The y-nullcline is the
    vertical line x = lam sampled over the same span in the other
    coordinate. The Hopf model has no timescale split and is rejected.
    Returns polylines as a dict of (n, 2) arrays keyed by
    ``critical_manifold`` and ``nullcline_y``.
    """
    if not model.has_timescale_split:
        raise ValueError(f"model {model.name!r} has no critical manifold")
    grid = np.asarray(grid, dtype=float)
    if model.name == "fold":
        manifold = np.column_stack([grid**2 * (1.0 + grid), grid])
        nullcline = np.column_stack([np.full_like(grid, lam), grid])
    else:
        manifold = np.column_stack([grid, grid**2 * (1.0 + grid)])
        nullcline = np.column_stack(
            [np.full_like(grid, lam), np.linspace(manifold[:, 1].min(), manifold[:, 1].max(), len(grid))]
        )
    return {"critical_manifold": manifold, "nullcline_y": nullcline}
