"""Propagation of coefficient standard errors to eigenvalue real parts.

Two routes: the first-order delta method applied to the closed-form
eigenvalue expressions, and Monte Carlo resampling of the coefficient
matrix with independent normal entries. For small input errors the two
agree; both assume no covariance between coefficient entries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .mat2 import log_eig_real_parts

__all__ = [
    "McConfig",
    "SePair",
    "McDiscardError",
    "delta_se",
    "monte_carlo_se",
]

# relative discriminant threshold below which Case I partials blow up
BOUNDARY_REL_TOL = 1e-12


class McDiscardError(RuntimeError):
    """Too many Monte Carlo draws had no admissible matrix logarithm."""


@dataclass(frozen=True)
class McConfig:
    """Monte Carlo resampling settings."""

    n_samples: int = 1000
    seed: int = 0
    max_discard_fraction: float = 0.5

    def validate(self):
        if self.n_samples < 100:
            raise ValueError("n_samples must be >= 100")
        if not 0.0 <= self.max_discard_fraction < 1.0:
            raise ValueError("max_discard_fraction must lie in [0, 1)")


@dataclass(frozen=True)
class SePair:
    """Standard errors of the two eigenvalue real parts.

    For a complex pair (Case II) the two values coincide.
    ``near_boundary`` flags delta-method results evaluated where the
    real/complex discriminant is positive but vanishingly small, so the
    Case I sensitivities are unreliable.
    """

    se_re_mu1: float
    se_re_mu2: float
    method: str  # "delta" | "monte_carlo"
    n_used: Optional[int] = None
    discard_count: int = 0
    near_boundary: bool = False


def delta_se(j: np.ndarray, se_j: np.ndarray) -> SePair:
    """First-order delta-method standard errors of Re(mu1), Re(mu2).

    With J = [[a, b], [c, d]] and discriminant D = a^2 + d^2 - 2ad + 4bc,
    Case I (D > 0) uses the sensitivities of the two real roots of the
    characteristic polynomial; Case II (D <= 0) reduces to half the trace
    so only the diagonal errors contribute. Entries are assumed
    independent.
    """
    se_j = np.asarray(se_j, dtype=float)
    if np.any(se_j < 0):
        raise ValueError("se_J entries must be nonnegative")
    a, b = float(j[0, 0]), float(j[0, 1])
    c, d = float(j[1, 0]), float(j[1, 1])
    disc = a * a + d * d - 2.0 * a * d + 4.0 * b * c
    se_a, se_b = se_j[0, 0], se_j[0, 1]
    se_c, se_d = se_j[1, 0], se_j[1, 1]

    if disc <= 0.0:
        se = math.sqrt((0.5 * se_a) ** 2 + (0.5 * se_d) ** 2)
        return SePair(se, se, method="delta")

    near = disc < BOUNDARY_REL_TOL * (abs(a) + abs(b) + abs(c) + abs(d)) ** 2
    inv_sqrt = 1.0 / math.sqrt(disc)
    half_diff = 0.5 * (a - d) * inv_sqrt
    se_out = []
    for sign in (+1.0, -1.0):
        pa = 0.5 + sign * half_diff
        pb = sign * c * inv_sqrt
        pc = sign * b * inv_sqrt
        pd = 0.5 - sign * half_diff
        se_out.append(
            math.sqrt(
                (pa * se_a) ** 2 + (pb * se_b) ** 2 + (pc * se_c) ** 2 + (pd * se_d) ** 2
            )
        )
    return SePair(se_out[0], se_out[1], method="delta", near_boundary=near)


def monte_carlo_se(a_hat: np.ndarray, se_a: np.ndarray, dt_sample: float, cfg: McConfig) -> SePair:
    """Monte Carlo standard errors of Re(mu1), Re(mu2).

    Draws coefficient matrices with independent normal entries centred on
    ``a_hat``, maps each through the principal-log Jacobian recovery and
    collects the descending-ordered eigenvalue real parts. Draws without
    an admissible logarithm are discarded and counted; the run fails when
    the discarded fraction exceeds ``cfg.max_discard_fraction``.
    """
    cfg.validate()
    if not dt_sample > 0:
        raise ValueError("dt_sample must be positive")
    a_hat = np.asarray(a_hat, dtype=float)
    se_a = np.asarray(se_a, dtype=float)
    if np.any(se_a < 0):
        raise ValueError("se_A entries must be nonnegative")

    rng = np.random.default_rng(cfg.seed)
    draws = a_hat + se_a * rng.standard_normal((cfg.n_samples, 2, 2))
    re1, re2, admissible = log_eig_real_parts(draws)
    n_used = int(admissible.sum())
    discard = cfg.n_samples - n_used
    if discard > cfg.max_discard_fraction * cfg.n_samples:
        raise McDiscardError(
            f"{discard}/{cfg.n_samples} draws had no admissible matrix log"
        )
    re1 = re1[admissible] / dt_sample
    re2 = re2[admissible] / dt_sample
    return SePair(
        se_re_mu1=float(np.std(re1, ddof=1)),
        se_re_mu2=float(np.std(re2, ddof=1)),
        method="monte_carlo",
        n_used=n_used,
        discard_count=discard,
    )
