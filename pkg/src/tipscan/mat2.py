"""Closed-form linear algebra for real 2x2 matrices.

Eigenvalues via the quadratic formula and the principal matrix logarithm
in closed form (no series truncation). The logarithm is only defined here
for matrices whose spectrum avoids the closed negative real axis; callers
are told via a flag whether the input was admissible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["EigenPair", "eig2", "logm2", "log_eig_real_parts"]


@dataclass(frozen=True)
class EigenPair:
    """Ordered eigenvalue pair of a real 2x2 matrix.

    mu1 and mu2 are ordered so Re(mu1) >= Re(mu2). For a complex pair,
    mu2 == conj(mu1) and mu1 carries the nonnegative imaginary part.
    """

    mu1: complex
    mu2: complex
    is_complex_pair: bool

    def __post_init__(self):
        if self.mu1.real < self.mu2.real:
            raise ValueError("eigenvalues must be ordered by descending real part")


def eig2(m: np.ndarray) -> EigenPair:
    """Eigenvalues of a real 2x2 matrix, ordered by descending real part.

    The pair is classified as complex exactly when the discriminant
    tr^2 - 4 det is negative.
    """
    a, b = float(m[0, 0]), float(m[0, 1])
    c, d = float(m[1, 0]), float(m[1, 1])
    tr = a + d
    det = a * d - b * c
    disc = tr * tr - 4.0 * det
    if disc < 0.0:
        q = math.sqrt(-disc) / 2.0
        return EigenPair(complex(tr / 2.0, q), complex(tr / 2.0, -q), True)
    s = math.sqrt(disc)
    return EigenPair(complex((tr + s) / 2.0), complex((tr - s) / 2.0), False)


def logm2(m: np.ndarray) -> tuple[np.ndarray, bool]:
    """Principal logarithm of a real 2x2 matrix, when it exists.

    Returns ``(L, admissible)``. ``admissible`` is False when the spectrum
    touches the closed negative real axis (any real eigenvalue <= 0), in
    which case ``L`` is None and the caller must fall back to some other
    approximation.

    Three closed-form branches:
      * complex pair r e^{+-i theta}:  ln(r) I + (theta / q) (M - p I)
        with p, q the real/imaginary parts of the eigenvalue;
      * distinct positive real eigenvalues: spectral projectors;
      * repeated positive eigenvalue l:  ln(l) I + (M - l I) / l.
    """
    a, b = float(m[0, 0]), float(m[0, 1])
    c, d = float(m[1, 0]), float(m[1, 1])
    tr = a + d
    det = a * d - b * c
    disc = tr * tr - 4.0 * det
    eye = np.eye(2)
    if disc < 0.0:
        p = tr / 2.0
        q = math.sqrt(-disc) / 2.0
        r = math.sqrt(det)  # det > tr^2/4 >= 0 here
        theta = math.atan2(q, p)
        return math.log(r) * eye + (theta / q) * (np.asarray(m, dtype=float) - p * eye), True
    s = math.sqrt(disc)
    l1 = (tr + s) / 2.0
    l2 = (tr - s) / 2.0
    if l2 <= 0.0:
        return None, False
    m = np.asarray(m, dtype=float)
    if disc == 0.0:
        return math.log(l1) * eye + (m - l1 * eye) / l1, True
    log1 = math.log(l1)
    log2 = math.log(l2)
    return (log1 * (m - l2 * eye) - log2 * (m - l1 * eye)) / (l1 - l2), True


def log_eig_real_parts(batch: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Real parts of log-eigenvalues for a batch of 2x2 matrices.

    ``batch`` has shape (n, 2, 2). Returns ``(re1, re2, admissible)`` where
    ``re1 >= re2`` are the real parts of the logarithms of the eigenvalues
    (descending per matrix) and ``admissible`` marks matrices whose
    principal log exists. Entries of re1/re2 are undefined (nan) where
    ``admissible`` is False.

    The eigenvalues of ln(M) are the logs of the eigenvalues of M, so no
    full matrix logarithm is needed for the real parts.
    """
    a = batch[:, 0, 0]
    b = batch[:, 0, 1]
    c = batch[:, 1, 0]
    d = batch[:, 1, 1]
    tr = a + d
    det = a * d - b * c
    disc = tr * tr - 4.0 * det

    re1 = np.full(len(batch), np.nan)
    re2 = np.full(len(batch), np.nan)
    admissible = np.zeros(len(batch), dtype=bool)

    cplx = disc < 0.0
    if np.any(cplx):
        # complex pair: both log-eigenvalues share real part ln|mu| = ln(det)/2
        re = 0.5 * np.log(det[cplx])
        re1[cplx] = re
        re2[cplx] = re
        admissible[cplx] = True

    real = ~cplx
    if np.any(real):
        s = np.sqrt(disc[real])
        l1 = (tr[real] + s) / 2.0
        l2 = (tr[real] - s) / 2.0
        ok = l2 > 0.0
        idx = np.flatnonzero(real)[ok]
        re1[idx] = np.log(l1[ok])
        re2[idx] = np.log(l2[ok])
        admissible[idx] = True

    return re1, re2, admissible
