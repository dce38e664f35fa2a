"""Strict CSV parsing against the analysis-pipeline file schemas.

The renderer never computes statistics: every plotted number must come
from a whitelisted column of one of the three CSV kinds (records,
trajectory, phase portrait). Any header deviation is reported with the
offending column name.
"""

from __future__ import annotations

import csv

import numpy as np

__all__ = [
    "RECORDS_COLUMNS",
    "TRAJECTORY_COLUMNS",
    "PORTRAIT_COLUMNS",
    "SchemaError",
    "read_records",
    "read_trajectory",
    "read_portrait",
]

RECORDS_COLUMNS = (
    "end_time",
    "end_lambda",
    "re_mu1",
    "im_mu1",
    "re_mu2",
    "im_mu2",
    "se_re_mu1",
    "se_re_mu2",
    "is_complex_pair",
    "method",
    "ar1_x",
    "ar1_y",
    "ar1_rate_x",
    "ar1_rate_y",
    "analytic_re_mu1",
    "analytic_re_mu2",
    "a11",
    "a12",
    "a21",
    "a22",
    "se_a11",
    "se_a12",
    "se_a21",
    "se_a22",
    "failed",
)

TRAJECTORY_COLUMNS = ("t", "x", "y", "lambda")

PORTRAIT_COLUMNS = ("set", "x", "y")

_STRING_COLUMNS = {"method", "set"}


class SchemaError(ValueError):
    """A CSV file does not match the expected pipeline schema."""


def _check_header(header, expected, path):
    for col in expected:
        if col not in header:
            raise SchemaError(f"{path}: missing column {col!r}")
    for col in header:
        if col not in expected:
            raise SchemaError(f"{path}: unexpected column {col!r}")
    if tuple(header) != tuple(expected):
        raise SchemaError(f"{path}: column order differs at {header[0]!r}...")


def _read(path, expected) -> dict:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        _check_header(header, expected, path)
        rows = list(reader)
    out = {}
    for j, col in enumerate(expected):
        raw = [row[j] for row in rows]
        if col in _STRING_COLUMNS:
            out[col] = np.array(raw, dtype=object)
        else:
            out[col] = np.array([float(v) if v != "" else np.nan for v in raw])
    return out


def read_records(path) -> dict:
    """Columns of a records CSV; absent values become NaN."""
    return _read(path, RECORDS_COLUMNS)


def read_trajectory(path) -> dict:
    """Columns of a trajectory CSV."""
    return _read(path, TRAJECTORY_COLUMNS)


def read_portrait(path) -> dict:
    """Columns of a phase-portrait CSV (polylines keyed by the set column)."""
    return _read(path, PORTRAIT_COLUMNS)
