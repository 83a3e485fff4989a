"""Hausdorff dimension of bounded-quotient Cantor sets.

Three sources: Hensley's asymptotic expansion for ``{1, ..., A}`` (with its
``O(1/A^2)`` remainder dropped), an empirical fit of ``F(x) ~ x**(2*delta)``
against exact census counts, and the single tabulated reference value
``delta_{1..5} = 0.8368``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import IO, Sequence

import numpy as np

from .census import word_count_F
from .cfcore import Alphabet
from .errors import DomainError

HENSLEY = "hensley-asymptotic"
FIT = "empirical-fit"
REFERENCE = "reference"

DELTA_1_TO_5 = 0.8368

# positive-proportion thresholds: ours (1 - 1/6) and the earlier 1 - 5/312
THRESHOLD_ONE_SIXTH = 1 - 1 / 6
THRESHOLD_FIVE_312 = 1 - 5 / 312


@dataclass(frozen=True)
class DimensionEstimate:
    value: float
    method: str
    residual: float | None = None

    def __post_init__(self):
        if not 0 < self.value < 1:
            raise DomainError(f"dimension estimate must lie in (0, 1), got {self.value}")


def hensley_estimate(A: int) -> DimensionEstimate:
    """``1 - (6/pi^2)/A - (72/pi^4) log(A)/A^2`` for the alphabet ``{1, ..., A}``.

    Biased low at small A because the ``O(1/A^2)`` term is dropped: A = 5
    gives about 0.8308 against the tabulated 0.8368.
    """
    if A < 2:
        raise DomainError(f"A must be >= 2, got {A}")
    pi2 = math.pi**2
    value = 1 - (6 / pi2) / A - (72 / pi2**2) * math.log(A) / A**2
    return DimensionEstimate(value, HENSLEY)


def fit_dimension(alphabet: Alphabet, x_grid: Sequence[float], workers: int | None = None) -> DimensionEstimate:
    """Least-squares slope of ``log F(x)`` against ``2 log x``.

    The residual is the root-mean-square deviation of the log-log points from
    the fitted line.
    """
    xs = [float(x) for x in x_grid]
    if len(xs) < 3:
        raise DomainError(f"need at least 3 grid points, got {len(xs)}")
    if any(b <= a for a, b in zip(xs, xs[1:])) or xs[0] < 1:
        raise DomainError("grid must be strictly increasing positive numbers")
    F = [word_count_F(alphabet, x, workers) for x in xs]
    if min(F) < 1:
        raise DomainError("grid starts below the smallest continuant")
    u = 2 * np.log(xs)
    v = np.log(np.array(F, dtype=float))
    slope, intercept = np.polyfit(u, v, 1)
    resid = float(np.sqrt(np.mean((v - (slope * u + intercept)) ** 2)))
    return DimensionEstimate(float(slope), FIT, resid)


def reference_dimension(alphabet: Alphabet) -> DimensionEstimate | None:
    if alphabet.letters == (1, 2, 3, 4, 5):
        return DimensionEstimate(DELTA_1_TO_5, REFERENCE)
    return None


DIMENSION_HEADER = ("A", "method", "estimate", "residual")


def write_dimension_csv(rows: Sequence[tuple[str, DimensionEstimate]], fh: IO[str]) -> None:
    """Rows of ``(alphabet label, estimate)``; floats at 12 significant digits."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(DIMENSION_HEADER)
    for label, est in rows:
        res = "" if est.residual is None else f"{est.residual:.12g}"
        w.writerow((label, est.method, f"{est.value:.12g}", res))
