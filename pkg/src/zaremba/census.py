"""Census of the semigroup generated by the letter matrices of an alphabet.

Counts words (equivalently matrices of the semigroup) with continuant at most
a bound, the set of continuants reached, and the Hensley-type counting bounds
``x**(2*delta) / (32 A**4) <= F(x) - F(x / 4A**2) <= F(x) <= 8 x**(2*delta)``.

``F`` counts words with multiplicity.  :func:`distinct_count` gives the
number of distinct denominators instead.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import IO, Iterator, Sequence

import numpy as np

from . import _kernels
from .cfcore import GOLDEN_RATIO, Alphabet, ContinuantMatrix, Word
from .errors import DomainError
from .parallel import apply_workers

INT64_LIMIT = 2**63 - 1


def max_word_length(bound: float) -> int:
    """Longest possible word with continuant <= bound (all-ones is the slowest growth)."""
    if bound < 1:
        return 0
    return int(math.log(bound) / math.log(GOLDEN_RATIO)) + 1


def _check_bound(alphabet: Alphabet, bound: int) -> int:
    bound = int(bound)
    if bound < 1:
        raise DomainError(f"bound must be >= 1, got {bound}")
    if bound > INT64_LIMIT // (alphabet.max_letter + 1):
        raise DomainError(
            f"bound {bound} too large for exact 64-bit enumeration with max letter {alphabet.max_letter}"
        )
    return bound


def enumerate_words(alphabet: Alphabet, bound: int) -> Iterator[tuple[Word, ContinuantMatrix]]:
    """Yield every nonempty word over ``alphabet`` with continuant <= bound.

    Depth-first, lexicographic order; each word appears once together with its
    matrix.  Branches are cut as soon as a continuant exceeds the bound, which
    is safe because appending a letter strictly increases the continuant.
    """
    bound = _check_bound(alphabet, bound)
    letters = alphabet.letters
    stack: list[tuple[Word, ContinuantMatrix]] = [((), ContinuantMatrix.identity())]
    while stack:
        word, m = stack.pop()
        children = []
        for x in letters:
            d = m.c + m.d * x
            if d > bound:
                break
            children.append((word + (x,), ContinuantMatrix(m.b, m.a + m.b * x, m.d, d, (m.parity + 1) % 2)))
        for child in children:
            yield child
        stack.extend(reversed(children))


def _stack_size(alphabet: Alphabet, bound: int) -> int:
    return (max_word_length(bound) + 2) * len(alphabet) + 16


def _frontier(alphabet: Alphabet, bound: int, workers: int):
    """Split the search tree into independent subtrees.

    Returns ``(shallow, qps, qs)``: continuants of the words shallower than the
    split depth (plus the split-level words themselves), and the node pairs
    whose strict descendants the kernels enumerate.
    """
    target = 32 * workers
    shallow: list[int] = []
    level = [(0, 1)]
    depth = 0
    while True:
        nxt = []
        for qp, q in level:
            for a in alphabet.letters:
                nq = q * a + qp
                if nq > bound:
                    break
                nxt.append((q, nq))
        shallow.extend(q for _, q in nxt)
        depth += 1
        if not nxt or len(nxt) >= target or depth >= 8:
            level = nxt
            break
        level = nxt
    qps = np.array([p for p, _ in level], dtype=np.int64)
    qs = np.array([q for _, q in level], dtype=np.int64)
    return shallow, qps, qs


@lru_cache(maxsize=256)
def _word_count_cached(letters: tuple[int, ...], bound: int, workers: int) -> int:
    alphabet = Alphabet(letters)
    shallow, qps, qs = _frontier(alphabet, bound, workers)
    arr = np.array(letters, dtype=np.int64)
    deep = 0
    if qps.size:
        deep = int(_kernels.count_tasks(arr, bound, qps, qs, _stack_size(alphabet, bound)))
    return len(shallow) + deep


def word_count_F(alphabet: Alphabet, x: float, workers: int | None = None) -> int:
    """Number of nonempty words with continuant <= x (multiplicity count).

    The worker count only affects speed; results are identical for any value.
    """
    bound = math.floor(x)
    if bound < 1:
        return 0
    bound = _check_bound(alphabet, bound)
    n = apply_workers(workers)
    return _word_count_cached(alphabet.letters, bound, n)


def norm_counts(alphabet: Alphabet, limit: int, workers: int | None = None) -> np.ndarray:
    """Array ``h`` of length ``limit + 1`` with ``h[d]`` = number of words of continuant d."""
    bound = _check_bound(alphabet, limit)
    n = apply_workers(workers)
    shallow, qps, qs = _frontier(alphabet, bound, n)
    counts = np.zeros(bound + 1, dtype=np.int64)
    np.add.at(counts, np.asarray(shallow, dtype=np.int64), 1)
    if qps.size:
        rows = _kernels.histogram_tasks(
            np.array(alphabet.letters, dtype=np.int64), bound, qps, qs, n, _stack_size(alphabet, bound)
        )
        counts += rows.sum(axis=0)
    return counts


def denominator_set(alphabet: Alphabet, limit: int, workers: int | None = None) -> np.ndarray:
    """Boolean array of length ``limit + 1``; entry d is set iff d is a continuant.

    Entry 0 is always False.  Coprimality of the numerator is automatic, since
    consecutive continuants are coprime.
    """
    bound = _check_bound(alphabet, limit)
    n = apply_workers(workers)
    shallow, qps, qs = _frontier(alphabet, bound, n)
    hit = np.zeros(bound + 1, dtype=bool)
    hit[np.asarray(shallow, dtype=np.int64)] = True
    if qps.size:
        rows = _kernels.mark_tasks(
            np.array(alphabet.letters, dtype=np.int64), bound, qps, qs, n, _stack_size(alphabet, bound)
        )
        hit |= rows.any(axis=0)
    return hit


def distinct_count(alphabet: Alphabet, limit: int, workers: int | None = None) -> int:
    """``#D(limit)``: how many d <= limit occur as continuants."""
    return int(denominator_set(alphabet, limit, workers).sum())


def missing_denominators(alphabet: Alphabet, limit: int, workers: int | None = None) -> list[int]:
    hit = denominator_set(alphabet, limit, workers)
    return [int(d) for d in np.flatnonzero(~hit[1:]) + 1]


def zaremba_verify(alphabet: Alphabet, limit: int, workers: int | None = None) -> int | None:
    """Smallest d <= limit that is not a continuant over ``alphabet``, or None."""
    hit = denominator_set(alphabet, limit, workers)
    gaps = np.flatnonzero(~hit[1:])
    return int(gaps[0]) + 1 if gaps.size else None


@dataclass(frozen=True)
class CountingBoundVerdict:
    """Verdicts for the three counting inequalities at one point x."""

    x: float
    delta: float
    max_letter: int
    F_x: int
    F_low: int
    scale: float
    lower_bound: float
    upper_bound: float
    lower_ok: bool
    middle_ok: bool
    upper_ok: bool

    @property
    def ratio(self) -> float:
        """Measured ``F(x) / x**(2*delta)``."""
        return self.F_x / self.scale

    @property
    def window_ratio(self) -> float:
        """Measured ``(F(x) - F(x / 4A**2)) / x**(2*delta)``."""
        return (self.F_x - self.F_low) / self.scale

    @property
    def ok(self) -> bool:
        return self.lower_ok and self.middle_ok and self.upper_ok


def check_counting_bounds(alphabet: Alphabet, x: float, delta: float, workers: int | None = None) -> CountingBoundVerdict:
    """Evaluate the three counting inequalities with ``F = word_count_F``."""
    A = alphabet.max_letter
    if x < 4 * A * A:
        raise DomainError(f"x must be >= 4A^2 = {4 * A * A}, got {x}")
    if not 0.5 < delta < 1:
        raise DomainError(f"delta must lie in (1/2, 1), got {delta}")
    F_x = word_count_F(alphabet, x, workers)
    F_low = word_count_F(alphabet, x / (4 * A * A), workers)
    scale = float(x) ** (2 * delta)
    lower = scale / (32 * A**4)
    upper = 8 * scale
    return CountingBoundVerdict(
        x=float(x),
        delta=delta,
        max_letter=A,
        F_x=F_x,
        F_low=F_low,
        scale=scale,
        lower_bound=lower,
        upper_bound=upper,
        lower_ok=lower <= F_x - F_low,
        middle_ok=F_x - F_low <= F_x,
        upper_ok=F_x <= upper,
    )


@dataclass(frozen=True)
class CensusConfig:
    alphabet: Alphabet
    limit: int
    parallelism: int | None = None

    def __post_init__(self):
        if self.limit < 1:
            raise DomainError(f"limit must be >= 1, got {self.limit}")


@dataclass
class CensusReport:
    limit: int
    word_count: int
    distinct_denominators: int
    missing: list[int]
    bound_verdict: CountingBoundVerdict | None = None
    alphabet: Alphabet | None = field(default=None, repr=False)

    @property
    def missing_count(self) -> int:
        return len(self.missing)


def run_census(config: CensusConfig, delta: float | None = None) -> CensusReport:
    """Full census at ``config.limit``; adds the counting-bound check when ``delta`` is given."""
    alphabet, limit = config.alphabet, config.limit
    counts = norm_counts(alphabet, limit, config.parallelism)
    present = counts[1:] > 0
    missing = [int(d) for d in np.flatnonzero(~present) + 1]
    verdict = None
    if delta is not None and limit >= 4 * alphabet.max_letter**2:
        verdict = check_counting_bounds(alphabet, limit, delta, config.parallelism)
    return CensusReport(
        limit=limit,
        word_count=int(counts.sum()),
        distinct_denominators=int(present.sum()),
        missing=missing,
        bound_verdict=verdict,
        alphabet=alphabet,
    )


CENSUS_HEADER = ("x", "word_count", "distinct", "missing_count")


def census_rows(alphabet: Alphabet, grid: Sequence[int], workers: int | None = None) -> list[tuple[int, int, int, int]]:
    """One ``(x, word_count, distinct, missing_count)`` row per grid point."""
    if not grid:
        return []
    top = max(int(x) for x in grid)
    counts = norm_counts(alphabet, top, workers)
    cum_words = np.cumsum(counts)
    cum_distinct = np.cumsum(counts > 0)
    rows = []
    for x in grid:
        x = int(x)
        rows.append((x, int(cum_words[x]), int(cum_distinct[x]), x - int(cum_distinct[x])))
    return rows


def write_census_csv(rows, fh: IO[str]) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CENSUS_HEADER)
    w.writerows(rows)


def write_gaps_csv(missing: Sequence[int], fh: IO[str]) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(("d",))
    w.writerows((d,) for d in missing)
