"""Exponential sums over sets of matrices, taken through their norm multiplicities.

For a finite matrix set ``Omega`` the sum ``S(theta) = sum e(theta * ||g||)``
is a trigonometric polynomial whose Fourier coefficients are the norm
multiplicities.  Everything here works from that multiplicity table
(:class:`NormHistogram`): the L2 integral is an exact integer by Parseval and
the Cauchy-Schwarz bound ``#norms >= S(0)^2 / int |S|^2`` follows directly.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import IO, Iterable, Mapping, Sequence

import numpy as np

from .census import norm_counts
from .cfcore import Alphabet, ContinuantMatrix, check_width, euclid_quotient_sum
from .errors import DomainError

EXACT_FLOAT_LIMIT = 2**53


@dataclass(frozen=True)
class NormHistogram:
    """Multiplicity table ``n -> #{g : ||g|| = n}`` (only positive counts kept)."""

    entries: Mapping[int, int]

    def __post_init__(self):
        clean = {}
        for n, m in sorted(self.entries.items()):
            n, m = int(n), int(m)
            if n < 1:
                raise DomainError(f"norms must be >= 1, got {n}")
            if m < 0:
                raise DomainError(f"multiplicities must be >= 0, got {m}")
            if m:
                clean[n] = m
        if sum(clean.values()) > EXACT_FLOAT_LIMIT:
            raise DomainError("histogram total exceeds 2**53")
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_norms(cls, norms: Iterable[int]) -> "NormHistogram":
        counts: dict[int, int] = {}
        for n in norms:
            counts[int(n)] = counts.get(int(n), 0) + 1
        return cls(counts)

    @classmethod
    def from_matrices(cls, matrices: Iterable[ContinuantMatrix]) -> "NormHistogram":
        return cls.from_norms(m.norm for m in matrices)

    @classmethod
    def from_counts(cls, counts: np.ndarray, lo: int = 1, hi: int | None = None) -> "NormHistogram":
        """From a dense array indexed by norm, restricted to ``lo <= n <= hi``."""
        hi = len(counts) - 1 if hi is None else hi
        idx = np.flatnonzero(counts[lo : hi + 1]) + lo
        return cls({int(n): int(counts[n]) for n in idx})

    @property
    def total(self) -> int:
        return sum(self.entries.values())

    @property
    def distinct(self) -> int:
        return len(self.entries)

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        n = np.fromiter(self.entries.keys(), dtype=np.int64, count=len(self.entries))
        m = np.fromiter(self.entries.values(), dtype=np.float64, count=len(self.entries))
        return n, m


def norm_histogram(matrices: Iterable[ContinuantMatrix]) -> NormHistogram:
    return NormHistogram.from_matrices(matrices)


def census_window_histogram(alphabet: Alphabet, N: int, workers: int | None = None) -> NormHistogram:
    """Norm multiplicities of every semigroup element with ``N/2 < ||g|| <= N``."""
    counts = norm_counts(alphabet, N, workers)
    return NormHistogram.from_counts(counts, N // 2 + 1, N)


def s_theta(h: NormHistogram, theta: float) -> complex:
    """``S(theta) = sum_n h(n) e(n theta)``, summed in increasing n."""
    if not 0 <= theta <= 1:
        raise DomainError(f"theta must lie in [0, 1], got {theta}")
    if not h.entries:
        return 0j
    n, m = h.arrays()
    phase = np.mod(n * theta, 1.0)
    return complex(np.sum(m * np.exp(2j * np.pi * phase)))


def s_theta_grid(h: NormHistogram, thetas: Sequence[float], chunk: int = 4096) -> np.ndarray:
    """Vectorised :func:`s_theta` over many angles."""
    thetas = np.asarray(thetas, dtype=float)
    out = np.zeros(thetas.shape, dtype=complex)
    if not h.entries:
        return out
    n, m = h.arrays()
    for i in range(0, thetas.size, chunk):
        t = thetas[i : i + chunk]
        out[i : i + chunk] = np.exp(2j * np.pi * np.mod(np.outer(t, n), 1.0)) @ m
    return out


def l2_integral(h: NormHistogram) -> int:
    """``int_0^1 |S(theta)|^2 d theta = sum_n h(n)^2`` (exact)."""
    return check_width(sum(m * m for m in h.entries.values()))


def trapezoid_l2(h: NormHistogram, nodes: int = 100_000) -> float:
    """Trapezoid rule for ``int_0^1 |S|^2`` on ``nodes`` equispaced points.

    The integrand is 1-periodic, so the rule reduces to the mean over
    ``M = nodes - 1`` points ``k/M``.  ``S`` at those points is obtained from
    the coefficients folded modulo M and one inverse FFT.
    """
    if nodes < 2:
        raise DomainError("need at least 2 quadrature nodes")
    if not h.entries:
        return 0.0
    M = nodes - 1
    n, m = h.arrays()
    folded = np.bincount(np.mod(n, M), weights=m, minlength=M)
    values = M * np.fft.ifft(folded)
    # the end nodes theta = 0 and theta = 1 carry half weight each and share a value
    return float(np.mean(np.abs(values) ** 2))


def proportion_lower_bound(h: NormHistogram) -> float:
    """``S(0)^2 / int |S|^2``; never exceeds the number of distinct norms."""
    if h.total == 0:
        raise DomainError("empty histogram")
    return float(Fraction(h.total**2, l2_integral(h)))


def l2_ratio(h: NormHistogram, N: int) -> float:
    """``N * int |S|^2 / S(0)^2``, the quantity that must stay bounded for positive proportion."""
    if h.total == 0:
        raise DomainError("empty histogram")
    return float(Fraction(l2_integral(h) * N, h.total**2))


@dataclass(frozen=True)
class ThetaDecomposition:
    """``theta = a/q + K/N`` with a rational approximation of bounded height."""

    a: int
    q: int
    K: float
    N: int
    A: int

    @property
    def beta(self) -> float:
        return self.K / self.N

    def reconstruct(self) -> float:
        return self.a / self.q + self.K / self.N

    def violations(self) -> list[str]:
        """Names of the violated constraints (empty when all hold)."""
        bad = []
        a, q, N, A = self.a, self.q, self.N, self.A
        if math.gcd(a, q) != 1:
            bad.append("gcd(a, q) = 1")
        if not 0 <= a <= q:
            bad.append("0 <= a <= q")
        if 100 * A * A * q * q > N:
            bad.append("q <= sqrt(N) / (10 A)")
        if abs(self.K) * q > 10 * A * math.sqrt(N):
            bad.append("|K| <= 10 A sqrt(N) / q")
        if a in (0, q) and q != 1:
            bad.append("a in {0, q} only if q = 1")
        return bad


def dirichlet_decompose(theta: float, N: int, A: int) -> ThetaDecomposition:
    """Write ``theta`` as ``a/q + K/N`` with ``q <= sqrt(N)/(10A)`` and ``|K| <= 10A sqrt(N)/q``.

    ``a/q`` is the last convergent of theta whose denominator is within the
    bound; the next convergent's denominator exceeds it, which gives the bound
    on K.  K is the correctly rounded value of ``N (theta - a/q)``.
    """
    if not 0 <= theta <= 1:
        raise DomainError(f"theta must lie in [0, 1], got {theta}")
    if N < 100 * A * A:
        raise DomainError(f"N must be >= 100 A^2 = {100 * A * A}, got {N}")
    num, den = float(theta).as_integer_ratio()
    limit = 100 * A * A  # q admissible iff limit * q^2 <= N
    # convergents p/q via the standard recurrences
    p_prev, q_prev = 1, 0
    x, y = num, den
    c, r = divmod(x, y)
    p, q = c, 1
    x, y = y, r
    while y:
        c, r = divmod(x, y)
        p_next, q_next = c * p + p_prev, c * q + q_prev
        if limit * q_next * q_next > N:
            break
        p_prev, q_prev, p, q = p, q, p_next, q_next
        x, y = y, r
    K = (N * (num * q - p * den)) / (den * q)
    return ThetaDecomposition(a=p, q=q, K=K, N=N, A=A)


def knuth_yao_check(b: int) -> tuple[int, float]:
    """``(sum_{1<=a<b} s(a/b), sum / (b log^2 b))`` with ``s`` the partial-quotient sum.

    Non-coprime ``a`` are included; ``a/b`` is taken in lowest terms, which
    leaves the Euclidean quotients unchanged.  ``a = b`` is left out.
    """
    if b < 2:
        raise DomainError(f"b must be >= 2, got {b}")
    total = sum(euclid_quotient_sum(a, b) for a in range(1, b))
    return total, total / (b * math.log(b) ** 2)


THETA_HEADER = ("theta", "re", "im", "abs")
RATIO_HEADER = ("N", "total", "l2", "ratio")


def write_theta_csv(thetas: Sequence[float], values: Sequence[complex], fh: IO[str]) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(THETA_HEADER)
    for t, v in zip(thetas, values):
        w.writerow((f"{t:.12g}", f"{v.real:.12g}", f"{v.imag:.12g}", f"{abs(v):.12g}"))


def write_ratio_csv(rows: Sequence[tuple[int, NormHistogram]], fh: IO[str]) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(RATIO_HEADER)
    for N, h in rows:
        w.writerow((N, h.total, l2_integral(h), f"{l2_ratio(h, N):.12g}"))
