"""Pre-ensembles: norm-windowed, 1-padded, fixed-length word sets at scale M."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator

from ..cfcore import Alphabet, ContinuantMatrix, Word, fibonacci, word_to_matrix
from ..errors import ConstructionEmptyError, DomainError
from .params import PHI, Mode

INV_PHI = 1 / PHI


def padding_length(M: float) -> int:
    """Smallest p >= 1 with ``F_p >= sqrt(log M)``; then also ``F_{p-1} <= sqrt(log M)``."""
    target = math.sqrt(max(math.log(M), 0.0))
    p = 1
    while fibonacci(p) < target:
        p += 1
    return p


def step_count(M: float, A: int) -> int:
    """Minimal t >= 1 with ``(1 - 1/log M)^t <= 1/(64 A^2)``, by direct iteration."""
    u = 1 / math.log(M)
    if not 0 < u < 1:
        raise DomainError(f"need log M > 1, got M={M}")
    goal = 1 / (64 * A * A)
    t, x = 1, 1 - u
    while x > goal:
        t += 1
        x *= 1 - u
    return t


def window_floor(L: float) -> float:
    """``L (1 - 1/log L)``; zero when ``log L <= 1``."""
    if L <= math.e:
        return 0.0
    return L * (1 - 1 / math.log(L))


def _padded_words(alphabet: Alphabet, p: int, lo: float, hi: float) -> Iterator[tuple[Word, int]]:
    """Words starting and ending with p ones whose continuant lies in [lo, hi].

    Depth-first from the prefix ``1^p``; continuants grow with every appended
    letter, so branches stop once they pass ``hi``.
    """
    if 1 not in alphabet:
        return
    prefix = (1,) * p
    m = word_to_matrix(prefix)
    stack = [(prefix, m.c, m.d)]
    tail = (1,) * p
    letters = alphabet.letters
    while stack:
        word, qp, q = stack.pop()
        if q >= lo and word[-p:] == tail:
            yield word, q
        for a in reversed(letters):
            nq = q * a + qp
            if nq <= hi:
                stack.append((word + (a,), q, nq))


@dataclass(frozen=True)
class PreEnsemble:
    M: float
    L: float
    p: int
    k: int
    members: tuple[Word, ...]
    alphabet: Alphabet
    stages: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(sorted(tuple(w) for w in self.members)))

    def __len__(self) -> int:
        return len(self.members)

    @property
    def alpha(self) -> float:
        return self.L / self.M

    @cached_property
    def matrices(self) -> tuple[ContinuantMatrix, ...]:
        return tuple(word_to_matrix(w) for w in self.members)

    def violations(self) -> list[str]:
        """Every structural invariant that fails, checked on all members."""
        bad = []
        A = self.alphabet.max_letter
        F = fibonacci
        root = math.sqrt(max(math.log(self.M), 0.0))
        if not (F(self.p - 1) <= root <= F(self.p)):
            bad.append("F_{p-1} <= sqrt(log M) <= F_p")
        if not (self.M / (64 * A * A) <= self.L <= self.M):
            bad.append("M/(64 A^2) <= L <= M")
        lo = window_floor(self.L)
        one = (1,) * self.p
        for w, m in zip(self.members, self.matrices):
            if len(w) != self.k:
                bad.append(f"length {len(w)} != k for {w}")
            if len(w) < self.p or w[: self.p] != one or w[-self.p :] != one:
                bad.append(f"padding fails for {w}")
            if not (lo <= m.d <= self.L):
                bad.append(f"norm {m.d} outside window for {w}")
            if not self.alphabet.admits(w):
                bad.append(f"letter outside alphabet in {w}")
        return bad


def build_pre_ensemble(M: float, alphabet: Alphabet, mode: Mode) -> PreEnsemble:
    """Four-stage selection: norm band, 1-padding, norm window, fixed length.

    The window step scans ``L = M (1 - 1/log M)^{j-1}`` for ``j = 1..t`` and
    keeps the most populous window, the largest L on ties; pigeonhole
    guarantees it holds at least ``|S2| / t`` words.  The length step keeps
    the most populous length, the smallest on ties.
    """
    A = alphabet.max_letter
    M = float(M)
    if mode.is_strict:
        if M <= 1 or M < 2**9 * A**3 * math.log(M) ** 3:
            raise DomainError(f"strict mode needs M >= 2^9 A^3 log^3 M, got M={M:g}")
    elif M < 64 * A * A or M <= math.e:
        raise DomainError(f"relaxed mode needs M >= 64 A^2 = {64 * A * A}, got M={M:g}")
    band_lo = M / (64 * A * A)
    p = padding_length(M)
    diag = {"M": M, "p": p}

    s2 = list(_padded_words(alphabet, p, band_lo, M))
    diag["S2"] = len(s2)
    if not s2:
        raise ConstructionEmptyError("S2", diag)

    t = step_count(M, A)
    u = 1 / math.log(M)
    share = len(s2) / t
    diag["t"] = t
    chosen = None
    for j in range(1, t + 1):
        L = M * (1 - u) ** (j - 1)
        lo = max(band_lo, window_floor(L))
        s3 = [(w, q) for w, q in s2 if lo <= q <= L]
        # candidates run from large L to small, so strict > keeps the largest maximiser
        if chosen is None or len(s3) > len(chosen[1]):
            chosen = (L, s3)
    L, s3 = chosen
    if not s3 or len(s3) < share:
        raise ConstructionEmptyError("S3", diag)
    diag["L"] = L
    diag["S3"] = len(s3)

    lengths = Counter(len(w) for w, _ in s3)
    best = max(lengths.values())
    k = min(n for n, c in lengths.items() if c == best)
    s4 = [w for w, _ in s3 if len(w) == k]
    diag["k"] = k
    diag["S4"] = len(s4)
    if not s4:
        raise ConstructionEmptyError("S4", diag)
    return PreEnsemble(M=M, L=L, p=p, k=k, members=tuple(s4), alphabet=alphabet, stages=diag)


@dataclass(frozen=True)
class GoldenRatioReport:
    max_b_dev: float
    max_c_dev: float
    bound: float
    failures: int
    checked: int

    @property
    def ok(self) -> bool:
        return self.failures == 0


def verify_golden_ratio(pre: PreEnsemble) -> GoldenRatioReport:
    """Check ``|b/d - 1/phi|`` and ``|c/d - 1/phi|`` against ``2/log L`` for every member."""
    if pre.L < 3:
        raise DomainError(f"need L >= 3, got {pre.L}")
    bound = 2 / math.log(pre.L)
    mb = mc = 0.0
    fails = 0
    for m in pre.matrices:
        db = abs(m.b / m.d - INV_PHI)
        dc = abs(m.c / m.d - INV_PHI)
        mb, mc = max(mb, db), max(mc, dc)
        if db > bound or dc > bound:
            fails += 1
    return GoldenRatioReport(mb, mc, bound, fails, len(pre.matrices))
