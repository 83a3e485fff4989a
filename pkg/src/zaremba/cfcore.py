"""Exact arithmetic on words, continuants and finite continued fractions.

A *word* is a tuple of positive integers ``(d1, ..., dk)``.  It stands for
the continued fraction ``[d1, ..., dk] = 1/(d1 + 1/(d2 + ... + 1/dk))`` and
for the matrix product ``[[0,1],[1,d1]] @ ... @ [[0,1],[1,dk]]``.  The
continuant ``<d1..dk>`` is the denominator of that fraction and the
bottom-right entry of that matrix.

All integers are exact.  Results are held to a signed 128-bit ceiling so a
runaway computation fails loudly instead of silently growing.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ContinuantOverflowError, DomainError

Word = tuple[int, ...]

INT128_MAX = 2**127 - 1
GOLDEN_RATIO = (1 + 5**0.5) / 2


def check_width(value: int) -> int:
    if value > INT128_MAX:
        raise ContinuantOverflowError(f"exact value exceeds 2**127 - 1 (bit length {value.bit_length()})")
    return value


@dataclass(frozen=True)
class Alphabet:
    """A finite set of allowed partial quotients (at least two letters)."""

    letters: tuple[int, ...]

    def __post_init__(self):
        letters = tuple(int(a) for a in self.letters)
        if len(letters) < 2:
            raise DomainError(f"an alphabet needs at least 2 letters, got {letters}")
        if any(a < 1 for a in letters):
            raise DomainError(f"letters must be positive, got {letters}")
        if any(b <= a for a, b in zip(letters, letters[1:])):
            raise DomainError(f"letters must be strictly increasing, got {letters}")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def of(cls, letters: Iterable[int]) -> "Alphabet":
        """Build from any iterable; duplicates are merged and order ignored."""
        return cls(tuple(sorted(set(int(a) for a in letters))))

    @classmethod
    def range(cls, max_letter: int) -> "Alphabet":
        return cls(tuple(range(1, max_letter + 1)))

    @classmethod
    def parse(cls, text: str) -> "Alphabet":
        """Parse ``"1-5"``, ``"1,2,4"`` or mixtures such as ``"1-3,7"``."""
        letters: set[int] = set()
        for part in text.replace(" ", "").split(","):
            if not part:
                continue
            m = re.fullmatch(r"(\d+)-(\d+)", part)
            if m:
                lo, hi = int(m.group(1)), int(m.group(2))
                if lo > hi:
                    raise DomainError(f"empty letter range {part!r}")
                letters.update(range(lo, hi + 1))
            elif part.isdigit():
                letters.add(int(part))
            else:
                raise DomainError(f"cannot parse alphabet component {part!r}")
        return cls.of(letters)

    @property
    def max_letter(self) -> int:
        return self.letters[-1]

    @property
    def min_letter(self) -> int:
        return self.letters[0]

    def __contains__(self, a: object) -> bool:
        return a in self.letters

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def admits(self, word: Sequence[int]) -> bool:
        """True when every digit of ``word`` is a letter of the alphabet."""
        allowed = set(self.letters)
        return all(d in allowed for d in word)

    @property
    def label(self) -> str:
        ls = self.letters
        if ls == tuple(range(ls[0], ls[-1] + 1)):
            return f"{ls[0]}-{ls[-1]}"
        return ",".join(map(str, ls))


def as_word(digits: Iterable[int]) -> Word:
    """Validate and normalise a digit sequence into a word."""
    word = tuple(int(d) for d in digits)
    for d in word:
        if d < 1:
            raise DomainError(f"partial quotients must be >= 1, got {d}")
    return word


def continuant(word: Sequence[int]) -> int:
    """Return ``<word>`` exactly; the empty word has continuant 1."""
    prev, cur = 0, 1
    for d in word:
        prev, cur = cur, cur * d + prev
    # the recurrence is monotone, so checking the final value bounds every step
    return check_width(cur)


def reverse(word: Sequence[int]) -> Word:
    return tuple(reversed(word))


def concat(w1: Sequence[int], w2: Sequence[int]) -> Word:
    return tuple(w1) + tuple(w2)


def cf_value(word: Sequence[int]) -> Fraction:
    """Evaluate ``[d1, ..., dk]`` as ``<d2..dk> / <d1..dk>``."""
    if len(word) == 0:
        raise DomainError("the empty word has no continued-fraction value")
    return Fraction(continuant(word[1:]), continuant(word))


def _as_fraction(x) -> Fraction:
    if isinstance(x, tuple):
        num, den = x
        if den == 0:
            raise DomainError("zero denominator")
        x = Fraction(num, den)
    return Fraction(x)


def cf_expand(x) -> Word:
    """Canonical expansion of a rational in (0, 1].

    The last digit is at least 2 unless the word is the single digit ``(1,)``
    (the value 1).  Accepts a :class:`~fractions.Fraction` or a
    ``(num, den)`` pair.
    """
    frac = _as_fraction(x)
    if not 0 < frac <= 1:
        raise DomainError(f"expected a rational in (0, 1], got {frac}")
    n, d = frac.numerator, frac.denominator
    digits = []
    while n:
        q, r = divmod(d, n)
        digits.append(q)
        d, n = n, r
    return tuple(digits)


def cf_expansions(x) -> tuple[Word, ...]:
    """Both finite expansions of a rational in (0, 1].

    ``[..., dk]`` with ``dk >= 2`` equals ``[..., dk - 1, 1]``.  The value 1
    has the single expansion ``(1,)``.
    """
    word = cf_expand(x)
    if word[-1] >= 2:
        return word, word[:-1] + (word[-1] - 1, 1)
    return (word,)


def in_alphabet_set(x, alphabet: Alphabet) -> bool:
    """Whether the rational ``x`` has some expansion over ``alphabet``."""
    return any(alphabet.admits(w) for w in cf_expansions(x))


def sum_partial_quotients(x) -> int:
    """Sum of the digits of the canonical expansion."""
    return sum(cf_expand(x))


def euclid_quotient_sum(a: int, b: int) -> int:
    """Sum of the Euclidean quotients of ``a/b`` for ``1 <= a <= b``.

    Equal to the partial-quotient sum of ``a/b`` in lowest terms; common
    factors do not change the quotient sequence.
    """
    s = 0
    while a:
        q, r = divmod(b, a)
        s += q
        b, a = a, r
    return s


@dataclass(frozen=True, slots=True)
class ContinuantMatrix:
    """The matrix ``[[a, b], [c, d]]`` attached to a word of parity ``parity``."""

    a: int
    b: int
    c: int
    d: int
    parity: int = 0

    @classmethod
    def identity(cls) -> "ContinuantMatrix":
        return cls(1, 0, 0, 1, 0)

    @classmethod
    def letter(cls, digit: int) -> "ContinuantMatrix":
        if digit < 1:
            raise DomainError(f"partial quotients must be >= 1, got {digit}")
        return cls(0, 1, 1, digit, 1)

    @property
    def norm(self) -> int:
        """The max-entry norm, which for these matrices is ``d``."""
        return self.d

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: "ContinuantMatrix") -> "ContinuantMatrix":
        a, b, c, d = self.a, self.b, self.c, self.d
        e, f, g, h = other.a, other.b, other.c, other.d
        return ContinuantMatrix(
            check_width(a * e + b * g),
            check_width(a * f + b * h),
            check_width(c * e + d * g),
            check_width(c * f + d * h),
            (self.parity + other.parity) % 2,
        )

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)


def word_to_matrix(word: Sequence[int]) -> ContinuantMatrix:
    """Multiply out the letter matrices of ``word`` (identity if empty)."""
    a, b, c, d = 1, 0, 0, 1
    for x in word:
        if x < 1:
            raise DomainError(f"partial quotients must be >= 1, got {x}")
        # right-multiplying by [[0,1],[1,x]]
        a, b, c, d = b, a + b * x, d, c + d * x
    check_width(d)
    return ContinuantMatrix(a, b, c, d, len(word) % 2)


def fibonacci(n: int) -> int:
    """F_0 = 0, F_1 = 1, F_{n+1} = F_n + F_{n-1}."""
    if n < 0:
        raise DomainError("Fibonacci index must be nonnegative")
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a
