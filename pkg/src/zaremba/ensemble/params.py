"""Scale parameters of the ensemble: the depth J and the geometric ladder N_j.

The ladder ``N_{-J-1} < ... < N_J < N_{J+1} = N`` is carried in double
precision.  ``strict`` mode uses the constant ``10^4 A^4`` in the depth
condition; ``relaxed`` mode substitutes a user-chosen scale ``s`` for it and
keeps every structural relation of the ladder.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

from ..cfcore import Alphabet
from ..errors import DomainError, InfeasibleParametersError

STRICT = "strict"
RELAXED = "relaxed"

STRICT_EPS_MAX = 1 / 2500
RELAXED_EPS_MAX = 0.5
STRICT_MIN_DEPTH = 10
IDENTITY_TOL = 1e-9

PHI = (1 + 5**0.5) / 2
PHI_FACTOR = 1 + PHI**-2


@dataclass(frozen=True)
class Mode:
    """``strict`` or ``relaxed`` with a positive constant scale."""

    kind: str = STRICT
    scale: float | None = None

    def __post_init__(self):
        if self.kind == STRICT:
            if self.scale is not None:
                raise DomainError("strict mode takes no scale")
        elif self.kind == RELAXED:
            if self.scale is None or not self.scale > 0 or not math.isfinite(self.scale):
                raise DomainError(f"relaxed mode needs a positive finite scale, got {self.scale}")
            object.__setattr__(self, "scale", float(self.scale))
        else:
            raise DomainError(f"unknown mode {self.kind!r}")

    @classmethod
    def strict(cls) -> "Mode":
        return cls(STRICT)

    @classmethod
    def relaxed(cls, scale: float = 1.0) -> "Mode":
        return cls(RELAXED, scale)

    @classmethod
    def parse(cls, text: str) -> "Mode":
        """``"strict"``, ``"relaxed"`` (scale 1) or ``"relaxed:<scale>"``."""
        text = text.strip()
        if text == STRICT:
            return cls.strict()
        m = re.fullmatch(r"relaxed(?::(.+))?", text)
        if not m:
            raise DomainError(f"cannot parse mode {text!r}")
        try:
            scale = 1.0 if m.group(1) is None else float(m.group(1))
        except ValueError:
            raise DomainError(f"bad relaxed scale in {text!r}") from None
        return cls.relaxed(scale)

    @property
    def is_strict(self) -> bool:
        return self.kind == STRICT

    def depth_constant(self, A: int) -> float:
        """The constant playing the role of ``10^4 A^4``."""
        return 1e4 * A**4 if self.is_strict else self.scale

    @property
    def label(self) -> str:
        return STRICT if self.is_strict else f"{RELAXED}:{self.scale:g}"


def depth_J(N: int, eps0: float, constant: float) -> int:
    """``floor((log log N - log C + 2 log eps0) / -log(1 - eps0))``."""
    if N <= math.e:
        raise DomainError(f"N must exceed e, got {N}")
    num = math.log(math.log(N)) - math.log(constant) + 2 * math.log(eps0)
    return math.floor(num / -math.log1p(-eps0))


def ladder_exponent(j: int, J: int, eps0: float) -> float:
    """Exponent e_j with ``N_j = N^{e_j}``."""
    if not -J - 1 <= j <= J + 1:
        raise DomainError(f"ladder index {j} outside [{-J - 1}, {J + 1}]")
    if j == J + 1:
        return 1.0
    if j <= 1:
        return (1 - eps0) ** (1 - j) / (2 - eps0)
    return 1 - (1 - eps0) ** j / (2 - eps0)


@dataclass(frozen=True)
class EnsembleParams:
    N: int
    eps0: float
    J: int
    alphabet: Alphabet
    mode: Mode
    Nseq: dict[int, float] = field(repr=False)
    log_Nseq: dict[int, float] = field(repr=False)

    @property
    def A(self) -> int:
        return self.alphabet.max_letter

    @property
    def n_factors(self) -> int:
        return 2 * self.J + 1

    def N_at(self, j: int) -> float:
        return self.Nseq[j]

    def identity_errors(self) -> dict[str, float]:
        """Largest relative error of each ladder identity over its index range."""
        return check_identities(self)


def _rel(x: float, y: float) -> float:
    return abs(x - y) / max(abs(x), abs(y), 1e-300)


def check_identities(p: EnsembleParams) -> dict[str, float]:
    """Evaluate the ladder identities directly on the stored values.

    * ``product``:   N_{-m} N_{m+1} = N                      for -J <= m <= J-1
    * ``ratio``:     N_{m+1}/N_m = N_{m+1}^eps0 (m <= 0), (N/N_m)^eps0 (m >= 0)
    * ``ratio_pow``: N_{m+1}/N_m = N^{eps0/(2-eps0) (1-eps0)^|m|}   for -J-1 <= m <= J-1
    * ``monotone``:  N_m >= N_{m+1}^{1-eps0} (reported as the worst shortfall, 0 if none)
    * ``power``:     N_{h-J}^{(1-eps0)^{h-j}} = N_{j-J}      for -1 <= j < h <= J+1
    """
    N, J, e = float(p.N), p.J, p.eps0
    S, LS = p.Nseq, p.log_Nseq
    logN = math.log(p.N)
    err = {"product": 0.0, "ratio": 0.0, "ratio_pow": 0.0, "monotone": 0.0, "power": 0.0}
    for m in range(-J, J):
        err["product"] = max(err["product"], _rel(S[-m] * S[m + 1], N))
    for m in range(-J - 1, J):
        ratio = S[m + 1] / S[m]
        if m <= 0:
            err["ratio"] = max(err["ratio"], _rel(ratio, S[m + 1] ** e))
        if m >= 0:
            err["ratio"] = max(err["ratio"], _rel(ratio, (N / S[m]) ** e))
        err["ratio_pow"] = max(err["ratio_pow"], _rel(ratio, math.exp(e / (2 - e) * (1 - e) ** abs(m) * logN)))
    for m in range(-J - 1, J + 1):
        # compare in logs so the check is scale free
        short = (1 - e) * LS[m + 1] - LS[m]
        err["monotone"] = max(err["monotone"], short / max(LS[m + 1], 1e-300) if short > 0 else 0.0)
    for j in range(-1, J + 2):
        for h in range(j + 1, J + 2):
            lhs = S[h - J] ** ((1 - e) ** (h - j))
            err["power"] = max(err["power"], _rel(lhs, S[j - J]))
    return err


def _depth_window_text(mode: Mode) -> tuple[str, str]:
    c = "1e4*A^4" if mode.is_strict else "s"
    hi = "1e5*A^4" if mode.is_strict else "10*s"
    return (f"{c}/log N <= eps0^2*(1-eps0)^J", f"eps0^2*(1-eps0)^J <= {hi}/log N")


def compute_params(N: int, eps0: float, alphabet: Alphabet, mode: Mode) -> EnsembleParams:
    """Depth J and ladder N_j for the given mode.

    Raises :class:`InfeasibleParametersError` naming the first inequality
    that cannot be met.
    """
    N = int(N)
    if N < 3:
        raise DomainError(f"N must be >= 3, got {N}")
    if mode.is_strict and not 0 < eps0 < STRICT_EPS_MAX:
        raise DomainError(f"eps0 must lie in (0, 1/2500) in strict mode, got {eps0}")
    if not mode.is_strict and not 0 < eps0 <= RELAXED_EPS_MAX:
        raise DomainError(f"eps0 must lie in (0, 1/2] in relaxed mode, got {eps0}")
    A = alphabet.max_letter
    C = mode.depth_constant(A)
    logN = math.log(N)
    J = depth_J(N, eps0, C)
    lower_text, upper_text = _depth_window_text(mode)
    min_depth = STRICT_MIN_DEPTH if mode.is_strict else 1
    detail = f"N={N}, eps0={eps0:g}, A={A}, log N={logN:.12g}, J formula gives {J}"
    if J < 0 or C / logN > eps0**2 * (1 - eps0) ** max(J, 0):
        raise InfeasibleParametersError(lower_text, detail)
    if eps0**2 * (1 - eps0) ** J > 10 * C / logN:
        raise InfeasibleParametersError(upper_text, detail)
    if J < min_depth:
        raise InfeasibleParametersError(f"J >= {min_depth}", detail)
    log_seq = {j: ladder_exponent(j, J, eps0) * logN for j in range(-J - 1, J + 2)}
    seq = {j: math.exp(v) for j, v in log_seq.items()}
    seq[J + 1] = float(N)
    log_seq[J + 1] = logN
    params = EnsembleParams(N=N, eps0=float(eps0), J=J, alphabet=alphabet, mode=mode, Nseq=seq, log_Nseq=log_seq)
    for name, e in check_identities(params).items():
        if e > IDENTITY_TOL:
            raise InfeasibleParametersError(f"ladder identity '{name}' within {IDENTITY_TOL:g}", f"error {e:.3g}")
    return params
