"""Ensembles: products of 2J+1 pre-ensembles at geometrically spaced scales."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..cfcore import Alphabet
from ..errors import DomainError, InfeasibleParametersError
from ..expsum import NormHistogram
from .params import PHI_FACTOR, EnsembleParams, Mode, compute_params
from .pre import PreEnsemble, build_pre_ensemble

STRICT_PI_LOG = 1e-3
INT64_SAFE = 2**62


@dataclass(frozen=True)
class Ensemble:
    params: EnsembleParams
    factors: tuple[PreEnsemble, ...]
    alphas: tuple[float, ...]
    Ms: tuple[float, ...]

    def __post_init__(self):
        n = self.params.n_factors
        if not (len(self.factors) == len(self.alphas) == len(self.Ms) == n):
            raise DomainError(f"an ensemble with J={self.params.J} needs {n} factors")

    @property
    def Ls(self) -> tuple[float, ...]:
        return tuple(f.L for f in self.factors)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(f) for f in self.factors)

    @property
    def cardinality(self) -> int:
        """``prod |Xi_j|``, the size of the product set under unique expansion."""
        return math.prod(self.sizes)

    def recursion_errors(self) -> list[float]:
        """Relative errors of the scale recursion for M_j (first entry: M_1 = N_{1-J})."""
        p = self.params
        J = p.J
        errs = [abs(self.Ms[0] - p.Nseq[1 - J]) / p.Nseq[1 - J]]
        for j in range(2, p.n_factors + 1):
            want = p.Nseq[j - J] / (PHI_FACTOR * self.alphas[j - 2] * p.Nseq[j - 1 - J])
            errs.append(abs(self.Ms[j - 1] - want) / want)
        return errs

    def alpha_violations(self) -> list[int]:
        A = self.params.A
        return [j + 1 for j, a in enumerate(self.alphas) if not 1 / (64 * A * A) <= a <= 1]


def next_scale(params: EnsembleParams, j: int, alpha_prev: float) -> float:
    """M_j for j >= 2 from the previous factor's alpha."""
    J = params.J
    return params.Nseq[j - J] / (PHI_FACTOR * alpha_prev * params.Nseq[j - 1 - J])


def build_from_params(params: EnsembleParams) -> Ensemble:
    A = params.A
    alphabet, mode, J = params.alphabet, params.mode, params.J
    factors, alphas, Ms = [], [], []
    M = params.Nseq[1 - J]
    for j in range(1, params.n_factors + 1):
        if j > 1:
            M = next_scale(params, j, alphas[-1])
        if not mode.is_strict and M < 64 * A * A:
            raise InfeasibleParametersError(
                "M_j >= 64*A^2", f"factor {j} has M_j={M:.12g} below {64 * A * A}"
            )
        try:
            pre = build_pre_ensemble(M, alphabet, mode)
        except DomainError as exc:
            raise InfeasibleParametersError("M_j >= 2^9*A^3*log^3 M_j", f"factor {j}: {exc}") from exc
        factors.append(pre)
        alphas.append(pre.L / M)
        Ms.append(M)
    return Ensemble(params, tuple(factors), tuple(alphas), tuple(Ms))


def build_ensemble(N: int, eps0: float, alphabet: Alphabet, mode: Mode) -> Ensemble:
    """Compute the parameters, then build factors 1..2J+1 in order."""
    return build_from_params(compute_params(N, eps0, alphabet, mode))


# products of factor members


def factor_table(pre: PreEnsemble, dtype=np.int64) -> np.ndarray:
    """``(n, 4)`` array of the member matrices' entries a, b, c, d."""
    rows = [m.as_tuple() for m in pre.matrices]
    if dtype is object:
        out = np.empty((len(rows), 4), dtype=object)
        for i, r in enumerate(rows):
            out[i] = r
        return out
    return np.array(rows, dtype=dtype).reshape(len(rows), 4)


def _product_dtype(e: Ensemble):
    # ||XY|| <= 2 ||X|| ||Y|| bounds every entry and every partial sum
    bound = 2 ** len(e.factors) * math.prod(e.Ls)
    return np.int64 if bound < INT64_SAFE else object


def _mul(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    a, b, c, d = X[:, 0], X[:, 1], X[:, 2], X[:, 3]
    e, f, g, h = Y[:, 0], Y[:, 1], Y[:, 2], Y[:, 3]
    return np.stack([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h], axis=1)


def prefix_products(e: Ensemble, idx: np.ndarray) -> list[np.ndarray]:
    """For rows of factor indices, the products ``xi_1 ... xi_j`` for every j."""
    dtype = _product_dtype(e)
    tables = [factor_table(f, dtype) for f in e.factors]
    cur = tables[0][idx[:, 0]]
    out = [cur]
    for j in range(1, len(tables)):
        cur = _mul(cur, tables[j][idx[:, j]])
        out.append(cur)
    return out


def sample_indices(e: Ensemble, size: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return np.stack([rng.integers(0, n, size=size) for n in e.sizes], axis=1)


def all_indices(e: Ensemble) -> np.ndarray:
    grids = np.meshgrid(*[np.arange(n) for n in e.sizes], indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def ensemble_histogram(e: Ensemble, limit: int = 20_000_000) -> NormHistogram:
    """Norm multiplicities of the fully materialised product set."""
    if e.cardinality == 0:
        return NormHistogram({})
    if e.cardinality > limit:
        raise DomainError(f"ensemble has {e.cardinality} elements, above the materialisation limit {limit}")
    norms = prefix_products(e, all_indices(e))[-1][:, 3]
    values, counts = np.unique(norms, return_counts=True)
    return NormHistogram({int(n): int(c) for n, c in zip(values, counts)})


# norm verification


def pi_window(e: Ensemble) -> list[tuple[float, float]]:
    """Admissible ``[lo_j, hi_j]`` for ``Pi_j`` under the ensemble's mode.

    Strict mode uses ``exp(-1e-3), exp(1e-3)``.  Relaxed mode takes the full
    envelope of ``(1 +- 2u_j)^2 prod_{n<j} (1 +- 2u_n)^3`` with the measured
    ``u_n = 1/log L_n``.
    """
    if e.params.mode.is_strict:
        return [(math.exp(-STRICT_PI_LOG), math.exp(STRICT_PI_LOG))] * len(e.factors)
    u = [1 / math.log(L) for L in e.Ls]
    out = []
    lo_acc = hi_acc = 1.0
    for j, uj in enumerate(u):
        lo = max(1 - 2 * uj, 0.0) ** 2 * lo_acc
        hi = (1 + 2 * uj) ** 2 * hi_acc
        out.append((lo, hi))
        lo_acc *= max(1 - 2 * uj, 0.0) ** 3
        hi_acc *= (1 + 2 * uj) ** 3
    return out


@dataclass(frozen=True)
class NormVerdict:
    samples: int
    pi_min: tuple[float, ...]
    pi_max: tuple[float, ...]
    windows: tuple[tuple[float, float], ...]
    pi_violations: int
    first_factor_violations: int
    full_window: tuple[float, float]
    full_violations: int

    @property
    def ok(self) -> bool:
        return self.pi_violations == 0 and self.first_factor_violations == 0 and self.full_violations == 0


def verify_ensemble_norms(e: Ensemble, samples: int = 2000, seed: int = 0) -> NormVerdict:
    """Measure ``Pi_j = ||xi_1 ... xi_j|| / (alpha_j N_{j-J})`` on sampled tuples.

    Also checks the first factor against ``[1 - 1/log L_1, 1]`` and the full
    product against ``[lo N / (64 A^2), hi N]``.
    """
    p = e.params
    J, A = p.J, p.A
    idx = sample_indices(e, samples, seed)
    prods = prefix_products(e, idx)
    windows = pi_window(e)
    pmin, pmax = [], []
    bad = 0
    for j, P in enumerate(prods, start=1):
        scale = e.alphas[j - 1] * p.Nseq[j - J]
        pi = P[:, 3].astype(float) / scale
        lo, hi = windows[j - 1]
        bad += int(np.count_nonzero((pi < lo) | (pi > hi)))
        pmin.append(float(pi.min()))
        pmax.append(float(pi.max()))
    first = prods[0][:, 3].astype(float) / e.Ls[0]
    first_bad = int(np.count_nonzero((first < 1 - 1 / math.log(e.Ls[0])) | (first > 1)))
    lo, hi = windows[-1]
    full = (lo * p.N / (64 * A * A), hi * p.N)
    norms = prods[-1][:, 3]
    full_bad = sum(1 for n in norms if not full[0] <= n <= full[1])
    return NormVerdict(samples, tuple(pmin), tuple(pmax), tuple(windows), bad, first_bad, full, full_bad)


@dataclass(frozen=True)
class UniqueExpansionVerdict:
    cardinality: int
    samples: int
    distinct_tuples: int
    distinct_products: int
    materialized_distinct: int | None

    @property
    def collisions(self) -> int:
        return self.distinct_tuples - self.distinct_products

    @property
    def ok(self) -> bool:
        full_ok = self.materialized_distinct is None or self.materialized_distinct == self.cardinality
        return self.collisions == 0 and full_ok


def _distinct_rows(a: np.ndarray) -> int:
    if a.dtype == object:
        return len({tuple(r) for r in a})
    return len(np.unique(a, axis=0)) if len(a) else 0


def verify_unique_expansion(
    e: Ensemble, sample_size: int = 1_000_000, seed: int = 0, materialize_limit: int = 2_000_000
) -> UniqueExpansionVerdict:
    """Distinct sampled factor tuples must give distinct products.

    When ``prod |Xi_j|`` is at most ``materialize_limit`` every product is
    formed and the number of distinct ones compared with the cardinality.
    """
    card = e.cardinality
    if card == 0:
        return UniqueExpansionVerdict(0, 0, 0, 0, 0)
    idx = sample_indices(e, sample_size, seed)
    prods = prefix_products(e, idx)[-1]
    tuples = _distinct_rows(idx)
    products = _distinct_rows(prods)
    full = None
    if card <= materialize_limit:
        full = _distinct_rows(prefix_products(e, all_indices(e))[-1])
    return UniqueExpansionVerdict(card, sample_size, tuples, products, full)


# splitting


@dataclass(frozen=True)
class SplitDescriptor:
    """Indices for ``Omega = Xi_1..Xi_jhat * Xi_{jhat+1}..Xi_{2J+1}``.

    ``suffix`` is the factor range ``hhat+1 .. 2J+1`` with ``hhat = 2J - jhat + 1``.
    """

    M: float
    j_hat: int
    h_hat: int
    prefix: tuple[int, int]
    rest: tuple[int, int]
    suffix: tuple[int, int]


def split_log_interval(e: Ensemble) -> tuple[float, float]:
    """``[log lower, log upper]`` of the admissible M for splitting.

    Strict: ``[C, log N - C]`` with ``C = 1e5 A^4 / eps0^2``; relaxed:
    ``[log N_{1-J}, log N_J]``.
    """
    p = e.params
    if p.mode.is_strict:
        c = 1e5 * p.A**4 / p.eps0**2
        return c, math.log(p.N) - c
    return p.log_Nseq[1 - p.J], p.log_Nseq[p.J]


def split_at(e: Ensemble, M: float) -> SplitDescriptor:
    """Smallest ``jhat`` in ``[2, 2J]`` with ``N_{jhat-1-J} <= M <= N_{jhat-J}``."""
    p = e.params
    J = p.J
    lo, hi = split_log_interval(e)
    if p.mode.is_strict:
        inside = M > 0 and lo <= math.log(M) <= hi
    else:
        # compare values directly so the ladder endpoints themselves are admitted
        inside = p.Nseq[1 - J] <= M <= p.Nseq[J]
    if not inside:
        raise DomainError(f"M={M:.12g} outside the admissible interval [exp({lo:.12g}), exp({hi:.12g})]")
    for j in range(2, 2 * J + 1):
        if p.Nseq[j - 1 - J] <= M <= p.Nseq[j - J]:
            h = 2 * J - j + 1
            return SplitDescriptor(M, j, h, (1, j), (j + 1, 2 * J + 1), (h + 1, 2 * J + 1))
    raise DomainError(f"no ladder step brackets M={M:.12g}")


@dataclass(frozen=True)
class SplitVerdict:
    split: SplitDescriptor
    samples: int
    violations: int
    worst_lower: float
    worst_upper: float

    @property
    def ok(self) -> bool:
        return self.violations == 0


def verify_split(e: Ensemble, M: float, samples: int = 2000, seed: int = 0) -> SplitVerdict:
    """Check ``(g/hi)^{1-eps0} <= M <= 64 A^2 g / lo`` for ``g = ||xi_1..xi_jhat||``.

    ``lo, hi`` is the mode's window for ``Pi_jhat``; ``worst_lower`` and
    ``worst_upper`` are the smallest slack ratios observed on each side.
    """
    s = split_at(e, M)
    p = e.params
    A, eps = p.A, p.eps0
    lo, hi = pi_window(e)[s.j_hat - 1]
    idx = sample_indices(e, samples, seed)
    g = prefix_products(e, idx)[s.j_hat - 1][:, 3].astype(float)
    left = (g / hi) ** (1 - eps)
    right = 64 * A * A * g / max(lo, 1e-300)
    bad = int(np.count_nonzero((left > M) | (M > right)))
    return SplitVerdict(s, samples, bad, float(np.min(M / left)), float(np.min(right / M)))
