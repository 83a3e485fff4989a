import cmath
import io
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zaremba.census import distinct_count
from zaremba.cfcore import Alphabet, cf_expand, word_to_matrix
from zaremba.ensemble import ensemble_histogram
from zaremba.errors import DomainError
from zaremba.expsum import (
    NormHistogram,
    census_window_histogram,
    dirichlet_decompose,
    knuth_yao_check,
    l2_integral,
    l2_ratio,
    norm_histogram,
    proportion_lower_bound,
    s_theta,
    s_theta_grid,
    trapezoid_l2,
    write_ratio_csv,
    write_theta_csv,
)

from .oracles import best_denominator, euclid_digits

SMALL = NormHistogram({1: 1, 2: 2})

histograms = st.dictionaries(st.integers(1, 5000), st.integers(1, 50), min_size=1, max_size=60).map(NormHistogram)


def test_histogram_examples():
    assert norm_histogram([]).total == 0
    mats = [word_to_matrix(w) for w in [(1,), (2,), (1, 1)]]
    h = norm_histogram(mats)
    assert h.entries == {1: 1, 2: 2}
    assert h.total == 3 and h.distinct == 2


def test_histogram_validation():
    with pytest.raises(DomainError):
        NormHistogram({0: 1})
    with pytest.raises(DomainError):
        NormHistogram({3: -1})
    assert NormHistogram({3: 0}).entries == {}


def test_s_theta_examples():
    assert s_theta(SMALL, 0.0) == pytest.approx(3)
    assert s_theta(SMALL, 0.5) == pytest.approx(-1 + 2)
    want = cmath.exp(2j * math.pi / 3) + 2 * cmath.exp(4j * math.pi / 3)
    assert abs(s_theta(SMALL, 1 / 3) - want) < 1e-12
    assert s_theta(NormHistogram({}), 0.3) == 0
    with pytest.raises(DomainError):
        s_theta(SMALL, 1.5)


@given(histograms, st.floats(0, 1))
def test_s_theta_triangle_and_grid(h, theta):
    v = s_theta(h, theta)
    assert abs(v) <= h.total * (1 + 1e-12)
    g = s_theta_grid(h, [theta, 0.0])
    assert abs(g[0] - v) <= 1e-9 * h.total
    assert g[1] == pytest.approx(h.total)


def test_l2_and_proportion_examples():
    assert l2_integral(SMALL) == 5
    assert l2_integral(NormHistogram({7: 4})) == 16
    assert proportion_lower_bound(SMALL) == pytest.approx(1.8)
    assert proportion_lower_bound(NormHistogram({7: 4})) == 1
    assert proportion_lower_bound(NormHistogram({n: 1 for n in range(1, 11)})) == 10
    with pytest.raises(DomainError):
        proportion_lower_bound(NormHistogram({}))


def test_l2_ratio_examples():
    assert l2_ratio(NormHistogram({n: 1 for n in range(1, 11)}), 100) == pytest.approx(10)
    assert l2_ratio(NormHistogram({5: 3}), 100) == pytest.approx(100)
    with pytest.raises(DomainError):
        l2_ratio(NormHistogram({}), 10)


@given(histograms)
@settings(max_examples=60)
def test_parseval_against_quadrature(h):
    exact = l2_integral(h)
    assert abs(trapezoid_l2(h, 100_000) - exact) <= 1e-6 * exact


@given(histograms)
def test_parseval_envelope(h):
    l2 = l2_integral(h)
    mx = max(h.entries.values())
    assert Fraction(h.total**2, h.distinct) <= l2 <= h.total * mx * h.distinct
    p = proportion_lower_bound(h)
    assert p <= h.distinct * (1 + 1e-12)
    if len(set(h.entries.values())) == 1:
        assert p == pytest.approx(h.distinct)
    else:
        assert p < h.distinct


def test_quadrature_small_direct():
    # independent route: plain trapezoid with explicit complex sums
    nodes = np.linspace(0, 1, 2001)
    vals = np.array([abs(cmath.exp(2j * math.pi * t) + 2 * cmath.exp(4j * math.pi * t)) ** 2 for t in nodes])
    direct = float(np.sum((vals[1:] + vals[:-1]) / 2) / 2000)
    assert direct == pytest.approx(5, rel=1e-9)
    assert trapezoid_l2(SMALL, 2001) == pytest.approx(direct, rel=1e-9)


def test_census_cross_check():
    a = Alphabet.range(5)
    h = census_window_histogram(a, 10**4)
    assert min(h.entries) > 5000 and max(h.entries) <= 10**4
    assert proportion_lower_bound(h) <= distinct_count(a, 10**4)


def test_census_ratio_trend():
    a = Alphabet.range(5)
    ratios = [l2_ratio(census_window_histogram(a, N), N) for N in (10**3, 10**4, 10**5)]
    for prev, cur in zip(ratios, ratios[1:]):
        assert cur <= 1.2 * prev


class TestDirichlet:
    def test_endpoints(self):
        d = dirichlet_decompose(0.0, 10**6, 2)
        assert (d.a, d.q, d.K) == (0, 1, 0)
        d = dirichlet_decompose(1.0, 10**6, 2)
        assert (d.a, d.q, d.K) == (1, 1, 0)

    def test_example(self):
        d = dirichlet_decompose(0.3334, 10**6, 2)
        assert (d.a, d.q) == (1, 3)
        assert d.K == pytest.approx(66.7, abs=0.1)
        assert d.violations() == []
        assert d.beta == pytest.approx(d.K / 10**6)

    def test_threshold(self):
        with pytest.raises(DomainError):
            dirichlet_decompose(0.3, 399, 2)
        dirichlet_decompose(0.3, 400, 2)
        with pytest.raises(DomainError):
            dirichlet_decompose(-0.1, 10**6, 2)

    @given(st.floats(0, 1), st.sampled_from([400, 10**4, 10**6, 10**9]), st.sampled_from([1, 2, 5]))
    def test_constraints_and_reconstruction(self, theta, N, A):
        if N < 100 * A * A:
            return
        d = dirichlet_decompose(theta, N, A)
        assert d.violations() == []
        assert abs(d.reconstruct() - theta) <= 2 * math.ulp(theta) if theta else d.reconstruct() == 0

    @given(st.fractions(0, 1, max_denominator=10**6), st.sampled_from([10**4, 10**6]))
    @settings(max_examples=80)
    def test_matches_brute_force_best_approximation(self, theta, N):
        x = float(theta)
        qmax = math.isqrt(N // 400)
        d = dirichlet_decompose(x, N, 2)
        assert d.q == best_denominator(Fraction(x), qmax)


class TestKnuthYao:
    def test_examples(self):
        assert knuth_yao_check(2)[0] == 2
        assert knuth_yao_check(3)[0] == 6
        with pytest.raises(DomainError):
            knuth_yao_check(1)

    @pytest.mark.parametrize("b", [4, 10, 37, 120])
    def test_matches_euclid_oracle(self, b):
        want = sum(sum(euclid_digits(a, b)) for a in range(1, b))
        total, ratio = knuth_yao_check(b)
        assert total == want
        assert ratio == pytest.approx(want / (b * math.log(b) ** 2))

    def test_terms_use_canonical_expansion(self):
        for a, b in [(1, 2), (2, 4), (3, 7), (6, 9)]:
            assert sum(cf_expand(Fraction(a, b))) == sum(euclid_digits(a, b))


def test_csv_writers():
    buf = io.StringIO()
    write_theta_csv([0.0], [complex(3, 0)], buf)
    assert buf.getvalue() == "theta,re,im,abs\n0,3,0,3\n"
    buf = io.StringIO()
    write_ratio_csv([(10, SMALL)], buf)
    assert buf.getvalue() == "N,total,l2,ratio\n10,3,5,5.55555555556\n"


def test_tiny_ensemble_quadrature(tiny_ensemble):
    h = ensemble_histogram(tiny_ensemble)
    exact = l2_integral(h)
    assert abs(trapezoid_l2(h, 100_000) - exact) <= 1e-6 * exact
