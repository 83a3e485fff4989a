import io

import pytest

from zaremba.cfcore import Alphabet
from zaremba.dimension import (
    DELTA_1_TO_5,
    FIT,
    HENSLEY,
    THRESHOLD_FIVE_312,
    THRESHOLD_ONE_SIXTH,
    DimensionEstimate,
    fit_dimension,
    hensley_estimate,
    reference_dimension,
    write_dimension_csv,
)
from zaremba.errors import DomainError


def test_hensley_values():
    assert hensley_estimate(5).value == pytest.approx(0.8308, abs=5e-4)
    assert hensley_estimate(50).value == pytest.approx(0.9867, abs=5e-4)
    assert hensley_estimate(5).method == HENSLEY


def test_hensley_increasing():
    vals = [hensley_estimate(A).value for A in range(2, 60)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_hensley_rejects_small_A():
    with pytest.raises(DomainError):
        hensley_estimate(1)


def test_reference():
    est = reference_dimension(Alphabet.range(5))
    assert est.value == DELTA_1_TO_5
    assert reference_dimension(Alphabet.range(4)) is None


def test_thresholds():
    assert DELTA_1_TO_5 > THRESHOLD_ONE_SIXTH
    assert DELTA_1_TO_5 < THRESHOLD_FIVE_312
    assert THRESHOLD_ONE_SIXTH == pytest.approx(5 / 6)


def test_estimate_range_enforced():
    with pytest.raises(DomainError):
        DimensionEstimate(1.0, FIT)


def test_fit_close_to_reference():
    est = fit_dimension(Alphabet.range(5), [10**3, 10**4, 10**5])
    assert est.method == FIT
    assert abs(est.value - DELTA_1_TO_5) < 0.01
    assert est.residual is not None and est.residual < 0.05


def test_fit_grid_rescaling_is_stable():
    a = Alphabet.range(5)
    coarse = fit_dimension(a, [2000, 8000, 32000]).value
    fine = fit_dimension(a, [2000, 4000, 8000, 16000, 32000]).value
    assert abs(coarse - fine) < 0.01


@pytest.mark.parametrize("grid", [[10, 100], [100, 10, 1000], [0.5, 10, 100]])
def test_fit_preconditions(grid):
    with pytest.raises(DomainError):
        fit_dimension(Alphabet.range(5), grid)


def test_csv():
    buf = io.StringIO()
    write_dimension_csv([("1-5", hensley_estimate(5))], buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "A,method,estimate,residual"
    assert lines[1].startswith("1-5,hensley-asymptotic,0.830")
    assert lines[1].endswith(",")
