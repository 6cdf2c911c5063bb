import math

import numpy as np
import pytest
from fractions import Fraction

from frobclt.densities import admissible_symbols, density
from frobclt.errors import QuadratureError
from frobclt.frobenius import FieldData, artin_trace, trace_series
from frobclt.moments import SamplerConfig, sample_frobenius_family
from frobclt.satotate import (
    MeasureMomentRequest,
    cdf_measure_moment,
    horizontal_moment,
    semicircle_moment,
    vertical_moment,
    vertical_reference,
)
from frobclt.symchar import trivial_multiplicity

X3_X_1 = FieldData((-1, -1, 0, 1), -23, form=(1, 0, -1, -1), field_id="x3-x-1")


@pytest.fixture(scope="module")
def series_1e6():
    return trace_series(X3_X_1, 10**6)


def test_horizontal_small():
    s = trace_series(X3_X_1, 10)
    assert horizontal_moment(s, 0) == 1
    # a = (-1, -1, 0, 0): 3 is inert, so a(3)^2 = 1 as well
    assert horizontal_moment(s, 2) == 0.5
    with pytest.raises(ValueError):
        horizontal_moment(trace_series(X3_X_1, 1), 2)


def test_horizontal_convergence(series_1e6):
    assert abs(horizontal_moment(series_1e6, 1)) < 0.02
    assert horizontal_moment(series_1e6, 2) == pytest.approx(trivial_multiplicity(3, 2), rel=0.02)
    assert horizontal_moment(series_1e6, 4) == pytest.approx(trivial_multiplicity(3, 4), rel=0.05)


@pytest.fixture(scope="module")
def mc_s5():
    return sample_frobenius_family(SamplerConfig("s5", 101, 20000, seed=5))


def test_vertical_matches_table(mc_s5):
    p = 101
    assert vertical_moment(mc_s5, p, 0) == 1
    for r in (1, 2, 3):
        exact = sum(density("s5", s, p) * Fraction(artin_trace(s)) ** r for s in admissible_symbols("s5"))
        mean, se = vertical_moment(mc_s5, p, r, with_stderr=True)
        assert abs(mean - float(exact)) <= 4 * se


def test_vertical_reference_is_leading_term(mc_s5):
    # n_r/(1 + f(p)) misses only the O(1/p) ramified contribution
    for r in (1, 2):
        assert abs(vertical_moment(mc_s5, 101, r) - float(vertical_reference("s5", 101, r))) < 0.1
    assert vertical_reference("s3", 5, 2) == Fraction(25, 31)


def test_vertical_list_and_family_agree(mc_s5):
    members = [mc_s5.series(i) for i in range(200)]
    sub = sample_frobenius_family(SamplerConfig("s5", 101, 200, seed=5))
    assert vertical_moment(members, 97, 2) == vertical_moment(sub, 97, 2)
    with pytest.raises(ValueError):
        vertical_moment(members, 103, 2)
    with pytest.raises(ValueError):
        vertical_moment(sub, 100, 2)


@pytest.mark.parametrize("p", [2, 3, 5, 101])
def test_measure_normalized(p):
    assert abs(cdf_measure_moment(p, 0) - 1) < 1e-9


def test_measure_examples():
    for n, c in ((2, 1), (4, 2), (6, 5)):
        assert cdf_measure_moment(math.inf, n) == pytest.approx(c, abs=1e-9)
        assert semicircle_moment(n) == c
    assert cdf_measure_moment(7, 5) == 0
    assert [semicircle_moment(n) for n in range(0, 11, 2)] == [1, 1, 2, 5, 14, 42]


def test_measure_moment_closed_form():
    # E[(2cos t)^2] = 1 + 1/p: second moment of the vertical measure
    for p in (2, 3, 11):
        assert cdf_measure_moment(p, 2) == pytest.approx(1 + 1 / p, abs=1e-9)


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_measure_monotone_in_p(n):
    vals = [cdf_measure_moment(p, n) for p in (2, 10, 100, 1000)]
    assert all(a >= b - 1e-9 for a, b in zip(vals, vals[1:]))
    assert vals[-1] == pytest.approx(semicircle_moment(n), rel=0.05)


def test_measure_request_validation():
    with pytest.raises(ValueError):
        MeasureMomentRequest(1, 2)
    with pytest.raises(ValueError):
        MeasureMomentRequest(5, 2, panels=32)
    with pytest.raises(ValueError):
        MeasureMomentRequest(5, -2)
    assert cdf_measure_moment(MeasureMomentRequest(5, 2, panels=128)) == pytest.approx(1.2, abs=1e-9)


def test_quadrature_failure_is_reported():
    with pytest.raises(QuadratureError):
        cdf_measure_moment(2, 40, tol=0.0)
