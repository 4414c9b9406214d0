import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from uniholder.errors import EstimationError
from uniholder.scaling import (chord_exponents, envelope_exponent, exponent_fit, log2_data,
                               regression_exponent, window_slice)


def test_log2_data_skips_zeros():
    js, y, skipped = log2_data([1, 2, 3, 4], [0.5, 0.0, 0.125, np.inf])
    np.testing.assert_array_equal(js, [1, 3])
    np.testing.assert_allclose(y, [-1, -3])
    assert skipped == [2, 4]


def test_regression_of_power_law():
    js = np.arange(2, 12)
    slope, resid = regression_exponent(js, -0.7 * js + 3.0)
    assert slope == pytest.approx(0.7) and resid == pytest.approx(0.0, abs=1e-12)


def test_chords_ignore_nonpositive_scales():
    js, r = chord_exponents([-1, 0, 2, 4], [1.0, 0.0, -1.0, -4.0])
    np.testing.assert_array_equal(js, [2, 4])
    np.testing.assert_allclose(r, [0.5, 1.0])


def test_envelope_is_blind_to_prefactor():
    js = np.arange(4, 16)
    y = np.log2(37.0) - 0.45 * js
    assert envelope_exponent(js, y, upper=True) == pytest.approx(0.45)
    assert envelope_exponent(js, y, upper=False) == pytest.approx(0.45)
    # chords are biased by the prefactor
    _, r = chord_exponents(js, y)
    assert r.min() < 0.1


def test_window_slice():
    js, v = window_slice(np.arange(1, 10), np.arange(9.0), (3, 5))
    np.testing.assert_array_equal(js, [3, 4, 5])
    with pytest.raises(EstimationError):
        window_slice(np.arange(3), np.arange(3.0), (2, 1))


def test_fit_diagnostics_and_errors():
    js = np.arange(1, 8)
    val, diag = exponent_fit(js, 2.0 ** (-0.3 * js), "lower")
    assert val == pytest.approx(0.3)
    for key in ("convention", "skipped", "n_points", "chord_min", "chord_max", "regression", "residual", "envelope"):
        assert key in diag
    with pytest.raises(EstimationError):
        exponent_fit(js, np.zeros(7), "upper")
    with pytest.raises(EstimationError):
        exponent_fit([3], [0.1], "upper", "envelope")
    assert exponent_fit([3], [0.125], "upper", "chord")[0] == pytest.approx(1.0)
    with pytest.raises(ValueError):
        exponent_fit(js, js, "middle")
    with pytest.raises(ValueError):
        exponent_fit(js, js, "lower", "median")


@given(y=arrays(np.float64, st.integers(2, 25), elements=st.floats(-40, 5)),
       conv=st.sampled_from(["envelope", "chord", "regression"]))
def test_lower_never_exceeds_upper(y, conv):
    js = np.arange(1, y.size + 1)
    v = 2.0**y
    lo, _ = exponent_fit(js, v, "lower", conv)
    hi, _ = exponent_fit(js, v, "upper", conv)
    assert lo <= hi + 1e-9


@given(scale=st.floats(1e-3, 1e3), y=arrays(np.float64, st.integers(3, 15), elements=st.floats(-20, 0)))
def test_envelope_is_scale_invariant(scale, y):
    js = np.arange(3, 3 + y.size)
    v = 2.0**y
    for kind in ("lower", "upper"):
        a, _ = exponent_fit(js, v, kind)
        b, _ = exponent_fit(js, scale * v, kind)
        assert a == pytest.approx(b, abs=1e-8)
