import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from uniholder.errors import DomainError, EstimationError
from uniholder.smoothness import (IndexEstimate, ModulusProfile, SampledSignal, difference_weights,
                                  finite_difference, modulus_of_smoothness, modulus_profile,
                                  oracle_lower_index, oracle_upper_index, select_order, shift_sups)

finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False)


def line(n=64, dx=0.25, extension="clamp"):
    return SampledSignal(dx * np.arange(n), 0.0, dx, extension)


# ---------------------------------------------------------------- signal type


def test_signal_is_frozen_copy():
    vals = np.arange(4.0)
    s = SampledSignal(vals, dx=0.5)
    vals[0] = 99.0
    assert s.values[0] == 0.0
    with pytest.raises(ValueError):
        s.values[0] = 1.0
    assert s.n == 4 and s.length == 2.0
    np.testing.assert_allclose(s.x, [0, 0.5, 1.0, 1.5])


@pytest.mark.parametrize("kwargs", [
    {"values": [1.0], "dx": 1.0},
    {"values": [1.0, np.nan], "dx": 1.0},
    {"values": [1.0, 2.0], "dx": 0.0},
    {"values": [1.0, 2.0], "dx": 1.0, "extension": "mirror"},
])
def test_signal_rejects_bad_input(kwargs):
    with pytest.raises(DomainError):
        SampledSignal(**kwargs)


# ---------------------------------------------------------- finite_difference


def test_difference_of_constant_is_zero():
    s = SampledSignal(np.full(32, 5.0), dx=0.1)
    for h in (1, 3, 7):
        assert np.all(finite_difference(s, h, 1) == 0.0)


def test_first_difference_of_line():
    s = line(dx=0.25)
    d = finite_difference(s, 1, 1)
    np.testing.assert_allclose(d[:-1], 0.25, rtol=0, atol=1e-15)


def test_second_difference_of_square():
    dx = 0.1
    x = dx * np.arange(100)
    s = SampledSignal(x**2, 0.0, dx, "clamp")
    d = finite_difference(s, 3, 2)
    np.testing.assert_allclose(d[: 100 - 6], 2 * 0.3**2, rtol=1e-10)


def test_difference_matches_binomial_expansion(rng):
    f = rng.standard_normal(50)
    s = SampledSignal(f, dx=0.02)
    for M in (1, 2, 3, 4):
        h = 3
        expected = sum((-1) ** (M - m) * math.comb(M, m) * np.roll(f, -m * h) for m in range(M + 1))
        np.testing.assert_allclose(finite_difference(s, h, M), expected, atol=1e-12)


def test_clamp_extension_holds_last_sample():
    s = SampledSignal([0.0, 1.0, 3.0, 6.0], dx=1.0, extension="clamp")
    np.testing.assert_array_equal(finite_difference(s, 1, 1), [1.0, 2.0, 3.0, 0.0])


@pytest.mark.parametrize("h,M", [(0, 1), (8, 1), (4, 2), (3, 3)])
def test_step_overflow_is_domain_error(h, M):
    s = SampledSignal(np.zeros(8), dx=1.0)
    with pytest.raises(DomainError):
        finite_difference(s, h, M)


def test_difference_weights():
    np.testing.assert_array_equal(difference_weights(3), [-1, 3, -3, 1])
    with pytest.raises(DomainError):
        difference_weights(0)


@given(M=st.integers(1, 5), h=st.integers(1, 6), coeffs=arrays(np.float64, 5, elements=finite))
def test_difference_annihilates_low_degree_polynomials(M, h, coeffs):
    n, dx = 64, 1.0 / 64
    x = dx * np.arange(n)
    poly = np.polynomial.polynomial.polyval(x, coeffs[:M])
    s = SampledSignal(poly, 0.0, dx, "clamp")
    d = finite_difference(s, h, M)[: n - M * h]
    scale = max(1.0, np.max(np.abs(poly)))
    assert np.max(np.abs(d)) <= 1e-10 * scale * 2**M


@given(a=finite, b=finite, h=st.integers(1, 5), M=st.integers(1, 3))
def test_difference_is_linear(a, b, h, M):
    r = np.random.default_rng(7)
    f, g = r.standard_normal(40), r.standard_normal(40)
    lhs = finite_difference(SampledSignal(a * f + b * g, dx=0.1), h, M)
    rhs = a * finite_difference(SampledSignal(f, dx=0.1), h, M) + b * finite_difference(SampledSignal(g, dx=0.1), h, M)
    np.testing.assert_allclose(lhs, rhs, atol=1e-9 * (1 + abs(a) + abs(b)) * 2**M)


# ---------------------------------------------------------- modulus


def test_modulus_of_line():
    s = SampledSignal(np.arange(100) / 100, 0.0, 0.01, "clamp")
    assert modulus_of_smoothness(s, 0.1, 1) == pytest.approx(0.1, abs=1e-12)


def test_modulus_of_constant():
    s = SampledSignal(np.full(64, 2.5), dx=1 / 64)
    for M in (1, 2, 3):
        assert modulus_of_smoothness(s, 0.25, M) == 0.0


def test_modulus_below_grid_step_raises():
    s = SampledSignal(np.zeros(16), dx=0.1)
    with pytest.raises(DomainError):
        modulus_of_smoothness(s, 0.05, 1)


def test_modulus_of_lacunary_cosine_sum():
    n, dx = 2**14, 2.0 / 2**14
    x = dx * np.arange(n)
    f = sum(2.0 ** (-k / 2) * np.cos(2.0**k * np.pi * x) for k in range(14))
    w = modulus_of_smoothness(SampledSignal(f, 0.0, dx), 2.0**-8, 1)
    assert 0.5 * 2**-4 <= w <= 8 * 2**-4


def test_modulus_matches_direct_scan(rng):
    s = SampledSignal(rng.standard_normal(40), dx=0.05)
    for M in (1, 2):
        direct = max(np.max(np.abs(finite_difference(s, h, M))) for h in range(1, 5))
        assert modulus_of_smoothness(s, 0.2, M) == direct


def test_shift_sups_backends_agree(rng):
    s = SampledSignal(rng.standard_normal(300), dx=0.01, extension="clamp")
    a = shift_sups(s, 2, 40, backend="python")
    from uniholder import kernels

    if kernels.BACKEND == "cython":
        np.testing.assert_array_equal(a, shift_sups(s, 2, 40, backend="cython"))


# ---------------------------------------------------------- profiles


def test_profile_of_line():
    s = SampledSignal(np.arange(1024) / 1024, 0.0, 1 / 1024, "clamp")
    p = modulus_profile(s, 1, (1, 4))
    np.testing.assert_allclose(p.omega, [1 / 2, 1 / 4, 1 / 8, 1 / 16], atol=1e-12)
    np.testing.assert_allclose(p.radii, [1 / 2, 1 / 4, 1 / 8, 1 / 16])


def test_profile_of_zero():
    p = modulus_profile(SampledSignal(np.zeros(256), dx=1 / 256), 2, (2, 6))
    assert np.all(p.omega == 0.0)


def test_profile_range_checks():
    s = SampledSignal(np.zeros(64), dx=1 / 64)
    with pytest.raises(DomainError):
        modulus_profile(s, 1, (3, 2))
    with pytest.raises(DomainError):
        modulus_profile(s, 1, (2, 8))


def test_weierstrass_profile_slope(weierstrass_half):
    p = modulus_profile(weierstrass_half, 1, (2, 12))
    slope = -np.polyfit(p.js, np.log2(p.omega), 1)[0]
    assert slope == pytest.approx(0.5, abs=0.05)


@given(data=arrays(np.float64, st.integers(200, 260), elements=finite), M=st.integers(1, 3))
def test_profile_monotone_and_doubling(data, M):
    s = SampledSignal(data, dx=1 / 64)
    p = modulus_profile(s, M, (1, 6))
    w = p.omega
    assert np.all(w >= 0)
    assert np.all(w[:-1] >= w[1:])
    # ω(2r) <= 2^M ω(r) in exact arithmetic; leave room for round-off
    assert np.all(w[:-1] <= 2**M * w[1:] * (1 + 1e-9) + 1e-9 * np.max(np.abs(data)))


def test_profile_roundtrip():
    p = ModulusProfile(2, np.arange(3, 6), np.array([0.5, 0.25, 0.125]))
    q = ModulusProfile.from_dict(p.to_dict())
    assert q.order_M == 2
    np.testing.assert_array_equal(q.js, p.js)
    np.testing.assert_array_equal(q.omega, p.omega)


# ---------------------------------------------------------- oracles


def power_profile(alpha, js=np.arange(1, 21)):
    return ModulusProfile(1, js, 2.0 ** (-alpha * js))


def test_oracle_exact_power_law():
    p = power_profile(0.3)
    assert oracle_lower_index(p).value == pytest.approx(0.3, abs=1e-12)
    assert oracle_upper_index(p).value == pytest.approx(0.3, abs=1e-12)


@pytest.mark.parametrize("convention", ["chord", "envelope"])
def test_oracle_mixed_slopes(convention):
    js = np.arange(1, 21)
    p = ModulusProfile(1, js, np.where(js % 2 == 0, 2.0 ** (-0.3 * js), 2.0 ** (-0.6 * js)))
    assert oracle_lower_index(p, convention=convention).value == pytest.approx(0.3, abs=1e-12)
    assert oracle_upper_index(p, convention=convention).value == pytest.approx(0.6, abs=1e-12)


def test_oracle_weierstrass(weierstrass_half):
    p = modulus_profile(weierstrass_half, 1, (4, 10))
    assert oracle_lower_index(p).value == pytest.approx(0.5, abs=0.05)
    assert oracle_upper_index(p).value == pytest.approx(0.5, abs=0.05)


def test_oracle_skips_zero_scales():
    js = np.arange(1, 9)
    om = 2.0 ** (-0.4 * js)
    om[[2, 5]] = 0.0
    est = oracle_lower_index(ModulusProfile(1, js, om))
    assert est.diagnostics["skipped"] == [3, 6]
    assert est.value == pytest.approx(0.4)


def test_oracle_empty_window_raises():
    with pytest.raises(EstimationError):
        oracle_lower_index(ModulusProfile(1, np.arange(1, 5), np.zeros(4)))
    with pytest.raises(EstimationError):
        oracle_upper_index(power_profile(0.3), window=(30, 40))


@given(y=arrays(np.float64, st.integers(3, 20), elements=st.floats(-30, 0)))
def test_oracle_lower_not_above_upper(y):
    js = np.arange(1, y.size + 1)
    p = ModulusProfile(1, js, 2.0**y)
    for conv in ("envelope", "chord", "regression"):
        assert oracle_lower_index(p, convention=conv).value <= oracle_upper_index(p, convention=conv).value + 1e-12


@given(alpha=st.floats(0.01, 4.9), lo=st.integers(1, 10), width=st.integers(2, 20))
def test_oracle_power_law_is_exact(alpha, lo, width):
    p = power_profile(alpha, np.arange(lo, lo + width))
    assert oracle_lower_index(p).value == pytest.approx(alpha, abs=1e-9)
    assert oracle_upper_index(p).value == pytest.approx(alpha, abs=1e-9)


def test_estimate_roundtrip_and_validation():
    est = oracle_upper_index(power_profile(0.3))
    back = IndexEstimate.from_dict(est.to_dict())
    assert back.value == est.value and back.fit_window == est.fit_window
    np.testing.assert_array_equal(back.logdata, est.logdata)
    with pytest.raises(ValueError):
        IndexEstimate(0.1, "bogus", (1, 2), [])
    with pytest.raises(EstimationError):
        IndexEstimate(float("inf"), "oracle_lower", (1, 2), [])


def test_select_order_raises_until_below_margin():
    seen = []

    def estimate(M):
        seen.append(M)
        return [min(1.7, M - 0.05)]

    M, res, saturated = select_order(estimate)
    assert M == 2 and seen == [1, 2] and not saturated and res == [1.7]
    M, _, saturated = select_order(lambda M: [M])
    assert M == 5 and saturated
