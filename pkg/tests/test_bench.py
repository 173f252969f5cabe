import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hermite_lab import SampledField
from hermite_lab.bench.bochner import bochner_riesz_ratio, focusing_data
from hermite_lab.bench.decoupling import decoupling_constant, decoupling_cover
from hermite_lab.bench.fitting import exponent_fit, loglog_fit
from hermite_lab.bench.kakeya import (_grid, bush, bush_ratio, kakeya_directions, kakeya_maximal_2d,
                                      tube_indicator)
from hermite_lab.bench.smoothing import (coherent_state, fit_smoothing_exponent, hermite_smoothing_ratio,
                                         pointwise_fixed_time, smoothing_ratio)
from hermite_lab.bench.squarefn import interval_length, square_function_constant_1d
from hermite_lab.spectral import HermiteBasis


# -- fitting -----------------------------------------------------------------

def test_exponent_fit_exact_power():
    Ns = 2.0 ** np.arange(4, 9)
    fit = exponent_fit(Ns, 3 * Ns ** 0.25)
    assert fit.slope == pytest.approx(0.25, abs=1e-12)
    assert fit.max_residual < 1e-12
    assert fit.predict(64.0) == pytest.approx(3 * 64 ** 0.25)


def test_exponent_fit_refuses():
    with pytest.raises(ValueError):
        exponent_fit([16, 32, 64], [1, 2, 3])
    with pytest.raises(ValueError):
        exponent_fit([16, 32, 64, 128], [1, 2, 0, 3])
    fit = exponent_fit([16, 32, 64, 128], [1, 2, 3, 4])
    with pytest.raises(ValueError):
        fit.predict(1024.0)


def test_loglog_fit_two_points():
    fit = loglog_fit([2, 8], [3, 12])
    assert fit.slope == pytest.approx(1.0)
    with pytest.raises(ValueError):
        loglog_fit([1], [1])


@settings(max_examples=30, deadline=None)
@given(s=st.floats(-2, 2), c=st.floats(0.1, 10))
def test_exponent_fit_recovers_slope(s, c):
    Ns = 2.0 ** np.arange(3, 10)
    assert exponent_fit(Ns, c * Ns ** s).slope == pytest.approx(s, abs=1e-9)


# -- smoothing ---------------------------------------------------------------

def test_smoothing_p2_slope_is_half():
    fit = fit_smoothing_exponent(2.0, 1, lambda N: 1 / N, [64, 128, 256, 512])
    assert fit.slope == pytest.approx(0.5, abs=1e-9)


def test_smoothing_s_convention():
    Ns = [64, 128, 256, 512]
    a = fit_smoothing_exponent(4.0, 1, lambda N: 1 / N, Ns)
    b = fit_smoothing_exponent(4.0, 1, lambda N: 1 / N, Ns, convention="s")
    assert b.slope == pytest.approx(a.slope - 0.25, abs=1e-12)
    with pytest.raises(ValueError):
        fit_smoothing_exponent(4.0, 1, 0.0, Ns, convention="t")


def test_smoothing_d1_p4_unit_mass():
    fit = fit_smoothing_exponent(4.0, 1, lambda N: 1 / N, [64, 128, 256, 512, 1024], "max")
    assert 0.25 - 0.05 <= fit.slope <= 0.25 + 0.15


@pytest.mark.slow
def test_smoothing_d2_p6_wave():
    # wave regime: s = (d-1)(1/2 - 1/p) - 1/p = 1/6, reported s + 1/p = 1/3
    fit = fit_smoothing_exponent(6.0, 2, 0.0, [16, 32, 64, 128], "max")
    assert abs(fit.slope - 1 / 3) <= 0.1


def test_smoothing_random_draws_reproducible():
    a = smoothing_ratio(64, 0.5, 4.0, data_gen="random", draws=3, rng=np.random.default_rng(1))
    b = smoothing_ratio(64, 0.5, 4.0, data_gen="random", draws=3, rng=np.random.default_rng(1))
    assert a == b
    with pytest.raises(ValueError):
        smoothing_ratio(64, 0.5, 4.0, data_gen="gauss")


def test_pointwise_p2():
    assert pointwise_fixed_time(256, 256, 2.0) == pytest.approx(1.0, abs=1e-8)
    with pytest.raises(ValueError):
        pointwise_fixed_time(256, 256, 2.0, data_gen="random")


def test_pointwise_slopes():
    Ns = [64, 128, 256, 512, 1024]
    for p, want, tol in ((4.0, 0.25, 0.05), (np.inf, 0.5, 0.07)):
        fit = exponent_fit(Ns, [pointwise_fixed_time(N, N, p) for N in Ns])
        assert abs(fit.slope - want) <= tol


def test_coherent_state_normalised():
    c = coherent_state(400, 3.0, 10.0)
    assert c.norm() == pytest.approx(1.0, abs=1e-12)
    b = HermiteBasis(1, 40)
    direct = b.analyze_function(lambda x: np.pi ** -0.25 * np.exp(-(x - 1.0) ** 2 / 2 + 2j * (x - 0.5)))
    np.testing.assert_allclose(coherent_state(40, 1.0, 2.0).coeffs, direct.coeffs, atol=1e-10)


def test_hermite_small_N_bounded():
    for N in (1, 2, 3):
        assert 0.1 < hermite_smoothing_ratio(N, 4.0) < 10


def test_hermite_p2_slope_flat():
    Ns = [4, 8, 16, 32]
    fit = exponent_fit(Ns, [hermite_smoothing_ratio(N, 2.0) for N in Ns])
    assert abs(fit.slope) <= 0.02


# -- square function ---------------------------------------------------------

def test_interval_lengths():
    assert interval_length(256, 1.0) == pytest.approx(1 / 16)
    assert interval_length(256, 16.0) == pytest.approx(0.25)
    assert interval_length(256, 1 / 16) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        interval_length(256, 100.0)


def test_square_function_single_interval():
    assert square_function_constant_1d(256, 1.0, single=True)["ratio"] == pytest.approx(1.0, abs=1e-10)


def test_square_function_at_least_single():
    r = square_function_constant_1d(256, 1.0, trials=2)
    assert r["ratio"] >= 1 - 1e-6


def test_square_function_interval_length_sensitivity():
    right = square_function_constant_1d(256, 1.0, trials=2)["ratio"]
    short = square_function_constant_1d(256, 1.0, trials=2, length_factor=0.25)["ratio"]
    long = square_function_constant_1d(256, 1.0, trials=2, length_factor=4.0)["ratio"]
    # too many pieces inflate the constant; merging pieces only lowers it
    assert short > right * 1.2
    assert long < right


# -- decoupling --------------------------------------------------------------

def test_decoupling_cover_regimes():
    N = 64.0
    c0 = decoupling_cover(N, 0.0)
    assert (c0.alpha, c0.beta) == (1.0, pytest.approx(1 / 8))
    c1 = decoupling_cover(N, 0.5)
    assert c1.alpha == pytest.approx(0.25) and c1.beta == pytest.approx(1 / 8)
    c2 = decoupling_cover(N, 4.0)
    assert c2.alpha == pytest.approx(0.25) and c2.beta == pytest.approx(0.25)
    with pytest.raises(ValueError):
        decoupling_cover(1.0, 1.0)


def test_decoupling_small():
    r = decoupling_constant(32, 1.0, 4.0, trials=2, rng=np.random.default_rng(0))
    assert r["single"] <= 1 + 1e-6
    assert r["ratio"] >= r["single"] - 1e-6
    with pytest.raises(ValueError):
        decoupling_constant(32, 1.0, np.inf)
    with pytest.raises(ValueError):
        decoupling_constant(32, 1.0, 4.0, d=3)


def test_decoupling_p2_near_orthogonal():
    r = decoupling_constant(64, 1.0, 2.0, trials=2, rng=np.random.default_rng(0))
    assert r["ratio"] <= 1.05


# -- kakeya ------------------------------------------------------------------

def test_directions():
    assert kakeya_directions(64).size == 8
    assert kakeya_directions(65).size == 9


def test_kakeya_constant_function():
    N = 64.0
    x, _ = _grid(N)
    F = SampledField((x, x), np.ones((x.size, x.size)))
    MF = kakeya_maximal_2d(F, N).values
    inner = np.abs(x) <= N / 2
    assert np.abs(MF[np.ix_(inner, inner)] - 1).max() < 1e-12


def test_kakeya_single_tube():
    N = 64.0
    x, _ = _grid(N)
    T = tube_indicator(x, N, kakeya_directions(N)[2])
    MF = kakeya_maximal_2d(SampledField((x, x), T), N).values
    core = tube_indicator(x, 0.8 * N, kakeya_directions(N)[2])
    core *= tube_indicator(x, N, kakeya_directions(N)[2], center=(0, 0))
    assert np.all(MF[core > 0] >= 0.7)
    assert np.sqrt(np.sum(MF ** 2)) >= np.sqrt(np.sum(T ** 2))


def test_kakeya_refuses_small_grid():
    x = np.arange(32.0)
    with pytest.raises(ValueError):
        kakeya_maximal_2d(SampledField((x, x), np.ones((32, 32))), 64.0)


@settings(max_examples=8, deadline=None)
@given(seed=st.integers(0, 2 ** 16), lam=st.floats(0.1, 10))
def test_kakeya_sublinear_and_homogeneous(seed, lam):
    N = 16.0
    x, _ = _grid(N)
    rng = np.random.default_rng(seed)
    F = rng.uniform(size=(x.size, x.size))
    G = rng.uniform(size=(x.size, x.size))
    M = lambda A: kakeya_maximal_2d(SampledField((x, x), A), N).values
    assert np.max(M(F + G) - M(F) - M(G)) <= 1e-12
    np.testing.assert_allclose(M(lam * F), lam * M(F), rtol=1e-12)


def test_bush_ratio_bounded():
    r = bush_ratio(64.0)
    assert r["directions"] == 8
    assert r["ratio"] >= 1
    assert bush(64.0).values.max() == 8


# -- bochner-riesz -----------------------------------------------------------

def test_focusing_data_is_sign_function():
    f = focusing_data(64.0)
    assert set(np.unique(f)) <= {-1.0, 0.0, 1.0}


def test_bochner_riesz_l2_contraction():
    r = bochner_riesz_ratio(128.0, [2.0])[0]
    assert 0 < r <= 1 + 1e-9


def test_bochner_riesz_ratio_exceeds_one_at_large_p():
    r4, r16 = bochner_riesz_ratio(1024.0, [4.0, 16.0])
    assert r16 > r4
