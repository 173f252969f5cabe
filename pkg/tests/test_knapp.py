import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hermite_lab.fourier import extension_slices, FrequencyWindow, forward
from hermite_lab.knapp import (
    anisotropic_data,
    curvature_spectrum,
    isotropic_data,
    knapp_box,
    knapp_grid,
    knapp_ratio,
    pointwise_ratio,
    regime_box,
    regime_of,
    required_exponent,
    transport_correlation,
)


def fd_hessian_eigs(xi, m, h=1e-4):
    """Dense eigensolve of the central-difference Hessian of sqrt(|xi|^2 + m^2)."""
    f = lambda z: np.sqrt(z @ z + m * m)
    d = xi.size
    H = np.empty((d, d))
    for i in range(d):
        for j in range(d):
            ei = np.zeros(d)
            ej = np.zeros(d)
            ei[i] = h
            ej[j] = h
            H[i, j] = (f(xi + ei + ej) - f(xi + ei - ej) - f(xi - ei + ej) + f(xi - ei - ej)) / (4 * h * h)
    return np.linalg.eigvalsh(H), H


def test_box_examples():
    assert regime_box(64, 1.0) == pytest.approx((1 / 8, 1 / 8))
    radial, angular = regime_box(64, 0.5)
    assert radial == pytest.approx(0.25) and angular == pytest.approx(0.125)
    assert knapp_box(64, 0.0) == (0.75, 0.125)
    with pytest.raises(ValueError):
        regime_box(64, 0.01)


def test_curvature_cone():
    c = curvature_spectrum(np.array([1.0, 0.0]), 0.0)
    assert c["radial"] == 0 and c["angular"] == 1 and c["angular_multiplicity"] == 1


def test_curvature_unit_mass():
    c = curvature_spectrum(np.array([0.6, 0.8]), 1.0)
    assert c["radial"] == pytest.approx(2 ** -1.5, rel=1e-15)
    assert c["angular"] == pytest.approx(2 ** -0.5, rel=1e-15)
    eig, _ = fd_hessian_eigs(np.array([0.6, 0.8]), 1.0)
    np.testing.assert_allclose(np.sort(eig), [2 ** -1.5, 2 ** -0.5], rtol=1e-6)


def test_curvature_rejects_origin():
    with pytest.raises(ValueError):
        curvature_spectrum(np.zeros(2), 0.0)


def test_curvature_matches_eigensolve():
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(100):
        d = int(rng.integers(2, 4))
        xi = rng.normal(size=d)
        xi *= rng.uniform(0.5, 2.0) / np.linalg.norm(xi)
        m = 2.0 ** rng.uniform(-3, 3)
        c = curvature_spectrum(xi, m)
        want = np.sort([c["radial"]] + [c["angular"]] * (d - 1))
        eig, _ = fd_hessian_eigs(xi, m)
        worst = max(worst, np.abs(np.sort(eig) - want).max() / want.max())
    assert worst < 1e-5


def test_curvature_scaling_slopes():
    e1 = np.array([1.0, 0.0])
    lo = 2.0 ** np.arange(-6, -3)
    hi = 2.0 ** np.arange(4, 7)

    def slope(ms, key):
        return np.polyfit(np.log(ms), np.log([curvature_spectrum(e1, m)[key] for m in ms]), 1)[0]

    # m^2 wedge 1/m and 1/m wedge 1 have log-log slopes 2, -1 and 0, -1 at the ends
    assert slope(lo, "radial") == pytest.approx(2.0, abs=0.01)
    assert slope(hi, "radial") == pytest.approx(-1.0, abs=0.01)
    assert slope(lo, "angular") == pytest.approx(0.0, abs=0.01)
    assert slope(hi, "angular") == pytest.approx(-1.0, abs=0.01)


def test_required_exponent_examples():
    for reg in ("elliptic", "wave", "pointwise", "conjecture_hermite"):
        for d in (1, 2, 3):
            assert required_exponent(d, 2.0, reg) == 0
    assert required_exponent(2, 6.0, "elliptic") == pytest.approx(0.5)
    assert required_exponent(2, 6.0, "wave") == pytest.approx(1 / 6)
    assert required_exponent(1, 4.0, "pointwise") == pytest.approx(0.25)
    assert required_exponent(1, np.inf, "pointwise") == pytest.approx(0.5)
    with pytest.raises(ValueError):
        required_exponent(1, 4.0, "parabolic")


@settings(max_examples=30, deadline=None)
@given(d=st.integers(1, 4), reg=st.sampled_from(["elliptic", "wave", "pointwise"]))
def test_required_exponent_piecewise_linear(d, reg):
    q = np.linspace(0, 0.5, 401)
    v = np.array([required_exponent(d, 1 / qq if qq > 0 else np.inf, reg) for qq in q])
    second = np.abs(np.diff(v, 2))
    # kinks are isolated: at most one grid cell with curvature
    assert np.count_nonzero(second > 1e-12) <= 2
    assert np.abs(np.diff(v)).max() < 0.01


def test_regime_tags_partition():
    for N in (16.0, 64.0, 256.0):
        for m in 2.0 ** np.arange(-4, 16):
            tag = regime_of(N, m)
            m2 = m * m
            expect = "wave" if m2 <= N else "elliptic" if m2 <= N ** 3 else "stationary"
            assert tag == expect
    assert regime_of(16, 4.0) == "wave"
    assert regime_of(16, 64.0) == "elliptic"


@pytest.mark.parametrize("mu", [1.0, 0.25, 4.0])
def test_anisotropic_support(mu):
    N = 64.0
    grid = knapp_grid(2, N, mu, travel=4.0)
    g = anisotropic_data(grid, N, mu)
    fh = forward(grid, g.values)
    xi = grid.freq_mesh()
    radial, angular = knapp_box(N, mu)
    out = (np.abs(xi[0] - 1) > radial) | (np.abs(xi[1]) > angular)
    assert np.abs(fh[out]).max() < 1e-10 * np.abs(fh).max()


def test_isotropic_refocuses_at_origin():
    N = 32.0
    grid = knapp_grid(2, N, 1.0, dx=0.5)
    g = isotropic_data(grid, 1.0, focus_time=N)
    _, u = next(extension_slices(g, 1.0, FrequencyWindow("annulus"), [N]))
    a = np.abs(u[0])
    i, j = np.unravel_index(np.argmax(a), a.shape)
    assert abs(grid.axis[i]) <= grid.dx and abs(grid.axis[j]) <= grid.dx
    assert a.max() > 10 * np.abs(g.values).max()


@pytest.mark.parametrize("N", [64.0, 256.0])
def test_knapp_ratio_p2_is_one(N):
    assert knapp_ratio(N, 1.0, 2.0) == pytest.approx(1.0, abs=1e-6)


def test_pointwise_ratio_p2_is_one():
    assert pointwise_ratio(128.0, 1.0, 2.0) == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("mu", [1.0, 0.125, 4.0])
def test_transport_correlation(mu):
    N = 64.0
    for t in (N / 4, N):
        assert transport_correlation(N, mu, t) >= 0.95


def test_transport_degrades_with_larger_box():
    N = 256.0
    assert transport_correlation(N, 1.0, N, scale=2.0) < transport_correlation(N, 1.0, N)
