import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hermite_lab import SampledField
from hermite_lab.csvio import (SCHEMAS, format_value, read_results, read_sampled_field, read_spectral_field,
                               results_text, write_results, write_sampled_field, write_sector_cover,
                               write_spectral_field)
from hermite_lab.fields import SpectralField
from hermite_lab.fourier import build_sector_cover


def test_format_value():
    assert format_value(1 / 3) == "0.333333"
    assert format_value(12345678.0) == "1.23457e+07"
    assert format_value(3) == "3"
    assert format_value(True) == "true"
    assert format_value(float("inf")) == "inf" and format_value(float("nan")) == "nan"
    assert format_value(None) == ""


def test_results_round_trip(tmp_path):
    rows = [{"N": 64, "x0_norm": 4096.0, "sample_sup_E": 0.125, "sample_sup_dE": 1 / 3, "residual_max": 1e-9}]
    p = write_results(tmp_path / "r.csv", rows, SCHEMAS["phase_sweep"], 5, "abc")
    header, back = read_results(p)
    assert header == list(SCHEMAS["phase_sweep"]) + ["seed", "config_hash"]
    assert back[0]["sample_sup_dE"] == "0.333333" and back[0]["seed"] == "5"


def test_results_reject_extra_columns():
    with pytest.raises(ValueError):
        results_text([{"N": 1, "bogus": 2}], ("N",), 0, "h")


def test_spectral_field_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    c = SpectralField(rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5)))
    back = read_spectral_field(write_spectral_field(tmp_path / "c.csv", c))
    np.testing.assert_array_equal(back.coeffs, c.coeffs)


@settings(max_examples=10, deadline=None)
@given(seed=st.integers(0, 1000), timed=st.booleans())
def test_sampled_field_round_trip(tmp_path_factory, seed, timed):
    rng = np.random.default_rng(seed)
    x = np.linspace(-1, 1, 4)
    y = np.linspace(0, 2, 3)
    if timed:
        t = np.array([0.0, 0.5])
        f = SampledField((x, y), rng.normal(size=(2, 4, 3)) + 1j * rng.normal(size=(2, 4, 3)), times=t)
    else:
        f = SampledField((x, y), rng.normal(size=(4, 3)) + 0j)
    path = tmp_path_factory.mktemp("f") / "f.csv"
    back = read_sampled_field(write_sampled_field(path, f))
    np.testing.assert_array_equal(back.values, f.values)
    for a, b in zip(back.axes, f.axes):
        np.testing.assert_array_equal(a, b)


def test_sector_cover_rows(tmp_path):
    cover = build_sector_cover(0.5, 0.5, 2)
    header, rows = read_results(write_sector_cover(tmp_path / "s.csv", cover))
    assert header == list(SCHEMAS["sector_cover"])
    assert len(rows) == len(cover)
