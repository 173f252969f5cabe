import pytest

pytest.importorskip("matplotlib")

from hermite_lab.csvio import write_results
from hermite_lab.plotting import plot

COLS = ("experiment", "d", "p", "N", "m", "regime", "value", "slope", "residual")


def table(tmp_path, rows, name="results.csv"):
    return write_results(tmp_path / name, rows, COLS, 0, "h")


def rows_power(p, slope, ms=(1,)):
    return [{"experiment": "x", "d": 1, "p": p, "N": N, "m": m, "value": N ** slope}
            for m in ms for N in (64, 128, 256, 512)]


def test_loglog_byte_stable(tmp_path):
    src = table(tmp_path, rows_power(4, 0.25) + rows_power(6, 0.5))
    a = plot(src, "loglog_fit", tmp_path / "a.svg", y="value", group=("p",)).read_bytes()
    b = plot(src, "loglog_fit", tmp_path / "b.svg", y="value", group=("p",)).read_bytes()
    assert a == b and a.startswith(b"<?xml")


def test_two_points_get_a_slope(tmp_path, monkeypatch):
    from hermite_lab import plotting
    setup = plotting._setup

    def text_glyphs():
        plt = setup()
        plt.rcParams["svg.fonttype"] = "none"
        return plt

    # glyphs are normally paths; render text as text so the annotation is searchable
    monkeypatch.setattr(plotting, "_setup", text_glyphs)
    rows = [{"N": 64, "value": 2.0}, {"N": 256, "value": 4.0}]
    out = plot(table(tmp_path, rows), "loglog_fit", tmp_path / "p.svg", y="value")
    assert "slope 0.500" in out.read_text()


def test_heatmap(tmp_path):
    src = table(tmp_path, rows_power(4, 0.25, ms=(1, 8, 64)))
    out = plot(src, "heatmap", None, y="value")
    assert out.name == "heatmap.svg" and out.stat().st_size > 1000


def test_empty_values_warn(tmp_path):
    rows = rows_power(4, 0.25) + [{"experiment": "x", "N": 1024}]
    with pytest.warns(UserWarning, match="skipped"):
        plot(table(tmp_path, rows), "loglog_fit", tmp_path / "w.svg", y="value")


def test_schema_mismatch(tmp_path):
    src = table(tmp_path, rows_power(4, 0.25))
    with pytest.raises(ValueError, match="schema"):
        plot(src, "loglog_fit", y="ratio")
    with pytest.raises(ValueError):
        plot(src, "contour")
