import pytest

from hermite_lab import cli
from hermite_lab.csvio import read_results

HV = "[experiment]\nname = hermite-verify\n\n[params]\nn_max = 48\neig_max = 40\n"


def write(tmp_path, text, name="c.ini"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_hermite_verify_passes(tmp_path):
    out = tmp_path / "o"
    assert cli.main(["hermite-verify", "--config", write(tmp_path, HV), "--out", str(out)]) == 0
    header, rows = read_results(out / "results.csv")
    checks = {r["check"] for r in rows}
    assert {"orthonormality", "eigen_relation"} <= checks
    assert all(r["passed"] == "true" for r in rows)
    assert "passed 4 of 4" in (out / "manifest.txt").read_text()
    assert (out / "failures.csv").read_text().count("\n") == 1


def test_results_deterministic(tmp_path):
    cfg = write(tmp_path, "[experiment]\nname = lens-check\nseed = 3\n[lattice]\ntrials = 2\n")
    outs = []
    for k, threads in enumerate(("1", "4")):
        o = tmp_path / f"o{k}"
        with pytest.MonkeyPatch.context() as mp:
            mp.setenv("LAB_THREADS", threads)
            assert cli.main(["lens-check", "--config", cfg, "--out", str(o)]) == 0
        outs.append((o / "results.csv").read_bytes())
    assert outs[0] == outs[1]


def test_empty_lattice_exits_2(tmp_path, capsys):
    cfg = write(tmp_path, HV + "[lattice]\nd =\n")
    assert cli.main(["hermite-verify", "--config", cfg, "--out", str(tmp_path / "o")]) == 2
    assert "lattice.d" in capsys.readouterr().err


def test_unknown_key_exits_2(tmp_path, capsys):
    cfg = write(tmp_path, HV)
    assert cli.main(["hermite-verify", "--config", cfg, "--set", "params.colour=red"]) == 2
    assert "params.colour" in capsys.readouterr().err


def test_usage_errors(tmp_path):
    assert cli.main(["no-such-experiment", "--config", write(tmp_path, HV)]) == 2
    assert cli.main(["hermite-verify"]) == 2
    assert cli.main(["hermite-verify", "--config", str(tmp_path / "missing.ini")]) == 2
    assert cli.main(["plot"]) == 2


def test_failed_check_exits_1(tmp_path):
    out = tmp_path / "o"
    code = cli.main(["hermite-verify", "--config", write(tmp_path, HV), "--out", str(out),
                     "--set", "tolerance.orthonormality=0"])
    assert code == 1
    assert "orthonormality" in (out / "failures.csv").read_text()


def test_worker_count(monkeypatch):
    monkeypatch.setenv("LAB_THREADS", "3")
    assert cli.worker_count(10) == 3 and cli.worker_count(2) == 2
    monkeypatch.setenv("LAB_THREADS", "0")
    with pytest.raises(ValueError):
        cli.worker_count(4)


def test_plot_subcommand(tmp_path):
    pytest.importorskip("matplotlib")
    out = tmp_path / "o"
    cli.main(["hermite-verify", "--config", write(tmp_path, HV), "--out", str(out)])
    # check tables have no N column
    assert cli.main(["plot", str(out / "results.csv"), "--out", str(tmp_path / "x.svg")]) == 2
    o2 = tmp_path / "o2"
    cli.main(["eikonal-scan", "--config", write(tmp_path, "[experiment]\nname = eikonal-scan\n"
                                                "[lattice]\nN = 16..128\n[params]\nqueries = 50\n"),
              "--out", str(o2)])
    svg = tmp_path / "e.svg"
    assert cli.main(["plot", str(o2 / "results.csv"), "--out", str(svg)]) == 2
    assert cli.main(["plot", str(o2 / "results.csv"), "--y", "sample_sup_E", "--out", str(svg)]) == 0
    assert svg.exists()
