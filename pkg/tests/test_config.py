import pytest

from hermite_lab.config import ConfigError, load_config, parse_lattice, resolve_mass

BASE = """
[experiment]
name = smoothing-fit
seed = 7

[lattice]
N = 64..512
p = 2, 4, inf
"""


def test_parse_lattice_ranges():
    assert parse_lattice("N", "64..512") == (64, 128, 256, 512)
    assert parse_lattice("N", "16,32") == (16, 32)
    half = parse_lattice("N", "64..256:2")
    assert len(half) == 5 and half[1] == pytest.approx(64 * 2 ** 0.5)
    assert parse_lattice("m", "1/sqrtN, 1, N") == ("1/sqrtN", 1, "N")
    assert parse_lattice("p", "4, inf")[1] == float("inf")


@pytest.mark.parametrize("key, text", [("N", ""), ("N", "64..100"), ("N", "abc"), ("d", "1.5"),
                                       ("N", "0..64")])
def test_parse_lattice_rejects(key, text):
    with pytest.raises(ConfigError):
        parse_lattice(key, text)


def test_resolve_mass_tokens():
    assert resolve_mass("N", 64) == 64
    assert resolve_mass("sqrtN", 64) == 8
    assert resolve_mass("1/sqrtN", 64) == pytest.approx(0.125)
    assert resolve_mass(2, 64) == 2.0


def test_load_config_resolves():
    cfg = load_config(BASE)
    assert cfg.experiment == "smoothing-fit" and cfg.seed == 7
    assert cfg.lattice["N"] == (64, 128, 256, 512)
    assert cfg.lattice["d"] == (1,)
    assert cfg.params["data_gen"] == "max"
    assert len(cfg.points(("p", "N"))) == 12


def test_overrides_and_types():
    cfg = load_config(BASE, ["params.draws=3", "tolerance.consistency=0.2", "lattice.m=1,N"])
    assert cfg.params["draws"] == 3 and cfg.tolerance["consistency"] == 0.2
    assert cfg.lattice["m"] == (1, "N")
    with pytest.raises(ConfigError):
        load_config(BASE, ["params.draws=many"])
    with pytest.raises(ConfigError):
        load_config(BASE, ["draws=3"])


@pytest.mark.parametrize("extra, key", [
    ("[params]\nbogus = 1\n", "params.bogus"),
    ("[lattice]\nq = 1\n", "lattice.q"),
    ("[other]\nx = 1\n", "other"),
])
def test_unknown_keys_named(extra, key):
    text = "[experiment]\nname = smoothing-fit\n" + extra
    with pytest.raises(ConfigError) as exc:
        load_config(text)
    assert exc.value.key == key


def test_unknown_experiment():
    with pytest.raises(ConfigError):
        load_config("[experiment]\nname = nope\n")
    with pytest.raises(ConfigError):
        load_config(BASE, experiment="knapp-scan")


def test_hash_is_stable_and_sensitive():
    a = load_config(BASE)
    b = load_config(BASE + "\n# comment\n")
    c = load_config(BASE, ["experiment.seed=8"])
    assert a.config_hash == b.config_hash
    assert a.config_hash != c.config_hash
    # output location does not enter the hash
    assert load_config(BASE, out="/tmp/elsewhere").config_hash == a.config_hash
