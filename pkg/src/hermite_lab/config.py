"""Experiment configuration: ``[section]`` headers with ``key = value`` lines.

Sections are ``experiment`` (name, seed, out, plot), ``lattice`` (the swept
parameters), ``params`` (experiment options) and ``tolerance`` (assertion
thresholds). Keys are validated against the defaults of the named
experiment; anything else is rejected with the offending key.

Lattice values are comma-separated lists. ``a..b`` expands to the doubling
sequence ``a, 2a, ..., b`` and ``a..b:k`` to ``k`` geometric points per
doubling. The mass lattice also accepts the tokens ``N``, ``sqrtN`` and
``1/sqrtN``, resolved against each ``N``.
"""
from __future__ import annotations

import configparser
import hashlib
from dataclasses import dataclass, field

import numpy as np

__all__ = ["ConfigError", "ExperimentConfig", "parse_lattice", "resolve_mass", "load_config",
           "SECTIONS", "LATTICE_KEYS"]

SECTIONS = ("experiment", "lattice", "params", "tolerance")
LATTICE_KEYS = ("d", "p", "N", "m", "trials")
MASS_TOKENS = ("N", "sqrtN", "1/sqrtN")


class ConfigError(ValueError):
    """Invalid configuration; ``key`` names the offending entry."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


def _number(text: str, key: str) -> float:
    t = text.strip()
    if t.lower() in ("inf", "infinity"):
        return float("inf")
    try:
        return float(t)
    except ValueError:
        raise ConfigError(key, f"not a number: {text!r}") from None


def _expand_range(text: str, key: str) -> list:
    body, _, per = text.partition(":")
    lo_s, hi_s = body.split("..", 1)
    lo, hi = _number(lo_s, key), _number(hi_s, key)
    k = int(_number(per, key)) if per else 1
    if lo <= 0 or hi < lo or k < 1:
        raise ConfigError(key, f"bad range {text!r}")
    steps = int(round(k * np.log2(hi / lo)))
    if abs(lo * 2.0 ** (steps / k) - hi) > 1e-9 * hi:
        raise ConfigError(key, f"range end {hi_s} is not reached from {lo_s} by doubling")
    return [lo * 2.0 ** (j / k) for j in range(steps + 1)]


def _tidy(v: float):
    return int(v) if float(v).is_integer() and abs(v) < 2 ** 53 else float(v)


def parse_lattice(key: str, text: str) -> tuple:
    """Parse one lattice entry into a tuple of numbers (and mass tokens)."""
    items = [s.strip() for s in text.split(",") if s.strip()]
    if not items:
        raise ConfigError(f"lattice.{key}", "empty lattice")
    out = []
    for it in items:
        if key == "m" and it in MASS_TOKENS:
            out.append(it)
        elif ".." in it:
            out.extend(_tidy(v) for v in _expand_range(it, f"lattice.{key}"))
        else:
            out.append(_tidy(_number(it, f"lattice.{key}")))
    if key in ("d", "trials") and any(not isinstance(v, int) for v in out):
        raise ConfigError(f"lattice.{key}", "must be integers")
    return tuple(out)


def resolve_mass(m, N: float) -> float:
    """Numeric mass for a lattice entry at scale ``N``."""
    if m == "N":
        return float(N)
    if m == "sqrtN":
        return float(np.sqrt(N))
    if m == "1/sqrtN":
        return float(N ** -0.5)
    return float(m)


def _coerce(default, text: str, key: str):
    """Convert ``text`` to the type of ``default``."""
    t = text.strip()
    if isinstance(default, bool):
        if t.lower() in ("1", "true", "yes", "on"):
            return True
        if t.lower() in ("0", "false", "no", "off"):
            return False
        raise ConfigError(key, f"not a boolean: {text!r}")
    if isinstance(default, int):
        try:
            return int(t)
        except ValueError:
            raise ConfigError(key, f"not an integer: {text!r}") from None
    if isinstance(default, float):
        return _number(t, key)
    if isinstance(default, tuple):
        items = [s.strip() for s in t.split(",") if s.strip()]
        if not items:
            raise ConfigError(key, "empty list")
        return tuple(_number(s, key) for s in items)
    return t


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully resolved configuration of one run."""

    experiment: str
    lattice: dict
    params: dict = field(default_factory=dict)
    tolerance: dict = field(default_factory=dict)
    seed: int = 0
    out: str = "lab-out"
    plot: bool = False

    def canonical(self) -> str:
        """Resolved configuration as sorted ``section.key = value`` lines (output options excluded)."""
        lines = [f"experiment.name = {self.experiment}", f"experiment.seed = {self.seed}"]
        for sec in ("lattice", "params", "tolerance"):
            d = getattr(self, sec)
            for k in sorted(d):
                v = d[k]
                if isinstance(v, tuple):
                    v = ", ".join(repr(x) if isinstance(x, float) else str(x) for x in v)
                elif isinstance(v, float):
                    v = repr(v)
                lines.append(f"{sec}.{k} = {v}")
        return "\n".join(lines) + "\n"

    @property
    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical().encode("utf-8")).hexdigest()[:12]

    def points(self, keys) -> list:
        """Cartesian product of the named lattice entries in lattice order."""
        grids = [self.lattice[k] for k in keys]
        out = [()]
        for g in grids:
            out = [p + (v,) for p in out for v in g]
        return [dict(zip(keys, p)) for p in out]


def load_config(text: str | None, overrides=(), experiment: str | None = None,
                registry: dict | None = None, out: str | None = None, plot: bool | None = None) -> ExperimentConfig:
    """Parse config text plus ``section.key=value`` overrides into an :class:`ExperimentConfig`.

    ``registry`` maps experiment names to objects with ``lattice``, ``params``
    and ``tolerance`` default dicts.
    """
    if registry is None:
        from .experiments import REGISTRY as registry
    cp = configparser.ConfigParser(interpolation=None, delimiters=("=",), comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        cp.read_string(text or "")
    except configparser.Error as exc:
        raise ConfigError("config", str(exc).splitlines()[0]) from None
    raw = {sec: dict(cp[sec]) for sec in cp.sections()}
    for sec in raw:
        if sec not in SECTIONS:
            raise ConfigError(sec, "unknown section")
    for ov in overrides:
        if "=" not in ov:
            raise ConfigError(ov, "override must look like section.key=value")
        k, v = ov.split("=", 1)
        k = k.strip()
        if "." not in k:
            raise ConfigError(k, "override key must be section.key")
        sec, key = k.split(".", 1)
        if sec not in SECTIONS:
            raise ConfigError(k, "unknown section")
        raw.setdefault(sec, {})[key] = v

    exp = raw.get("experiment", {})
    name = exp.get("name", experiment)
    if experiment is not None and name != experiment:
        raise ConfigError("experiment.name", f"config names {name!r} but {experiment!r} was requested")
    if name not in registry:
        raise ConfigError("experiment.name", f"unknown experiment {name!r}")
    spec = registry[name]
    for k in exp:
        if k not in ("name", "seed", "out", "plot"):
            raise ConfigError(f"experiment.{k}", "unknown key")
    seed = _coerce(0, exp["seed"], "experiment.seed") if "seed" in exp else 0
    out_dir = out if out is not None else exp.get("out", "lab-out")
    do_plot = plot if plot else (_coerce(False, exp["plot"], "experiment.plot") if "plot" in exp else False)

    lattice = dict(spec.lattice)
    for k, v in raw.get("lattice", {}).items():
        if k not in spec.lattice:
            raise ConfigError(f"lattice.{k}", f"unknown key for {name}")
        lattice[k] = parse_lattice(k, v)
    for k, v in lattice.items():
        if len(v) == 0:
            raise ConfigError(f"lattice.{k}", "empty lattice")
    resolved = {}
    for sec in ("params", "tolerance"):
        defaults = getattr(spec, sec)
        vals = dict(defaults)
        for k, v in raw.get(sec, {}).items():
            if k not in defaults:
                raise ConfigError(f"{sec}.{k}", f"unknown key for {name}")
            vals[k] = _coerce(defaults[k], v, f"{sec}.{k}")
        resolved[sec] = vals
    return ExperimentConfig(name, lattice, resolved["params"], resolved["tolerance"],
                            seed=int(seed), out=str(out_dir), plot=bool(do_plot))
