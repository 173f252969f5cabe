"""Command-line batch runner.

    lab <experiment> --config <path> [--set section.key=value]... [--out dir] [--plot]
    lab plot <results.csv> [--kind loglog_fit|heatmap] [--x col] [--y col] [--out file.svg]

Writes ``results.csv``, ``manifest.txt`` and ``failures.csv`` to the output
directory. The exit status is 0 iff every embedded check passes, 1 on a
failed check and 2 on a usage error. ``LAB_THREADS`` caps the worker pool.
"""
from __future__ import annotations

import argparse
import csv
import io
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .config import ConfigError, ExperimentConfig, load_config
from .csvio import format_value, results_text
from .experiments import REGISTRY, Check

__all__ = ["main", "run", "worker_count"]

FAILURE_COLUMNS = ("check", "group", "value", "relation", "threshold")


def worker_count(n_jobs: int) -> int:
    """Pool size: ``LAB_THREADS`` if set, otherwise the CPU count, never more than the job count."""
    env = os.environ.get("LAB_THREADS", "").strip()
    cap = os.cpu_count() or 1
    if env:
        try:
            cap = int(env)
        except ValueError:
            raise ConfigError("LAB_THREADS", f"not an integer: {env!r}") from None
        if cap < 1:
            raise ConfigError("LAB_THREADS", "must be at least 1")
    return max(1, min(cap, n_jobs))


def _execute(cfg: ExperimentConfig, exp, jobs: list) -> tuple:
    def one(item):
        i, job = item
        rng = np.random.default_rng([cfg.seed, i])
        try:
            return exp.run(cfg, job, rng), None
        except Exception as exc:  # reported as a failed check, not a crash
            return [], f"{type(exc).__name__}: {exc}"

    items = list(enumerate(jobs))
    n = worker_count(len(items))
    if n == 1:
        results = [one(it) for it in items]
    else:
        with ThreadPoolExecutor(max_workers=n) as pool:
            results = list(pool.map(one, items))
    rows, errors = [], []
    for (i, job), (r, err) in zip(items, results):
        rows.extend(r)
        if err is not None:
            errors.append((job, err))
    return rows, errors


def _failures_text(checks: list) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(FAILURE_COLUMNS)
    for c in checks:
        if not c.passed:
            w.writerow([c.name, c.group, format_value(c.value), c.relation, format_value(c.threshold)])
    return buf.getvalue()


def _manifest_text(cfg: ExperimentConfig, exp, n_jobs: int, n_rows: int, checks: list) -> str:
    from . import __version__
    lines = [f"hermite_lab {__version__}", f"experiment = {cfg.experiment}",
             f"description = {exp.description}", f"config_hash = {cfg.config_hash}",
             f"jobs = {n_jobs}", f"rows = {n_rows}", "", "[resolved config]", cfg.canonical().rstrip(),
             "", "[checks]"]
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        lines.append(f"{status} {c.name} [{c.group}] {format_value(c.value)} {c.relation} "
                     f"{format_value(c.threshold)}")
    passed = sum(c.passed for c in checks)
    lines += ["", f"passed {passed} of {len(checks)}"]
    return "\n".join(lines) + "\n"


def _plots(cfg: ExperimentConfig, exp, results: Path) -> list:
    try:
        from .plotting import plot
    except ImportError:
        warnings.warn("plotting needs matplotlib; skipped")
        return []
    spec = exp.plot
    if not spec:
        return []
    out = [plot(results, "loglog_fit", results.with_name("loglog_fit.svg"), x=spec.get("x", "N"),
                y=spec.get("y"), group=spec.get("group", ()))]
    m = cfg.lattice.get("m", ())
    if len(m) > 1 and "m" in exp.columns:
        out.append(plot(results, "heatmap", results.with_name("heatmap.svg"), y=spec.get("y")))
    return out


def run(cfg: ExperimentConfig) -> int:
    """Execute the experiment, write the artifacts and return the exit status."""
    exp = REGISTRY[cfg.experiment]
    jobs = exp.jobs(cfg)
    if not jobs:
        raise ConfigError("lattice", "empty lattice")
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    rows, errors = _execute(cfg, exp, jobs)
    if errors:
        checks = [Check(f"job error: {err}", " ".join(f"{k}={v}" for k, v in job.items()), float("nan"), "<=", 0.0)
                  for job, err in errors]
        rows = []
    else:
        rows, checks = exp.reduce(cfg, rows)
    results = out / "results.csv"
    results.write_text(results_text(rows, exp.columns, cfg.seed, cfg.config_hash), encoding="utf-8")
    (out / "failures.csv").write_text(_failures_text(checks), encoding="utf-8")
    (out / "manifest.txt").write_text(_manifest_text(cfg, exp, len(jobs), len(rows), checks), encoding="utf-8")
    if cfg.plot and rows:
        _plots(cfg, exp, results)
    return 0 if all(c.passed for c in checks) else 1


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lab", description="Batch runner for the numerical experiments.")
    p.add_argument("experiment", help="one of: " + ", ".join(REGISTRY) + "; or 'plot'")
    p.add_argument("--config", help="config file ([section] key = value)")
    p.add_argument("--set", dest="overrides", action="append", default=[], metavar="section.key=value")
    p.add_argument("--out", help="output directory (plot: output file)")
    p.add_argument("--plot", action="store_true", help="write SVG fit plots")
    p.add_argument("--kind", default="loglog_fit", help="plot kind for 'lab plot'")
    p.add_argument("--x", default="N", help="abscissa column for 'lab plot'")
    p.add_argument("--y", help="ordinate column for 'lab plot' (default value or ratio)")
    p.add_argument("csv", nargs="?", help=argparse.SUPPRESS)
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.experiment == "plot":
            from .plotting import plot
            if not args.csv:
                raise ConfigError("csv", "lab plot needs a results.csv path")
            print(plot(args.csv, args.kind, args.out, x=args.x, y=args.y))
            return 0
        if args.experiment not in REGISTRY:
            raise ConfigError("experiment", f"unknown experiment {args.experiment!r}")
        if args.config is None:
            raise ConfigError("--config", "a config file is required")
        try:
            text = Path(args.config).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError("--config", str(exc)) from None
        cfg = load_config(text, args.overrides, experiment=args.experiment, out=args.out, plot=args.plot)
        status = run(cfg)
    except ConfigError as exc:
        print(f"lab: usage error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        if args.experiment != "plot":
            raise
        print(f"lab: {exc}", file=sys.stderr)
        return 2
    print(f"{cfg.experiment}: {'ok' if status == 0 else 'checks failed'} -> {cfg.out}")
    return status


if __name__ == "__main__":
    sys.exit(main())
