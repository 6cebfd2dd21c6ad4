"""Command-line runner: ``contactbundles --scenario NAME [options]``.

Exit status is 0 when every check passes, 1 when any check fails and 2 for
configuration errors.  Reports are JSON documents with sorted keys.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys
import time

from . import __version__
from .errors import ConfigError, GeometryError, ScenarioError
from .geomcore import default_threads
from .scenarios import SCENARIOS, TOLERANCES, ScenarioConfig, negative_control_companions

RUN_KEYS = {"scenario", "seed", "samples", "threads", "out"}


def run(config):
    """Run one scenario and return its report document (a dict)."""
    if config.scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario {config.scenario!r}")
    unknown = set(config.tolerances) - set(TOLERANCES)
    if unknown:
        raise ConfigError(f"unknown tolerance(s): {', '.join(sorted(unknown))}")
    t0 = time.perf_counter()
    try:
        checks = SCENARIOS[config.scenario](config)
    except GeometryError as exc:
        err = ScenarioError(f"{config.scenario}: {type(exc).__name__}: {exc}")
        err.witness = exc.witness
        raise err from exc
    status = "PASS" if all(c["status"] == "PASS" for c in checks) else "FAIL"
    return {
        "scenario": config.scenario,
        "config": config.echo(),
        "checks": checks,
        "status": status,
        "wall_clock_seconds": round(time.perf_counter() - t0, 3),
        "version": __version__,
    }


def companions(config):
    """Checks that must still pass next to the negative controls."""
    return negative_control_companions(config)


def dumps(report):
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def strip_clock(report):
    """The report without its wall-clock field, for determinism comparisons."""
    return {k: v for k, v in report.items() if k != "wall_clock_seconds"}


def read_config(path):
    """INI file with a ``[run]`` section and an optional ``[tolerances]`` section."""
    cp = configparser.ConfigParser()
    try:
        with open(path) as fh:
            cp.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    extra = set(cp.sections()) - {"run", "tolerances"}
    if extra:
        raise ConfigError(f"unknown config section(s): {', '.join(sorted(extra))}")
    out = {}
    if cp.has_section("run"):
        bad = set(cp["run"]) - RUN_KEYS
        if bad:
            raise ConfigError(f"unknown key(s) in [run]: {', '.join(sorted(bad))}")
        out.update(cp["run"])
    tols = {}
    if cp.has_section("tolerances"):
        for k, v in cp["tolerances"].items():
            if k not in TOLERANCES:
                raise ConfigError(f"unknown tolerance {k!r}")
            tols[k] = _float(v, k)
    out["tolerances"] = tols
    return out


def _float(v, name):
    try:
        return float(v)
    except ValueError as exc:
        raise ConfigError(f"{name}: not a number: {v!r}") from exc


def _int(v, name):
    try:
        return int(v)
    except ValueError as exc:
        raise ConfigError(f"{name}: not an integer: {v!r}") from exc


def build_parser():
    p = argparse.ArgumentParser(prog="contactbundles",
                                description="Run a contact-bundle verification scenario.")
    p.add_argument("--scenario", help="scenario id (see --list-scenarios)")
    p.add_argument("--seed", type=int, default=None, help="random seed (default 42)")
    p.add_argument("--samples", type=int, default=None,
                   help="main sample count (scenario-specific default)")
    p.add_argument("--out", default=None, help="write the JSON report here (default: stdout)")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: $CONTACTBUNDLES_THREADS or 1)")
    p.add_argument("--config", default=None, help="INI file with [run] and [tolerances]")
    p.add_argument("--list-scenarios", action="store_true", help="print scenario ids and exit")
    for name, val in TOLERANCES.items():
        p.add_argument(f"--tol-{name.replace('_', '-')}", dest=f"tol_{name}", type=float,
                       default=None, help=f"tolerance '{name}' (default {val:g})")
    return p


def config_from_args(args):
    base = read_config(args.config) if args.config else {"tolerances": {}}
    scenario = args.scenario or base.get("scenario")
    if not scenario:
        raise ConfigError("no scenario given")
    if scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario {scenario!r}")
    seed = args.seed if args.seed is not None else _int(base.get("seed", 42), "seed")
    samples = args.samples if args.samples is not None else (
        _int(base["samples"], "samples") if "samples" in base else None)
    threads = args.threads if args.threads is not None else (
        _int(base["threads"], "threads") if "threads" in base else default_threads())
    if samples is not None and samples < 1:
        raise ConfigError("samples must be positive")
    if threads < 1:
        raise ConfigError("threads must be positive")
    tols = dict(base["tolerances"])
    for name in TOLERANCES:
        v = getattr(args, f"tol_{name}")
        if v is not None:
            tols[name] = v
    return ScenarioConfig(scenario, seed, samples, tols, args.out or base.get("out"), threads)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with status 2
        return int(exc.code or 0)
    if args.list_scenarios:
        for name in SCENARIOS:
            print(name)
        return 0
    try:
        cfg = config_from_args(args)
        report = run(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return 1
    text = dumps(report)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for c in report["checks"]:
        print(f"{c['status']}  {c['name']}", file=sys.stderr)
    return 0 if report["status"] == "PASS" else 1


if __name__ == "__main__":
    sys.exit(main())
