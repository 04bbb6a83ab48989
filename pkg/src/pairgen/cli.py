"""Command-line entry point ``pairgen``.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 validation failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .errors import ConfigError, NumericalFailure, PairgenError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_VALIDATION = 4


def parse_values(text: str) -> list:
    """``a:b:step`` (inclusive) or a comma-separated list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"range must be a:b:step, got {text!r}", field="values")
        a, b, step = (float(p) for p in parts)
        if step == 0 or (b - a) / step < 0:
            raise ConfigError(f"step {step} does not progress from {a} to {b}", field="values")
        n = int(round((b - a) / step))
        vals = [a + k * step for k in range(n + 1)]
        return [round(v, 12) for v in vals]
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"cannot parse values {text!r}", field="values") from exc


def _workers(args, run):
    return args.workers or run.output.get("workers", 1)


def _out_dir(args, run, default):
    return Path(args.out or run.output.get("dir", default))


def _profiles(args):
    return ("radial", "axis") if args.ring_profile == "both" else (args.ring_profile,)


def cmd_spectrum(args) -> int:
    from .config import load_config
    from .runner import run_spectrum

    run = load_config(args.config)
    rings = parse_rings(args.rings) if args.rings else ()
    res = run_spectrum(run, _out_dir(args, run, "out/spectrum"), _workers(args, run), rings,
                       ring_profiles=_profiles(args))
    for key, path in res["files"].items():
        print(f"{key}: {path}")
    return EXIT_OK


def cmd_scan(args) -> int:
    from .config import load_config
    from .runner import run_scan

    run = load_config(args.config)
    values = parse_values(args.values)
    res = run_scan(run, args.axis, values, _out_dir(args, run, "out/scan"), _workers(args, run),
                   auto_widen=args.auto_widen)
    for p, n in res["scan"].points:
        print(f"{args.axis}={p:g}\tn={n:.10e}")
    return EXIT_OK


def cmd_preset(args) -> int:
    from .runner import run_preset

    results = run_preset(args.name, args.scale, args.out, args.workers or 1)
    for stem, res in results.items():
        for key, path in res["files"].items():
            print(f"{stem}.{key}: {path}")
    return EXIT_OK


def cmd_validate(args) -> int:
    from .validation import run_suite

    results = run_suite(quick=args.quick)
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_VALIDATION


def cmd_analyze(args) -> int:
    from .analysis import detect_rings, spectrum_features
    from .config import load_config
    from .io import read_spectrum_csv

    csv_path = Path(args.spectrum)
    cfg = None
    source = args.config
    if source is None:
        sibling = csv_path.with_name(csv_path.stem + "_manifest.json")
        source = sibling if sibling.exists() else None
    if source is not None:
        cfg = load_config(source).field
    spec = read_spectrum_csv(csv_path, cfg)
    report = {"features": spectrum_features(spec).to_dict()}
    if args.rings:
        if cfg is None:
            raise ConfigError("ring analysis needs field parameters: pass --config or keep the "
                              "manifest next to the spectrum", field="config")
        orders = parse_rings(args.rings)
        report["rings"] = [r.to_dict() for p in _profiles(args)
                           for r in detect_rings(spec, orders, profile=p)]
    from .io import _clean

    print(json.dumps(_clean(report), indent=2))
    return EXIT_OK


def parse_rings(text: str) -> list:
    try:
        return [int(n) for n in text.split(",") if n.strip()]
    except ValueError as exc:
        raise ConfigError(f"cannot parse ring orders {text!r}", field="rings") from exc


def build_parser() -> argparse.ArgumentParser:
    from .presets import PRESETS, SCALES

    ap = argparse.ArgumentParser(prog="pairgen", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="compute one momentum spectrum from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.add_argument("--workers", type=int)
    p.add_argument("--rings", help="photon orders to detect, e.g. 5,6,7")
    p.add_argument("--ring-profile", choices=("radial", "axis", "both"), default="radial",
                   help="angle-averaged profile or the cut along q_x")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("scan", help="plane density versus delta or omega")
    p.add_argument("--config", required=True)
    p.add_argument("--axis", choices=("delta", "omega"), required=True)
    p.add_argument("--values", required=True, help="a:b:step or comma list")
    p.add_argument("--out")
    p.add_argument("--workers", type=int)
    p.add_argument("--auto-widen", action="store_true",
                   help="enlarge the grid per point to hold the first multiphoton rings")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("preset", help="reproduce a figure")
    p.add_argument("name", choices=sorted(PRESETS))
    p.add_argument("--scale", choices=SCALES, default="desk")
    p.add_argument("--out")
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_preset)

    p = sub.add_parser("validate", help="run the oracle suites")
    p.add_argument("--quick", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("analyze", help="features and rings of an existing spectrum CSV")
    p.add_argument("--spectrum", required=True)
    p.add_argument("--rings")
    p.add_argument("--ring-profile", choices=("radial", "axis", "both"), default="radial")
    p.add_argument("--config", help="config or manifest with the field parameters")
    p.set_defaults(func=cmd_analyze)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        where = f" (line {exc.line}, column {exc.column})" if exc.line else ""
        print(f"config error{where}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except FileNotFoundError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PairgenError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
