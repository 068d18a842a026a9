"""Command-line driver: ``jcd <mode> [options]``.

Options may also come from a flat ``key = value`` file given with --config;
command-line flags win over the file.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .errors import ConfigError, NumericalGuardError
from .evolution import DEFAULT_OMEGA_OVER_G
from .fock import DEFAULT_EPS_TRUNC
from .report import format_extrema, plot_result, rows_to_csv, write_csv
from .sweeps import CALIBRATION_TARGETS, MODES, RunConfig, run

EXIT_OK, EXIT_CONFIG, EXIT_GUARD = 0, 2, 3

_KEYS = ("alpha_sq", "alpha_sq_range", "gt_range", "omega_over_g", "rwa", "priors",
         "out", "plot", "eps_trunc", "target")


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in str(text).replace(" ", "").split(",") if x != ""]
    except ValueError:
        raise ConfigError(f"expected comma-separated numbers, got {text!r}") from None


def _triple(text: str, name: str):
    vals = _floats(text)
    if len(vals) != 3 or vals[2] != int(vals[2]):
        raise ConfigError(f"{name} expects min,max,steps, got {text!r}")
    return vals[0], vals[1], int(vals[2])


def read_config_file(path) -> dict:
    """Parse ``key = value`` lines; '#' starts a comment."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="FILE", help="key = value file with defaults for these flags")
    common.add_argument("--alpha-sq", dest="alpha_sq", help="single mean photon number |alpha|^2")
    common.add_argument("--alpha-sq-range", dest="alpha_sq_range", metavar="MIN,MAX,STEPS")
    common.add_argument("--gt-range", dest="gt_range", metavar="MIN,MAX,STEPS",
                        help="interaction-time grid (default 0,10,2001)")
    common.add_argument("--omega-over-g", dest="omega_over_g", metavar="W[,W...]",
                        help=f"field frequency over coupling; a list sweeps it (default {DEFAULT_OMEGA_OVER_G:g})")
    common.add_argument("--rwa", choices=("on", "off", "both"))
    common.add_argument("--priors", metavar="P1", help="prior of |alpha>; |-alpha> gets 1 - P1")
    common.add_argument("--out", metavar="FILE", help="CSV output (default: stdout)")
    common.add_argument("--plot", metavar="FILE", help="figure file, e.g. plot.svg")
    common.add_argument("--eps-trunc", dest="eps_trunc", help=f"Fock tail tolerance (default {DEFAULT_EPS_TRUNC:g})")
    common.add_argument("--target", choices=CALIBRATION_TARGETS, help="calibration target")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="jcd", description="Coherent-state discrimination via Jaynes-Cummings coupling.")
    sub = parser.add_subparsers(dest="mode", required=True, metavar="MODE")
    helps = {
        "ambiguous-sweep": "minimum-error discrimination (one alpha_sq: curve over gt)",
        "kennedy-sweep": "Kennedy receiver, one and two sequential measurements",
        "purity": "ancilla purity against gt",
        "bounds-table": "ideal bounds and their ordering",
        "calibrate": "scan omega/g against reported non-RWA optima",
        "verify": "closed-form coefficients vs direct integration",
    }
    for mode in MODES:
        sub.add_parser(mode, parents=[common], help=helps[mode])
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    merged = read_config_file(args.config) if args.config else {}
    for key in _KEYS:
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val

    kw = {"mode": args.mode}
    if "alpha_sq" in merged:
        kw["alpha_sq"] = _floats(merged["alpha_sq"])[0] if _floats(merged["alpha_sq"]) else None
    if "alpha_sq_range" in merged:
        kw["alpha_sq_range"] = _triple(merged["alpha_sq_range"], "alpha-sq-range")
    if "gt_range" in merged:
        kw["gt_range"] = _triple(merged["gt_range"], "gt-range")
        kw["gt_range_explicit"] = True
    if "omega_over_g" in merged:
        kw["omega_over_g"] = tuple(_floats(merged["omega_over_g"]))
    if "rwa" in merged:
        kw["rwa"] = merged["rwa"]
    if "priors" in merged:
        p1 = _floats(merged["priors"])
        if len(p1) != 1 or not 0 <= p1[0] <= 1:
            raise ConfigError("priors expects a single P1 in [0, 1]")
        kw["priors"] = (p1[0], 1.0 - p1[0])
    if "eps_trunc" in merged:
        kw["eps_trunc"] = _floats(merged["eps_trunc"])[0]
    for key in ("out", "plot", "target"):
        if key in merged:
            kw[key] = merged[key]
    return RunConfig(**kw)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = config_from_args(args)
        result = run(cfg)
    except ConfigError as exc:
        print(f"jcd: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalGuardError as exc:
        print(f"jcd: numerical guard abort: {exc}", file=sys.stderr)
        return EXIT_GUARD

    report = sys.stdout if cfg.out else sys.stderr
    print(f"# {cfg.mode}: {len(result.rows)} rows", file=report)
    for line in result.notes:
        print(line, file=report)
    for line in format_extrema(result):
        print(line, file=report)

    if cfg.out:
        write_csv(result.rows, cfg.out)
        print(f"wrote {cfg.out}", file=report)
    else:
        sys.stdout.write(rows_to_csv(result.rows))
    if cfg.plot:
        plot_result(result, cfg.plot)
        print(f"wrote {cfg.plot}", file=report)

    if result.rows and result.guard_failures == len(result.rows):
        print("jcd: every row tripped a numerical guard", file=sys.stderr)
        return EXIT_GUARD
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
