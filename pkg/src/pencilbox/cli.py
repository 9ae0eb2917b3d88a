"""Command-line front end: simulate, eigen, verify, plot.

Exit codes partition failures by kind so scripts can branch on them:

    0  success
    1  config file parse error
    2  validation error (parameter bounds, horizon, engine, t2 mismatch)
    3  I/O error (unreadable config, unwritable output)
    4  verification failure

Options given on the command line override the config file key by key.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .exceptions import ConfigError, ValidationError, VerificationFailure
from .figures import save_trajectory_figure
from .scenario import (
    ScenarioConfig,
    build_config,
    eigen_report,
    format_verify_report,
    parse_config_file,
    run_engine,
    verify_scenario,
    write_csv,
    write_csv_file,
)
from .svgplot import write_svg

__all__ = ["main", "build_parser"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pencilbox",
        description="Simulate and verify the multiplier-accelerator model "
        "through its singular-system formulation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="flat key=value scenario file")
    common.add_argument("--a", type=float, help="multiplier, 0 < a < 1")
    common.add_argument("--b", type=float, help="accelerator, b > 0")
    common.add_argument("--gbar", type=float, help="constant yearly government expenditure")
    common.add_argument("--t0", type=float, help="income in year 0 (default 0)")
    common.add_argument("--t1", type=float, help="income in year 1 (default 0)")
    common.add_argument("--t2", type=float, help="income in year 2 (default: recursion value)")
    common.add_argument("--horizon", type=int, help="final simulated year (default 20)")
    common.add_argument(
        "--engine",
        choices=["pencil", "closed_form", "oracle", "verify_all"],
        help="trajectory engine (default oracle)",
    )
    common.add_argument("--out", metavar="PATH", help="output file (default: stdout)")

    sim = sub.add_parser("simulate", parents=[common], help="emit a trajectory CSV")
    sim.add_argument("--fig", metavar="PATH", help="also render a figure to this file")
    sub.add_parser("eigen", parents=[common], help="print the spectral report")
    sub.add_parser("verify", parents=[common], help="cross-check all engines")
    sub.add_parser("plot", parents=[common], help="render a static SVG (requires --out)")
    return parser


def _config_from_args(args: argparse.Namespace) -> ScenarioConfig:
    file_values = parse_config_file(args.config) if args.config else {}
    overrides = {
        key: getattr(args, key)
        for key in ("a", "b", "t0", "t1", "t2", "gbar", "horizon", "engine", "out")
    }
    if getattr(args, "fig", None) is not None:
        overrides["fig"] = args.fig
    return build_config(file_values, overrides)


def _write_text(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _single_engine(config: ScenarioConfig) -> str:
    if config.engine == "verify_all":
        raise ValidationError(
            "engine verify_all only makes sense for the verify command"
        )
    return config.engine


def _cmd_simulate(config: ScenarioConfig) -> int:
    rows = run_engine(config, _single_engine(config))
    if config.out is None:
        write_csv(rows, sys.stdout)
    else:
        write_csv_file(rows, config.out)
    if config.fig is not None:
        save_trajectory_figure(
            rows, config.fig, title=f"a={config.a:g}, b={config.b:g}"
        )
    return 0


def _cmd_eigen(config: ScenarioConfig) -> int:
    _write_text(eigen_report(config), config.out)
    return 0


def _cmd_verify(config: ScenarioConfig) -> int:
    report = verify_scenario(config)
    _write_text(format_verify_report(report), config.out)
    if not report.passed:
        raise VerificationFailure("engine cross-check failed; see report above")
    return 0


def _cmd_plot(config: ScenarioConfig) -> int:
    if config.out is None:
        raise ValidationError("plot needs --out to name the SVG file")
    rows = run_engine(config, _single_engine(config))
    write_svg(rows, config.out, title=f"a={config.a:g}, b={config.b:g}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config_from_args(args)
        if args.command == "verify":
            config = dataclasses.replace(config, engine="verify_all")
        handler = {
            "simulate": _cmd_simulate,
            "eigen": _cmd_eigen,
            "verify": _cmd_verify,
            "plot": _cmd_plot,
        }[args.command]
        return handler(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    except VerificationFailure as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
