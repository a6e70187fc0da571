"""Command-line interface.

Subcommands wrap the library against a single pair-configuration file:

    binormix classify <file>                  classification report
    binormix qroots <file>                    q roots and the modality bound
    binormix modes <file> [--c C]             both mode-finding methods
    binormix ridgeline <file> [--samples N]   ridgeline table as CSV
    binormix emit-plot <file> [--grid N] [--out DIR]
    binormix scan [--seed S] [--trials N]     per-type bound verification

Exit codes: 0 success, 2 parse or validation error, 3 internal numerical
failure, 4 bound violation found by scan. Output is deterministic for fixed
inputs and seeds.
"""

from __future__ import annotations

import argparse
import sys

from .classify import PairType, classify_pair
from .config import config_to_mixture, load_config
from .errors import BinormixError, ParseError, ValidationError
from .gaussian import Mixture
from .modes import SearchConfig, find_modes, grid_oracle_modes, verify_bounds
from .plotdata import build_plot_bundle, write_plot_bundle
from .ridgeline import modality_bound, q_roots_in_unit, ridge_samples

__all__ = ["main"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_BOUND_VIOLATION = 4


def _fmt(x) -> str:
    return repr(float(x))


def _print_report(lines: list[str]) -> None:
    sys.stdout.write("\n".join(lines) + "\n")


def _cmd_classify(args) -> int:
    mix = config_to_mixture(load_config(args.config))
    report = classify_pair(mix.pair)
    lines = [
        f"pair_type: {report.pair_type.value}",
        f"proportional: {str(report.proportional).lower()}",
        "proportionality_ratio: "
        + ("-" if report.proportionality_ratio is None else _fmt(report.proportionality_ratio)),
        "codirectional: "
        + ("-" if report.codirectional is None else str(report.codirectional).lower()),
        f"canonical_m1: {_fmt(report.canonical.m[0])}",
        f"canonical_m2: {_fmt(report.canonical.m[1])}",
        f"canonical_s1_sq: {_fmt(report.canonical.s1_sq)}",
        f"canonical_s2_sq: {_fmt(report.canonical.s2_sq)}",
        f"conic_kind: {report.conic.kind.value}",
    ]
    if report.cusp is not None:
        lines.append(f"cusp_x: {_fmt(report.cusp[0])}")
        lines.append(f"cusp_y: {_fmt(report.cusp[1])}")
        lines.append(f"cusp_ambiguous: {str(report.cusp_ambiguous).lower()}")
    _print_report(lines)
    return EXIT_OK


def _cmd_qroots(args) -> int:
    mix = config_to_mixture(load_config(args.config))
    roots = q_roots_in_unit(mix.pair)
    bound = modality_bound(mix.pair)
    lines = [f"n_roots: {bound.n_roots}", f"modality_bound: {bound.bound}"]
    lines.append(f"tangency: {str(bound.has_tangency).lower()}")
    for i, root in enumerate(roots):
        lines.append(f"root[{i}]: {_fmt(root.alpha)} tangent={str(root.tangent).lower()}")
    _print_report(lines)
    return EXIT_OK


def _mode_lines(tag: str, report) -> list[str]:
    lines = [f"{tag}_count: {report.count}"]
    for i, mode in enumerate(report.modes):
        lines.append(
            f"{tag}_mode[{i}]: x={_fmt(mode.location[0])} y={_fmt(mode.location[1])} "
            f"value={_fmt(mode.value)}"
        )
    if report.degenerate:
        lines.append(f"{tag}_degenerate: {len(report.degenerate)}")
    return lines


def _cmd_modes(args) -> int:
    mix = config_to_mixture(load_config(args.config))
    if args.c is not None:
        if not 0.0 <= args.c <= 1.0:
            raise ValidationError("c: mixing proportion must lie in [0, 1]")
        mix = Mixture(mix.pair, args.c)
    cfg = SearchConfig()
    newton = find_modes(mix, cfg)
    grid = grid_oracle_modes(mix, cfg)
    lines = [f"c: {_fmt(mix.c)}"]
    lines.extend(_mode_lines("newton", newton))
    lines.extend(_mode_lines("grid", grid))
    lines.append(f"methods_agree: {str(newton.count == grid.count).lower()}")
    _print_report(lines)
    return EXIT_OK


def _cmd_ridgeline(args) -> int:
    mix = config_to_mixture(load_config(args.config))
    rows = ["alpha,x,y,f1,f2,q"]
    for s in ridge_samples(mix.pair, args.samples):
        rows.append(
            ",".join(
                _fmt(v)
                for v in (s.alpha, s.x_star[0], s.x_star[1], s.f1_val, s.f2_val, s.q_val)
            )
        )
    _print_report(rows)
    return EXIT_OK


def _cmd_emit_plot(args) -> int:
    mix = config_to_mixture(load_config(args.config))
    bundle = build_plot_bundle(mix, grid_n=args.grid)
    written = write_plot_bundle(bundle, args.out)
    _print_report([f"written: {path}" for path in written])
    return EXIT_OK


def _cmd_scan(args) -> int:
    report = verify_bounds(args.seed, args.trials)
    lines = [f"seed: {report.sampler_seed}", f"trials_per_type: {report.trials_per_type}"]
    for kind in (PairType.TYPE1, PairType.TYPE2, PairType.TYPE3):
        lines.append(f"max_count_{kind.value}: {report.max_counts[kind]}")
    lines.append(f"violations: {len(report.violations)}")
    for v in report.violations:
        lines.append(
            f"violation: type={v.kind.value} trial={v.trial} c={_fmt(v.c)} "
            f"count={v.count} allowed={v.allowed}"
        )
    _print_report(lines)
    return EXIT_OK if report.ok else EXIT_BOUND_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="binormix",
        description="Classify bivariate normal pairs and count mixture modes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classification report for a pair")
    p.add_argument("config")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("qroots", help="roots of q on [0, 1] and the modality bound")
    p.add_argument("config")
    p.set_defaults(func=_cmd_qroots)

    p = sub.add_parser("modes", help="mode report from both search methods")
    p.add_argument("config")
    p.add_argument("--c", type=float, default=None, help="override the mixing proportion")
    p.set_defaults(func=_cmd_modes)

    p = sub.add_parser("ridgeline", help="ridgeline samples as CSV on stdout")
    p.add_argument("config")
    p.add_argument("--samples", type=int, default=200)
    p.set_defaults(func=_cmd_ridgeline)

    p = sub.add_parser("emit-plot", help="write plot-data CSV files")
    p.add_argument("config")
    p.add_argument("--grid", type=int, default=256)
    p.add_argument("--out", default="plot_data")
    p.set_defaults(func=_cmd_emit_plot)

    p = sub.add_parser("scan", help="random sweep checking per-type mode bounds")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=50)
    p.set_defaults(func=_cmd_scan)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ValidationError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG
    except (BinormixError, FloatingPointError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
