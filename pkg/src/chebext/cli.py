"""Command-line interface.

Exit status: 0 success, 1 validation error or bad usage, 2 violated
hypothesis, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

import jsonschema

from . import bounds, io
from .chebyshev import AliasingError, NodeGrid, coeffs_from_node_samples
from .examples import SUITE_NAMES, suite_member
from .extrapolate import HypothesisError, PriorData, extend, reconstruct, zero_padding_reconstruct
from .fourier_grid import GridSpec, SpatialField
from .harness import (
    ExperimentConfig,
    inject_noise,
    instability_fits,
    instability_table,
    run_to_directory,
)

EXIT_OK, EXIT_VALIDATION, EXIT_HYPOTHESIS, EXIT_IO = 0, 1, 2, 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


def _add_prior(p, *, m_default=0):
    p.add_argument("--N", type=float, required=True, help="amplitude bound")
    p.add_argument("--sigma", type=float, required=True, help="support radius (l1)")
    p.add_argument("--m", type=int, default=m_default, help="smoothness order")
    p.add_argument("--gamma", type=float, default=None, help="H^m seminorm bound")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chebext", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bounds", help="print every stability estimate")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--tau", type=float, default=0.5)
    p.add_argument("--n", type=int, default=None, help="order for the continuation bound (default n*)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    _add_prior(p, m_default=1)
    p.set_defaults(gamma_default=1.0)

    p = sub.add_parser("sample", help="write suite node data, optionally noisy")
    p.add_argument("--suite", choices=SUITE_NAMES, required=True)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--M", type=int, default=128)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--noise", choices=("worst", "uniform"), default="worst")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True)

    p = sub.add_parser("coeffs", help="node data file to coefficient CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--n", type=int, required=True, help="total-degree cutoff (k1+...+kd < n)")
    p.add_argument("--output", default="-")

    p = sub.add_parser("extend", help="continue node data to [-R, R]^d")
    p.add_argument("--input", required=True)
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--points", type=int, default=257)
    p.add_argument("--output", required=True)

    p = sub.add_parser("reconstruct", help="node data to spatial field")
    p.add_argument("--input", required=True)
    p.add_argument("--tau", type=float, default=0.5)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--x-half-width", type=float, default=3.0)
    p.add_argument("--x-points", type=int, default=1024)
    p.add_argument("--freq-points", type=int, default=257)
    p.add_argument("--zero-padding", action="store_true", help="ignore tau and zero-pad the data")
    p.add_argument("--output", required=True)
    _add_prior(p)

    p = sub.add_parser("instability", help="norms of the instability exhibits")
    p.add_argument("--d", type=int, choices=(1, 2), default=2)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--orders", type=int, nargs="+", default=[10, 20, 30, 40])
    p.add_argument("--output", default="-")

    p = sub.add_parser("experiment", help="run a compliance experiment from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--out-dir", default=None)
    return parser


def _open_out(path):
    return sys.stdout if path == "-" else open(path, "w", newline="")


def _cmd_bounds(args) -> int:
    gamma = args.gamma if args.gamma is not None else (args.gamma_default if args.m >= 1 else None)
    prior = PriorData(args.d, args.N, args.sigma, args.r, args.m, gamma)
    report = bounds.bound_report(prior, args.delta, args.R, args.rho, args.tau, args.n)
    if args.format == "json":
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print(report.format())
    return EXIT_OK


def _cmd_sample(args) -> int:
    member = suite_member(args.suite, args.d)
    nodes = NodeGrid(args.d, args.M, args.r)
    samples = member.fourier_nodes(nodes)
    if args.delta is not None:
        samples = inject_noise(samples, args.delta, args.noise, args.seed)
    io.write_nodes(args.output, nodes, samples, sigma=member.sigma)
    return EXIT_OK


def _cmd_coeffs(args) -> int:
    nodes, samples = io.read_nodes(args.input)
    coeffs = coeffs_from_node_samples(nodes, samples, args.n)
    fh = _open_out(args.output)
    try:
        io.write_coeffs_csv(fh, coeffs)
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


def _cmd_extend(args) -> int:
    nodes, samples = io.read_nodes(args.input)
    if args.R < nodes.r:
        raise HypothesisError(f"R >= r violated ({args.R} < {nodes.r})")
    grid = GridSpec.cube(nodes.d, args.R, args.points)
    io.write_field(args.output, extend(nodes, samples, args.R, args.n, grid))
    return EXIT_OK


def _cmd_reconstruct(args) -> int:
    nodes, samples = io.read_nodes(args.input)
    grid = GridSpec.cube(nodes.d, args.x_half_width, args.x_points)
    if args.zero_padding:
        out = zero_padding_reconstruct(nodes, samples, grid, args.freq_points)
        out = SpatialField(out.grid, out.values, sigma=args.sigma)
    else:
        prior = PriorData(nodes.d, args.N, args.sigma, nodes.r, args.m, args.gamma)
        out = reconstruct(nodes, samples, prior, args.tau, args.delta, grid, args.freq_points)
    io.write_field(args.output, out)
    return EXIT_OK


def _cmd_instability(args) -> int:
    table = instability_table(args.d, args.m, args.orders, args.r)
    fh = _open_out(args.output)
    try:
        fh.write("d,n,l2_norm,decay_norm\n")
        for n, l2, dn in table:
            fh.write(f"{args.d},{n},{l2:.17g},{dn:.17g}\n")
    finally:
        if fh is not sys.stdout:
            fh.close()
    if len(table) >= 2:
        fits = instability_fits(table)
        print(f"l2_rate={fits['l2_rate']:.6g} decay_rate={fits['decay_rate']:.6g}", file=sys.stderr)
    return EXIT_OK


def _cmd_experiment(args) -> int:
    config = ExperimentConfig.load(args.config)
    summary = run_to_directory(config, args.out_dir)
    print(summary.line())
    return EXIT_OK


_COMMANDS = {
    "bounds": _cmd_bounds,
    "sample": _cmd_sample,
    "coeffs": _cmd_coeffs,
    "extend": _cmd_extend,
    "reconstruct": _cmd_reconstruct,
    "instability": _cmd_instability,
    "experiment": _cmd_experiment,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_VALIDATION
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_VALIDATION
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _COMMANDS[args.command](args)
    except HypothesisError as exc:
        print(f"hypothesis violated: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, AliasingError, jsonschema.ValidationError) as exc:
        print(f"invalid input: {getattr(exc, 'message', exc)}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
