"""Command-line front end: ``verify``, ``pathology`` and ``dump``.

Exit codes: 0 when every check passes, 1 when a check or construction invariant
fails, 2 on bad flags or unmet preconditions.
"""
import argparse
import logging
import math
import os
import re
import sys

import numpy as np
import pandas as pd

from mixedpartials import catalog, const
from mixedpartials.calculus import holder_modulus
from mixedpartials.fourier import analyze, coeffs_to_json
from mixedpartials.grid import (
    grid_to_frame,
    make_grid,
    read_grid_csv,
    sample,
    write_grid_csv,
)
from mixedpartials.helpers import atomic_output, to_json_bytes, write_bytes
from mixedpartials.pathology import (
    ConstructionError,
    build_fat_cantor,
    check_series,
    construct_thm51,
    construct_thm52,
    rescale_to_2pi,
    series_metadata,
    witness_table,
)
from mixedpartials.verify import Tolerances, run_pipeline, serialize_report

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


def count(text):
    """Parse a non-negative integer written as ``12``, ``1e9`` or ``10^9``.

    :param str text: flag value.
    :return: (*int*) -- parsed value.
    :raises argparse.ArgumentTypeError: if the value is not a non-negative integer.
    """
    power = re.fullmatch(r"\s*(\d+)\s*\^\s*(\d+)\s*", text)
    try:
        value = int(power[1]) ** int(power[2]) if power else float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if isinstance(value, float) and not (math.isfinite(value) and value.is_integer()):
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative: {text!r}")
    return int(value)


def real(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"not a finite number: {text!r}")
    return value


def _add_grid_flags(parser):
    defaults = const.cli_defaults
    parser.add_argument("--nx", type=count, default=defaults["nx"])
    parser.add_argument("--ny", type=count, default=defaults["ny"])
    parser.add_argument("--nmax", type=count, default=defaults["nmax"])
    parser.add_argument(
        "--mmax", type=count, default=defaults["mmax"], help="defaults to --nmax"
    )


def _add_series_flags(parser):
    defaults = const.cli_defaults
    parser.add_argument("--levels", type=count, default=defaults["levels"])
    parser.add_argument("--terms", type=count, default=defaults["terms"])
    parser.add_argument("--removal", type=real, default=defaults["removal"])


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mixedpartials",
        description="Spectral reconstruction of mixed partial derivatives.",
    )
    parser.add_argument("--verbose", action="store_true", help="log progress")
    parser.add_argument("--seed", type=count, default=const.default_seed)
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="run the reconstruction pipeline")
    source = verify.add_mutually_exclusive_group(required=True)
    source.add_argument("--function", choices=catalog.names)
    source.add_argument("--grid", help="grid CSV with header x,y,value")
    _add_grid_flags(verify)
    _add_series_flags(verify)
    verify.add_argument(
        "--tol-spectral", type=real, default=const.default_tolerances["spectral"]
    )
    verify.add_argument(
        "--tol-quad", type=real, default=const.default_tolerances["quadrature"]
    )
    verify.add_argument("--tol-parseval", type=real, default=const.parseval_rel_tol)
    verify.add_argument("--tol-row-zero", type=real, default=const.row_zero_tol)
    verify.add_argument("--out", help="report JSON path, standard output if omitted")
    verify.add_argument(
        "--timings", action="store_true", help="include stage timings in the report"
    )
    verify.set_defaults(handler=cmd_verify)

    pathology = sub.add_parser("pathology", help="build a series counterexample")
    pathology.add_argument("--kind", choices=const.pathology_kinds, required=True)
    _add_series_flags(pathology)
    pathology.add_argument("--nx", type=count, default=const.cli_defaults["nx"])
    pathology.add_argument("--ny", type=count, default=const.cli_defaults["ny"])
    pathology.add_argument("--out", required=True, help="output directory")
    pathology.set_defaults(handler=cmd_pathology)

    dump = sub.add_parser("dump", help="export coefficients, grids or Hölder data")
    dump.add_argument("--what", choices=("coeffs", "grid", "holder"), required=True)
    dump.add_argument("--function", choices=catalog.names, required=True)
    _add_grid_flags(dump)
    _add_series_flags(dump)
    dump.add_argument(
        "--derivative",
        choices=const.derivative_names,
        default="f",
        help="sampled derivative for --what grid",
    )
    dump.add_argument("--c", type=real, help="Hölder constant for --what holder")
    dump.add_argument(
        "--samples", type=count, default=const.cli_defaults["holder_samples"]
    )
    dump.add_argument(
        "--y", type=real, default=math.pi / 2, help="row ordinate for --what holder"
    )
    dump.add_argument("--out", help="output path, standard output if omitted")
    dump.set_defaults(handler=cmd_dump)
    return parser


def _emit(data, out):
    if out is None:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        write_bytes(out, data)


def _function(args):
    return catalog.build_function(
        args.function, levels=args.levels, terms=args.terms, removal=args.removal
    )


def cmd_verify(args):
    """Run the pipeline on a built-in function or a grid CSV and write the report.

    :param argparse.Namespace args: parsed flags.
    :return: (*int*) -- exit code.
    """
    box = (args.nmax, args.nmax if args.mmax is None else args.mmax)
    tolerances = Tolerances(
        spectral=args.tol_spectral,
        quadrature=args.tol_quad,
        parseval=args.tol_parseval,
        row_zero=args.tol_row_zero,
    )
    if args.grid is not None:
        f, grid = read_grid_csv(args.grid), None
    else:
        f, grid = _function(args), make_grid(args.nx, args.ny)
    report = run_pipeline(f, grid, box, tolerances)
    _emit(serialize_report(report, include_timings=args.timings), args.out)
    failed = report.failed_checks()
    if failed:
        print(f"check failed: {failed[0]}", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def cmd_pathology(args):
    """Build a series, then write metadata, witness table and a sampled grid.

    :param argparse.Namespace args: parsed flags.
    :return: (*int*) -- exit code.
    """
    cantor = build_fat_cantor(args.levels, args.removal)
    construct = construct_thm51 if args.kind == "thm51" else construct_thm52
    try:
        series = construct(cantor, args.terms)
    except ConstructionError as e:
        print(f"construction failed at term {e.term}: {e}", file=sys.stderr)
        return EXIT_FAILED
    checks = check_series(series)
    os.makedirs(args.out, exist_ok=True)
    metadata = series_metadata(series)
    metadata["checks"] = checks
    write_bytes(os.path.join(args.out, "metadata.json"), to_json_bytes(metadata))
    with atomic_output(os.path.join(args.out, "witnesses.csv")) as tmp_path:
        witness_table(series).to_csv(
            tmp_path, index=False, float_format=const.csv_float_format
        )
    grid = make_grid(args.nx, args.ny)
    samples = sample(rescale_to_2pi(series), grid)
    write_grid_csv(samples, os.path.join(args.out, "grid.csv"))
    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        print(f"invariant violated: {failed[0]}", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def cmd_dump(args):
    """Export coefficient JSON, a sampled grid CSV or a Hölder row check.

    :param argparse.Namespace args: parsed flags.
    :return: (*int*) -- exit code; for ``holder``, 1 when the bound fails.
    """
    f = _function(args)
    if args.what == "holder":
        if args.c is None:
            raise ValueError("--what holder needs --c")
        x = const.two_pi * np.arange(args.samples) / args.samples
        g = np.asarray(f.eval(x, np.full_like(x, args.y)), dtype=float)
        result = holder_modulus(g, args.c, seed=args.seed)
        frame = pd.DataFrame(
            [
                {
                    "samples": args.samples,
                    "y": args.y,
                    "c": args.c,
                    "worst_ratio": result.worst_ratio,
                    "bound": math.sqrt(args.c),
                    "pass": result.passed,
                }
            ]
        )
        data = frame.to_csv(index=False, float_format=const.csv_float_format)
        _emit(data.encode("utf-8"), args.out)
        return EXIT_OK if result.passed else EXIT_FAILED
    grid = make_grid(args.nx, args.ny)
    if args.what == "coeffs":
        box = (args.nmax, args.nmax if args.mmax is None else args.mmax)
        c = analyze(sample(f, grid), *box)
        _emit((coeffs_to_json(c) + "\n").encode("utf-8"), args.out)
    else:
        u = sample(f, grid, args.derivative)
        if args.out is None:
            data = grid_to_frame(u).to_csv(
                index=False, float_format=const.csv_float_format
            )
            _emit(data.encode("utf-8"), None)
        else:
            write_grid_csv(u, args.out)
    return EXIT_OK


def main(argv=None):
    """Parse flags and dispatch to a subcommand.

    :param list argv: arguments without the program name, ``sys.argv[1:]`` if None.
    :return: (*int*) -- exit code.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.handler(args)
    except (TypeError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
