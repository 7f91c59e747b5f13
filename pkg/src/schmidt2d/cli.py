"""Command line front end.

Exit codes: 0 success, 1 configuration or file error, 2 numerical failure,
3 norm deficit (or oracle disagreement) under ``--strict``.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .config import load_config
from .errors import ConfigurationError, Schmidt2DError
from .pipeline import (EXIT_CONFIG, EXIT_DEGRADED, EXIT_NUMERICAL, EXIT_OK,
                       compare_with_oracle, run_pipeline)

log = logging.getLogger("schmidt2d")

ORACLE_TOLERANCE = 1e-3


def _overrides(args):
    out = {}
    if getattr(args, "grid_n", None) is not None:
        out["grid_n"] = args.grid_n
    if getattr(args, "m_max", None) is not None:
        out["m_max"] = args.m_max
    if getattr(args, "out_dir", None) is not None:
        out["outputs.dir"] = str(Path(args.out_dir).resolve())
    if getattr(args, "dump_kernels", False):
        out["outputs.kernels"] = "kernels"
    if getattr(args, "n_cart", None) is not None:
        out["oracle.n_cart"] = args.n_cart
    return out


def build_parser():
    parser = argparse.ArgumentParser(
        prog="schmidt2d",
        description="Schmidt decomposition of two-particle states in a 2D isotropic trap",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the full pipeline and write outputs")
    run.add_argument("--config", required=True)
    run.add_argument("--grid-n", type=int)
    run.add_argument("--m-max", type=int)
    run.add_argument("--out-dir")
    run.add_argument("--strict", action="store_true",
                     help="exit 3 when the norm deficit exceeds the tolerance")
    run.add_argument("--dump-kernels", action="store_true")
    run.add_argument("--oracle", action="store_true",
                     help="also run the Cartesian SVD oracle and print the comparison")

    orc = sub.add_parser("oracle", help="compare the channel spectrum with the Cartesian SVD oracle")
    orc.add_argument("--config", required=True)
    orc.add_argument("--n-cart", type=int)
    orc.add_argument("--grid-n", type=int)
    orc.add_argument("--m-max", type=int)
    orc.add_argument("--strict", action="store_true",
                     help=f"exit 3 when the oracle differs by more than {ORACLE_TOLERANCE:g}")

    val = sub.add_parser("validate", help="validate a config and print it with defaults applied")
    val.add_argument("--config", required=True)
    return parser


def _print_oracle(cmp):
    print(f"{'k':>3} {'channels':>14} {'oracle':>14} {'|diff|':>10}")
    for i, (a, b) in enumerate(zip(cmp["channels"], cmp["oracle"])):
        print(f"{i:>3} {a:14.8e} {b:14.8e} {abs(a - b):10.2e}")
    print(f"max |diff| = {cmp['max_abs_difference']:.3e} (n_cart = {cmp['n_cart']})")


def _run(args):
    config = load_config(args.config, _overrides(args))
    if args.command == "validate":
        print(json.dumps(config.to_dict(), indent=2))
        return EXIT_OK
    if args.command == "oracle":
        result = run_pipeline(config, write=False)
        cmp = compare_with_oracle(result.report, result.state, config)
        _print_oracle(cmp)
        if args.strict and cmp["max_abs_difference"] > ORACLE_TOLERANCE:
            return EXIT_DEGRADED
        return EXIT_OK

    result = run_pipeline(config, strict=args.strict, with_oracle=args.oracle)
    rep = result.report
    print(f"total norm       {rep.total_norm:.12f}")
    print(f"entropy (nats)   {rep.von_neumann_entropy:.12g}")
    print(f"entropy (bits)   {rep.entropy_bits:.12g}")
    print(f"linear entropy   {rep.linear_entropy:.12g}")
    print(f"schmidt number   {rep.schmidt_number:.12g}")
    print(f"reconstruction   {rep.reconstruction_residual:.3e}")
    for name, path in result.files.items():
        print(f"wrote {name}: {path}")
    if result.oracle is not None:
        _print_oracle(result.oracle)
    return result.exit_code


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _run(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"file error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Schmidt2DError as exc:
        print(f"numerical failure ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
