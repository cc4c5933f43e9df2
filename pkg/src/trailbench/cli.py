"""Command-line entry point.

Subcommands cover the pipeline end to end:

    trailbench make-gt    extract centreline masks and soft groundtruth
    trailbench split      write the deterministic k-fold manifest
    trailbench evaluate   score predictions against the groundtruth
    trailbench compare    rankings, heatmap tables, Bayesian matrix
    trailbench report     compare artifacts plus rendered PNG figures

Parameters come from an optional JSON config file (--config) with flag
overrides taking precedence. Exit codes: 0 success, 1 usage error,
2 data error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .pipeline import (
    DataError,
    UsageError,
    cmd_compare,
    cmd_evaluate,
    cmd_make_gt,
    cmd_report,
    cmd_split,
    load_run_config,
)


class _Parser(argparse.ArgumentParser):
    """argparse exits with code 2 on bad arguments; we reserve 2 for data errors."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, default=None, help="JSON config file")
    parser.add_argument("--dataset-root", type=Path, default=None, help="dataset root directory")
    parser.add_argument("--out", dest="out_dir", type=Path, default=None, help="output directory")


def _add_gt_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--reference",
        nargs=3,
        type=float,
        metavar=("H", "S", "I"),
        default=None,
        help="reference colour the annotations were drawn in (normalised coordinates)",
    )
    parser.add_argument("--threshold", type=float, default=None, help="colour distance threshold")
    parser.add_argument(
        "--normalise",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="divide distances by the per-image maximum before thresholding",
    )
    parser.add_argument("--sigma", type=float, default=None, help="soft mask falloff scale")
    parser.add_argument("--downscale", type=int, default=None, help="integer downscale factor")
    parser.add_argument(
        "--order",
        choices=["mask_then_downscale", "downscale_then_mask"],
        default=None,
        help="where downscaling sits in the groundtruth pipeline",
    )


def _add_eval_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tau", type=float, default=None, help="binarisation threshold")
    parser.add_argument(
        "--aggregation",
        choices=["mean_over_images", "pooled_pixels"],
        default=None,
        help="how per-image metrics combine into aggregates",
    )


def _add_stats_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--rope", type=float, default=None, help="region of practical equivalence")
    parser.add_argument("--rho", type=float, default=None, help="fold correlation (default 1/k)")
    parser.add_argument("--n-samples", type=int, default=None, help="posterior sample count")
    parser.add_argument("--stats-seed", type=int, default=None, help="seed for posterior sampling")
    parser.add_argument(
        "--stats-metric",
        choices=["iou", "precision", "recall", "f1"],
        default=None,
        help="fold score fed to the Bayesian test",
    )


def build_parser() -> _Parser:
    parser = _Parser(prog="trailbench", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("make-gt", help="extract centrelines and soft groundtruth masks")
    _add_common(p)
    _add_gt_flags(p)

    p = sub.add_parser("split", help="write the k-fold cross-validation manifest")
    _add_common(p)
    p.add_argument("--k", type=int, default=None, help="number of folds")
    p.add_argument("--fold-seed", type=int, default=None, help="shuffle seed")

    p = sub.add_parser("evaluate", help="score predictions against the groundtruth")
    _add_common(p)
    _add_eval_flags(p)
    p.add_argument("--preds", type=Path, default=None, help="predictions directory")

    for name in ("compare", "report"):
        p = sub.add_parser(
            name,
            help=(
                "build rankings, heatmaps and the Bayesian matrix"
                if name == "compare"
                else "compare artifacts plus rendered PNG figures"
            ),
        )
        _add_common(p)
        _add_stats_flags(p)
        p.add_argument("--metrics", type=Path, default=None, help="metrics JSON file")

    return parser


_OVERRIDE_KEYS = (
    "dataset_root",
    "out_dir",
    "threshold",
    "normalise",
    "sigma",
    "downscale",
    "order",
    "tau",
    "k",
    "fold_seed",
    "aggregation",
    "rope",
    "rho",
    "n_samples",
    "stats_seed",
    "stats_metric",
)


def _overrides(args: argparse.Namespace) -> dict[str, Any]:
    overrides: dict[str, Any] = {}
    for key in _OVERRIDE_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    reference = getattr(args, "reference", None)
    if reference is not None:
        overrides["reference_colour"] = {"h": reference[0], "s": reference[1], "i": reference[2]}
    return overrides


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = load_run_config(args.config, _overrides(args))
        if args.command == "make-gt":
            return cmd_make_gt(cfg)
        if args.command == "split":
            return cmd_split(cfg)
        if args.command == "evaluate":
            return cmd_evaluate(cfg, preds_dir=args.preds)
        if args.command == "compare":
            return cmd_compare(cfg, metrics_path=args.metrics)
        if args.command == "report":
            return cmd_report(cfg, metrics_path=args.metrics)
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
