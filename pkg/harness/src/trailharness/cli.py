"""Command-line entry point.

    trailharness list                      show the registries
    trailharness run --architecture ...    run one trial on one fold

Exit codes: 0 success, 1 usage error, 2 data error or failed trial.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .registry import ARCHITECTURES, ENCODERS
from .runner import MODES, HarnessDataError, TrialFailed, train_and_predict
from .trial import LOSSES, TrialSpec


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def build_parser() -> _Parser:
    parser = _Parser(prog="trailharness", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("list", help="print the architecture and encoder registries")

    p = sub.add_parser("run", help="train one architecture x encoder pair on one fold")
    p.add_argument("--architecture", required=True, help="architecture name")
    p.add_argument("--encoder", required=True, help="encoder name")
    p.add_argument("--fold", type=int, required=True, help="fold index from the manifest")
    p.add_argument("--epochs", type=int, default=1)
    p.add_argument("--lr", type=float, default=1e-3, help="learning rate")
    p.add_argument("--batch-size", type=int, default=2)
    p.add_argument("--loss", choices=list(LOSSES), default="bce")
    p.add_argument(
        "--mode",
        choices=list(MODES),
        default="model",
        help="oracle re-emits the groundtruth, zero writes empty predictions",
    )
    p.add_argument("--dataset-root", type=Path, required=True, help="directory with annotated/")
    p.add_argument("--out", type=Path, required=True, help="run directory (holds folds.json, gt/)")
    p.add_argument("--device", default="cpu")
    return parser


def _cmd_list() -> int:
    print("architectures:")
    for name, model_id in ARCHITECTURES.items():
        print(f"  {name}  ({model_id})")
    print("encoders:")
    for name, encoder_id in ENCODERS.items():
        print(f"  {name}  ({encoder_id})")
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "list":
            return _cmd_list()
        spec = TrialSpec(
            architecture=args.architecture,
            encoder=args.encoder,
            fold=args.fold,
            epochs=args.epochs,
            learning_rate=args.lr,
            batch_size=args.batch_size,
            loss=args.loss,
        )
        log = train_and_predict(
            spec, args.dataset_root, args.out, mode=args.mode, device=args.device
        )
        loss_note = "" if log["final_val_loss"] is None else f" (val loss {log['final_val_loss']:.4f})"
        print(f"wrote {log['n_predictions']} predictions for {spec.model_dir_name} fold {spec.fold}{loss_note}")
        return 0
    except (_UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (HarnessDataError, TrialFailed) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
