"""pam-nn: train and run next-window predictors over tensor files."""

from __future__ import annotations

import argparse
import json
import sys

from .grid import grid_search
from .specs import load_spec, spec_from_dict
from .train import ModelHandle, predict_to_file, train_from_files


def cmd_train(args):
    if args.spec:
        spec = load_spec(args.arch, args.spec)
    else:
        spec = spec_from_dict(args.arch, {})
    _, log = train_from_files(
        args.arch, args.train, args.val, spec, out_model=args.out_model
    )
    print(json.dumps({"epochs": log["epochs"], "final_loss": log["loss"][-1],
                      "epoch_seconds": log["epoch_seconds"]}))
    return 0


def cmd_predict(args):
    handle = ModelHandle.load(args.model)
    predict_to_file(handle, args.infile, args.out)
    print(f"wrote {args.out}")
    return 0


def cmd_grid(args):
    with open(args.config, encoding="utf-8") as fh:
        config = json.load(fh)
    rows = grid_search(config, args.workdir)
    text = json.dumps(rows, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="pam-nn")
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="fit a model on tensor files")
    p_train.add_argument("--arch", choices=("convlstm", "encdec"), required=True)
    p_train.add_argument("--train", required=True)
    p_train.add_argument("--val", required=True)
    p_train.add_argument("--spec", default=None, help="spec JSON path (defaults apply)")
    p_train.add_argument("--out-model", required=True)
    p_train.set_defaults(func=cmd_train)

    p_pred = sub.add_parser("predict", help="score a tensor file's final windows")
    p_pred.add_argument("--model", required=True)
    p_pred.add_argument("--in", dest="infile", required=True)
    p_pred.add_argument("--out", required=True)
    p_pred.set_defaults(func=cmd_predict)

    p_grid = sub.add_parser("grid", help="run a hyperparameter grid")
    p_grid.add_argument("--config", required=True)
    p_grid.add_argument("--workdir", default="grid-runs")
    p_grid.add_argument("--out", default=None)
    p_grid.set_defaults(func=cmd_grid)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as err:  # domain errors -> exit 1 with message
        print(f"pam-nn {args.command}: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
