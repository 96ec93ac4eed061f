"""Command-line entry point: composable stages over inspectable files.

    pam mine      CSV event log -> tensor file(s) (+ stats JSON)
    pam stats     mining statistics only, no tensor output
    pam split     tensor file -> train/validation/test tensor files
    pam baseline  tensor file -> prediction file (persistence/marginal/truth)
    pam eval      truth + prediction files -> metrics report JSON
    pam profile   list built-in profiles and the template catalog

Exit codes: 0 success, 1 domain error, 2 usage error. Every file-producing
run also writes a ``*.meta.json`` block recording inputs, scheme, profile,
seed, and timings so runs are reproducible.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import baselines, metrics, tensor_store
from .declare import ConstraintTemplate, TEMPLATE_IDS, COUNTED_TEMPLATES, default14, load_profile
from .errors import PamError
from .event_log import IngestionOptions, parse_csv_log
from .miner import collect_stats, mine_log, mine_windowed
from .tensor_store import make_meta, read_predictions, read_tensors, write_predictions, write_tensors
from .windowing import FixedSize, bin_by_window_count, parse_bins, parse_scheme


def _default_threads() -> int:
    env = os.environ.get("PAM_THREADS")
    if env:
        return int(env)
    return os.cpu_count() or 1


def _write_json(payload, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_meta(out_path, payload):
    _write_json(payload, f"{out_path}.meta.json")


def _ingestion_options(args) -> IngestionOptions:
    return IngestionOptions(
        case_col=args.case_col, activity_col=args.activity_col, time_col=args.time_col
    )


def _add_log_args(parser):
    parser.add_argument("--log", required=True, help="event log CSV path")
    parser.add_argument("--case-col", default="case_id")
    parser.add_argument("--activity-col", default="activity")
    parser.add_argument("--time-col", default=None)
    parser.add_argument("--scheme", required=True, type=parse_scheme,
                        help="fixed-count:<n> or fixed-size:<k>")
    parser.add_argument("--profile", default="default14",
                        help="built-in profile name or profile file path")
    parser.add_argument("--bins", type=parse_bins, default=None,
                        help="window-count bins for fixed-size, e.g. 6-10,11-15")
    parser.add_argument("--threads", type=int, default=None)


def _mine_binned(log, scheme, profile, bins):
    binned = bin_by_window_count(log, scheme.k, bins)
    per_bin = {}
    rows = []
    for bin_range in bins:
        started = time.perf_counter()
        tensors = [
            mine_windowed(w, profile, len(log.alphabet))
            for w in binned.bins[bin_range]
        ]
        stats = collect_stats(tensors, 0, time.perf_counter() - started)
        per_bin[bin_range] = tensors
        rows.append(
            {
                "windows": f"{bin_range[0]}-{bin_range[1]}",
                "traces": stats.trace_count,
                "constraints": stats.total_constraint_count,
                "overlap": stats.mean_overlap,
                "time_s": stats.mining_seconds,
            }
        )
    return per_bin, {"bins": rows, "excluded_traces": binned.excluded_count}


def _run_mining(args):
    """Shared by `mine` and `stats`: returns (log, tensors-or-bins, stats JSON)."""
    opts = _ingestion_options(args)
    profile = load_profile(args.profile)
    parse_started = time.perf_counter()
    log = parse_csv_log(args.log, opts)
    parse_seconds = time.perf_counter() - parse_started
    threads = args.threads if args.threads is not None else _default_threads()

    trace_lengths = [len(t) for t in log.traces]
    base = {
        "log": args.log,
        "scheme": str(args.scheme),
        "profile": args.profile,
        "alphabet_size": len(log.alphabet),
        "input_traces": len(log.traces),
        "trace_length": {
            "min": min(trace_lengths),
            "max": max(trace_lengths),
            "mean": sum(trace_lengths) / len(trace_lengths),
        },
        "parse_time_s": parse_seconds,
    }

    if args.bins is not None:
        if not isinstance(args.scheme, FixedSize):
            raise PamError("--bins requires a fixed-size scheme")
        per_bin, stats_json = _mine_binned(log, args.scheme, profile, args.bins)
        return log, profile, per_bin, {**base, **stats_json}

    tensors, stats = mine_log(log, args.scheme, profile, threads=threads)
    stats_json = {
        **base,
        "trace_count": stats.trace_count,
        "traces_too_short": stats.too_short_count,
        "constraints": stats.total_constraint_count,
        "overlap": stats.mean_overlap,
        "time_s": stats.mining_seconds,
        "threads": threads,
    }
    return log, profile, tensors, stats_json


def _metadata(args, command, extra=None):
    payload = {
        "command": command,
        "inputs": {
            k: v
            for k, v in vars(args).items()
            if k not in ("command", "func") and v is not None
        },
        "order": "timestamp" if getattr(args, "time_col", None) else "file",
        "generated_by": "pam",
    }
    payload["inputs"] = {
        k: (str(v) if not isinstance(v, (str, int, float, list, dict)) else v)
        for k, v in payload["inputs"].items()
    }
    if extra:
        payload.update(extra)
    return payload


def _bin_out_path(out, bin_range):
    root, ext = os.path.splitext(out)
    return f"{root}.win{bin_range[0]}-{bin_range[1]}{ext or '.pam'}"


def cmd_mine(args):
    log, profile, result, stats_json = _run_mining(args)
    outputs = []
    if args.bins is not None:
        for bin_range, tensors in result.items():
            meta = make_meta(log.labels, profile, args.scheme, len(tensors))
            path = _bin_out_path(args.out, bin_range)
            write_tensors(tensors, meta, path)
            outputs.append(path)
    else:
        meta = make_meta(log.labels, profile, args.scheme, len(result))
        write_tensors(result, meta, args.out)
        outputs.append(args.out)
    if args.stats:
        _write_json(stats_json, args.stats)
    _write_meta(args.out, _metadata(args, "mine", {"outputs": outputs, "stats": stats_json}))
    print(json.dumps({k: stats_json[k] for k in stats_json if k != "trace_length"},
                     sort_keys=True))
    return 0


def cmd_stats(args):
    _, _, _, stats_json = _run_mining(args)
    stats_json["metadata"] = _metadata(args, "stats")
    text = json.dumps(stats_json, indent=2, sort_keys=True)
    if args.stats:
        _write_json(stats_json, args.stats)
    print(text)
    return 0


def cmd_split(args):
    tensors, meta = read_tensors(args.infile)
    train, val, test = metrics.split_dataset(
        tensors,
        train_fraction=args.train_fraction,
        validation_fraction_of_train=args.val_fraction,
        seed=args.seed,
    )
    outputs = {}
    for name, part in (("train", train), ("val", val), ("test", test)):
        part_meta = tensor_store.TensorMeta(
            alphabet=meta.alphabet,
            channels=meta.channels,
            scheme=meta.scheme,
            trace_count=len(part),
        )
        path = f"{args.out_prefix}.{name}.pam"
        write_tensors(part, part_meta, path)
        outputs[name] = {"path": path, "traces": len(part)}
    _write_meta(args.out_prefix, _metadata(args, "split", {"outputs": outputs}))
    print(json.dumps(outputs, sort_keys=True))
    return 0


def cmd_baseline(args):
    tensors, meta = read_tensors(args.infile)
    if args.kind == "persistence":
        predictions = baselines.persistence_predict(tensors, meta)
    elif args.kind == "marginal":
        if args.target:
            targets, target_meta = read_tensors(args.target)
            if not meta.same_universe(target_meta):
                raise PamError("--in and --target files have different universes")
        else:
            targets = tensors
        predictions = baselines.marginal_frequency_predict(tensors, targets, meta)
    else:  # truth
        predictions = baselines.truth_as_predictions(tensors, meta)
    write_predictions(predictions, args.out)
    _write_meta(args.out, _metadata(args, "baseline", {"outputs": [args.out]}))
    print(f"{args.kind} predictions for {len(predictions.traces)} traces -> {args.out}")
    return 0


def cmd_eval(args):
    truth, truth_meta = read_tensors(args.truth)
    predictions = read_predictions(args.pred)
    report = metrics.evaluate_predictions(
        truth, truth_meta, predictions, per_template=args.per_template
    )
    payload = {
        "ap": report.ap,
        "auc": report.auc,
        "f1_best": report.f1_best,
        "f1_threshold": report.f1_threshold,
        "positives": report.positives,
        "negatives": report.negatives,
        "metadata": _metadata(args, "eval"),
    }
    if report.per_template is not None:
        payload["per_template"] = {
            str(channel): {"template": label, "positives": count, "ap": ap}
            for channel, (label, count, ap) in report.per_template.items()
        }
    if args.report:
        _write_json(payload, args.report)
    print(
        f"ap={report.ap:.6f} auc={report.auc:.6f} f1={report.f1_best:.6f} "
        f"positives={report.positives} negatives={report.negatives}"
    )
    return 0


def cmd_profile(args):
    if args.action == "list":
        print("built-in profiles:")
        profile = default14()
        print(f"  default14 ({len(profile)} channels)")
        for line in profile.to_lines():
            print(f"    {line}")
        print("all templates:")
        for tid in TEMPLATE_IDS:
            if tid in COUNTED_TEMPLATES:
                print(f"  {tid}:<n>  (n in 1..3, unary)")
            else:
                arity = "unary" if ConstraintTemplate(tid).arity == 1 else "binary"
                print(f"  {tid}  ({arity})")
        return 0
    raise PamError(f"unknown profile action {args.action!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pam",
        description="Windowed declarative-constraint tensors from event logs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_mine = sub.add_parser("mine", help="mine a CSV log into a tensor file")
    _add_log_args(p_mine)
    p_mine.add_argument("--out", required=True, help="tensor file path")
    p_mine.add_argument("--stats", default=None, help="also write stats JSON here")
    p_mine.set_defaults(func=cmd_mine)

    p_stats = sub.add_parser("stats", help="mining statistics without tensor output")
    _add_log_args(p_stats)
    p_stats.add_argument("--stats", default=None, help="write stats JSON here")
    p_stats.set_defaults(func=cmd_stats)

    p_split = sub.add_parser("split", help="split a tensor file into train/val/test")
    p_split.add_argument("--in", dest="infile", required=True)
    p_split.add_argument("--seed", type=int, default=0)
    p_split.add_argument("--train-fraction", type=float, default=0.8)
    p_split.add_argument("--val-fraction", type=float, default=0.2,
                         help="validation fraction of the training part")
    p_split.add_argument("--out-prefix", required=True)
    p_split.set_defaults(func=cmd_split)

    p_base = sub.add_parser("baseline", help="training-free reference predictions")
    p_base.add_argument("--kind", choices=("persistence", "marginal", "truth"), required=True)
    p_base.add_argument("--in", dest="infile", required=True)
    p_base.add_argument("--target", default=None,
                        help="marginal only: score this tensor file's traces")
    p_base.add_argument("--out", required=True)
    p_base.set_defaults(func=cmd_baseline)

    p_eval = sub.add_parser("eval", help="score predictions against truth tensors")
    p_eval.add_argument("--truth", required=True)
    p_eval.add_argument("--pred", required=True)
    p_eval.add_argument("--per-template", action="store_true")
    p_eval.add_argument("--report", default=None, help="write report JSON here")
    p_eval.set_defaults(func=cmd_eval)

    p_profile = sub.add_parser("profile", help="inspect constraint profiles")
    p_profile.add_argument("action", choices=("list",))
    p_profile.set_defaults(func=cmd_profile)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (PamError, OSError) as err:
        print(f"pam {args.command}: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
