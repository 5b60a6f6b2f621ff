"""Command line entry point.

Exit codes: 0 success, 2 configuration error, 3 input error, 4 model error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from ifsad.config import RunConfig, build_config, parse_weights
from ifsad.errors import ConfigError, IfsadError
from ifsad.io import (
    load_characteristic_csv,
    load_edge_stream,
    load_labels,
    write_characteristic_csv,
    write_classifications,
    write_labels,
    write_metrics,
    write_sweep,
)
from ifsad.pipeline import (
    ABNORMAL,
    CharacteristicMatrix,
    baseline_predictions,
    classify_matrix,
    evaluate,
    sweep_cluster_size,
    train,
)
from ifsad.svg import write_membership_svg

log = logging.getLogger("ifsad")

BASELINES = ("node_size", "diameter_max")


def parse_range(text: str) -> list[int]:
    text = text.strip()
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse range {text!r}; use e.g. 2..8 or 2,3,5") from None


def _polarity_pairs(items) -> dict | None:
    if not items:
        return None
    out = {}
    for item in items:
        if "=" not in item:
            raise ConfigError(f"--polarity expects NAME=rare|low|high, got {item!r}")
        name, pol = item.split("=", 1)
        out[name.strip()] = pol.strip()
    return out


def _config(args) -> RunConfig:
    overrides = {
        "m": getattr(args, "m", None),
        "alpha": args.alpha,
        "beta": args.beta,
        "weights": parse_weights(args.weights) if args.weights else None,
        "window_seconds": args.window,
        "seed": args.seed,
        "train_fraction": args.train_fraction,
        "polarity": _polarity_pairs(args.polarity),
    }
    return build_config(args.config, overrides)


def _characteristics(args, cfg: RunConfig) -> CharacteristicMatrix:
    if args.chars:
        return load_characteristic_csv(args.chars)
    if args.edges:
        snapshots = load_edge_stream(args.edges, cfg.window_seconds)
        log.info("loaded %d snapshots from %s", len(snapshots), args.edges)
        return CharacteristicMatrix.from_snapshots(snapshots)
    raise ConfigError("give either --edges or --chars")


def _labels(args, c_matrix):
    if not args.labels:
        return None
    return load_labels(args.labels, c_matrix.ticks)


def cmd_metrics(args) -> int:
    cfg = _config(args)
    snapshots = load_edge_stream(args.edges, cfg.window_seconds)
    c_matrix = CharacteristicMatrix.from_snapshots(snapshots)
    write_characteristic_csv(args.output, c_matrix)
    log.info("wrote %d ticks to %s", c_matrix.n, args.output)
    return 0


def cmd_detect(args) -> int:
    cfg = _config(args)
    c_matrix = _characteristics(args, cfg)
    labels = _labels(args, c_matrix)
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)

    model = train(c_matrix, cfg.m, cfg.pipeline_config())
    inactive = [n for n, a in zip(model.names, model.active_mask) if not a]
    if inactive:
        log.warning("characteristics without a usable partition: %s", ", ".join(inactive))
    results = classify_matrix(model, c_matrix)
    write_classifications(outdir / "classifications.csv", model, results)

    if labels is not None:
        rows = [("ifsad", evaluate([c.binary_abnormal for c in results], labels))]
        for name in BASELINES:
            if name in model.names and model.active_mask[model.names.index(name)]:
                preds = [p == ABNORMAL for p in baseline_predictions(model, c_matrix, name)]
                rows.append((name, evaluate(preds, labels)))
        write_metrics(outdir, rows, {"config": cfg.as_dict(), "inactive": inactive})
    if args.svg:
        write_membership_svg(outdir / "membership.svg", model.variables, results, labels)
    if args.sweep:
        if labels is None:
            raise ConfigError("--sweep needs --labels")
        table = sweep_cluster_size(c_matrix, labels, parse_range(args.sweep), cfg.pipeline_config())
        write_sweep(outdir / "sweep.csv", table)
    return 0


def cmd_sweep(args) -> int:
    cfg = _config(args)
    c_matrix = _characteristics(args, cfg)
    labels = _labels(args, c_matrix)
    if labels is None:
        raise ConfigError("sweep needs --labels")
    table = sweep_cluster_size(c_matrix, labels, parse_range(args.range), cfg.pipeline_config())
    write_sweep(args.output, table)
    for m, a in table:
        print(f"m={m:2d}  accuracy={a:.4f}")
    return 0


def cmd_baseline(args) -> int:
    cfg = _config(args)
    c_matrix = _characteristics(args, cfg)
    if args.char not in c_matrix.names:
        raise ConfigError(f"unknown characteristic {args.char!r}; have {', '.join(c_matrix.names)}")
    labels = _labels(args, c_matrix)
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    model = train(c_matrix, cfg.m, cfg.pipeline_config())
    preds = baseline_predictions(model, c_matrix, args.char)
    with (outdir / f"baseline_{args.char}.csv").open("w") as fh:
        fh.write("tick,predicted,abnormal\n")
        for t, p in zip(c_matrix.ticks, preds):
            fh.write(f"{int(t)},{p},{int(p == ABNORMAL)}\n")
    if labels is not None:
        write_metrics(outdir, [(args.char, evaluate([p == ABNORMAL for p in preds], labels))])
    return 0


def cmd_synth(args) -> int:
    from ifsad.synthetic import generate_sequence

    seq = generate_sequence(args.seed, n_ticks=args.ticks, n_nodes=args.nodes, n_anomalies=args.anomalies)
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    window = args.window or 60
    with (outdir / "edges.txt").open("w") as fh:
        fh.write(f"# synthetic stream, seed {args.seed}, window {window}s\n")
        for s in seq.snapshots:
            for u, v in s.edges():
                fh.write(f"{s.tick * window} n{u} n{v}\n")
    write_labels(outdir / "labels.csv", range(len(seq.snapshots)), seq.labels)
    return 0


def _add_config_flags(p: argparse.ArgumentParser, with_m: bool = True) -> None:
    g = p.add_argument_group("configuration")
    g.add_argument("--config", help="key = value settings file")
    if with_m:
        g.add_argument("--m", type=int, help="number of linguistic variables (default 3)")
    g.add_argument("--alpha", type=float, help="boundary hesitation in [0, 1) (default 0.2)")
    g.add_argument("--beta", type=float, help="Yager parameter in (0, 1] (default 0.5)")
    g.add_argument("--weights", help="'uniform' or comma separated weights")
    g.add_argument("--window", type=int, help="snapshot window in seconds for --edges")
    g.add_argument("--seed", type=int)
    g.add_argument("--train-fraction", type=float, dest="train_fraction")
    g.add_argument("--polarity", action="append", metavar="NAME=POL",
                   help="which interval is abnormal for a characteristic: rare, low or high")


def _add_input_flags(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--edges", help="edge stream: 'timestamp src dst' per line")
    src.add_argument("--chars", help="characteristic CSV (header row, one row per tick)")
    p.add_argument("--labels", help="ground truth CSV 'tick,label'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ifsad", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("metrics", help="edge stream -> characteristic CSV")
    p.add_argument("edges")
    p.add_argument("-o", "--output", required=True)
    _add_config_flags(p)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("detect", help="train, classify every tick and write a report")
    _add_input_flags(p)
    p.add_argument("-o", "--output", required=True, help="report directory")
    p.add_argument("--svg", action="store_true", help="also draw membership panels")
    p.add_argument("--sweep", metavar="LO..HI", help="also write an accuracy-vs-m table")
    _add_config_flags(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("sweep", help="accuracy as a function of the number of variables")
    _add_input_flags(p)
    p.add_argument("--range", default="2..8", metavar="LO..HI")
    p.add_argument("-o", "--output", required=True, help="CSV path")
    _add_config_flags(p, with_m=False)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("baseline", help="single-characteristic detector")
    _add_input_flags(p)
    p.add_argument("--char", required=True)
    p.add_argument("-o", "--output", required=True, help="report directory")
    _add_config_flags(p)
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("synth", help="write a synthetic edge stream with injected anomalies")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ticks", type=int, default=100)
    p.add_argument("--nodes", type=int, default=200)
    p.add_argument("--anomalies", type=int, default=10)
    p.add_argument("--window", type=int, default=60)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except IfsadError as exc:
        print(f"ifsad: error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
