"""Command-line entry point: ``seqdrift {train,run,synth,bench,audit}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .checkpoint import load_discriminator, save_discriminator
from .errors import SeqDriftError
from .harness import (
    build_discriminator,
    format_timings,
    load_config,
    run_experiment,
    state_breakdown,
    time_phases,
    write_timeline,
    write_trace,
)
from .harness.audit import batch_buffer_bytes
from .detector import Detector
from .streams import DriftSchedule, FanStreamConfig, GaussianStreamConfig, gen_drift_stream, gen_fan_stream, write_csv

log = logging.getLogger("seqdrift")


def cmd_train(args):
    cfg = load_config(args.config)
    train, _, _ = cfg.dataset.load(cfg.seed)
    d = build_discriminator(cfg, train)
    save_discriminator(args.out, d)
    log.info("trained %d instances on %d samples -> %s", d.num_classes, len(train), args.out)
    print(json.dumps({"checkpoint": str(args.out), "num_classes": d.num_classes, "dim": d.dim,
                      "theta_error": d.theta_error, "theta_drift": d.theta_drift}, indent=2))


def cmd_run(args):
    cfg = load_config(args.config)
    data = cfg.dataset.load(cfg.seed)
    d = load_discriminator(args.checkpoint) if args.checkpoint else None
    report = run_experiment(cfg, data=data, discriminator=d)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_trace(out / "trace.csv", report.trace)
    write_timeline(out / "accuracy.csv", report.accuracy_timeline)
    (out / "report.json").write_text(report.to_json(timings=not args.no_timings))
    summary = {k: getattr(report, k) for k in ("method", "n_samples", "accuracy_overall",
                                                 "detection_delays", "false_alarms")}
    print(json.dumps(summary, indent=2, default=str))


def cmd_synth(args):
    sched = DriftSchedule(args.kind, args.drift_at, args.drift_end)
    if args.generator == "fan":
        fan = FanStreamConfig(n_train=args.n_train or 500, n_test=args.n_test or 700,
                              damage=args.damage)
        train, test, meta = gen_fan_stream(sched, fan, args.seed)
    else:
        gauss = GaussianStreamConfig(n_train=args.n_train or 1000, n_test=args.n_test or 5000)
        train, test, meta = gen_drift_stream(sched, gauss, args.seed)
    write_csv(args.out, train, test, label_column="label" if train.labels is not None else None)
    sidecar = {"n_train": len(train), "n_test": len(test), "dim": meta.dim,
               "drift_points": meta.drift_points,
               "label_column": "label" if train.labels is not None else None}
    Path(args.out).with_suffix(".json").write_text(json.dumps(sidecar, indent=2))
    print(json.dumps(sidecar, indent=2))


def cmd_bench(args):
    cfg = load_config(args.config)
    timings = time_phases(cfg, n_samples=args.samples, repeats=args.repeats)
    print(json.dumps(timings, indent=2) if args.json else format_timings(timings))


def cmd_audit(args):
    cfg = load_config(args.config)
    train, test, _ = cfg.dataset.load(cfg.seed)
    d = build_discriminator(cfg, train)
    det = Detector(d, cfg.detector.window, cfg.reconstruction,
                   reset_window=cfg.detector.reset_window, repredict=cfg.detector.repredict)
    rows, done = [], 0
    for target in sorted(args.steps):
        while done < target:
            det.step(test.X[done % len(test)])
            done += 1
        parts = state_breakdown(det.state, det.d, det.rstate)
        rows.append({"steps": done, "total_bytes": sum(parts.values()), **parts})
    report = {"dim": d.dim, "num_classes": d.num_classes, "sizes": rows,
              "batch_buffer_bytes": batch_buffer_bytes(args.batch, d.dim)}
    print(json.dumps(report, indent=2))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="seqdrift", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("train", help="fit the initial discriminator and write a checkpoint")
    s.add_argument("--config", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_train)

    s = sub.add_parser("run", help="stream an experiment and write trace/report files")
    s.add_argument("--config", required=True)
    s.add_argument("--out-dir", required=True)
    s.add_argument("--checkpoint", help="start from a checkpoint instead of training")
    s.add_argument("--no-timings", action="store_true", help="omit wall-clock timings from report.json")
    s.set_defaults(func=cmd_run)

    s = sub.add_parser("synth", help="write a generated drift stream as CSV")
    s.add_argument("--generator", choices=("gaussian", "fan"), default="gaussian")
    s.add_argument("--kind", choices=("sudden", "gradual", "incremental", "reoccurring"), default="sudden")
    s.add_argument("--drift-at", type=int, default=2000)
    s.add_argument("--drift-end", type=int)
    s.add_argument("--n-train", type=int)
    s.add_argument("--n-test", type=int)
    s.add_argument("--damage", choices=("holes", "chipped"), default="holes")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_synth)

    s = sub.add_parser("bench", help="per-phase timing report")
    s.add_argument("--config", required=True)
    s.add_argument("--samples", type=int, default=200)
    s.add_argument("--repeats", type=int, default=3, help="keep the best of this many runs")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("audit", help="serialized state size after streaming")
    s.add_argument("--config", required=True)
    s.add_argument("--steps", type=int, nargs="+", default=[1000])
    s.add_argument("--batch", type=int, default=235, help="batch size of the buffering comparison")
    s.set_defaults(func=cmd_audit)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except (SeqDriftError, OSError) as exc:
        print(f"seqdrift: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
