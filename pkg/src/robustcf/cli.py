"""Command-line front end: track one sequence, compare a loss/noise grid,
or run the self-test oracles.

Configuration is a flat key-value document; command-line flags override
config-file values, which override the built-in defaults.  Every run
writes a config snapshot beside its outputs so results can be
reproduced from the snapshot alone.  Exit codes: 0 success, 1 usage
error, 2 runtime error.
"""

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .errors import TrackerError
from .harness import load_sequence, run_eval, write_report_files
from .learner import LearnerParams
from .losses import LossKind
from .selftest import run_selftest
from .tracker import TrackerParams

WORKERS_ENV = "ROBUSTCF_WORKERS"

CONFIG_DEFAULTS = {
    "loss": "l1l2",
    "lam": 1e-4,
    "tau": 1e-4,
    "max_iters": 100,
    "rel_tol": 1e-3,
    "padding": 1.5,
    "interp_factor": 0.02,
    "feature": "hog",
    "cell_size": 4,
    "kernel_sigma": 0.5,
    "label_sigma": None,
    "sensitivity_mode": "norm-first",
    "seed": 0,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def load_config_file(path):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            config = json.load(handle)
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(config, dict):
        raise UsageError(f"config file {path} must hold a flat JSON object")
    unknown = sorted(set(config) - set(CONFIG_DEFAULTS))
    if unknown:
        raise UsageError(f"unknown config keys in {path}: {', '.join(unknown)}")
    return config


def resolve_config(args):
    """defaults < config file < explicit flags."""
    config = dict(CONFIG_DEFAULTS)
    if getattr(args, "config", None):
        config.update(load_config_file(args.config))
    for key in CONFIG_DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            config[key] = value
    return config


def build_params(config, loss=None):
    learner = LearnerParams(
        lam=float(config["lam"]),
        tau=float(config["tau"]),
        loss=LossKind.parse(loss or config["loss"]),
        max_iters=int(config["max_iters"]),
        rel_tol=float(config["rel_tol"]),
    )
    label_sigma = config["label_sigma"]
    return TrackerParams(
        learner=learner,
        padding=float(config["padding"]),
        interp_factor=float(config["interp_factor"]),
        feature=str(config["feature"]),
        cell_size=int(config["cell_size"]),
        kernel_sigma=float(config["kernel_sigma"]),
        label_sigma=None if label_sigma is None else float(label_sigma),
    )


def _write_snapshot(out_dir, config, extra):
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    snapshot = dict(config)
    snapshot.update(extra)
    with open(out_dir / "config.json", "w", encoding="ascii") as handle:
        json.dump(snapshot, handle, indent=2, sort_keys=True)
        handle.write("\n")


def _parse_float_list(text, what):
    try:
        return [float(f) for f in text.split(",") if f.strip()]
    except ValueError as exc:
        raise UsageError(f"bad {what} list {text!r}: {exc}") from exc


def cmd_track(args):
    config = resolve_config(args)
    spec = load_sequence(args.sequence, args.gt)
    params = build_params(config)
    report = run_eval(
        spec, params, noise_fraction=0.0, seed=int(config["seed"]),
        sensitivity_mode=config["sensitivity_mode"],
    )
    out_dir = Path(args.out)
    _write_snapshot(out_dir, config, {
        "command": "track", "sequence": str(args.sequence), "gt": str(args.gt),
    })
    json_path, _, _ = write_report_files(report, out_dir)
    print(f"wrote {json_path}")
    print(
        f"{report.sequence} loss={report.loss}: "
        f"precision@20={report.precision_at_20:.3f} "
        f"success@0.5={report.success_at_05:.3f} auc={report.auc:.3f} "
        f"fps={report.fps:.1f}"
    )
    return 0


def _compare_cell(spec, config, loss, noise):
    params = build_params(config, loss=loss)
    return run_eval(
        spec, params, noise_fraction=noise, seed=int(config["seed"]),
        sensitivity_mode=config["sensitivity_mode"],
    )


def cmd_compare(args):
    config = resolve_config(args)
    losses = [LossKind.parse(text).value for text in args.losses.split(",") if text.strip()]
    if not losses:
        raise UsageError("--losses must name at least one loss")
    noises = _parse_float_list(args.noise, "noise") or [0.0]
    spec = load_sequence(args.sequence, args.gt)
    out_dir = Path(args.out)
    _write_snapshot(out_dir, config, {
        "command": "compare", "sequence": str(args.sequence), "gt": str(args.gt),
        "losses": losses, "noise": noises,
    })

    cells = [(loss, noise) for loss in losses for noise in noises]
    workers = int(os.environ.get(WORKERS_ENV, "1"))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(
                pool.map(lambda c: _compare_cell(spec, config, *c), cells)
            )
    else:
        reports = [_compare_cell(spec, config, *cell) for cell in cells]

    summary_path = out_dir / "summary.csv"
    timings_path = out_dir / "timings.csv"
    with open(summary_path, "w", encoding="ascii") as summary, \
            open(timings_path, "w", encoding="ascii") as timings:
        summary.write(
            "loss,noise,precision_at_20,success_at_05,auc,"
            "sensitivity_filter,sensitivity_response\n"
        )
        timings.write("loss,noise,fps\n")
        for (loss, noise), report in zip(cells, reports):
            write_report_files(report, out_dir)
            summary.write(
                f"{loss},{noise:.2f},{report.precision_at_20!r},"
                f"{report.success_at_05!r},{report.auc!r},"
                f"{report.sensitivity_filter!r},{report.sensitivity_response!r}\n"
            )
            timings.write(f"{loss},{noise:.2f},{report.fps!r}\n")
    print(f"wrote {len(reports)} reports and {summary_path}")
    return 0


def cmd_selftest(args):
    ok = run_selftest(seed=args.seed or 0, inject_fault=args.inject_fault)
    if not ok:
        raise TrackerError("self-test failed")
    return 0


def build_parser():
    parser = _Parser(prog="robustcf", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config_flags(p):
        p.add_argument("--config", help="JSON config file (flat key-value)")
        p.add_argument("--loss", choices=[k.value for k in LossKind])
        p.add_argument("--lam", type=float)
        p.add_argument("--tau", type=float)
        p.add_argument("--max-iters", dest="max_iters", type=int)
        p.add_argument("--rel-tol", dest="rel_tol", type=float)
        p.add_argument("--padding", type=float)
        p.add_argument("--interp-factor", dest="interp_factor", type=float)
        p.add_argument("--feature", choices=["grayscale", "hog"])
        p.add_argument("--cell-size", dest="cell_size", type=int)
        p.add_argument("--kernel-sigma", dest="kernel_sigma", type=float)
        p.add_argument("--label-sigma", dest="label_sigma", type=float)
        p.add_argument("--seed", type=int)

    track = sub.add_parser("track", help="track one sequence and write a report")
    track.add_argument("--sequence", required=True, help="frame directory")
    track.add_argument("--gt", required=True, help="ground-truth file (x,y,w,h per line)")
    track.add_argument("--out", default="results", help="output directory")
    add_config_flags(track)
    track.set_defaults(func=cmd_track)

    compare = sub.add_parser(
        "compare", help="run a losses x noise grid and write a summary"
    )
    compare.add_argument("--sequence", required=True)
    compare.add_argument("--gt", required=True)
    compare.add_argument("--out", default="results")
    compare.add_argument("--losses", default="l2,l1,l1l2,l21",
                         help="comma-separated loss list")
    compare.add_argument("--noise", default="0",
                         help="comma-separated corrupted-pixel fractions")
    add_config_flags(compare)
    compare.set_defaults(func=cmd_compare)

    selftest = sub.add_parser("selftest", help="run the oracle property suite")
    selftest.add_argument("--seed", type=int, default=0)
    selftest.add_argument("--inject-fault", action="store_true",
                          help="perturb a check to demonstrate failure reporting")
    selftest.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except TrackerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
