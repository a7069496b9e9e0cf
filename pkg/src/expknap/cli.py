"""``expknap`` command line.

Machine-readable reports go to standard output (or ``--out``); a one-line
human summary goes to standard error. Exit status: 0 success, 1 runtime
error, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .core import ExpknapError, Instance, InstanceValidationError, load_instance, trial_seed
from .generators import GeneratorSpec, generate_instance
from .harness import EXHAUSTIVE_MAX_N, AlgorithmSpec, ratio_denominator, run_trials
from .knapsack_offline import fractional_opt, integral_opt, off_greedy
from .lowerbound import adversarial_lp_value, adversarial_lp_vertex_value, secretary_lower_bound
from .secretary import default_threshold

COMMANDS = ("secretary", "ksecretary", "knapsack", "histogram", "lowerbound", "adversarial", "oracle")
DEFAULT_TRIALS = 10_000
DEFAULT_SEED = 0


class UsageError(Exception):
    pass


def instance_seed(seed: int) -> np.random.SeedSequence:
    """Seed used to draw a generated instance, separate from trial streams."""
    return trial_seed(seed, 0, 2)


# -- report encoding --------------------------------------------------------

def report_to_json(report: dict) -> str:
    return json.dumps(report, separators=(",", ":")) + "\n"


def report_to_csv(report: dict) -> str:
    """Histogram reports become ``count,frequency`` rows preceded by
    ``# key=<json>`` lines; other reports become ``key,value`` rows with
    JSON-encoded values."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if "histogram" in report:
        for key, val in report.items():
            if key != "histogram":
                buf.write(f"# {key}={json.dumps(val, separators=(',', ':'))}\n")
        w.writerow(["count", "frequency"])
        for k, v in report["histogram"].items():
            w.writerow([k, v])
    else:
        w.writerow(["key", "value"])
        for key, val in report.items():
            w.writerow([key, json.dumps(val, separators=(",", ":"))])
    return buf.getvalue()


def report_from_csv(text: str) -> dict:
    lines = text.splitlines()
    if lines and lines[0] == "key,value":
        return {k: json.loads(v) for k, v in csv.reader(lines[1:])}
    report = {}
    hist = {}
    for line in lines:
        if line.startswith("# "):
            key, _, val = line[2:].partition("=")
            report[key] = json.loads(val)
        elif line and line != "count,frequency":
            k, v = line.split(",")
            hist[k] = int(v)
    report["histogram"] = hist
    return report


# -- argument parsing -------------------------------------------------------

def _positive_int(text: str) -> int:
    try:
        val = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if val < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return val


def _nonneg_int(text: str) -> int:
    try:
        val = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if val < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return val


def _aug_capacity(text: str) -> float:
    try:
        val = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not 1 < val <= 2:
        raise argparse.ArgumentTypeError("augmented capacity C must lie in (1, 2]")
    return val


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="expknap",
        description="Online secretary and knapsack selection under an expected capacity constraint.",
        epilog=(
            "Defaults: t = floor(n/e) (histogram: floor(n/e)+1), C = 2, trials = 10000, "
            "seed from --seed, else $EXPKNAP_SEED, else 0."
        ),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    def output(p):
        p.set_defaults(subparser=p)
        p.add_argument("--format", choices=("json", "csv"), default="json", help="report format (default json)")
        p.add_argument("--out", type=Path, help="write the report here instead of standard output")

    def randomized(p, trials=True):
        p.add_argument("--seed", type=_nonneg_int, help="base seed (default $EXPKNAP_SEED or 0)")
        if trials:
            p.add_argument("--trials", type=_positive_int, default=DEFAULT_TRIALS,
                           help="number of random arrival orders (default 10000)")
            p.add_argument("--jobs", type=_positive_int, default=1, help="worker processes (default 1)")
            p.add_argument("--exhaustive", action="store_true",
                           help=f"run every arrival order once instead (n <= {EXHAUSTIVE_MAX_N})")

    def source(p, default_generator=None):
        p.add_argument("--n", type=_positive_int, help="number of items")
        p.add_argument("--generator", default=default_generator,
                       help="instance family, e.g. 'uniform' or 'correlated:rho=0.5'"
                       + (f" (default {default_generator})" if default_generator else
                          " (default: distinct values 1..n)"))
        p.add_argument("--instance", type=Path, help="CSV or JSON instance file")
        p.add_argument("--capacity", type=float,
                       help="raw capacity of --instance; weights are divided by it")

    p = sub.add_parser("secretary", help="t-Threshold (or the classical baseline) on unit weights")
    source(p)
    p.add_argument("--t", type=_nonneg_int, help="observation length (default floor(n/e))")
    p.add_argument("--classical", action="store_true", help="stop after the first selection")
    randomized(p)
    output(p)

    p = sub.add_parser("ksecretary", help="k-item t-Threshold on unit weights")
    source(p)
    p.add_argument("--k", type=_positive_int, required=True)
    p.add_argument("--t", type=_nonneg_int, help="observation length (default floor(n/e))")
    randomized(p)
    output(p)

    p = sub.add_parser("knapsack", help="AUG-ON or ON on a knapsack instance")
    source(p, default_generator="uniform")
    p.add_argument("--algorithm", choices=("on", "aug-on"), default="on")
    p.add_argument("--capacity-aug", dest="C", type=_aug_capacity, default=2.0,
                   help="augmented capacity C in (1, 2] (default 2)")
    p.add_argument("--t", type=_nonneg_int, help="AUG-ON observation length (default floor(n/e))")
    p.add_argument("--denominator", choices=("fractional", "integral", "off"), default="fractional",
                   help="offline benchmark for the ratio (default fractional optimum at capacity 1)")
    randomized(p)
    output(p)

    p = sub.add_parser("histogram", help="selection-count histogram of t-Threshold on n distinct values")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--t", type=_nonneg_int, help="observation length (default floor(n/e)+1)")
    randomized(p)
    output(p)

    p = sub.add_parser("lowerbound", help="best achievable success probability for the secretary problem")
    p.add_argument("--n", type=_positive_int, required=True)
    output(p)

    p = sub.add_parser("adversarial", help="success bound when the adversary picks the arrival order")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--check", action="store_true", help="also solve by vertex enumeration")
    output(p)

    p = sub.add_parser("oracle", help="offline values: fractional, 0/1 optimum, and OFF")
    source(p, default_generator="uniform")
    p.add_argument("--capacity-aug", dest="C", type=_aug_capacity, default=2.0)
    p.add_argument("--resolution", type=_positive_int, help="DP weight grid (default exact for n <= 20)")
    randomized(p, trials=False)
    output(p)
    return parser


# -- commands ---------------------------------------------------------------

def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("EXPKNAP_SEED")
    if env is None or env == "":
        return DEFAULT_SEED
    try:
        val = int(env)
    except ValueError:
        raise UsageError(f"EXPKNAP_SEED must be a non-negative integer, got {env!r}") from None
    if val < 0:
        raise UsageError("EXPKNAP_SEED must be non-negative")
    return val


def _instance(args, seed: int) -> tuple[Instance, str]:
    if args.instance is not None:
        if args.generator is not None and args.generator != _default_generator(args):
            raise UsageError("--instance and --generator are mutually exclusive")
        if args.capacity is not None and not args.capacity > 0:
            raise UsageError("--capacity must be positive")
        inst = load_instance(args.instance, args.capacity)
        if args.n is not None and args.n != inst.n:
            raise UsageError(f"--n {args.n} disagrees with {inst.n} items in {args.instance}")
        if inst.n == 0:
            raise InstanceValidationError(f"{args.instance}: no items")
        return inst, str(args.instance)
    if args.capacity is not None:
        raise UsageError("--capacity only applies to --instance")
    if args.n is None:
        raise UsageError("either --n or --instance is required")
    if args.generator is None:
        return Instance.ranks(args.n), "ranks"
    try:
        spec = GeneratorSpec.parse(args.generator, args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return generate_instance(spec, instance_seed(seed)), spec.describe()


def _default_generator(args) -> str | None:
    return "uniform" if args.command in ("knapsack", "oracle") else None


def _check_exhaustive(args, n: int):
    if args.exhaustive and n > EXHAUSTIVE_MAX_N:
        raise UsageError(f"--exhaustive supports n <= {EXHAUSTIVE_MAX_N}, got n={n}")


def _check_t(t, n):
    if t is not None and t > n:
        raise UsageError(f"--t {t} exceeds n={n}")


def _stats_report(seed, source, stats, **extra) -> dict:
    d = stats.to_dict()
    report = {"command": None, "seed": seed, "source": source}
    report.update({k: v for k, v in d.items() if k != "seed"})
    report.update(extra)
    return report


def cmd_secretary(args):
    seed = _seed(args)
    inst, source = _instance(args, seed)
    _check_t(args.t, inst.n)
    _check_exhaustive(args, inst.n)
    algo = AlgorithmSpec("classical" if args.classical else "secretary", t=args.t)
    stats = run_trials(inst, algo, args.trials, seed, exhaustive=args.exhaustive, jobs=args.jobs)
    ratio = stats.mean_value / ratio_denominator(inst, algo)
    summary = (f"{stats.algorithm}: n={inst.n} t={stats.params['t']} trials={stats.trials} "
               f"success={stats.success_rate:.4f} mean_count={stats.mean_count:.4f}")
    return _stats_report(seed, source, stats, ratio=ratio), summary


def cmd_ksecretary(args):
    seed = _seed(args)
    inst, source = _instance(args, seed)
    _check_t(args.t, inst.n)
    _check_exhaustive(args, inst.n)
    algo = AlgorithmSpec("ksecretary", t=args.t, k=args.k)
    stats = run_trials(inst, algo, args.trials, seed, exhaustive=args.exhaustive, jobs=args.jobs)
    ratio = stats.mean_value / ratio_denominator(inst, algo)
    freqs = list(stats.target_frequency.values())
    summary = (f"ksecretary: n={inst.n} k={args.k} t={stats.params['t']} trials={stats.trials} "
               f"min top-k frequency={min(freqs):.4f} mean_count={stats.mean_count:.4f}")
    return _stats_report(seed, source, stats, ratio=ratio), summary


def cmd_knapsack(args):
    seed = _seed(args)
    inst, source = _instance(args, seed)
    _check_t(args.t, inst.n)
    _check_exhaustive(args, inst.n)
    if args.algorithm == "on" and args.t is not None:
        raise UsageError("--t applies to --algorithm aug-on only; ON always observes floor(n/e) items")
    algo = AlgorithmSpec(args.algorithm.replace("-", "_"), t=args.t, C=args.C)
    stats = run_trials(inst, algo, args.trials, seed, exhaustive=args.exhaustive, jobs=args.jobs)
    den = ratio_denominator(inst, algo, args.denominator)
    off_value = off_greedy(inst, args.C).total_value
    report = _stats_report(
        seed, source, stats,
        denominator=args.denominator,
        denominator_value=den,
        ratio=stats.mean_value / den,
        off_value=off_value,
        ratio_vs_off=stats.mean_value / off_value,
    )
    summary = (f"{stats.algorithm}: n={inst.n} C={args.C} trials={stats.trials} "
               f"mean_value={stats.mean_value:.4f} ratio={report['ratio']:.4f} "
               f"mean_weight={stats.mean_weight:.4f}")
    return report, summary


def cmd_histogram(args):
    seed = _seed(args)
    _check_t(args.t, args.n)
    _check_exhaustive(args, args.n)
    t = default_threshold(args.n) + 1 if args.t is None else args.t
    stats = run_trials(Instance.ranks(args.n), AlgorithmSpec("secretary", t=t), args.trials, seed,
                       exhaustive=args.exhaustive, jobs=args.jobs)
    summary = (f"histogram: n={args.n} t={t} trials={stats.trials} mean_count={stats.mean_count:.4f} "
               f"max_count={max(stats.histogram)}")
    return _stats_report(seed, "ranks", stats), summary


def cmd_lowerbound(args):
    res = secretary_lower_bound(args.n)
    return {"i_star": res.i_star, "success_bound": res.success_bound}, (
        f"lowerbound: n={args.n} i*={res.i_star} success <= {res.success_bound:.6f}")


def cmd_adversarial(args):
    report = {"value": adversarial_lp_value(args.n)}
    if args.check:
        report["vertex_value"] = float(adversarial_lp_vertex_value(args.n))
    return report, f"adversarial: n={args.n} best success probability {report['value']:.6g}"


def cmd_oracle(args):
    seed = _seed(args)
    inst, source = _instance(args, seed)
    off = off_greedy(inst, args.C)
    frac = fractional_opt(inst, 1.0)
    integral = integral_opt(inst, 1.0, args.resolution)
    report = {
        "seed": seed,
        "source": source,
        "n": inst.n,
        "C": args.C,
        "fractional_value": frac.value,
        "integral_value": integral,
        "off_value": off.total_value,
        "off_weight": off.total_weight,
        "off_selected": list(off.selected),
        "b_star": off.b_star if math.isfinite(off.b_star) else None,
    }
    return report, (f"oracle: n={inst.n} v1={frac.value:.6g} integral={integral:.6g} "
                    f"OFF(C={args.C})={off.total_value:.6g}")


HANDLERS = {
    "secretary": cmd_secretary,
    "ksecretary": cmd_ksecretary,
    "knapsack": cmd_knapsack,
    "histogram": cmd_histogram,
    "lowerbound": cmd_lowerbound,
    "adversarial": cmd_adversarial,
    "oracle": cmd_oracle,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help, --version and argparse usage errors
        return exc.code if isinstance(exc.code, int) else 2
    try:
        report, summary = HANDLERS[args.command](args)
    except UsageError as exc:
        args.subparser.print_usage(sys.stderr)
        print(f"expknap {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (OSError, InstanceValidationError) as exc:
        print(f"expknap: error: {exc}", file=sys.stderr)
        return 1
    except (ExpknapError, ValueError) as exc:
        print(f"expknap: error: {exc}", file=sys.stderr)
        return 1
    if "command" in report:
        report["command"] = args.command
    text = report_to_csv(report) if args.format == "csv" else report_to_json(report)
    if args.out is not None:
        try:
            args.out.write_text(text)
        except OSError as exc:
            print(f"expknap: error: cannot write {args.out}: {exc}", file=sys.stderr)
            return 1
    else:
        sys.stdout.write(text)
    print(summary, file=sys.stderr)
    return 0


parse_and_dispatch = main

if __name__ == "__main__":
    sys.exit(main())
