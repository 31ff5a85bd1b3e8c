"""Command-line front end.

Subcommands: ``optimize``, ``report``, ``fit``, ``simulate``, ``export-fixture``.
Every JSON document carries a ``manifest`` block (command, resolved
configuration, seed, UTC timestamp, tool version).

Defaults may come from a flat JSON object given by ``--config`` or the
``PEERDE_CONFIG`` environment variable; command-line flags take precedence.

Exit codes: 0 success, 1 I/O failure, 2 usage/validation, 3 empty data,
4 degenerate model.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, _kernels
from .de_core import DEConfig, MutationStrategy, StoppingRule, evolve
from .errors import (
    ConfigError,
    DegenerateResponseError,
    EmptySliceError,
    InconsistentFitError,
    IngestError,
)
from .objectives import TEST_FUNCTIONS, test_function
from .stat_models import catalog_spec, custom_spec, fit
from .survey import (
    RATING_QUESTIONS,
    THRESHOLDS,
    RespondentGroup,
    ingest,
    median_profile,
    respondent_stats,
    threshold_report,
)
from . import synthgen

log = logging.getLogger("peerde")

EXIT_OK, EXIT_IO, EXIT_USAGE, EXIT_EMPTY, EXIT_DEGENERATE = 0, 1, 2, 3, 4
CONFIG_ENV = "PEERDE_CONFIG"


class UsageError(Exception):
    pass


class EmptyDataError(Exception):
    pass


def _manifest(command: str, args: argparse.Namespace) -> dict:
    skip = {"func", "config", "out", "csv", "truth", "input"}
    config = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    return {
        "command": command,
        "config": config,
        "seed": args.seed,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        "tool_version": __version__,
        "backend": _kernels.BACKEND,
    }


def _emit(doc: dict, out) -> None:
    text = json.dumps(doc, indent=2, allow_nan=False) + "\n"
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _de_config(args) -> DEConfig:
    stop = StoppingRule(args.gens, args.target, args.stagnation)
    return DEConfig(np=args.np, f=args.f, cr=args.cr, strategy=MutationStrategy.parse(args.strategy),
                    stop=stop, seed=args.seed)


def cmd_optimize(args) -> int:
    if args.fn.lower() not in TEST_FUNCTIONS:
        raise UsageError(f"unknown function {args.fn!r}; choose from {', '.join(TEST_FUNCTIONS)}")
    fn = test_function(args.fn, args.dim)
    result = evolve(fn, fn.bounds, _de_config(args))
    doc = {"manifest": _manifest("optimize", args), "function": fn.name, "dimension": fn.dimension,
           "result": result.to_dict()}
    _emit(doc, args.out)
    csv_path = args.csv
    if csv_path is None and args.out not in (None, "-"):
        csv_path = str(Path(args.out).with_suffix("")) + ".convergence.csv"
    if csv_path:
        with open(csv_path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["generation", "best_fitness"])
            for g, v in enumerate(result.history):
                w.writerow([g, repr(float(v))])
    return EXIT_OK


def _ingest(path):
    ds = ingest(path)
    for rej in ds.rejections:
        log.warning("%s:%d rejected: %s", path, rej.line, rej.reason)
    if len(ds) == 0:
        raise EmptyDataError(f"{path}: no valid rows")
    return ds


def _maybe(func, *a, **kw):
    try:
        return func(*a, **kw)
    except EmptySliceError:
        return None


def _group_report(ds, group) -> dict:
    sub = ds.filter(group)
    thresholds = {}
    for q in RATING_QUESTIONS:
        rep = _maybe(threshold_report, sub, q)
        thresholds[q] = None if rep is None else {
            "n": rep.n,
            "counts": dict(zip(map(str, rep.thresholds), rep.counts)),
            "fraction_at_or_above": dict(zip(map(str, rep.thresholds), rep.fraction_at_or_above)),
        }
    stats = _maybe(respondent_stats, sub)
    return {
        "n_records": len(sub),
        "thresholds": thresholds,
        "median_profile": median_profile(sub),
        "median_profile_by_sex": {s: median_profile(sub, sex=s) for s in ("F", "M", "U")},
        "respondent_stats": None if stats is None else stats.to_dict(),
    }


def cmd_report(args) -> int:
    ds = _ingest(args.input)
    if args.group:
        groups = {args.group: RespondentGroup.parse(args.group)}
        if len(ds.filter(args.group)) == 0:
            raise EmptyDataError(f"no records from group {args.group}")
    else:
        present = {r.respondent_group for r in ds.records}
        groups = {"all": None, **{g.value: g for g in RespondentGroup if g in present}}
    doc = {
        "manifest": _manifest("report", args),
        "input": str(args.input),
        "n_records": len(ds),
        "rejections": [{"line": r.line, "reason": r.reason} for r in ds.rejections],
        "thresholds": list(THRESHOLDS),
        "groups": {name: _group_report(ds, g) for name, g in groups.items()},
    }
    _emit(doc, args.out)
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["group", "question", "threshold", "count", "n", "fraction"])
            for name, rep in doc["groups"].items():
                for q, t in rep["thresholds"].items():
                    if t is None:
                        continue
                    for th in map(str, THRESHOLDS):
                        w.writerow([name, q, th, t["counts"][th], t["n"], repr(t["fraction_at_or_above"][th])])
    return EXIT_OK


def _fit_spec(args):
    if args.model:
        return catalog_spec(args.model, binary=args.binary, threshold=args.threshold)
    if not (args.response and args.regressors):
        raise UsageError("give --model, or --response with --regressors for a custom model")
    encoding = args.encoding or ("female" if args.response.lower() in ("q9", "9") else "binary")
    return custom_spec(args.response, args.regressors.split(","), args.group, encoding, args.threshold)


def cmd_fit(args) -> int:
    try:
        spec = _fit_spec(args)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    ds = _ingest(args.input)
    result = fit(spec, ds, _de_config(args), args.criterion, args.coef_bound)
    _emit({"manifest": _manifest("fit", args), "fit": result.to_dict()}, args.out)
    return EXIT_OK


def _profile_bias(args):
    lo = args.peers_min if args.peers_min is not None else args.peers
    hi = args.peers_max if args.peers_max is not None else args.peers
    profile = synthgen.PopulationProfile(
        n_subjects=args.n_subjects, peers_per_subject=(lo, hi), male_shift=args.male_shift,
        item_noise_sd=args.item_noise, q1_na_prob=args.q1_na,
    )
    if args.bias_zero:
        bias = synthgen.ReporterBias(0.0, 0.0, 0.0, args.noise)
    else:
        bias = synthgen.ReporterBias(args.self_under, args.parent_under, args.parent_over, args.noise)
    return profile, bias


def cmd_simulate(args) -> int:
    if args.reps < 1:
        raise UsageError("--reps must be >= 1")
    profile, bias = _profile_bias(args)
    errs = synthgen.replicate(profile, bias, args.reps, args.seed, workers=args.workers)
    e = np.array([[x.self, x.parent, x.peer_median] for x in errs])
    doc = {
        "manifest": _manifest("simulate", args),
        "replications": [x.to_dict() for x in errs],
        "mean_mae": {"self": float(e[:, 0].mean()), "parent": float(e[:, 1].mean()),
                     "peer_median": float(e[:, 2].mean())},
        "win_rate": {"peer_vs_self": float(np.mean(e[:, 2] < e[:, 0])),
                     "peer_vs_parent": float(np.mean(e[:, 2] < e[:, 1]))},
    }
    _emit(doc, args.out)
    return EXIT_OK


def cmd_export_fixture(args) -> int:
    if args.out in (None, "-"):
        raise UsageError("export-fixture needs --out for the survey CSV")
    profile, bias = _profile_bias(args)
    study = synthgen.generate(profile, bias, args.seed)
    truth = args.truth or str(Path(args.out).with_suffix("")) + ".truth.csv"
    study.export(args.out, truth)
    log.info("wrote %d records to %s and ground truth to %s", len(study.dataset), args.out, truth)
    return EXIT_OK


def _add_de_flags(p):
    p.add_argument("--np", type=int, default=40, help="population size")
    p.add_argument("--f", type=float, default=0.8, help="difference scaling factor in [0, 2]")
    p.add_argument("--cr", type=float, default=0.9, help="crossover rate in [0, 1]")
    p.add_argument("--strategy", default="rand1", help="rand1, best1, rand-to-best1, best2, rand2")
    p.add_argument("--gens", type=int, default=1000, help="maximum generations")
    p.add_argument("--target", type=float, default=None, help="stop once best fitness <= target")
    p.add_argument("--stagnation", type=int, default=None,
                   help="stop after this many generations without improvement")


def _add_population_flags(p):
    p.add_argument("--n-subjects", type=int, default=300)
    p.add_argument("--peers", type=int, default=5, help="peers per subject")
    p.add_argument("--peers-min", type=int, default=None)
    p.add_argument("--peers-max", type=int, default=None)
    p.add_argument("--noise", type=float, default=0.5, help="peer noise sd in rating units")
    p.add_argument("--self-under", type=float, default=0.365)
    p.add_argument("--parent-under", type=float, default=0.357)
    p.add_argument("--parent-over", type=float, default=0.348)
    p.add_argument("--bias-zero", action="store_true", help="disable all reporter bias")
    p.add_argument("--male-shift", type=float, default=0.0)
    p.add_argument("--item-noise", type=float, default=0.5)
    p.add_argument("--q1-na", type=float, default=0.0)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="output path (default: stdout)")
    common.add_argument("--config", default=None, help=f"JSON defaults file (or ${CONFIG_ENV})")

    parser = argparse.ArgumentParser(prog="peerde", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("optimize", parents=[common], help="run DE on a benchmark function")
    p.add_argument("--fn", default="sphere")
    p.add_argument("--dim", type=int, default=10)
    p.add_argument("--csv", default=None, help="convergence CSV path")
    _add_de_flags(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("report", parents=[common], help="aggregate a survey CSV")
    p.add_argument("input")
    p.add_argument("--group", default=None, choices=[g.value for g in RespondentGroup])
    p.add_argument("--csv", default=None, help="threshold table CSV path")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("fit", parents=[common], help="fit one of M1..M6 or a custom logit model")
    p.add_argument("input")
    p.add_argument("--model", default=None, help="M1..M6")
    p.add_argument("--binary", action="store_true", help="dichotomize ordered catalog responses")
    p.add_argument("--response", default=None)
    p.add_argument("--regressors", default=None, help="comma-separated questions, e.g. q3,q4")
    p.add_argument("--group", default=None, choices=[g.value for g in RespondentGroup])
    p.add_argument("--encoding", default=None, choices=["binary", "ordered", "female"])
    p.add_argument("--threshold", type=float, default=2.0)
    p.add_argument("--criterion", default="loglik", choices=["loglik", "auc"])
    p.add_argument("--coef-bound", type=float, default=10.0)
    _add_de_flags(p)
    p.set_defaults(func=cmd_fit, gens=500)

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo reporter-bias study")
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--workers", type=int, default=None)
    _add_population_flags(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("export-fixture", parents=[common], help="write a synthetic survey CSV")
    p.add_argument("--truth", default=None, help="ground-truth CSV path")
    _add_population_flags(p)
    p.set_defaults(func=cmd_export_fixture)
    return parser


def _load_config(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise IngestError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    return {k.replace("-", "_"): v for k, v in data.items()}


def _parse(parser, argv):
    args = parser.parse_args(argv)
    path = args.config or os.environ.get(CONFIG_ENV)
    if not path:
        return args
    config = _load_config(path)
    subparser = parser._subparsers._group_actions[0].choices[args.command]
    known = {a.dest for a in subparser._actions}
    subparser.set_defaults(**{k: v for k, v in config.items() if k in known})
    return parser.parse_args(argv)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = _parse(parser, argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(message)s")
        return args.func(args)
    except (UsageError, ConfigError) as exc:
        print(f"peerde: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (IngestError, OSError) as exc:
        print(f"peerde: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (EmptyDataError, EmptySliceError) as exc:
        print(f"peerde: error: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except (DegenerateResponseError, InconsistentFitError) as exc:
        print(f"peerde: error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
