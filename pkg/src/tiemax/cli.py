"""Command line entry point: ``tiemax run|bench|verify``."""
from __future__ import annotations

import argparse
import json
import sys

from . import kernels
from .bench import Generator, GeneratorSpec, emit, run_baseline, run_single, run_trials, summarize, verify_oracle_suite
from .bench.trials import TrialRecord
from .findmax import parse_rational
from .parity_sim import SearchStrategy


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 unsigned bits: {text}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _rational(text: str) -> str:
    try:
        parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return text


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--c", type=_rational, default="1")
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--generator", choices=[g.value for g in Generator], default=Generator.BALANCED_MULTISET.value)
    p.add_argument("--backend", choices=["compiled", "python"], default=None,
                   help="kernel backend (default: compiled when built)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tiemax", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="one FINDMAX run, trace as JSON")
    _common(run)
    run.add_argument("--strategy", choices=[s.value for s in SearchStrategy], default="binary")

    bench = sub.add_parser("bench", help="seeded Monte Carlo trials")
    _common(bench)
    bench.add_argument("--trials", type=_positive_int, default=100)
    bench.add_argument("--strategy", choices=[s.value for s in SearchStrategy] + ["both"], default="binary")
    bench.add_argument("--format", choices=["csv", "json"], default="csv")
    bench.add_argument("--baseline", action="store_true", help="also run the n-1 linear elimination tree")
    bench.add_argument("--summary", metavar="PATH",
                       help="with --format csv, write the summary JSON here instead of stderr")
    bench.add_argument("--workers", type=_positive_int, default=1)

    verify = sub.add_parser("verify", help="oracle verification suite")
    verify.add_argument("--max-n", type=_positive_int, default=8)
    verify.add_argument("--cases", type=int, default=1000)
    verify.add_argument("--seed", type=_u64, default=0)
    return parser


def _write(data: bytes) -> None:
    sys.stdout.buffer.write(data)
    sys.stdout.buffer.flush()


def cmd_run(args) -> int:
    kind = Generator(args.generator)
    strategy = SearchStrategy(args.strategy)
    inst, params, trace = run_single(kind, args.n, args.c, strategy, args.seed)
    payload = {
        "generator": kind.value,
        "n": args.n,
        "c": str(params.c),
        "m": params.m,
        "m0": params.m0,
        "strategy": strategy.value,
        "seed": args.seed,
        "max_value": int(inst.values.max()),
        **trace.to_dict(),
    }
    _write(emit(payload, "json"))
    return 0


def cmd_bench(args) -> int:
    spec = GeneratorSpec(Generator(args.generator), args.n, args.seed)
    strategies = list(SearchStrategy) if args.strategy == "both" else [SearchStrategy(args.strategy)]
    records: list[TrialRecord] = []
    for strategy in strategies:
        records += run_trials(spec, args.c, strategy, args.trials, args.workers)
    summary = emit(summarize(records), "json")
    baseline = run_baseline(spec, args.trials) if args.baseline else None

    if args.format == "json":
        payload = {
            "records": json.loads(emit(records, "json")),
            "summary": json.loads(summary),
        }
        if baseline is not None:
            payload["baseline"] = baseline
        _write(emit(payload, "json"))
        return 0

    _write(emit(records, "csv"))
    extra = summary
    if baseline is not None:
        extra = emit({"summary": json.loads(summary), "baseline": baseline}, "json")
    if args.summary:
        with open(args.summary, "wb") as fh:
            fh.write(extra)
    else:
        sys.stderr.buffer.write(extra)
    return 0


def cmd_verify(args) -> int:
    report = verify_oracle_suite(args.max_n, random_cases=args.cases, seed=args.seed)
    _write(emit(report, "json"))
    return 0 if report["ok"] else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "backend", None):
        kernels.set_backend(args.backend)
    return {"run": cmd_run, "bench": cmd_bench, "verify": cmd_verify}[args.command](args)


if __name__ == "__main__":
    raise SystemExit(main())
