"""Seeded Monte Carlo trials, aggregation and CSV/JSON emitters."""
from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from math import log2
from typing import Iterable, Sequence

from ..core import TestLedger
from ..findmax import Outcome, derive_params, findmax, linear_elimination_baseline, make_rng, trial_seed
from ..parity_sim import SearchStrategy
from .generators import Generator, GeneratorSpec, generate_instance

CSV_FIELDS = (
    "trial",
    "generator",
    "n",
    "c",
    "strategy",
    "seed",
    "outcome",
    "rounds",
    "simulated_parity_tests",
    "ordinary_tests",
    "correct",
)


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    generator: str
    n: int
    c: str
    strategy: str
    seed: int
    outcome: str
    rounds: int
    simulated_parity_tests: int
    ordinary_tests: int
    correct: bool


@dataclass(frozen=True)
class TrialSummary:
    trials: int
    failure_rate: float
    max_ordinary_tests: int
    mean_ordinary_tests: float
    depth_bound_ratio: float
    strategy_costs: dict


def run_single(kind: Generator, n: int, c, strategy: SearchStrategy, seed: int):
    """One run on the instance and random stream determined by ``seed``."""
    inst = generate_instance(GeneratorSpec(kind, n, seed))
    params = derive_params(n, c, strategy, seed)
    result, trace = findmax(inst, params, make_rng(seed, 1))
    return inst, params, trace


def _one_trial(args) -> TrialRecord:
    k, kind, n, c, strategy, base_seed = args
    seed = trial_seed(base_seed, k)
    inst, params, trace = run_single(kind, n, c, strategy, seed)
    return TrialRecord(
        trial=k,
        generator=kind.value,
        n=n,
        c=str(params.c),
        strategy=strategy.value,
        seed=seed,
        outcome=trace.outcome.value,
        rounds=trace.rounds,
        simulated_parity_tests=trace.ledger.simulated_parity_tests,
        ordinary_tests=trace.ledger.ordinary_tests,
        correct=trace.outcome is Outcome.DECLARED_CORRECT,
    )


def run_trials(
    spec: GeneratorSpec,
    c=1,
    strategy: SearchStrategy = SearchStrategy.BINARY,
    trials: int = 1,
    workers: int = 1,
) -> list[TrialRecord]:
    """Trial k runs with seed ``trial_seed(spec.seed, k)`` for both instance and algorithm.

    Records come back ordered by trial index whatever ``workers`` is.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    jobs = [(k, spec.kind, spec.n, c, strategy, spec.seed) for k in range(trials)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(_one_trial, jobs, chunksize=max(1, trials // (8 * workers))))
    return [_one_trial(job) for job in jobs]


def run_baseline(spec: GeneratorSpec, trials: int = 1) -> dict:
    """Linear elimination on the same per-trial instances as :func:`run_trials`."""
    tests, correct = [], 0
    for k in range(trials):
        inst = generate_instance(GeneratorSpec(spec.kind, spec.n, trial_seed(spec.seed, k)))
        ledger = TestLedger()
        j = linear_elimination_baseline(inst, ledger)
        tests.append(ledger.ordinary_tests)
        correct += bool(inst.values[j] == inst.values.max())
    return {
        "trials": trials,
        "correct": correct,
        "max_ordinary_tests": max(tests),
        "min_ordinary_tests": min(tests),
    }


def _cube_log(n: int) -> float:
    return log2(n) ** 3 if n > 1 else 0.0


def summarize(records: Sequence[TrialRecord]) -> TrialSummary:
    if not records:
        raise ValueError("cannot summarize an empty record set")
    failures = sum(not r.correct for r in records)
    costs = [r.ordinary_tests for r in records]
    ratio = max((r.ordinary_tests / _cube_log(r.n) if r.n > 1 else 0.0) for r in records)
    per_strategy = {}
    for name in sorted({r.strategy for r in records}):
        sub = [r for r in records if r.strategy == name]
        per_strategy[name] = {
            "trials": len(sub),
            "failures": sum(not r.correct for r in sub),
            "max_ordinary_tests": max(r.ordinary_tests for r in sub),
            "mean_ordinary_tests": sum(r.ordinary_tests for r in sub) / len(sub),
        }
    return TrialSummary(
        trials=len(records),
        failure_rate=float(Fraction(failures, len(records))),
        max_ordinary_tests=max(costs),
        mean_ordinary_tests=sum(costs) / len(costs),
        depth_bound_ratio=ratio,
        strategy_costs=per_strategy,
    )


def _csv_cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def emit_csv(records: Iterable[TrialRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for r in records:
        writer.writerow([_csv_cell(getattr(r, f)) for f in CSV_FIELDS])
    return buf.getvalue()


def emit_json(obj) -> str:
    """Records (a sequence) or a summary as JSON; dataclasses become objects."""
    if isinstance(obj, (TrialRecord, TrialSummary)):
        payload = asdict(obj)
    elif isinstance(obj, dict):
        payload = obj
    else:
        payload = [asdict(r) for r in obj]
    return json.dumps(payload, indent=2, sort_keys=False) + "\n"


def emit(obj, fmt: str = "csv") -> bytes:
    if fmt == "csv":
        if isinstance(obj, TrialSummary):
            raise ValueError("summaries are emitted as JSON only")
        return emit_csv(obj).encode("utf-8")
    if fmt == "json":
        return emit_json(obj).encode("utf-8")
    raise ValueError(f"unknown format {fmt!r}")
