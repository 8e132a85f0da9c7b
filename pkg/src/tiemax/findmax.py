"""Randomized maximum finding on inputs with ties.

Each round probes the current pivot i with up to m random parity tests
(simulated by :mod:`tiemax.parity_sim`). All answers positive means i is
declared maximal. Otherwise the first subset with a negative answer holds an
odd number of indices above i, and bisection walks down to one of them,
which becomes the next pivot. At most m0 rounds are run.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from . import kernels
from .core import CostBoundError, Instance, Sign, TestLedger, check_subset
from .parity_sim import SearchStrategy, ceil_log2, simulate_counts


class Outcome(enum.Enum):
    DECLARED_CORRECT = "declared_correct"
    DECLARED_WRONG = "declared_wrong"
    EXHAUSTED = "exhausted"


class InvariantError(AssertionError):
    pass


def parse_rational(c) -> Fraction:
    """Accept ints, Fractions and strings such as "1", "0.5" or "2/3"."""
    if isinstance(c, float):
        c = repr(c)
    value = Fraction(c)
    if value <= 0:
        raise ValueError(f"c must be positive, got {c}")
    return value


def _floor_times_log2(a: Fraction, n: int) -> tuple[int, bool]:
    """floor(a * log2 n) and whether a * log2 n is an integer, decided exactly.

    k <= a*log2(n)  <=>  2**(k*q) <= n**p  for a = p/q.
    """
    p, q = a.numerator, a.denominator
    target = n**p
    k = max(0, math.floor(p * math.log2(n) / q))
    while k > 0 and (1 << (k * q)) > target:
        k -= 1
    while (1 << ((k + 1) * q)) <= target:
        k += 1
    return k, (1 << (k * q)) == target


def ceil_times_log2(a: Fraction, n: int) -> int:
    k, exact = _floor_times_log2(a, n)
    return k if exact else k + 1


def floor_times_log2(a: Fraction, n: int) -> int:
    return _floor_times_log2(a, n)[0]


@dataclass(frozen=True)
class Params:
    n: int
    c: Fraction
    m: int
    m0: int
    strategy: SearchStrategy = SearchStrategy.BINARY
    seed: int = 0

    def round_budget(self) -> int:
        """Simulated parity tests allowed in one round."""
        return self.m + (ceil_log2(self.n - 1) if self.n >= 2 else 0)

    def gadget_budget(self) -> int:
        """Ordinary tests allowed in one gadget call on any B of this instance."""
        if self.strategy is SearchStrategy.BINARY:
            return ceil_log2(self.n) + 1
        return 2 * ceil_log2(self.n + 1) + 2

    def total_budget(self) -> int:
        return self.m0 * self.round_budget() * self.gadget_budget()


def derive_params(n: int, c=1, strategy: SearchStrategy = SearchStrategy.BINARY, seed: int = 0) -> Params:
    """m = ceil(3c log2 n), m0 = floor(10c log2 n), both computed exactly.

    For n = 1 both are 0 (nothing to search). m0 is raised to 1 for tiny c so
    that at least one round always runs.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    c = parse_rational(c)
    if n == 1:
        return Params(n, c, 0, 0, strategy, seed)
    m = ceil_times_log2(3 * c, n)
    m0 = max(1, floor_times_log2(10 * c, n))
    return Params(n, c, m, m0, strategy, seed)


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), *keys])))


def trial_seed(base_seed: int, trial: int) -> int:
    """64-bit seed for trial ``trial`` of a bench run, derived from the base seed."""
    return int(np.random.SeedSequence([int(base_seed), int(trial)]).generate_state(1, np.uint64)[0])


def _random_bits(rng: np.random.Generator, n: int) -> np.ndarray:
    # One independent fair bit per index, packed MSB-first.
    return np.frombuffer(rng.bytes((n + 7) // 8), dtype=np.uint8)


def _unpack(bits: np.ndarray, n: int, i: int) -> np.ndarray:
    mask = np.unpackbits(bits, count=n)
    mask[i] = 0
    return mask


def sample_mask(rng: np.random.Generator, n: int, i: int) -> np.ndarray:
    """Uniform random subset of range(n) minus {i}, as a uint8 membership mask."""
    return _unpack(_random_bits(rng, n), n, i)


def sample_subset(rng: np.random.Generator, n: int, i: int) -> tuple[int, ...]:
    return tuple(int(j) for j in np.flatnonzero(sample_mask(rng, n, i)))


@dataclass
class StageResult:
    declared: bool
    witness: np.ndarray | None = None
    samples: int = 0


def probe_stage(
    inst: Instance, i: int, params: Params, rng: np.random.Generator, ledger: TestLedger
) -> StageResult:
    """Up to m random parity tests on pivot i; stops at the first negative one."""
    values = inst.values
    pivot = values[i]
    for k in range(params.m):
        bits = _random_bits(rng, inst.n)
        b, ties, above = kernels.count_bits(values, bits, i, pivot)
        sim = simulate_counts(b, ties, above, params.strategy, ledger)
        if ledger.audit is not None:
            ledger.audit.append((i, np.flatnonzero(_unpack(bits, inst.n, i)), params.strategy, sim))
        if sim.sign is Sign.NEGATIVE:
            witness = np.flatnonzero(_unpack(bits, inst.n, i)).astype(np.int64)
            return StageResult(False, witness, k + 1)
    return StageResult(True, None, params.m)


def _descend(values, i: int, idx: np.ndarray, strategy, ledger) -> tuple[int, int]:
    pivot = values[i]
    lo, hi = 0, len(idx)
    tests = 0
    while hi - lo > 1:
        mid = lo + (hi - lo + 1) // 2
        ties, above = kernels.count_indexed(values, idx, lo, mid, pivot)
        sim = simulate_counts(mid - lo, ties, above, strategy, ledger)
        tests += 1
        if ledger.audit is not None:
            ledger.audit.append((i, idx[lo:mid].copy(), strategy, sim))
        if sim.sign is Sign.NEGATIVE:
            hi = mid
        else:
            lo = mid
    return int(idx[lo]), tests


def descend_to_above(
    inst: Instance,
    i: int,
    B: Iterable[int],
    strategy: SearchStrategy = SearchStrategy.BINARY,
    ledger: TestLedger | None = None,
    rng: np.random.Generator | None = None,
) -> int:
    """Bisect B down to one index above the pivot.

    B must contain an odd number of indices above x_i. Each level tests the
    first ceil(|B|/2) members and keeps the half that still holds an odd
    count. Without ``rng`` the members are taken in index order; with it they
    are randomly permuted first, which makes the result uniform over the
    members of B above the pivot.
    """
    if ledger is None:
        ledger = TestLedger()
    members = check_subset(inst, i, B)
    if not members:
        raise InvariantError("cannot descend into an empty set")
    idx = np.array(sorted(members), dtype=np.int64)
    if rng is not None:
        idx = rng.permutation(idx)
    j, _ = _descend(inst.values, i, idx, strategy, ledger)
    if not inst.values[j] > inst.values[i]:
        raise InvariantError(f"descent from pivot {i} ended at {j}, which is not above it")
    return j


@dataclass
class RunTrace:
    n: int
    result: int | None
    outcome: Outcome
    rounds: int
    pivots: list[int]
    r_sequence: list[int]  # ground truth |J_i| per pivot; never read by the algorithm
    round_tests: list[int]  # simulated parity tests per round
    last_pivot_maximal: bool
    ledger: TestLedger = field(default_factory=TestLedger)

    @property
    def correct(self) -> bool:
        return self.outcome is Outcome.DECLARED_CORRECT

    def to_dict(self) -> dict:
        """JSON-ready form with 1-based indices."""
        return {
            "n": self.n,
            "result": None if self.result is None else self.result + 1,
            "outcome": self.outcome.value,
            "correct": self.correct,
            "rounds": self.rounds,
            "pivots": [p + 1 for p in self.pivots],
            "r_sequence": list(self.r_sequence),
            "round_tests": list(self.round_tests),
            "last_pivot_maximal": self.last_pivot_maximal,
            "ledger": self.ledger.as_dict(),
        }


def findmax(
    inst: Instance,
    params: Params,
    rng: np.random.Generator | None = None,
    ledger: TestLedger | None = None,
    start: int = 0,
) -> tuple[int | None, RunTrace]:
    """Run the randomized search; returns (declared index or None, trace).

    None means m0 rounds passed without a declaration. The per-round and
    total test ceilings are checked on every run and raise CostBoundError.
    """
    if params.n != inst.n:
        raise ValueError(f"params are for n={params.n}, instance has n={inst.n}")
    if ledger is None:
        ledger = TestLedger()
    if rng is None:
        rng = make_rng(params.seed)
    values = inst.values
    top = values.max()

    def rank(p: int) -> int:
        return kernels.count_above(values, values[p])

    i = start
    if inst.n == 1:
        return i, RunTrace(1, i, Outcome.DECLARED_CORRECT, 0, [i], [0], [], True, ledger)

    pivots, r_sequence, round_tests = [i], [rank(i)], []
    budget = params.round_budget()
    result = None
    for _ in range(params.m0):
        before = ledger.simulated_parity_tests
        stage = probe_stage(inst, i, params, rng, ledger)
        if not stage.declared:
            idx = rng.permutation(stage.witness)
            i, _ = _descend(values, i, idx, params.strategy, ledger)
            if not values[i] > values[pivots[-1]]:
                raise InvariantError(f"descent from pivot {pivots[-1]} ended at {i}")
            pivots.append(i)
            r_sequence.append(rank(i))
        round_tests.append(ledger.simulated_parity_tests - before)
        if round_tests[-1] > budget:
            raise CostBoundError(f"round made {round_tests[-1]} simulated tests > {budget}")
        if stage.declared:
            result = i
            break

    if ledger.ordinary_tests > params.total_budget():
        raise CostBoundError(f"run made {ledger.ordinary_tests} tests > {params.total_budget()}")

    maximal = bool(values[i] == top)
    if result is None:
        outcome = Outcome.EXHAUSTED
    else:
        outcome = Outcome.DECLARED_CORRECT if maximal else Outcome.DECLARED_WRONG
    trace = RunTrace(inst.n, result, outcome, len(round_tests), pivots, r_sequence, round_tests, maximal, ledger)
    return result, trace


def linear_elimination_baseline(inst: Instance, ledger: TestLedger | None = None) -> int:
    """Left-to-right tournament with n - 1 tests (x_cur - x_j) : 0; ties keep x_cur."""
    if ledger is None:
        ledger = TestLedger()
    values = inst.values
    cur = 0
    for j in range(1, inst.n):
        ledger.charge_compare()
        if values[cur] - values[j] < 0:
            cur = j
    return cur
