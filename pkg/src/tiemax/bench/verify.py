"""Cross-check the comparison-driven gadget against the literal polynomials."""
from __future__ import annotations

from itertools import combinations, product

import numpy as np

from ..core import ORACLE_CAP, CostBoundError, Instance, Sign, TestLedger, literal_Pi, literal_R, sign_of, tie_count
from ..findmax import make_rng
from ..parity_sim import SearchStrategy, binary_bound, ceil_log2, exponential_bound, r_test, simulate_parity

CHECKS = ("r_test", "pi_sign", "sign_law", "cost_bound")

EXHAUSTIVE_MAX_N = 5
EXHAUSTIVE_VALUES = (0, 1, 2)


class _Tally:
    def __init__(self):
        self.counts = {name: [0, 0] for name in CHECKS}
        self.failures = {name: None for name in CHECKS}

    def record(self, name: str, ok: bool, case) -> None:
        self.counts[name][0 if ok else 1] += 1
        if not ok and self.failures[name] is None:
            self.failures[name] = case

    def report(self) -> dict:
        return {
            name: {
                "passed": self.counts[name][0],
                "failed": self.counts[name][1],
                "first_failure": self.failures[name],
            }
            for name in CHECKS
        }


def check_case(inst: Instance, i: int, B: tuple[int, ...], tally: _Tally) -> None:
    """Run checks (a)-(d) on one (instance, pivot, B) triple."""
    case = {"values": inst.tolist(), "i": i + 1, "B": [a + 1 for a in B]}
    b = len(B)
    mu = tie_count(inst, i, B)

    for t in range(b + 1):
        ledger = TestLedger()
        got = r_test(inst, i, B, t, ledger)
        expected = literal_R(inst, i, B, t) == 0
        ok = got == expected and ledger.ordinary_tests == (1 if t else 0)
        tally.record("r_test", ok, {**case, "t": t})

    literal_sign = sign_of(literal_Pi(inst, i, B, mu))
    above = sum(1 for a in B if inst[a] > inst[i])
    for strategy in SearchStrategy:
        ledger = TestLedger()
        try:
            sim = simulate_parity(inst, i, B, strategy, ledger)
        except CostBoundError as exc:
            tally.record("cost_bound", False, {**case, "strategy": strategy.value, "error": str(exc)})
            continue
        scase = {**case, "strategy": strategy.value}
        tally.record("pi_sign", sim.sign == literal_sign and sim.mu == mu, scase)
        law = Sign.NEGATIVE if above % 2 else Sign.POSITIVE
        tally.record("sign_law", sim.sign is not Sign.ZERO and sim.sign == law, scase)
        if strategy is SearchStrategy.BINARY:
            ok = sim.r_tests <= ceil_log2(b + 1) and sim.tests <= binary_bound(b)
        else:
            ok = sim.tests <= exponential_bound(mu)
        ok = ok and ledger.ordinary_tests == sim.tests and ledger.simulated_parity_tests == 1
        tally.record("cost_bound", ok, scase)


def _subsets(others: list[int]):
    for size in range(len(others) + 1):
        yield from combinations(others, size)


def verify_oracle_suite(max_n: int = 8, value_range: tuple[int, int] = (-5, 5), random_cases: int = 1000, seed: int = 0) -> dict:
    """Exhaustive sweep for n <= 5 over values {0, 1, 2}, then random cases up to ``max_n``.

    Each random case checks every t and both strategies on one random
    (instance, pivot, B).
    """
    if not 1 <= max_n <= ORACLE_CAP + 1:
        raise ValueError(f"max_n must be in 1..{ORACLE_CAP + 1}")
    tally = _Tally()
    exhaustive = 0
    for n in range(1, min(EXHAUSTIVE_MAX_N, max_n) + 1):
        for pattern in product(EXHAUSTIVE_VALUES, repeat=n):
            inst = Instance(pattern)
            for i in range(n):
                others = [a for a in range(n) if a != i]
                for B in _subsets(others):
                    check_case(inst, i, B, tally)
                    exhaustive += 1

    rng = make_rng(seed, 2)
    lo, hi = value_range
    for _ in range(random_cases):
        n = int(rng.integers(1, max_n + 1))
        inst = Instance(rng.integers(lo, hi + 1, size=n).tolist())
        i = int(rng.integers(n))
        mask = rng.integers(0, 2, size=n).astype(bool)
        mask[i] = False
        check_case(inst, i, tuple(int(a) for a in np.flatnonzero(mask)), tally)

    checks = tally.report()
    return {
        "max_n": max_n,
        "value_range": list(value_range),
        "exhaustive_cases": exhaustive,
        "random_cases": random_cases,
        "checks": checks,
        "ok": all(c["failed"] == 0 for c in checks.values()),
    }
