"""Parity test simulation for inputs with repeated values.

A parity test P(i, B) : 0 is useless when some member of B ties the pivot,
because the product is then zero. The gadget here first locates the number
of ties mu with sign tests ``R(t) : 0`` (R(t) vanishes exactly when
mu >= t) and then makes one more test on the collapsed sum, whose sign is
that of the product over the untied members only.

Every test is answered by comparisons and charged one unit to the ledger;
the literal polynomials in :mod:`tiemax.core` certify those answers.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from . import kernels
from .core import CostBoundError, Instance, Sign, TestLedger, check_subset


class SearchStrategy(enum.Enum):
    BINARY = "binary"
    EXPONENTIAL = "exponential"


@dataclass(frozen=True)
class SimulatedSign:
    sign: Sign
    mu: int
    r_tests: int
    pi_tests: int

    @property
    def tests(self) -> int:
        return self.r_tests + self.pi_tests


def ceil_log2(k: int) -> int:
    """Exact ceil(log2 k) for k >= 1."""
    if k < 1:
        raise ValueError("ceil_log2 needs k >= 1")
    return (k - 1).bit_length()


def binary_bound(b: int) -> int:
    """Total tests allowed per gadget call under BINARY: ceil(log2(b+1)) + 1."""
    return ceil_log2(b + 1) + 1


def exponential_bound(mu: int) -> int:
    """Total tests allowed per gadget call under EXPONENTIAL."""
    return 2 * ceil_log2(mu + 2) + 2


def _members(inst: Instance, i: int, B: Iterable[int]) -> np.ndarray:
    members = check_subset(inst, i, B)
    return np.fromiter(members, dtype=np.int64, count=len(members))


def _scan(inst: Instance, i: int, B: Iterable[int]) -> tuple[int, int, int]:
    idx = _members(inst, i, B)
    ties, above = kernels.count_indexed(inst.values, idx, 0, len(idx), inst.values[i])
    return len(idx), ties, above


def _binary_search(b: int, is_zero: Callable[[int], bool]) -> int:
    # lo always satisfies R(lo) = 0 (R(0) = 0 for free); hi never does.
    lo, hi = 0, b + 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if is_zero(mid):
            lo = mid
        else:
            hi = mid
    return lo


def _exponential_search(b: int, is_zero: Callable[[int], bool]) -> int:
    lo, hi = 0, b + 1
    t = 1
    while t <= b:
        if not is_zero(t):
            hi = t
            break
        lo = t
        t *= 2
    else:
        if lo < b:
            # Doubling overshot |B|: the clamped probe closes the bracket.
            if is_zero(b):
                lo = b
            else:
                hi = b
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if is_zero(mid):
            lo = mid
        else:
            hi = mid
    return lo


_SEARCHES = {
    SearchStrategy.BINARY: _binary_search,
    SearchStrategy.EXPONENTIAL: _exponential_search,
}


class _RTest:
    """Answers R(t) : 0 from the tie count and counts how often it was asked."""

    __slots__ = ("ties", "asked")

    def __init__(self, ties: int):
        self.ties = ties
        self.asked = 0

    def __call__(self, t: int) -> bool:
        self.asked += 1
        return self.ties >= t


def locate_mu(b: int, ties: int, strategy: SearchStrategy, ledger: TestLedger) -> tuple[int, int]:
    """Find the tie count through charged R-tests; returns (mu, tests made).

    ``ties`` is only read through the outcome ``ties >= t`` of each test
    R(t) : 0.
    """
    test = _RTest(ties)
    mu = _SEARCHES[strategy](b, test)
    ledger.charge_r(test.asked)
    return mu, test.asked


def simulate_counts(
    b: int,
    ties: int,
    above: int,
    strategy: SearchStrategy,
    ledger: TestLedger,
    short_circuit: bool = False,
) -> SimulatedSign:
    """Gadget core once the scan of B is done.

    With ``short_circuit`` the final test is skipped when every member of B
    ties the pivot (the collapsed sum is then the empty product 1).
    """
    mu, r_tests = locate_mu(b, ties, strategy, ledger)
    pi_tests = 0
    if short_circuit and mu == b:
        sign = Sign.POSITIVE
    else:
        ledger.charge_pi()
        pi_tests = 1
        sign = Sign.NEGATIVE if above & 1 else Sign.POSITIVE
    ledger.count_gadget()
    result = SimulatedSign(sign, mu, r_tests, pi_tests)

    limit = binary_bound(b) if strategy is SearchStrategy.BINARY else exponential_bound(mu)
    if result.tests > limit:
        raise CostBoundError(
            f"{strategy.value} gadget on |B|={b}, mu={mu} made {result.tests} tests > {limit}"
        )
    return result


def r_test(inst: Instance, i: int, B: Iterable[int], t: int, ledger: TestLedger) -> bool:
    """Outcome of R(t) : 0, true when R(t) = 0. t = 0 is free."""
    b, ties, _ = _scan(inst, i, B)
    if not 0 <= t <= b:
        raise ValueError(f"t={t} outside 0..{b}")
    if t == 0:
        return True
    ledger.charge_r()
    return ties >= t


def find_mu(
    inst: Instance, i: int, B: Iterable[int], strategy: SearchStrategy, ledger: TestLedger
) -> int:
    b, ties, _ = _scan(inst, i, B)
    return locate_mu(b, ties, strategy, ledger)[0]


def simulate_parity(
    inst: Instance,
    i: int,
    B: Iterable[int],
    strategy: SearchStrategy = SearchStrategy.BINARY,
    ledger: TestLedger | None = None,
    short_circuit: bool = False,
) -> SimulatedSign:
    """Sign of the product of (x_i - x_a) over the members of B not tied with x_i.

    The answer is never ZERO: NEGATIVE exactly when an odd number of members
    of B lie strictly above the pivot.
    """
    if ledger is None:
        ledger = TestLedger()
    idx = _members(inst, i, B)
    ties, above = kernels.count_indexed(inst.values, idx, 0, len(idx), inst.values[i])
    sim = simulate_counts(len(idx), ties, above, strategy, ledger, short_circuit)
    if ledger.audit is not None:
        ledger.audit.append((int(i), idx, strategy, sim))
    return sim
