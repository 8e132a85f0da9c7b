"""Exact inputs, the brute-force polynomial oracle and the test ledger.

Indices are 0-based throughout the Python API. Serialized output (CLI, CSV,
JSON traces) shifts them to 1-based.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations
from math import prod
from typing import Iterable, Sequence

import numpy as np

# Largest |B| the literal oracle will enumerate (2**16 subsets).
ORACLE_CAP = 16

_INT64_MIN = -(2**63)
_INT64_MAX = 2**63 - 1


class Sign(enum.IntEnum):
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1


class CostBoundError(AssertionError):
    """A gadget or run charged more tests than its proven ceiling."""


@dataclass(frozen=True, eq=False)
class Instance:
    """Input vector of exact integers; repeated values are allowed.

    ``values`` is an int64 array when every entry fits, otherwise an object
    array of Python ints (the kernels fall back to the numpy path then).
    """

    values: np.ndarray

    def __init__(self, values: Iterable[int]):
        if isinstance(values, np.ndarray) and values.dtype.kind == "i" and values.ndim == 1 and len(values):
            arr = values.astype(np.int64, copy=True)
            arr.setflags(write=False)
            object.__setattr__(self, "values", arr)
            return
        vals = [int(v) for v in values]
        if not vals:
            raise ValueError("an instance needs at least one value")
        if _INT64_MIN <= min(vals) and max(vals) <= _INT64_MAX:
            arr = np.array(vals, dtype=np.int64)
        else:
            arr = np.empty(len(vals), dtype=object)
            arr[:] = vals
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def n(self) -> int:
        return len(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i: int) -> int:
        return int(self.values[i])

    def tolist(self) -> list[int]:
        return [int(v) for v in self.values]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        return self.tolist() == other.tolist()

    def __repr__(self) -> str:
        return f"Instance({self.tolist()!r})"


@dataclass
class TestLedger:
    """Counts of the unit-cost sign tests made during one run.

    ``ordinary_tests`` is the decision-tree depth consumed so far. It only
    moves through :meth:`charge_r`, :meth:`charge_pi` and :meth:`charge_compare`.

    Set ``audit`` to a list to have every gadget call append
    ``(pivot, members of B, strategy, SimulatedSign)``.
    """

    __test__ = False  # not a pytest class

    ordinary_tests: int = 0
    simulated_parity_tests: int = 0
    r_tests: int = 0
    pi_tests: int = 0
    compare_tests: int = 0
    audit: list | None = field(default=None, repr=False)

    def charge_r(self, k: int = 1) -> None:
        self.r_tests += k
        self.ordinary_tests += k

    def charge_pi(self) -> None:
        self.pi_tests += 1
        self.ordinary_tests += 1

    def charge_compare(self) -> None:
        self.compare_tests += 1
        self.ordinary_tests += 1

    def count_gadget(self) -> None:
        self.simulated_parity_tests += 1

    def as_dict(self) -> dict[str, int]:
        return {
            "ordinary_tests": self.ordinary_tests,
            "simulated_parity_tests": self.simulated_parity_tests,
            "r_tests": self.r_tests,
            "pi_tests": self.pi_tests,
            "compare_tests": self.compare_tests,
        }


def _check_index(inst: Instance, i: int) -> int:
    i = int(i)
    if not 0 <= i < inst.n:
        raise IndexError(f"index {i} out of range for n={inst.n}")
    return i


def check_subset(inst: Instance, i: int, B: Iterable[int]) -> tuple[int, ...]:
    """Validate a gadget argument: distinct in-range indices, pivot excluded."""
    i = _check_index(inst, i)
    members = tuple(int(a) for a in B)
    if len(set(members)) != len(members):
        raise ValueError(f"duplicate indices in {members}")
    for a in members:
        _check_index(inst, a)
    if i in members:
        raise ValueError(f"pivot {i} must not be a member of B")
    return members


def above_set(inst: Instance, i: int) -> frozenset[int]:
    """Indices whose value is strictly larger than the pivot's."""
    i = _check_index(inst, i)
    pivot = inst.values[i]
    return frozenset(int(j) for j in np.flatnonzero(inst.values > pivot))


def tie_count(inst: Instance, i: int, B: Iterable[int]) -> int:
    members = check_subset(inst, i, B)
    pivot = inst[i]
    return sum(1 for a in members if inst[a] == pivot)


def literal_P(inst: Instance, i: int, B: Iterable[int]) -> int:
    """The parity polynomial prod_{a in B} (x_i - x_a), exactly."""
    members = check_subset(inst, i, B)
    xi = inst[i]
    return prod((xi - inst[a] for a in members), start=1)


def _check_cap(members: Sequence[int]) -> None:
    if len(members) > ORACLE_CAP:
        raise ValueError(
            f"|B|={len(members)} exceeds the oracle cap of {ORACLE_CAP}; "
            "the literal oracle is a verification tool only"
        )


def literal_R(inst: Instance, i: int, B: Iterable[int], t: int) -> int:
    """Sum of P(i, D)**2 over all D in B with |D| = |B| - t + 1; zero when t = 0."""
    members = check_subset(inst, i, B)
    b = len(members)
    if not 0 <= t <= b:
        raise ValueError(f"t={t} outside 0..{b}")
    _check_cap(members)
    if t == 0:
        return 0
    xi = inst[i]
    diffs = [xi - inst[a] for a in members]
    return sum(prod(D, start=1) ** 2 for D in combinations(diffs, b - t + 1))


def literal_Pi(inst: Instance, i: int, B: Iterable[int], mu: int) -> int:
    """Sum of P(i, D) over all D in B with |D| = |B| - mu.

    ``mu`` has to be the true tie count; the collapse to the tie-free product
    only holds at that size.
    """
    members = check_subset(inst, i, B)
    _check_cap(members)
    actual = tie_count(inst, i, members)
    if mu != actual:
        raise ValueError(f"mu={mu} does not match the tie count {actual}")
    xi = inst[i]
    diffs = [xi - inst[a] for a in members]
    return sum(prod(D, start=1) for D in combinations(diffs, len(members) - mu))


def sign_of(v: int) -> Sign:
    if v < 0:
        return Sign.NEGATIVE
    if v > 0:
        return Sign.POSITIVE
    return Sign.ZERO
