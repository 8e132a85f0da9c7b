from __future__ import annotations

import enum
from dataclasses import dataclass
from math import isqrt

import numpy as np

from ..core import Instance
from ..findmax import make_rng


class Generator(enum.Enum):
    DISTINCT = "distinct"
    BALANCED_MULTISET = "balanced_multiset"
    ALL_EQUAL = "all_equal"
    ONE_MAX_REST_TIED = "one_max_rest_tied"
    TWO_LEVEL = "two_level"


TIE_HEAVY = (Generator.BALANCED_MULTISET, Generator.TWO_LEVEL, Generator.ONE_MAX_REST_TIED)


@dataclass(frozen=True)
class GeneratorSpec:
    kind: Generator
    n: int
    seed: int = 0


def balanced_multiplicities(n: int) -> list[int]:
    """isqrt(n) values, all with multiplicity isqrt(n) except the last, which takes the remainder."""
    k = isqrt(n)
    counts = [k] * k
    counts[-1] += n - k * k
    return counts


def generate_instance(spec: GeneratorSpec) -> Instance:
    """Deterministic in (kind, n, seed). Values are small positive integers."""
    n = spec.n
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = make_rng(spec.seed, 0)
    kind = spec.kind
    if kind is Generator.DISTINCT:
        values = rng.permutation(np.arange(1, n + 1))
    elif kind is Generator.ALL_EQUAL:
        values = np.ones(n, dtype=np.int64)
    elif kind is Generator.ONE_MAX_REST_TIED:
        values = np.ones(n, dtype=np.int64)
        values[rng.integers(n)] = 2
    elif kind is Generator.TWO_LEVEL:
        values = np.full(n, 2, dtype=np.int64)
        values[: n // 2] = 1
        values = rng.permutation(values)
    elif kind is Generator.BALANCED_MULTISET:
        counts = balanced_multiplicities(n)
        values = rng.permutation(np.repeat(np.arange(1, len(counts) + 1), counts))
    else:
        raise ValueError(f"unknown generator {kind}")
    return Instance(np.asarray(values, dtype=np.int64))
