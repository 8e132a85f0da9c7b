from collections import Counter
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from scipy.stats import chisquare

from tiemax import (
    CostBoundError,
    Instance,
    InvariantError,
    Outcome,
    SearchStrategy,
    TestLedger,
    derive_params,
    descend_to_above,
    findmax,
    linear_elimination_baseline,
    make_rng,
    probe_stage,
    sample_subset,
)
from tiemax.findmax import parse_rational


def test_derive_params_examples():
    p = derive_params(1024, 1)
    assert (p.m, p.m0) == (30, 100)
    p = derive_params(2, 1)
    assert (p.m, p.m0) == (3, 10)
    p = derive_params(1, 5)
    assert (p.m, p.m0) == (0, 0)


def _oracle_params(n, c):
    k = n.bit_length() - 1
    if n == 1 << k:
        return int(np.ceil(float(3 * c * k))) if (3 * c * k).denominator != 1 else int(3 * c * k), int(10 * c * k // 1)
    mpmath.mp.dps = 120
    lg = mpmath.log(n, 2)
    m = int(mpmath.ceil(3 * mpmath.mpf(c.numerator) / c.denominator * lg))
    m0 = int(mpmath.floor(10 * mpmath.mpf(c.numerator) / c.denominator * lg))
    return m, m0


@pytest.mark.parametrize("c", [Fraction(1), Fraction(1, 2), Fraction(2, 3), Fraction(3), Fraction(7, 10)])
def test_derive_params_matches_high_precision(c):
    for n in list(range(2, 600)) + [1023, 1024, 1025, 4095, 4096, 4097, 2**20, 3**13]:
        p = derive_params(n, c)
        m, m0 = _oracle_params(n, c)
        assert (p.m, p.m0) == (m, max(1, m0)), n


def test_parse_rational():
    assert parse_rational("0.5") == Fraction(1, 2)
    assert parse_rational("2/3") == Fraction(2, 3)
    assert parse_rational(2) == 2
    for bad in ("0", "-1"):
        with pytest.raises(ValueError):
            parse_rational(bad)


def test_m0_at_least_one_for_tiny_c():
    p = derive_params(2, "1/100")
    assert p.m == 1 and p.m0 == 1


def test_sample_subset_small():
    rng = make_rng(0)
    assert all(sample_subset(rng, 1, 0) == () for _ in range(50))


def test_sample_subset_uniform():
    # n=3, pivot index 1: the four subsets of {0, 2} are equally likely.
    rng = make_rng(1)
    counts = Counter(sample_subset(rng, 3, 1) for _ in range(100_000))
    assert set(counts) == {(), (0,), (2,), (0, 2)}
    assert chisquare([counts[k] for k in [(), (0,), (2,), (0, 2)]]).pvalue > 1e-3


def test_sample_subset_marginals():
    rng = make_rng(2)
    n, i, draws = 40, 7, 20_000
    hits = np.zeros(n)
    for _ in range(draws):
        hits[list(sample_subset(rng, n, i))] += 1
    assert hits[i] == 0
    others = np.delete(hits, i) / draws
    assert np.all(np.abs(others - 0.5) < 5 * np.sqrt(0.25 / draws))


def test_probe_declares_when_pivot_is_max(backend):
    inst = Instance([7, 7, 7])
    params = derive_params(3, 1)
    rng = make_rng(3)
    for _ in range(200):
        stage = probe_stage(inst, 0, params, rng, TestLedger())
        assert stage.declared and stage.samples == params.m


def test_probe_witness_probability():
    # [1, 2], pivot 0, m = 3: each sample is {1} with probability 1/2, so a witness appears w.p. 7/8.
    inst = Instance([1, 2])
    params = derive_params(2, 1)
    assert params.m == 3
    rng = make_rng(4)
    trials = 40_000
    witnesses = 0
    for _ in range(trials):
        stage = probe_stage(inst, 0, params, rng, TestLedger())
        if not stage.declared:
            assert list(stage.witness) == [1]
            witnesses += 1
    assert abs(witnesses / trials - 7 / 8) < 4 * np.sqrt(7 / 64 / trials)


def test_probe_witness_is_odd():
    inst = Instance([3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5])
    params = derive_params(inst.n, 1)
    rng = make_rng(5)
    for _ in range(300):
        stage = probe_stage(inst, 1, params, rng, TestLedger())
        assert not stage.declared
        assert sum(inst[a] > inst[1] for a in stage.witness) % 2 == 1


def test_descend_hand_trace(backend):
    # Split {1,2}|{3}: the test on {1,2} is negative; split {1}|{2}: the test on {1} is positive.
    ledger = TestLedger(audit=[])
    assert descend_to_above(Instance([5, 3, 7, 2]), 0, [1, 2, 3], SearchStrategy.BINARY, ledger) == 2
    assert ledger.simulated_parity_tests == 2
    assert [list(entry[1]) for entry in ledger.audit] == [[1, 2], [1]]


def test_descend_singleton():
    ledger = TestLedger()
    assert descend_to_above(Instance([1, 5]), 0, [1], ledger=ledger) == 1
    assert ledger.simulated_parity_tests == 0


def test_descend_precondition_violation():
    with pytest.raises(InvariantError):
        descend_to_above(Instance([5, 3, 3]), 0, [1, 2])
    with pytest.raises(InvariantError):
        descend_to_above(Instance([5, 3]), 0, [])


def test_descend_random_split_is_uniform():
    inst = Instance([0, 9, 9, 9])
    rng = make_rng(6)
    counts = Counter(descend_to_above(inst, 0, [1, 2, 3], rng=rng) for _ in range(30_000))
    assert chisquare([counts[j] for j in (1, 2, 3)]).pvalue > 1e-3


def test_descend_test_budget():
    rng = make_rng(7)
    for _ in range(300):
        n = int(rng.integers(2, 200))
        values = rng.integers(0, 6, size=n)
        inst = Instance(values)
        i = int(rng.integers(n))
        B = [a for a in range(n) if a != i and rng.random() < 0.5]
        if sum(inst[a] > inst[i] for a in B) % 2 == 0:
            continue
        ledger = TestLedger()
        j = descend_to_above(inst, i, B, ledger=ledger, rng=rng)
        assert inst[j] > inst[i] and j in B
        assert ledger.simulated_parity_tests <= (len(B) - 1).bit_length()


def test_findmax_all_equal():
    inst = Instance([7, 7, 7])
    result, trace = findmax(inst, derive_params(3, 1, seed=0))
    assert result == 0 and trace.rounds == 1 and trace.outcome is Outcome.DECLARED_CORRECT


def test_findmax_single_element():
    result, trace = findmax(Instance([42]), derive_params(1, 1))
    assert result == 0 and trace.ledger.ordinary_tests == 0 and trace.correct


@pytest.mark.parametrize("strategy", list(SearchStrategy))
def test_findmax_runs(strategy, backend):
    rng = make_rng(8)
    for k in range(60):
        n = int(rng.integers(2, 300))
        inst = Instance(rng.integers(0, int(rng.integers(1, 20)), size=n))
        params = derive_params(n, 1, strategy, seed=k)
        result, trace = findmax(inst, params)
        assert trace.outcome is Outcome.DECLARED_CORRECT
        assert inst[result] == max(inst.tolist())
        assert all(a > b for a, b in zip(trace.r_sequence, trace.r_sequence[1:]))
        assert trace.r_sequence[-1] == 0
        assert max(trace.round_tests) <= params.round_budget()
        assert trace.ledger.ordinary_tests <= params.total_budget()


def test_findmax_reproducible():
    inst = Instance(make_rng(9).integers(0, 10, size=500))
    params = derive_params(500, 1, seed=11)
    a = findmax(inst, params)[1]
    b = findmax(inst, params)[1]
    assert a.to_dict() == b.to_dict()


def test_findmax_backends_agree():
    from tiemax import kernels

    if "compiled" not in kernels.available_backends():
        pytest.skip("compiled kernels not built")
    inst = Instance(make_rng(10).integers(0, 12, size=700))
    params = derive_params(700, 1, seed=12)
    traces = []
    for name in ("compiled", "python"):
        previous = kernels.set_backend(name)
        try:
            traces.append(findmax(inst, params)[1].to_dict())
        finally:
            kernels.set_backend(previous)
    assert traces[0] == traces[1]


def test_findmax_big_integers():
    values = [10**25 + v for v in make_rng(13).integers(0, 5, size=100).tolist()]
    inst = Instance(values)
    result, trace = findmax(inst, derive_params(100, 1, seed=1))
    assert inst[result] == max(values)


def test_findmax_exhaustion_is_failure():
    # One round with m=1 cannot both find a witness and declare.
    inst = Instance([0, 1, 2, 3])
    params = derive_params(4, 1)
    params = type(params)(4, params.c, 1, 1)
    outcomes = Counter(findmax(inst, params, make_rng(s))[1].outcome for s in range(200))
    assert Outcome.EXHAUSTED in outcomes
    for s in range(200):
        result, trace = findmax(inst, params, make_rng(s))
        if trace.outcome is Outcome.EXHAUSTED:
            assert result is None


def test_declared_wrong_when_m_is_tiny():
    inst = Instance([0, 1])
    params = derive_params(2, 1)
    params = type(params)(2, params.c, 1, 5)
    outcomes = Counter(findmax(inst, params, make_rng(s))[1].outcome for s in range(400))
    assert outcomes[Outcome.DECLARED_WRONG] > 0
    assert outcomes[Outcome.DECLARED_CORRECT] > 0


def test_total_budget_violation_raises(monkeypatch):
    from tiemax import Params

    inst = Instance([0, 1, 2, 3, 4, 5, 6, 7])
    params = derive_params(8, 1)
    monkeypatch.setattr(Params, "total_budget", lambda self: 0)
    with pytest.raises(CostBoundError):
        findmax(inst, params)


@pytest.mark.parametrize(
    "values, winner, tests",
    [([5, 3, 7, 2], 2, 3), ([4, 4], 0, 1), ([9], 0, 0)],
)
def test_baseline_examples(values, winner, tests):
    ledger = TestLedger()
    assert linear_elimination_baseline(Instance(values), ledger) == winner
    assert ledger.ordinary_tests == tests == ledger.compare_tests
