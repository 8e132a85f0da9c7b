"""Randomized maximum finding by polynomial sign tests, for inputs with ties."""
from .core import (
    ORACLE_CAP,
    CostBoundError,
    Instance,
    Sign,
    TestLedger,
    above_set,
    literal_P,
    literal_Pi,
    literal_R,
    sign_of,
    tie_count,
)
from .findmax import (
    InvariantError,
    Outcome,
    Params,
    RunTrace,
    StageResult,
    derive_params,
    descend_to_above,
    findmax,
    linear_elimination_baseline,
    make_rng,
    probe_stage,
    sample_subset,
    trial_seed,
)
from .kernels import available_backends, get_backend, set_backend
from .parity_sim import SearchStrategy, SimulatedSign, find_mu, r_test, simulate_parity

__version__ = "0.1.0"
