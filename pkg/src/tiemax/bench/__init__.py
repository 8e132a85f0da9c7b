"""Input generators, Monte Carlo trials and the oracle verification suite."""
from .generators import TIE_HEAVY, Generator, GeneratorSpec, balanced_multiplicities, generate_instance
from .trials import (
    CSV_FIELDS,
    TrialRecord,
    TrialSummary,
    emit,
    emit_csv,
    emit_json,
    run_baseline,
    run_single,
    run_trials,
    summarize,
)
from .verify import verify_oracle_suite
