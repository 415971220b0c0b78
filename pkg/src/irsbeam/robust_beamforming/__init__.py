"""Robust secure beamforming: minorant terms, LMIs, and the AO driver."""

from .ao import AOIterationRecord, AOTrace, alternate_optimize, initial_reflection
from .constraints import (
    alice_robust_margin,
    amp_power,
    build_alice_lmi,
    build_amp_schur,
    build_eve_lmi,
    build_magnitude_constraints,
    error_stack_from_angles,
    eve_robust_margin,
    interference_noise_minorant,
    interference_noise_power,
    rate_factor,
)
from .subproblems import SubproblemResult, solve_v_subproblem, solve_w_subproblem
from .terms import error_stack, exact_signal_power, lemma1_terms, stacked_direction
from .types import BeamState, Lemma1Terms, RobustConfig

__all__ = [
    "AOIterationRecord",
    "AOTrace",
    "BeamState",
    "Lemma1Terms",
    "RobustConfig",
    "SubproblemResult",
    "alice_robust_margin",
    "alternate_optimize",
    "amp_power",
    "build_alice_lmi",
    "build_amp_schur",
    "build_eve_lmi",
    "build_magnitude_constraints",
    "error_stack",
    "error_stack_from_angles",
    "eve_robust_margin",
    "exact_signal_power",
    "initial_reflection",
    "interference_noise_minorant",
    "interference_noise_power",
    "lemma1_terms",
    "rate_factor",
    "solve_v_subproblem",
    "solve_w_subproblem",
    "stacked_direction",
]
