"""Exact small solutions of ternary quadratic congruences, with the
character-sum toolkit used to certify the norm bound behind them.

Everything is integer arithmetic end to end: solver output carries a
replayable trace whose invariants (divisibility, orthogonality, the norm
chain) are rechecked on construction, and the complete-sum machinery
always keeps an independent brute-force route next to each structured
evaluation.
"""

from .charsum import (
    Box,
    Character,
    Disc,
    divisor_char_sum,
    divisor_sum_positive,
    exp_char_sum,
    form_shift_sum,
    form_shift_sum_q,
    full_grid_sum,
    incomplete_sum,
    make_character,
    max_window_power_sum,
    minimal_lift,
    second_moment,
    shift_pair_counts,
    shift_params,
    shifted_sum_bound,
    window_power_sum,
)
from .cli import ExperimentConfig, fit_exponent, main
from .errors import QuadCongError
from .lattice import shortest_vector3
from .modmath import Modulus, is_prime, jacobi, make_modulus, sqrt_mod_squarefree
from .oracle import brute_min_square, brute_min_zero, oracle_scan, sample_forms
from .qforms import BinaryForm, TernaryForm, monic_companion, parse_binary, parse_ternary
from .solver import SolveTrace, parse_trace, solve_from_witness, solve_ternary, trace_lines, verify_trace

__version__ = "0.1.0"

__all__ = [
    "BinaryForm",
    "Box",
    "Character",
    "Disc",
    "ExperimentConfig",
    "Modulus",
    "QuadCongError",
    "SolveTrace",
    "TernaryForm",
    "brute_min_square",
    "brute_min_zero",
    "divisor_char_sum",
    "divisor_sum_positive",
    "exp_char_sum",
    "fit_exponent",
    "form_shift_sum",
    "form_shift_sum_q",
    "full_grid_sum",
    "incomplete_sum",
    "is_prime",
    "jacobi",
    "main",
    "make_character",
    "make_modulus",
    "max_window_power_sum",
    "minimal_lift",
    "monic_companion",
    "oracle_scan",
    "parse_binary",
    "parse_ternary",
    "parse_trace",
    "trace_lines",
    "verify_trace",
    "sample_forms",
    "second_moment",
    "shift_pair_counts",
    "shift_params",
    "shifted_sum_bound",
    "shortest_vector3",
    "solve_from_witness",
    "solve_ternary",
    "sqrt_mod_squarefree",
    "window_power_sum",
]
