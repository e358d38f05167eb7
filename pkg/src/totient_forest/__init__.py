"""Adversarial totient iterations, totient fibers and totient forests."""

__version__ = "0.1.0"

from .arboreal import (
    CaseEquation,
    ForestReport,
    TotientTree,
    TreeStatus,
    fruit,
    grow_forest,
    grow_tree,
    synthesize_case_equation,
)
from .bounds import (
    NATURALS_BOUND,
    SQUARES_BOUND,
    UNBOUNDED,
    BoundProvider,
    bound_naturals,
    bound_squares,
    derive_polynomial_bound,
    validate_bound_empirically,
)
from .core import DomainError, Factorization, divisors, euler_phi, factorize, is_prime, phi_sieve
from .fibers import TotientFiber, totient_fiber, totient_fiber_bruteforce
from .scoreboard import PartialEvaluationTrace, evaluate_trace, scoreboard_sequence, scoreboard_value
from .sequences import IncrementSequence, cubes, naturals, odds, parse_sequence, squares
from .stats import canopy_density, fruit_rolling_share, tree_size_profile, value_frequencies
