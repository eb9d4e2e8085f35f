"""Fermat-family integer factoring with iteration-count instrumentation.

Includes trial division, Fermat, Lehman, the constant-multiplier method (SM)
and recursive multiplication (RM), plus a seeded semiprime generator and a
benchmark harness.
"""
from .arith import (
    decimal_length,
    gcd,
    integer_root,
    is_perfect_square,
    is_probable_prime,
    isqrt_ceil,
    isqrt_floor,
    recursion_depth,
)
from .bench import BenchRow, mean_iterations, predicted_crossover, run_benchmark, verify_outcomes
from .estimator import Factorizer
from .exceptions import DatasetFormatError, GenerationError, InvalidInputError
from .factor import (
    DuplicateFilter,
    FactorOutcome,
    LeafWitness,
    Method,
    MethodConfig,
    Phase,
    Verdict,
    factorize,
    fermat_factor,
    leaf_square_test,
    lehman_factor,
    level_limit,
    rm_candidate_sequence,
    rm_factor,
    sm_factor,
    trial_division,
)
from .gen import DatasetRecord, GeneratorSpec, generate_dataset, generate_record, random_probable_prime

__version__ = "0.1.0"
