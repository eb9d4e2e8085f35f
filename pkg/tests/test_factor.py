import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rmfactor import arith
from rmfactor.exceptions import InvalidInputError
from rmfactor.factor import (
    DuplicateFilter,
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

from oracles import fermat_trace, multiplier_trace, prime_flags, reachable_products, smallest_divisor

PRIMES = prime_flags(10**5)


def rm(m=1, **kw):
    return MethodConfig(method=Method.RM, multiplier_m=m, **kw)


def random_semiprime(rng, lo_bits, hi_bits):
    while True:
        a = rng.randrange(2**lo_bits, 2**hi_bits) | 1
        b = rng.randrange(2**lo_bits, 2**hi_bits) | 1
        if arith.is_probable_prime(a) and arith.is_probable_prime(b):
            return a * b


# -- trial division ---------------------------------------------------------

@pytest.mark.parametrize("n, bound, expected", [(3000009, 144, 3), (91, 4, None), (8, 2, 2), (91, 7, 7)])
def test_trial_division_examples(n, bound, expected):
    assert trial_division(n, bound) == expected


def test_trial_division_matches_exhaustive_search():
    for n in range(2, 5000):
        for bound in (2, 3, 10, 71):
            brute = next((f for f in range(2, bound + 1) if n % f == 0), None)
            assert trial_division(n, bound) == brute


def test_trial_division_wheel_path():
    p = 2**31 - 1
    assert trial_division(p * (2**61 - 1), 2**25) is None
    assert trial_division(16777259 * 16777289, 2**25) == 16777259


def test_trial_division_rejects_bad_input():
    with pytest.raises(InvalidInputError):
        trial_division(1, 10)
    with pytest.raises(InvalidInputError):
        trial_division(10, 1)


# -- Fermat -------------------------------------------------------------------

@pytest.mark.parametrize("n", [5959, 15, 9, 10403, 1000001])
def test_fermat_matches_trace_oracle(n):
    it, f = fermat_trace(n)
    out = fermat_factor(n)
    assert (out.verdict, out.factor, out.iterations) == (Verdict.FACTORED, f, it)


def test_fermat_frozen_values():
    # frozen from tests/oracles.fermat_trace
    assert (fermat_factor(5959).factor, fermat_factor(5959).iterations) == (59, 3)
    assert (fermat_factor(15).factor, fermat_factor(15).iterations) == (3, 1)
    assert (fermat_factor(9).factor, fermat_factor(9).iterations) == (3, 1)


def test_fermat_prime_and_cap():
    assert fermat_factor(1009).verdict is Verdict.PROBABLE_PRIME
    out = fermat_factor(1009, safety_cap=5)
    assert out.verdict is Verdict.ABORTED and out.iterations == 5


@pytest.mark.parametrize("n", [8, 10, 7, 1])
def test_fermat_rejects(n):
    with pytest.raises(InvalidInputError):
        fermat_factor(n)


# -- Lehman -------------------------------------------------------------------

def test_lehman_examples():
    out = lehman_factor(35)
    assert out.factor in (5, 7) and out.phase is Phase.MULTIPLIER_SEARCH and out.iterations == 1
    out = lehman_factor(21)
    assert out.factor == 3 and out.phase is Phase.TRIAL_DIVISION and out.iterations == 0
    assert lehman_factor(8051).factor in (83, 97)
    assert smallest_divisor(8051) == 83


def test_lehman_rejects_small():
    with pytest.raises(InvalidInputError):
        lehman_factor(7)


def test_lehman_every_k_gets_a_test():
    # a prime exhausts the k loop; each k contributes at least one candidate
    p = 1000003
    out = lehman_factor(p)
    assert out.verdict is Verdict.PROBABLE_PRIME
    assert out.iterations >= arith.integer_root(p, 3) + 1


# -- leaf test ----------------------------------------------------------------

def test_leaf_square_test_examples():
    w, f = leaf_square_test(91, 4, 1)
    assert (w.s, w.d, w.D, w.A, f) == (20, 36, 6, 7, 7)
    assert leaf_square_test(493, 4, 1) is None
    w, f = leaf_square_test(77, 4, 1)
    assert (w.s, w.d, w.D, w.A, f) == (18, 16, 4, 7, 7)


def test_leaf_odd_parity_fallback():
    # s=23, D=6 differ in parity: A falls back to s - D
    w, f = leaf_square_test(493, 1, 1)
    assert (w.s, w.D, w.A, f) == (23, 6, 17, 17)


@settings(max_examples=3000, deadline=None)
@given(
    st.integers(min_value=2, max_value=10**12),
    st.integers(min_value=1, max_value=5040),
    st.integers(min_value=1, max_value=10**5),
)
def test_leaf_parity_with_factor_four(n, m, K):
    hit = leaf_square_test(n, 4 * m, K)
    if hit is not None:
        w, f = hit
        assert (w.s - w.D) % 2 == 0
        assert w.s * w.s - w.D * w.D == 4 * m * n * K
        assert 1 < f < n and n % f == 0


# -- SM -----------------------------------------------------------------------

def test_sm_examples():
    out = sm_factor(77, 1)
    assert (out.factor, out.iterations) == (7, 1)
    # k=1 already hits: 23^2 - 493 = 36
    assert multiplier_trace(493, 1, range(1, 50)) == (1, 17)
    out = sm_factor(493, 1)
    assert (out.factor, out.iterations) == (17, 1)
    assert multiplier_trace(493, 4, range(1, 50)) == (2, 29)
    out = sm_factor(493, 4)
    assert (out.factor, out.iterations) == (29, 2)
    assert sm_factor(9441101419801, 480).factor in (2174023, 4342687)


def test_sm_counts_match_oracle():
    rng = random.Random(5)
    for _ in range(300):
        n = random_semiprime(rng, 10, 20)
        if trial_division(n, max(2, arith.integer_root(n, 3))):
            continue
        it, f = multiplier_trace(n, 480, range(1, 10**7))
        out = sm_factor(n, 480)
        assert (out.iterations, out.factor) == (it, f)


def test_sm_cap_aborts():
    out = sm_factor(1000003, 480, safety_cap=50)
    assert out.verdict is Verdict.ABORTED and out.iterations == 50


# -- RM -----------------------------------------------------------------------

@pytest.mark.parametrize("mn, i, expected", [(91, 1, 4), (91, 2, 1), (134217728, 3, 2)])
def test_level_limit_examples(mn, i, expected):
    assert level_limit(mn, i) == expected


def test_level_limit_rejects_level_zero():
    with pytest.raises(InvalidInputError):
        level_limit(91, 0)


def test_rm_trace_91():
    assert trial_division(91, 4) is None
    assert arith.recursion_depth(91) == 2
    out = rm_factor(91, rm(1))
    assert (out.verdict, out.factor, out.iterations, out.phase) == (
        Verdict.FACTORED, 7, 1, Phase.MULTIPLIER_SEARCH)


def test_rm_hard_vector():
    out = rm_factor(96864103649179, rm(120))
    assert out.factor in (5680679, 17051501)


def test_rm_prime():
    out = rm_factor(1009, rm(1))
    assert out.verdict is Verdict.PROBABLE_PRIME
    assert PRIMES[1009]


def test_rm_small_inputs():
    assert rm_factor(2, rm()).verdict is Verdict.PROBABLE_PRIME
    assert rm_factor(3, rm()).verdict is Verdict.PROBABLE_PRIME
    assert rm_factor(4, rm()).factor == 2
    assert rm_factor(6, rm()).factor == 2
    with pytest.raises(InvalidInputError):
        rm_factor(1, rm())


def test_rm_perfect_square_of_prime():
    p = 1000003
    out = rm_factor(p * p, rm(1))
    assert out.factor == p and out.phase is Phase.MULTIPLIER_SEARCH


def test_duplicate_filter_examples():
    dup = DuplicateFilter()
    assert dup(24) is False
    assert dup(24) is True
    dup = DuplicateFilter()
    assert [dup(k) for k in range(1, 50)] == [False] * 49


def test_duplicate_filter_dense_prefix():
    dup = DuplicateFilter()
    dup.mark_dense(10)
    assert dup(7) is True
    assert dup(11) is False and dup(11) is True


def test_candidate_sequence_examples():
    cfg = rm(1, depth_override=1)
    assert rm_candidate_sequence(91, cfg, 4) == [1, 2, 3, 4]
    # level-2 limit 1: the outer level only contributes the factor 1
    assert level_limit(91, 2) == 1
    assert rm_candidate_sequence(91, rm(1, depth_override=2), 3) == [1, 2, 3]


def test_candidate_sequence_two_levels():
    # n=1000, m=1: level limits 10 (inner) and 2 (outer)
    assert (level_limit(1000, 1), level_limit(1000, 2)) == (10, 2)
    seq = rm_candidate_sequence(1000, rm(1, depth_override=2), 10**6)
    expected = list(range(1, 11)) + [2 * f for f in range(2, 11) if 2 * f > 10]
    assert seq == expected
    assert set(seq) == reachable_products([None, 10, 2])
    raw = rm_candidate_sequence(1000, rm(1, depth_override=2, sieve_enabled=False), 10**6)
    assert raw == list(range(1, 11)) + [2 * f for f in range(2, 11)]


def test_sieve_soundness_against_product_oracle():
    rng = random.Random(3)
    for _ in range(60):
        n = rng.randrange(100, 10**6)
        m = rng.choice([1, 2, 6])
        if m * n >= 10**6:
            continue
        mn = m * n
        g = arith.recursion_depth(mn)
        limits = [None] + [level_limit(mn, i) for i in range(1, g + 1)]
        seq = rm_candidate_sequence(n, rm(m), 10**9)
        assert len(seq) == len(set(seq))
        assert set(seq) == reachable_products(limits)


def test_termination_bound():
    for p in (1009, 104729, 1000003, 999999937):
        for m in (1, 120):
            out = rm_factor(p, rm(m))
            assert out.verdict is Verdict.PROBABLE_PRIME
            mn = m * p
            g = arith.recursion_depth(mn)
            bound = math.prod(level_limit(mn, i) for i in range(1, g + 1))
            assert out.iterations <= bound


def test_rm_iterations_are_sequence_position():
    rng = random.Random(8)
    for _ in range(100):
        n = random_semiprime(rng, 12, 18)
        if trial_division(n, max(2, arith.integer_root(n, 3))):
            continue
        cfg = rm(120)
        out = rm_factor(n, cfg)
        seq = rm_candidate_sequence(n, cfg, out.iterations)
        it, f = multiplier_trace(n, 480, seq)
        assert (it, f) == (out.iterations, out.factor)


def test_rm_sm_equivalence_small():
    rng = random.Random(2)
    for _ in range(100):
        n = random_semiprime(rng, 14, 20)
        if trial_division(n, max(2, arith.integer_root(n, 3))):
            continue
        m = rng.choice([1, 2, 30, 120])
        cfg = rm(m, depth_override=1, leaf_unbounded=True)
        a, b = rm_factor(n, cfg), sm_factor(n, 4 * m)
        assert (a.iterations, a.factor) == (b.iterations, b.factor)
        assert rm_candidate_sequence(n, cfg, 500) == list(range(1, 501))


def test_sieve_never_increases_iterations():
    rng = random.Random(4)
    for _ in range(100):
        n = random_semiprime(rng, 14, 18)
        on, off = rm_factor(n, rm(1)), rm_factor(n, rm(1, sieve_enabled=False))
        assert on.verdict == off.verdict
        assert on.iterations <= off.iterations


def test_rm_cap_aborts():
    out = rm_factor(1000003, rm(1, safety_cap=3))
    assert out.verdict is Verdict.ABORTED and out.iterations == 3


def test_config_validation():
    with pytest.raises(InvalidInputError):
        MethodConfig(multiplier_m=0)
    with pytest.raises(InvalidInputError):
        MethodConfig(safety_cap=0)
    with pytest.raises(InvalidInputError):
        MethodConfig(depth_override=0)
    with pytest.raises(InvalidInputError):
        MethodConfig(leaf_unbounded=True)
    assert MethodConfig(method="sm").method is Method.SM


@settings(max_examples=500, deadline=None)
@given(st.integers(min_value=2, max_value=10**40))
def test_ceiling_depth_outermost_level_is_degenerate(mn):
    # 3**g >= bit_length(mn) means mn < 2**(3**g), so the top limit is 1
    g = arith.recursion_depth(mn)
    assert level_limit(mn, g) == 1
    gf = arith.recursion_depth(mn, rounding="floor")
    assert gf in (g - 1, g) or g == 1


def test_depth_rounding_switch_same_candidates():
    n = 2**27 - 39
    assert arith.recursion_depth(n) == 3
    assert arith.recursion_depth(n, rounding="floor") == 2
    a = rm_candidate_sequence(n, rm(1), 10**6)
    b = rm_candidate_sequence(n, rm(1, depth_rounding="floor"), 10**6)
    assert a == b


def test_correctness_exhaustive_small():
    # the full 10^5 sweep lives in the acceptance suite
    for n in range(9, 20_000, 2):
        prime = PRIMES[n]
        for cfg in (rm(1), rm(120), MethodConfig(method=Method.LEHMAN)):
            out = factorize(n, cfg)
            if prime:
                assert out.verdict is Verdict.PROBABLE_PRIME, (n, cfg)
            else:
                assert out.verdict is Verdict.FACTORED and n % out.factor == 0, (n, cfg)
        if not prime:
            assert n % fermat_factor(n).factor == 0
            assert n % sm_factor(n, 480).factor == 0


def test_trial_method():
    assert factorize(91, MethodConfig(method="trial")).factor == 7
    assert factorize(97, MethodConfig(method="trial")).verdict is Verdict.PROBABLE_PRIME
    assert factorize(2, MethodConfig(method="trial")).verdict is Verdict.PROBABLE_PRIME
