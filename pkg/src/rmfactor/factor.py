"""Fermat-family factoring methods with per-candidate instrumentation.

Every method reports ``iterations``: the number of perfect-square candidate
tests it performed. Divisibility probes in the trial-division phase are not
counted.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional

from gmpy2 import gcd as _mpz_gcd
from gmpy2 import is_square as _is_square
from gmpy2 import isqrt as _isqrt
from gmpy2 import mpz

from . import arith
from .exceptions import InvalidInputError

__all__ = [
    "Method",
    "Verdict",
    "Phase",
    "MethodConfig",
    "FactorOutcome",
    "LeafWitness",
    "DuplicateFilter",
    "trial_division",
    "fermat_factor",
    "lehman_factor",
    "leaf_square_test",
    "sm_factor",
    "rm_factor",
    "level_limit",
    "rm_candidate_sequence",
    "factorize",
    "DEFAULT_SAFETY_CAP",
]

DEFAULT_SAFETY_CAP = 10**9


class Method(str, enum.Enum):
    TRIAL = "trial"
    FERMAT = "fermat"
    LEHMAN = "lehman"
    SM = "sm"
    RM = "rm"


class Verdict(str, enum.Enum):
    FACTORED = "factored"
    PROBABLE_PRIME = "probable_prime"
    ABORTED = "aborted"


class Phase(str, enum.Enum):
    TRIAL_DIVISION = "trial_division"
    MULTIPLIER_SEARCH = "multiplier_search"


@dataclass(frozen=True)
class MethodConfig:
    """Algorithm selection and knobs.

    ``multiplier_m`` is the full constant multiplier for SM and the ``m`` of
    the ``4*m*n*K`` leaf test for RM; the other methods ignore it.
    ``sieve_enabled``, ``depth_override`` and ``leaf_unbounded`` only apply
    to RM. ``leaf_unbounded`` lifts the level-1 limit and requires depth 1.
    """

    method: Method = Method.RM
    multiplier_m: int = 1
    sieve_enabled: bool = True
    depth_override: Optional[int] = None
    safety_cap: int = DEFAULT_SAFETY_CAP
    leaf_unbounded: bool = False
    depth_rounding: str = "ceil"

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        if self.multiplier_m < 1:
            raise InvalidInputError(f"multiplier must be >= 1, got {self.multiplier_m}")
        if self.safety_cap < 1:
            raise InvalidInputError(f"safety cap must be >= 1, got {self.safety_cap}")
        if self.depth_override is not None and self.depth_override < 1:
            raise InvalidInputError(f"depth override must be >= 1, got {self.depth_override}")
        if self.leaf_unbounded and self.depth_override != 1:
            raise InvalidInputError("leaf_unbounded requires depth_override=1")


@dataclass(frozen=True)
class FactorOutcome:
    n: int
    verdict: Verdict
    iterations: int
    phase: Phase
    factor: Optional[int] = None

    def __post_init__(self):
        if self.verdict is Verdict.FACTORED:
            f = self.factor
            if f is None or not 1 < f < self.n or self.n % f:
                raise AssertionError(f"bad factor {f} for {self.n}")

    @property
    def cofactor(self):
        return None if self.factor is None else self.n // self.factor


@dataclass(frozen=True)
class LeafWitness:
    """Intermediate values of one successful leaf square test."""

    K: int
    s: int
    d: int
    D: int
    A: int


@dataclass
class DuplicateFilter:
    """Per-invocation record of multipliers already submitted to a leaf test.

    ``mark_dense(upto)`` declares every K in ``1..upto`` as already presented,
    which is what the first (all-ones) branch of the recursion covers. It saves
    storing those values one by one.
    """

    dense_upto: int = 0
    seen: set = field(default_factory=set)

    def mark_dense(self, upto):
        self.dense_upto = max(self.dense_upto, upto)

    def __call__(self, K):
        """True when ``K`` was presented before (skip it); records it otherwise."""
        if K <= self.dense_upto or K in self.seen:
            return True
        self.seen.add(K)
        return False


def _check_n(n, minimum=2):
    if n < minimum:
        raise InvalidInputError(f"n must be >= {minimum}, got {n}")


_sieve_primes: list = []
_sieve_limit = 1
_SIEVE_CACHE_MAX = 1 << 24


def _primes_upto(bound):
    """Cached list of primes, grown geometrically as bounds increase."""
    global _sieve_primes, _sieve_limit
    if bound > _sieve_limit:
        limit = max(bound, 2 * _sieve_limit, 1024)
        flags = bytearray([1]) * (limit + 1)
        flags[0:2] = b"\x00\x00"
        for p in range(2, arith.isqrt_floor(limit) + 1):
            if flags[p]:
                flags[p * p :: p] = bytes(len(range(p * p, limit + 1, p)))
        _sieve_primes = [i for i in range(limit + 1) if flags[i]]
        _sieve_limit = limit
    return _sieve_primes


def trial_division(n, bound):
    """Return the smallest divisor ``f`` of ``n`` with ``2 <= f <= bound``, or None.

    The smallest divisor above 1 is always prime, so only primes are probed
    while the bound fits the cached sieve; beyond it a 2-3-5 wheel is used.
    """
    _check_n(n)
    if bound < 2:
        raise InvalidInputError(f"trial-division bound must be >= 2, got {bound}")
    if bound <= _SIEVE_CACHE_MAX:
        for p in _primes_upto(bound):
            if p > bound:
                break
            if n % p == 0:
                return p
        return None
    for p in (2, 3, 5):
        if n % p == 0:
            return p
    f = 7
    for step in itertools.cycle((4, 2, 4, 2, 4, 6, 2, 6)):
        if f > bound:
            return None
        if n % f == 0:
            return f
        f += step


def _cube_root_phase(n, extra=0):
    """Phase 1 shared by Lehman, SM and RM: divisors up to the cube root (+ ``extra``)."""
    bound = max(2, arith.integer_root(n, 3) + extra)
    f = trial_division(n, bound)
    if f is not None and f < n:
        return FactorOutcome(n, Verdict.FACTORED, 0, Phase.TRIAL_DIVISION, f)
    return None


def fermat_factor(n, safety_cap=DEFAULT_SAFETY_CAP):
    """Difference-of-squares search starting at ceil(sqrt(n)).

    Stops with ``PROBABLE_PRIME`` once x passes (n+1)/2: beyond that point
    only the trivial representation remains, so ``n`` is prime.
    """
    if n % 2 == 0:
        raise InvalidInputError(f"Fermat's method needs odd n, got {n}")
    _check_n(n, 9)
    x = mpz(arith.isqrt_ceil(n))
    r = x * x - n
    x_last = (n + 1) // 2
    iterations = 0
    while x <= x_last:
        if iterations >= safety_cap:
            return FactorOutcome(n, Verdict.ABORTED, iterations, Phase.MULTIPLIER_SEARCH)
        iterations += 1
        if _is_square(r):
            f = int(x - _isqrt(r))
            if 1 < f < n:
                return FactorOutcome(n, Verdict.FACTORED, iterations, Phase.MULTIPLIER_SEARCH, f)
        r += 2 * x + 1
        x += 1
    return FactorOutcome(n, Verdict.PROBABLE_PRIME, iterations, Phase.MULTIPLIER_SEARCH)


def lehman_factor(n, safety_cap=DEFAULT_SAFETY_CAP):
    """Lehman's O(n^(1/3)) method.

    For each k the x-range ``sqrt(4kn) <= x <= sqrt(4kn) + n^(1/6)/(4 sqrt(k))``
    is squared out to ``x*x - 4kn <= n^(2/3) + n^(1/3)/(16k)`` and rounded up
    with integer roots, which can only add candidates. At least one x is
    tested for every k. Trial division runs one past floor(n^(1/3)) so that
    a factor just above the real cube root (3 for n = 21) is still caught.
    """
    _check_n(n, 8)
    early = _cube_root_phase(n, extra=1)
    if early is not None:
        return early
    c = arith.integer_root(n, 3)
    n23 = arith.integer_root(n * n, 3)
    n = mpz(n)
    iterations = 0
    four_n = 4 * n
    fkn = 0
    for k in range(1, c + 2):
        fkn += four_n
        x = _isqrt(fkn - 1) + 1
        x_max = _isqrt(fkn + n23 + 1 + (c + 1) // (16 * k))
        if x_max < x:
            x_max = x
        while x <= x_max:
            if iterations >= safety_cap:
                return FactorOutcome(int(n), Verdict.ABORTED, iterations, Phase.MULTIPLIER_SEARCH)
            iterations += 1
            y2 = x * x - fkn
            if _is_square(y2):
                f = int(_mpz_gcd(x + _isqrt(y2), n))
                if 1 < f < n:
                    return FactorOutcome(int(n), Verdict.FACTORED, iterations, Phase.MULTIPLIER_SEARCH, f)
            x += 1
    return FactorOutcome(int(n), Verdict.PROBABLE_PRIME, iterations, Phase.MULTIPLIER_SEARCH)


def leaf_square_test(n, fourm, K):
    """One square test on ``fourm*n*K``.

    Returns ``(witness, factor)`` when ``ceil(sqrt(fourm*n*K))**2 - fourm*n*K``
    is a perfect square ``D**2`` and ``gcd(n, A)`` is a proper factor, else
    None. ``A = (s - D) // 2`` when s and D share parity, otherwise ``s - D``.
    """
    N = fourm * n * K
    s = arith.isqrt_ceil(N)
    d = s * s - N
    is_sq, D = arith.is_perfect_square(d)
    if not is_sq:
        return None
    A = (s - D) // 2 if (s - D) % 2 == 0 else s - D
    f = arith.gcd(n, A)
    if 1 < f < n:
        return LeafWitness(K, s, d, D, A), f
    return None


def sm_factor(n, M, safety_cap=DEFAULT_SAFETY_CAP):
    """Constant-multiplier search: test ``M*n*k`` for k = 1, 2, 3, ...

    There is no natural upper bound on k, so a prime input runs until
    ``safety_cap`` and comes back ``ABORTED``.
    """
    _check_n(n)
    if n <= 3:
        return FactorOutcome(n, Verdict.PROBABLE_PRIME, 0, Phase.TRIAL_DIVISION)
    early = _cube_root_phase(n)
    if early is not None:
        return early
    step = mpz(M) * n
    x = mpz(0)
    for k in range(1, safety_cap + 1):
        x += step
        s = _isqrt(x - 1) + 1
        if _is_square(s * s - x):
            hit = leaf_square_test(n, M, k)
            if hit is not None:
                return FactorOutcome(n, Verdict.FACTORED, k, Phase.MULTIPLIER_SEARCH, hit[1])
    return FactorOutcome(n, Verdict.ABORTED, safety_cap, Phase.MULTIPLIER_SEARCH)


def level_limit(mn, i):
    """Upper bound for the level-``i`` factor: floor(mn ** (1 / 3**i))."""
    if i < 1:
        raise InvalidInputError(f"level index must be >= 1, got {i}")
    if mn < 2:
        raise InvalidInputError(f"mn must be >= 2, got {mn}")
    return arith.integer_root(mn, 3**i)


def _rm_depth(mn, cfg):
    if cfg.depth_override is not None:
        return cfg.depth_override
    return arith.recursion_depth(mn, cfg.depth_rounding)


def _leaf_runs(limits, unbounded=False) -> Iterator[tuple]:
    """Depth-first walk over the outer levels of the multiplier tree.

    ``limits[i]`` bounds the level-``i`` factor (``limits[0]`` is unused).
    Yields ``(K_parent, f_lo, f_hi)`` for each level-1 loop, whose multipliers
    are ``K_parent * f`` for ``f`` in ``f_lo..f_hi``. Factor chains are
    nondecreasing from the outermost level inward. ``f_hi`` is None for the
    unbounded single-level walk.
    """
    g = len(limits) - 1
    if g == 1:
        yield 1, 1, None if unbounded else limits[1]
        return
    stack = [(g, 1, 1)]
    while stack:
        level, f_min, K = stack.pop()
        if level == 1:
            yield K, f_min, limits[1]
            continue
        # reversed so that pops come out in increasing-f order
        for f in range(limits[level], f_min - 1, -1):
            stack.append((level - 1, f, K * f))


def rm_candidate_sequence(n, cfg, limit):
    """The ordered multipliers K that RM submits to the leaf test.

    Sieve applied, truncated at ``limit`` entries, and no early exit on a
    factor. The walk is shared with :func:`rm_factor`.
    """
    _check_n(n)
    mn = cfg.multiplier_m * n
    g = _rm_depth(mn, cfg)
    limits = [None] + [level_limit(mn, i) for i in range(1, g + 1)]
    dup = DuplicateFilter() if cfg.sieve_enabled else None
    out = []
    first = True
    for K_parent, lo, hi in _leaf_runs(limits, cfg.leaf_unbounded):
        fs = itertools.count(lo) if hi is None else range(lo, hi + 1)
        for f in fs:
            if len(out) >= limit:
                return out
            K = K_parent * f
            if dup is not None and not first and dup(K):
                continue
            out.append(K)
        if first and dup is not None:
            dup.mark_dense(hi)
        first = False
    return out


def rm_factor(n, cfg=None):
    """Recursive-multiplication factoring.

    Phase 1 trial-divides up to the cube root. Phase 2 walks products
    ``K = k_1 * k_2 * ... * k_g`` with ``k_i <= floor((m*n)**(1/3**i))`` and
    tests whether ``ceil(sqrt(4*m*n*K))**2 - 4*m*n*K`` is a square. An
    exhausted tree means ``n`` is prime.
    """
    if cfg is None:
        cfg = MethodConfig()
    _check_n(n)
    if n <= 3:
        return FactorOutcome(n, Verdict.PROBABLE_PRIME, 0, Phase.TRIAL_DIVISION)
    early = _cube_root_phase(n)
    if early is not None:
        return early

    m = cfg.multiplier_m
    mn = m * n
    g = _rm_depth(mn, cfg)
    limits = [None] + [level_limit(mn, i) for i in range(1, g + 1)]
    fourmn = mpz(4 * mn)
    dup = DuplicateFilter() if cfg.sieve_enabled else None
    cap = cfg.safety_cap
    iterations = 0
    first = True

    for K_parent, lo, hi in _leaf_runs(limits, cfg.leaf_unbounded):
        step = fourmn * K_parent
        fs = itertools.count(lo) if hi is None else range(lo, hi + 1)
        check_dup = dup is not None and not first
        for f in fs:
            if check_dup and dup(K_parent * f):
                continue
            if iterations >= cap:
                return FactorOutcome(n, Verdict.ABORTED, iterations, Phase.MULTIPLIER_SEARCH)
            iterations += 1
            x = step * f
            s = _isqrt(x - 1) + 1
            d = s * s - x
            if _is_square(d):
                K = K_parent * f
                hit = leaf_square_test(n, 4 * m, K)
                if hit is not None:
                    w = hit[0]
                    if (w.s - w.D) % 2:
                        raise AssertionError(f"leaf parity violated for n={n}, K={K}")
                    return FactorOutcome(n, Verdict.FACTORED, iterations, Phase.MULTIPLIER_SEARCH, hit[1])
        if first and dup is not None:
            dup.mark_dense(hi)
        first = False
    return FactorOutcome(n, Verdict.PROBABLE_PRIME, iterations, Phase.MULTIPLIER_SEARCH)


def _trial_factor(n):
    _check_n(n)
    r = arith.isqrt_floor(n)
    f = trial_division(n, r) if r >= 2 else None
    if f is None:
        return FactorOutcome(n, Verdict.PROBABLE_PRIME, 0, Phase.TRIAL_DIVISION)
    return FactorOutcome(n, Verdict.FACTORED, 0, Phase.TRIAL_DIVISION, f)


def factorize(n, cfg):
    """Dispatch ``n`` to the method named in ``cfg``."""
    method = cfg.method
    if method is Method.RM:
        return rm_factor(n, cfg)
    if method is Method.SM:
        return sm_factor(n, cfg.multiplier_m, cfg.safety_cap)
    if method is Method.LEHMAN:
        return lehman_factor(n, cfg.safety_cap)
    if method is Method.FERMAT:
        return fermat_factor(n, cfg.safety_cap)
    return _trial_factor(n)
