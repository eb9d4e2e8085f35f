"""Exact integer primitives shared by the factoring routines.

Everything here works on Python ints of unbounded size. No floating point is
used anywhere, so results stay exact well past 10**16.
"""
import math
import random

import gmpy2

from .exceptions import InvalidInputError

__all__ = [
    "isqrt_floor",
    "isqrt_ceil",
    "is_perfect_square",
    "integer_root",
    "gcd",
    "is_probable_prime",
    "recursion_depth",
    "decimal_length",
]

# Quadratic residues modulo a few small coprime moduli.  A non-square is
# rejected by at least one table about 99% of the time.
_RESIDUE_TABLES = tuple(
    (mod, frozenset(i * i % mod for i in range(mod))) for mod in (64, 63, 65, 11)
)

# Bases 2..41 are a deterministic Miller-Rabin witness set below this bound.
_MR_DETERMINISTIC_LIMIT = 3317044064679887385961981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_RANDOM_ROUNDS = 64
_SMALL_PRIMES = _MR_BASES


def _check_natural(x, name="x"):
    if x < 0:
        raise InvalidInputError(f"{name} must be non-negative, got {x}")


def isqrt_floor(x):
    """Largest r with r*r <= x."""
    _check_natural(x)
    return math.isqrt(x)


def isqrt_ceil(x):
    """Smallest r with r*r >= x."""
    _check_natural(x)
    if x == 0:
        return 0
    return math.isqrt(x - 1) + 1


def is_perfect_square(x, use_filter=True):
    """Return ``(True, r)`` when ``x == r*r``, else ``(False, 0)``.

    ``use_filter`` enables the residue pre-check. It never changes the answer,
    only how quickly a non-square is rejected.
    """
    _check_natural(x)
    if use_filter:
        for mod, residues in _RESIDUE_TABLES:
            if x % mod not in residues:
                return False, 0
    r = math.isqrt(x)
    if r * r == x:
        return True, r
    return False, 0


def integer_root(x, t):
    """Largest r with r**t <= x."""
    _check_natural(x)
    if t < 1:
        raise InvalidInputError(f"root index must be >= 1, got {t}")
    return int(gmpy2.iroot(gmpy2.mpz(x), t)[0])


def gcd(x, y):
    return math.gcd(x, y)


def _strong_probable_prime(n, d, s, base):
    x = pow(base, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_probable_prime(x):
    """Miller-Rabin primality test.

    Deterministic below 3.3e24 (fixed witness set). Larger inputs get 64
    rounds with bases drawn from a generator seeded by ``x`` itself, so the
    answer for a given input never changes between runs.
    """
    if x < 2:
        return False
    for p in _SMALL_PRIMES:
        if x % p == 0:
            return x == p
    d, s = x - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if x < _MR_DETERMINISTIC_LIMIT:
        bases = _MR_BASES
    else:
        rng = random.Random(x)
        bases = [rng.randrange(2, x - 1) for _ in range(_MR_RANDOM_ROUNDS)]
    return all(_strong_probable_prime(x, d, s, a) for a in bases)


def recursion_depth(mn, rounding="ceil"):
    """Number of multiplier levels g for the recursive search on ``mn``.

    ``rounding="ceil"`` gives the smallest g with 3**g >= bit_length(mn);
    ``rounding="floor"`` gives the largest g with 2**(3**g) <= mn. Both are
    clamped to at least 1.
    """
    if mn < 2:
        raise InvalidInputError(f"recursion depth needs mn >= 2, got {mn}")
    if rounding == "ceil":
        bits = mn.bit_length()
        g = 1
        while 3**g < bits:
            g += 1
        return g
    if rounding == "floor":
        g = 0
        while mn >> (3 ** (g + 1)) > 0:
            g += 1
        return max(1, g)
    raise InvalidInputError(f"unknown rounding mode {rounding!r}")


def decimal_length(x):
    """Number of decimal digits of ``x`` (``decimal_length(0) == 1``)."""
    _check_natural(x)
    return len(str(x))
