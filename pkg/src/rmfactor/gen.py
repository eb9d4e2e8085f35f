"""Seeded semiprime datasets with factors in the window n^(1/3) < a <= b.

Record ``i`` of a dataset draws from its own random stream keyed by
``(seed, i)``, so any subset of records can be regenerated independently and
in any order.
"""
from __future__ import annotations

import csv
import hashlib
import io
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List

import gmpy2

from . import arith
from .exceptions import DatasetFormatError, GenerationError, InvalidInputError

__all__ = [
    "DatasetRecord",
    "GeneratorSpec",
    "random_probable_prime",
    "generate_record",
    "generate_dataset",
    "record_stream",
    "validate_record",
    "write_dataset",
    "read_dataset",
    "format_dataset",
    "DATASET_HEADER",
]

DATASET_HEADER = ("n", "a", "b", "digits")
MIN_DIGITS = 3
RETRY_BUDGET = 10_000


@dataclass(frozen=True)
class DatasetRecord:
    n: int
    a: int
    b: int
    digits: int


@dataclass(frozen=True)
class GeneratorSpec:
    digits: int
    count: int
    seed: int = 0

    def __post_init__(self):
        if self.digits < MIN_DIGITS:
            raise InvalidInputError(f"digits must be >= {MIN_DIGITS}, got {self.digits}")
        if self.count < 1:
            raise InvalidInputError(f"count must be >= 1, got {self.count}")
        if not 0 <= self.seed < 2**64:
            raise InvalidInputError(f"seed must fit in 64 unsigned bits, got {self.seed}")


def record_stream(seed, index):
    """Independent ``random.Random`` for record ``index`` of dataset ``seed``."""
    key = hashlib.blake2b(f"{seed}:{index}".encode(), digest_size=16).digest()
    return random.Random(int.from_bytes(key, "big"))


def _log_scale_draw(lo, hi, rng):
    # bit length first, then uniform inside it: roughly uniform in log(x)
    bits = rng.randint(lo.bit_length(), hi.bit_length())
    return rng.randint(max(lo, 1 << (bits - 1)), min(hi, (1 << bits) - 1))


def random_probable_prime(lo, hi, rng, log_scale=False, retries=RETRY_BUDGET):
    """Draw a candidate from ``[lo, hi]`` and advance it to the next probable prime.

    Candidates whose next prime lies beyond ``hi`` are redrawn, up to
    ``retries`` times. With ``log_scale`` the candidate is drawn uniformly in
    bit length, then uniformly within that length.

    Raises:
        GenerationError: no prime was found within the retry budget.
    """
    if lo > hi:
        raise InvalidInputError(f"empty interval [{lo}, {hi}]")
    lo = max(lo, 2)
    for _ in range(retries):
        if lo > hi:
            break
        c = _log_scale_draw(lo, hi, rng) if log_scale else rng.randint(lo, hi)
        p = c if arith.is_probable_prime(c) else int(gmpy2.next_prime(c))
        if p <= hi and arith.is_probable_prime(p):
            return p
    raise GenerationError(f"no probable prime found in [{lo}, {hi}]")


def generate_record(digits, rng, retries=RETRY_BUDGET):
    """One semiprime with exactly ``digits`` decimal digits and a**3 > n, a <= b.

    ``a`` comes from ``(10**((r-1)/3), 10**(r/2))`` on a log scale and ``b``
    uniformly from the range that gives ``n`` the right length. The exact
    window conditions are then checked on ``n`` itself and failures redrawn.
    """
    if digits < MIN_DIGITS:
        raise InvalidInputError(f"digits must be >= {MIN_DIGITS}, got {digits}")
    n_lo, n_hi = 10 ** (digits - 1), 10**digits - 1
    a_lo = arith.integer_root(n_lo, 3) + 1
    a_hi = arith.isqrt_floor(n_hi)
    for _ in range(retries):
        try:
            a = random_probable_prime(a_lo, a_hi, rng, log_scale=True, retries=16)
            b_lo = -(-n_lo // a)
            b_hi = n_hi // a
            if b_lo > b_hi:
                continue
            b = random_probable_prime(b_lo, b_hi, rng, retries=16)
        except GenerationError:
            continue
        if a > b:
            a, b = b, a
        n = a * b
        if arith.decimal_length(n) == digits and a**3 > n:
            return DatasetRecord(n, a, b, digits)
    raise GenerationError(f"could not generate a {digits}-digit record")


def _generate_one(args):
    digits, seed, index = args
    return generate_record(digits, record_stream(seed, index))


def generate_dataset(spec, workers=1):
    """All ``spec.count`` records, ordered by index whatever ``workers`` is."""
    jobs = [(spec.digits, spec.seed, i) for i in range(spec.count)]
    if workers <= 1:
        return [_generate_one(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_generate_one, jobs, chunksize=256))


def validate_record(rec):
    """Return a description of the first invariant ``rec`` breaks, or None."""
    n, a, b, digits = rec.n, rec.a, rec.b, rec.digits
    if n != a * b:
        return f"n != a*b ({n} != {a}*{b})"
    if a > b:
        return f"a > b ({a} > {b})"
    if arith.decimal_length(n) != digits:
        return f"n has {arith.decimal_length(n)} digits, record says {digits}"
    if a**3 <= n:
        return f"a**3 <= n (a={a} is not above the cube root)"
    if not arith.is_probable_prime(a):
        return f"a={a} is not prime"
    if not arith.is_probable_prime(b):
        return f"b={b} is not prime"
    return None


def format_dataset(records: Iterable[DatasetRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(DATASET_HEADER)
    for r in records:
        w.writerow((r.n, r.a, r.b, r.digits))
    return buf.getvalue()


def write_dataset(records, path):
    Path(path).write_text(format_dataset(records), encoding="ascii")


def _parse_natural(text, line_no):
    if not text.isdigit():
        raise DatasetFormatError(f"not a decimal natural: {text!r}", line_no)
    return int(text)


def read_dataset(path) -> List[DatasetRecord]:
    """Parse a dataset file. Structural problems raise DatasetFormatError with the line number."""
    records = []
    saw_header = False
    with open(path, encoding="ascii", newline="") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if line_no == 1:
                if tuple(line.split(",")) != DATASET_HEADER:
                    raise DatasetFormatError(f"expected header {','.join(DATASET_HEADER)}", 1)
                saw_header = True
                continue
            if not line:
                continue
            fields = line.split(",")
            if len(fields) != 4:
                raise DatasetFormatError(f"expected 4 fields, got {len(fields)}", line_no)
            n, a, b, digits = (_parse_natural(f, line_no) for f in fields)
            records.append(DatasetRecord(n, a, b, digits))
    if not saw_header:
        raise DatasetFormatError("empty file", 1)
    return records
