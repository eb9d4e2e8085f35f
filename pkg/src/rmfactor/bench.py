"""Benchmark harness: run methods over a dataset and aggregate iteration counts."""
from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

from .exceptions import InvalidInputError
from .factor import FactorOutcome, Method, MethodConfig, Verdict, factorize

__all__ = [
    "BenchRow",
    "Mismatch",
    "run_benchmark",
    "mean_iterations",
    "predicted_crossover",
    "verify_outcomes",
    "factor_all",
    "format_report",
    "parse_report",
    "REPORT_HEADER",
]

REPORT_HEADER = (
    "digits",
    "method",
    "multiplier",
    "count",
    "mean_iterations_floor",
    "failures",
    "wall_time_ms",
)


@dataclass(frozen=True)
class Mismatch:
    index: int
    n: int
    reason: str


@dataclass(frozen=True)
class BenchRow:
    digits: int
    method: Method
    multiplier_m: int
    count: int
    mean_iterations_floor: int
    failures: int
    wall_time_ms: int
    total_iterations: int = 0
    mismatches: Tuple[Mismatch, ...] = field(default=(), repr=False)

    def as_csv_row(self):
        return (
            self.digits,
            self.method.value,
            self.multiplier_m,
            self.count,
            self.mean_iterations_floor,
            self.failures,
            self.wall_time_ms,
        )


def mean_iterations(samples):
    """Floor of the arithmetic mean of ``samples``."""
    samples = list(samples)
    if not samples:
        raise InvalidInputError("mean of an empty sample")
    return sum(samples) // len(samples)


def predicted_crossover(m_rm):
    """ceil(6 * log10(m_rm)): the smallest r with 10**r >= m_rm**6."""
    if m_rm < 1:
        raise InvalidInputError(f"multiplier must be >= 1, got {m_rm}")
    target = m_rm**6
    r = 0
    while 10**r < target:
        r += 1
    return r


def verify_outcomes(dataset, outcomes) -> List[Mismatch]:
    """Records whose outcome is not one of the known factors ``a`` or ``b``."""
    if len(dataset) != len(outcomes):
        raise InvalidInputError("dataset and outcomes differ in length")
    bad = []
    for i, (rec, out) in enumerate(zip(dataset, outcomes)):
        if out.verdict is not Verdict.FACTORED:
            bad.append(Mismatch(i, rec.n, out.verdict.value))
        elif out.factor not in (rec.a, rec.b):
            bad.append(Mismatch(i, rec.n, f"factor {out.factor} not in {{{rec.a}, {rec.b}}}"))
    return bad


def _factor_chunk(args) -> List[FactorOutcome]:
    cfg, ns = args
    return [factorize(n, cfg) for n in ns]


def factor_all(ns, cfg, workers=1, chunk=500) -> List[FactorOutcome]:
    """Outcomes for every ``n`` in input order, fanned out over ``workers`` processes."""
    if workers <= 1:
        return [factorize(n, cfg) for n in ns]
    chunks = [(cfg, ns[i : i + chunk]) for i in range(0, len(ns), chunk)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return [o for part in pool.map(_factor_chunk, chunks) for o in part]


def run_benchmark(dataset, cfgs: Sequence[MethodConfig], workers=1) -> List[BenchRow]:
    """Factor every record with every config; one BenchRow per config.

    Each factor is checked against the record's ``a``/``b``. Work is spread
    over ``workers`` processes; per-number counts are deterministic, so the
    aggregated means do not depend on the worker count.
    """
    dataset = list(dataset)
    if not dataset:
        raise InvalidInputError("empty dataset")
    digits = {r.digits for r in dataset}
    if len(digits) != 1:
        raise InvalidInputError(f"mixed digit counts in dataset: {sorted(digits)}")
    (r,) = digits
    ns = [rec.n for rec in dataset]
    rows = []
    for cfg in cfgs:
        t0 = time.perf_counter()
        outcomes = factor_all(ns, cfg, workers)
        elapsed = int((time.perf_counter() - t0) * 1000)
        bad = verify_outcomes(dataset, outcomes)
        total = sum(o.iterations for o in outcomes)
        rows.append(
            BenchRow(
                digits=r,
                method=cfg.method,
                multiplier_m=cfg.multiplier_m,
                count=len(outcomes),
                mean_iterations_floor=total // len(outcomes),
                failures=len(bad),
                wall_time_ms=elapsed,
                total_iterations=total,
                mismatches=tuple(bad),
            )
        )
    return rows


def format_report(rows: Sequence[BenchRow]) -> str:
    """Human table (lines starting with ``#``) followed by the CSV block."""
    width = (6, 8, 10, 8, 10, 9, 12)
    titles = ("r", "method", "m", "count", "q_r", "failures", "wall_ms")
    out = io.StringIO()
    out.write("# " + " ".join(t.rjust(w) for t, w in zip(titles, width)).rstrip() + "\n")
    for row in rows:
        cells = [str(c) for c in row.as_csv_row()]
        out.write("# " + " ".join(c.rjust(w) for c, w in zip(cells, width)).rstrip() + "\n")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(REPORT_HEADER)
    for row in rows:
        w.writerow(row.as_csv_row())
    return out.getvalue()


def parse_report(text):
    """Machine-readable rows of a report as a list of dicts with int values where numeric."""
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    rows = []
    for rec in csv.DictReader(lines):
        rows.append({k: (v if k == "method" else int(v)) for k, v in rec.items()})
    return rows
