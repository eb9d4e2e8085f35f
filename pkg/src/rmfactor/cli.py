"""Command-line front end.

Exit codes: 0 success, 1 domain failure (abort, failed verification,
generation failure), 2 usage or parse error.
"""
import argparse
import sys
from pathlib import Path

from . import bench, gen
from .exceptions import DatasetFormatError, GenerationError, InvalidInputError
from .factor import Method, MethodConfig, Verdict, factorize

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _natural(text):
    if not text.isascii() or not text.isdigit():
        raise argparse.ArgumentTypeError(f"not a decimal natural number: {text!r}")
    return int(text)


def _positive(text):
    v = _natural(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text!r}")
    return v


def _natural_list(text):
    return [_positive(t) for t in text.split(",") if t]


def _method_list(text):
    try:
        return [Method(t.strip()) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser():
    p = argparse.ArgumentParser(prog="rmfactor", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a seeded semiprime dataset")
    g.add_argument("--digits", type=_positive, required=True)
    g.add_argument("--count", type=_positive, required=True)
    g.add_argument("--seed", type=_natural, default=0)
    g.add_argument("--out", type=Path, required=True)
    g.add_argument("--workers", type=_positive, default=1)

    f = sub.add_parser("factor", help="factor a single number")
    f.add_argument("n", type=_natural)
    f.add_argument("--method", type=Method, choices=list(Method), default=Method.RM,
                   metavar="{" + ",".join(m.value for m in Method) + "}")
    f.add_argument("--m", type=_positive, default=120, help="multiplier (default 120)")
    f.add_argument("--no-sieve", action="store_true", help="disable the RM duplicate sieve")
    f.add_argument("--depth", type=_positive, default=None, help="force the RM recursion depth")
    f.add_argument("--cap", type=_positive, default=None, help="maximum square tests")

    b = sub.add_parser("bench", help="benchmark methods over a dataset")
    b.add_argument("--dataset", type=Path, required=True)
    b.add_argument("--methods", type=_method_list, default=[Method.LEHMAN, Method.SM, Method.RM])
    b.add_argument("--rm-m", type=_natural_list, default=[120], help="RM multipliers, comma separated")
    b.add_argument("--sm-m", type=_natural_list, default=[480], help="SM multipliers, comma separated")
    b.add_argument("--no-sieve", action="store_true")
    b.add_argument("--workers", type=_positive, default=1)
    b.add_argument("--out", type=Path, default=None, help="report file (stdout only if omitted)")

    v = sub.add_parser("verify", help="check every record of a dataset")
    v.add_argument("dataset", type=Path)
    return p


def cmd_generate(args, out):
    if args.digits < gen.MIN_DIGITS:
        print(f"rmfactor generate: --digits must be >= {gen.MIN_DIGITS}", file=sys.stderr)
        return EXIT_USAGE
    spec = gen.GeneratorSpec(args.digits, args.count, args.seed)
    try:
        records = gen.generate_dataset(spec, workers=args.workers)
    except GenerationError as exc:
        print(f"rmfactor generate: {exc}", file=sys.stderr)
        return EXIT_FAIL
    gen.write_dataset(records, args.out)
    print(f"wrote {len(records)} records to {args.out}", file=out)
    return EXIT_OK


def cmd_factor(args, out):
    cfg_kwargs = dict(
        method=args.method,
        multiplier_m=args.m,
        sieve_enabled=not args.no_sieve,
        depth_override=args.depth,
    )
    if args.cap is not None:
        cfg_kwargs["safety_cap"] = args.cap
    try:
        cfg = MethodConfig(**cfg_kwargs)
        res = factorize(args.n, cfg)
    except InvalidInputError as exc:
        print(f"rmfactor factor: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"n: {res.n}", file=out)
    print(f"method: {cfg.method.value} (m={cfg.multiplier_m})", file=out)
    print(f"verdict: {res.verdict.value}", file=out)
    if res.verdict is Verdict.FACTORED:
        lo, hi = sorted((res.factor, res.cofactor))
        print(f"factors: {lo} × {hi}", file=out)
    print(f"iterations: {res.iterations}", file=out)
    print(f"phase: {res.phase.value}", file=out)
    return EXIT_FAIL if res.verdict is Verdict.ABORTED else EXIT_OK


def _bench_configs(args):
    cfgs = []
    for method in args.methods:
        if method is Method.RM:
            ms = args.rm_m
        elif method is Method.SM:
            ms = args.sm_m
        else:
            ms = [1]
        for m in ms:
            cfgs.append(MethodConfig(method=method, multiplier_m=m, sieve_enabled=not args.no_sieve))
    return cfgs


def _load(path, prog):
    try:
        return gen.read_dataset(path)
    except (DatasetFormatError, UnicodeDecodeError) as exc:
        print(f"rmfactor {prog}: {path}: {exc}", file=sys.stderr)
    except OSError as exc:
        print(f"rmfactor {prog}: {exc}", file=sys.stderr)
    return None


def cmd_bench(args, out):
    records = _load(args.dataset, "bench")
    if records is None:
        return EXIT_USAGE
    try:
        rows = bench.run_benchmark(records, _bench_configs(args), workers=args.workers)
    except InvalidInputError as exc:
        print(f"rmfactor bench: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = bench.format_report(rows)
    out.write(report)
    if args.out is not None:
        args.out.write_text(report, encoding="ascii")
    failed = False
    for row in rows:
        for mm in row.mismatches[:10]:
            print(f"mismatch [{row.method.value} m={row.multiplier_m}] record {mm.index}: "
                  f"n={mm.n}: {mm.reason}", file=sys.stderr)
        failed |= row.failures > 0
    return EXIT_FAIL if failed else EXIT_OK


def cmd_verify(args, out):
    records = _load(args.dataset, "verify")
    if records is None:
        return EXIT_USAGE
    for i, rec in enumerate(records):
        problem = gen.validate_record(rec)
        if problem is not None:
            # +2: header line, 1-based numbering
            print(f"record {i} (line {i + 2}, n={rec.n}): {problem}", file=out)
            return EXIT_FAIL
    print(f"{len(records)} records ok", file=out)
    return EXIT_OK


_COMMANDS = {
    "generate": cmd_generate,
    "factor": cmd_factor,
    "bench": cmd_bench,
    "verify": cmd_verify,
}


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    return _COMMANDS[args.command](args, out)


if __name__ == "__main__":
    sys.exit(main())
