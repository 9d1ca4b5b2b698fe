#!/usr/bin/env python
"""Certified sequence verifier CLI.

Exit codes: 0 all claims hold, 1 a claim failed, 2 usage/parameter/cache
error, 3 undecidable at maximum precision or solver failure.
"""
import argparse
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from app.core.config import build_precision_schedule, settings
from app.core.exceptions import SeqCertError
from app.core.logging import get_logger, setup_logging
from app.schemas.bounds import BoundKind
from app.schemas.certificate import Claim
from app.schemas.cli import CliConfig
from app.schemas.report import Report, ReportFormat
from app.schemas.sequence import SequenceFamily
from app.services.asymptotics_service import AsymptoticsService
from app.services.bounds_service import BOUND_NAMES, BoundsService
from app.services.comparator_service import ComparatorService
from app.services.report_service import (
    asym_report,
    bound_report,
    build_metadata,
    certificate_report,
    emit_report,
)
from app.services.reproduce_service import ReproduceService
from app.services.sequence_service import get_sequence_service, make_sequence_id
from app.services.storage_service import LocalStorageService

logger = get_logger("cli")

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2

FAMILIES = [f.value for f in SequenceFamily]
CLAIMS = [c.value for c in Claim]
ELEMENTARY_POINTS = [Fraction(k, 20) for k in range(11)]


def _int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _config(args) -> CliConfig:
    return CliConfig(
        precision_bits=args.precision_bits,
        max_precision_bits=args.max_precision_bits,
        format=args.format,
        cache_dir=args.cache_dir,
        n_lo=getattr(args, "n_lo", None),
        n_hi=getattr(args, "n_hi", None),
        with_metadata=args.with_metadata,
    )


def _schedule(config: CliConfig) -> List[int]:
    return build_precision_schedule(config.precision_bits, config.max_precision_bits)


def _metadata(config: CliConfig):
    return build_metadata(config.precision_bits, config.max_precision_bits, with_timestamp=config.with_metadata)


def _write(report: Report, config: CliConfig, out: Optional[str]):
    payload = emit_report(report, config.format)
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_bytes(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()


def cmd_gen(args) -> int:
    config = _config(args)
    id = make_sequence_id(args.family, args.r)
    start = args.n_lo if args.n_lo is not None else id.family.first_index
    window = get_sequence_service().window(id, start, config.n_hi - start + 1)
    storage = LocalStorageService(config.cache_dir)
    path = storage.save_window(window, args.out)
    if args.show:
        for offset, value in enumerate(window.values):
            print(f"{window.start + offset} {value.render()}")
    print(f"{len(window.values)} values -> {path}")
    return EXIT_OK


def cmd_check(args) -> int:
    config = _config(args)
    id = make_sequence_id(args.family, args.r)
    comparator = ComparatorService(_schedule(config), workers=args.workers)
    certificate = comparator.check(id, Claim(args.claim), config.n_lo, config.n_hi)
    _write(certificate_report(certificate, _metadata(config)), config, args.out)
    return EXIT_OK if certificate.all_hold else EXIT_FAILED


def cmd_asym(args) -> int:
    config = _config(args)
    service = AsymptoticsService(_schedule(config))
    if args.r is not None:
        id = make_sequence_id(SequenceFamily.S_FAMILY.value, args.r)
        model = service.solve_lambda(id.r, args.tolerance)
        evaluations = [service.s_family_evaluation(model, n) for n in args.n]
        report = asym_report(evaluations, _metadata(config), model)
    else:
        family = SequenceFamily(args.family)
        evaluations = [service.relative_error(family, n, args.terms) for n in args.n]
        report = asym_report(evaluations, _metadata(config))
    _write(report, config, args.out)
    return EXIT_OK


def cmd_bounds(args) -> int:
    config = _config(args)
    service = BoundsService(_schedule(config))
    kind = BoundKind(args.kind)
    if args.which == "elementary":
        results = service.elementary_inequalities(ELEMENTARY_POINTS, range(config.n_lo, config.n_hi + 1))
        name = "elementary"
    else:
        results = service.check_grid(args.which, config.n_lo, config.n_hi, kind)
        name = args.which if args.which == "stirling" else f"{args.which}-{kind.value}"
    _write(bound_report(name, results, _metadata(config)), config, args.out)
    return EXIT_OK if all(r.holds for r in results) else EXIT_FAILED


def cmd_reproduce(args) -> int:
    config = _config(args)
    runner = ReproduceService(
        max_n=args.max_n,
        cache_dir=config.cache_dir,
        metadata=_metadata(config),
        schedule=_schedule(config),
    )
    report = runner.run(args.only)
    if args.out_dir:
        out_dir = Path(args.out_dir)
        suffix = config.format.value
        for key, artifact in sorted(runner.artifacts.items()):
            _write(artifact, config, str(out_dir / f"{key}.{suffix}"))
    _write(report, config, args.out)
    return EXIT_OK if report.summary["all_pass"] else EXIT_FAILED


def _range_flags(parser: argparse.ArgumentParser, default_lo: Optional[int], default_hi: Optional[int]):
    parser.add_argument("--from", dest="n_lo", type=int, default=default_lo, help="first index")
    parser.add_argument("--to", dest="n_hi", type=int, default=default_hi, required=default_hi is None, help="last index")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision-bits", type=int, default=settings.PRECISION_BITS)
    common.add_argument("--max-precision-bits", type=int, default=settings.MAX_PRECISION_BITS)
    common.add_argument("--format", choices=[f.value for f in ReportFormat], default=settings.REPORT_FORMAT)
    common.add_argument("--cache-dir", default=settings.CACHE_DIR, help="overrides CACHE_DIR")
    common.add_argument("--with-metadata", action="store_true", help="stamp reports with the current time")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--log-level", default=None)

    parser = argparse.ArgumentParser(
        description="Exact generation and certified monotonicity checks for combinatorial sequences",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=f"""
Families: {', '.join(FAMILIES)} (sfam takes --r, e.g. --r 2,2)
Claims:   {', '.join(CLAIMS)}
Bounds:   {', '.join(BOUND_NAMES)}, elementary

Examples:
  python verify.py gen --family motzkin --to 5 --show
  python verify.py check --family euler-abs --claim root-increasing --from 1 --to 60
  python verify.py asym --r 2,2 --n 100 200
  python verify.py asym --family motzkin --n 100 --terms 4
  python verify.py bounds --which delta2 --from 4 --to 10000
  python verify.py reproduce --max-n 50
        """,
    )
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("gen", parents=[common], help="write a cache file of exact terms")
    gen.add_argument("--family", choices=FAMILIES, required=True)
    gen.add_argument("--r", help="exponent vector for sfam")
    gen.add_argument("--show", action="store_true", help="also print index/value pairs")
    _range_flags(gen, None, None)
    gen.set_defaults(handler=cmd_gen)

    check = commands.add_parser("check", parents=[common], help="certify a monotonicity claim")
    check.add_argument("--family", choices=FAMILIES, required=True)
    check.add_argument("--r")
    check.add_argument("--claim", choices=CLAIMS, required=True)
    check.add_argument("--workers", type=int, default=settings.CHECK_WORKERS)
    _range_flags(check, 1, None)
    check.set_defaults(handler=cmd_check)

    asym = commands.add_parser("asym", parents=[common], help="asymptotic constants and expansions")
    target = asym.add_mutually_exclusive_group(required=True)
    target.add_argument("--r", help="exponent vector of an S family sequence")
    target.add_argument("--family", choices=[f.value for f in (SequenceFamily.MOTZKIN, SequenceFamily.SCHROEDER, SequenceFamily.TRINOMIAL)])
    asym.add_argument("--n", type=int, nargs="+", required=True)
    asym.add_argument("--terms", type=int, default=1, help="correction terms of an explicit expansion")
    asym.add_argument("--tolerance", type=float, default=None, help="lambda residual target")
    asym.set_defaults(handler=cmd_asym)

    bounds = commands.add_parser("bounds", parents=[common], help="re-verify an explicit inequality over a range")
    bounds.add_argument("--which", choices=[*BOUND_NAMES, "elementary"], required=True)
    bounds.add_argument("--kind", choices=[k.value for k in BoundKind], default=BoundKind.BERNOULLI.value)
    _range_flags(bounds, 1, None)
    bounds.set_defaults(handler=cmd_bounds)

    reproduce = commands.add_parser("reproduce", parents=[common], help="run every acceptance criterion")
    reproduce.add_argument("--max-n", type=int, default=None, help="cap every index grid")
    reproduce.add_argument("--only", type=_int_list, default=None, help="criterion numbers, e.g. 1,6,8")
    reproduce.add_argument("--out-dir", help="also write each sub-report here")
    reproduce.set_defaults(handler=cmd_reproduce)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level)
    try:
        return args.handler(args)
    except ValidationError as e:
        print(f"error: {e.errors()[0]['msg']}", file=sys.stderr)
        return EXIT_USAGE
    except SeqCertError as e:
        logger.error("command_failed", command=args.command, error=e.message, **e.details)
        print(f"error: {e.message}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
