"""Acceptance runner behind ``verify.py reproduce``.

Each criterion returns one AcceptanceRow; the sub-reports it produced are
kept in ``artifacts`` so the CLI can write them next to the consolidated
report.
"""
import time
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from app.core.config import settings
from app.core.logging import get_logger
from app.schemas.bounds import BoundKind
from app.schemas.certificate import Claim
from app.schemas.interval import IntervalValue
from app.schemas.report import AcceptanceRow, Report, ReportFormat, ReportMetadata
from app.schemas.sequence import SequenceFamily, SequenceId
from app.services.asymptotics_service import AsymptoticsService, get_expansion
from app.services.bounds_service import BoundsService
from app.services.comparator_service import ComparatorService
from app.services.interval_service import interval_context, to_interval_value
from app.services.oracles import oracle_window
from app.services.report_service import (
    acceptance_report,
    bound_report,
    build_metadata,
    certificate_report,
    emit_report,
)
from app.services.sequence_service import get_sequence_service
from app.services.storage_service import LocalStorageService

logger = get_logger(__name__)

ORACLE_MAX_N = 60
S_FAMILY_VECTORS: Tuple[Tuple[int, ...], ...] = ((1,), (2,), (3,), (4,), (1, 1), (2, 2))
RATIO_VECTORS: Tuple[Tuple[int, ...], ...] = ((2,), (3,), (1, 1), (2, 2))
PATH_FAMILIES = (SequenceFamily.MOTZKIN, SequenceFamily.SCHROEDER, SequenceFamily.TRINOMIAL)
NUMBER_FAMILIES = (
    SequenceFamily.BERNOULLI_ABS_2N,
    SequenceFamily.TANGENT_ABS_ODD,
    SequenceFamily.EULER_ABS_EVEN,
)
# a_(n+1)^(1/(n+1)) / a_n^(1/n) rises at n = 1 for both Bernoulli and tangent numbers
RATIO_STARTS = {
    SequenceFamily.BERNOULLI_ABS_2N: 2,
    SequenceFamily.TANGENT_ABS_ODD: 2,
    SequenceFamily.EULER_ABS_EVEN: 1,
}
MAX_OBSERVED_START = 10
LAMBDA_AGREEMENT = Fraction(1, 10 ** 10)
MOTZKIN_ERROR_LIMIT = Fraction(1, 10 ** 8)
SCALING_POINTS = (100, 200)


def _agrees(value: IntervalValue, target: IntervalValue, tolerance: Fraction) -> bool:
    """Both enclosures are narrower than ``tolerance`` and lie within ``tolerance`` of each other."""
    return (
        value.width <= tolerance
        and value.lo - tolerance <= target.hi
        and target.lo <= value.hi + tolerance
    )


class ReproduceService:
    """Runs every acceptance criterion; ``max_n`` caps the index grids."""

    def __init__(
        self,
        max_n: Optional[int] = None,
        cache_dir: Optional[str] = None,
        metadata: Optional[ReportMetadata] = None,
        schedule: Optional[Sequence[int]] = None,
    ):
        self.max_n = max_n
        self.metadata = metadata or build_metadata()
        self.sequences = get_sequence_service()
        self.storage = LocalStorageService(cache_dir)
        self.schedule = list(schedule or settings.precision_schedule)
        self.comparator = ComparatorService(self.schedule)
        self.asymptotics = AsymptoticsService(self.schedule)
        self.bounds = BoundsService(self.schedule)
        self.artifacts: Dict[str, Report] = {}

    def _cap(self, n_hi: int, n_lo: int = 1) -> int:
        if self.max_n is None:
            return n_hi
        return max(n_lo, min(n_hi, self.max_n))

    # ---- criteria ------------------------------------------------------

    def oracle_equivalence(self) -> AcceptanceRow:
        ids = [SequenceId(family=f) for f in (*NUMBER_FAMILIES, *PATH_FAMILIES)]
        ids += [SequenceId(family=SequenceFamily.S_FAMILY, r=r) for r in S_FAMILY_VECTORS]
        n_hi = self._cap(ORACLE_MAX_N)
        mismatches = []
        for id in ids:
            start = id.family.first_index
            count = n_hi - start + 1
            path = self.storage.window_path(id, start, start + count)
            if path.exists():
                window = self.storage.load_window(path, verify=True)
            else:
                self.storage.save_window(self.sequences.window(id, start, count), path)
                window = self.storage.load_window(path)
            expected = oracle_window(id, start, count)
            for offset, value in enumerate(expected):
                n = start + offset
                if n >= window.stop or window.term(n).as_fraction() != value.as_fraction():
                    mismatches.append(f"{id.label}@{n}")
                    break
        detail = f"{len(ids)} sequences, n <= {n_hi}"
        if mismatches:
            detail += "; mismatches: " + " ".join(mismatches)
        return AcceptanceRow(criterion=1, name="oracle-equivalence", passed=not mismatches, detail=detail)

    def _certify(self, key: str, id: SequenceId, claim: Claim, n_lo: int, n_hi: int):
        certificate = self.comparator.check(id, claim, n_lo, n_hi)
        self.artifacts[key] = certificate_report(certificate, self.metadata)
        return certificate

    def number_roots(self) -> AcceptanceRow:
        n_hi = self._cap(150)
        parts, passed = [], True
        for family in NUMBER_FAMILIES:
            id = SequenceId(family=family)
            cert = self._certify(f"root-{family.value}", id, Claim.ROOT_INCREASING, 1, n_hi)
            passed &= cert.all_hold
            parts.append(f"{family.value}:{'ok' if cert.all_hold else cert.first_failure}")
        return AcceptanceRow(criterion=2, name="number-roots-increasing", passed=passed, detail=f"n in [1, {n_hi}] " + " ".join(parts))

    def number_ratios(self) -> AcceptanceRow:
        """Checked from n = 1; each family must hold from its start in RATIO_STARTS onwards."""
        n_hi = self._cap(100, 2)
        parts, passed = [], True
        for family in NUMBER_FAMILIES:
            cert = self._certify(f"ratio-{family.value}", SequenceId(family=family), Claim.RATIO_DECREASING, 1, n_hi)
            start = cert.holds_from
            ok = start is not None and start <= RATIO_STARTS[family]
            passed &= ok
            parts.append(f"{family.value}:n0={start}")
        return AcceptanceRow(criterion=3, name="number-ratios-decreasing", passed=passed, detail=f"n <= {n_hi} " + " ".join(parts))

    def _observed_start(self, key: str, id: SequenceId, claim: Claim, n_hi: int) -> Tuple[bool, str]:
        cert = self._certify(key, id, claim, 1, n_hi)
        start = cert.holds_from
        ok = start is not None and start <= MAX_OBSERVED_START
        return ok, f"{id.label}:{claim.value}:n0={start}"

    def s_family_ratios(self) -> AcceptanceRow:
        n_hi = self._cap(300)
        parts, passed = [], True
        for r in RATIO_VECTORS:
            id = SequenceId(family=SequenceFamily.S_FAMILY, r=r)
            ok, text = self._observed_start(f"ratio-{id.label}", id, Claim.RATIO_DECREASING, n_hi)
            passed &= ok
            parts.append(text)
        return AcceptanceRow(criterion=4, name="s-family-ratios-decreasing", passed=passed, detail=f"through n={n_hi} " + " ".join(parts))

    def path_families(self) -> AcceptanceRow:
        n_hi = self._cap(300)
        parts, passed = [], True
        for family in PATH_FAMILIES:
            id = SequenceId(family=family)
            for claim in (Claim.ROOT_INCREASING, Claim.RATIO_DECREASING):
                ok, text = self._observed_start(f"{claim.value}-{family.value}", id, claim, n_hi)
                passed &= ok
                parts.append(text)
        return AcceptanceRow(criterion=5, name="path-families-monotone", passed=passed, detail=f"through n={n_hi} " + " ".join(parts))

    def _grid(self, which: str, n_lo: int, n_hi: int, kind: BoundKind = BoundKind.BERNOULLI) -> Tuple[bool, str]:
        results = self.bounds.check_grid(which, n_lo, n_hi, kind)
        key = which if which == "stirling" else f"{which}-{kind.value}"
        self.artifacts[key] = bound_report(key, results, self.metadata)
        failures = [r.index for r in results if not r.holds]
        return not failures, f"{key}[{n_lo},{n_hi}]:{'ok' if not failures else failures[0]}"

    def delta_grid(self) -> AcceptanceRow:
        ok1, text1 = self._grid("delta1", 3, self._cap(10_000, 3))
        ok2, text2 = self._grid("delta2", 4, self._cap(10_000, 4))
        return AcceptanceRow(criterion=6, name="difference-bound-grid", passed=ok1 and ok2, detail=f"{text1} {text2}")

    def brackets(self) -> AcceptanceRow:
        checks = [self._grid("stirling", 1, self._cap(1000))]
        for kind in BoundKind:
            checks.append(self._grid("eta", 1, self._cap(50), kind))
        checks.append(self._grid("euler-bracket", 1, self._cap(50), BoundKind.EULER))
        for kind in BoundKind:
            checks.append(self._grid("delta-consistency", 4, self._cap(60, 4), kind))
        passed = all(ok for ok, _ in checks)
        return AcceptanceRow(criterion=7, name="brackets-and-tails", passed=passed, detail=" ".join(t for _, t in checks))

    def solver(self) -> AcceptanceRow:
        ctx = interval_context(settings.PRECISION_BITS + settings.GUARD_BITS)
        bits = settings.PRECISION_BITS
        half = to_interval_value(ctx.mpf(1) / 2, bits)
        expected: Dict[Tuple[int, ...], Tuple[Optional[IntervalValue], IntervalValue]] = {
            (1,): (half, to_interval_value(ctx.mpf(2), bits)),
            (2,): (half, to_interval_value(ctx.mpf(4), bits)),
            (3,): (half, to_interval_value(ctx.mpf(8), bits)),
            (4,): (half, to_interval_value(ctx.mpf(16), bits)),
            (1, 1): (to_interval_value(ctx.sqrt(2) / 2, bits), to_interval_value(3 + 2 * ctx.sqrt(2), bits)),
            (2, 2): (None, to_interval_value(17 + 12 * ctx.sqrt(2), bits)),
        }
        parts, passed = [], True
        for r, (lam, mu) in expected.items():
            model = self.asymptotics.solve_lambda(r)
            ok = model.residual <= Fraction(settings.LAMBDA_TOLERANCE) and _agrees(model.mu, mu, LAMBDA_AGREEMENT)
            if lam is not None:
                ok = ok and _agrees(model.lam, lam, LAMBDA_AGREEMENT)
            passed &= ok
            parts.append(f"r={','.join(map(str, r))}:{'ok' if ok else 'FAIL'}")
        return AcceptanceRow(criterion=8, name="lambda-solver", passed=passed, detail=" ".join(parts))

    def expansions(self) -> AcceptanceRow:
        motzkin = self.asymptotics.relative_error(SequenceFamily.MOTZKIN, 100, 4)
        passed = motzkin.relative_error.hi < MOTZKIN_ERROR_LIMIT
        parts = [f"motzkin@100:{float(motzkin.relative_error.hi):.3e}"]
        for family in PATH_FAMILIES:
            terms = get_expansion(family).available_terms
            target = Fraction(1, 2 ** (terms + 1))
            for n in SCALING_POINTS:
                ratio = self.asymptotics.remainder_scaling(family, n, terms)
                ok = target / 2 <= ratio.lo and ratio.hi <= 2 * target
                passed &= ok
                parts.append(f"{family.value}@{n}:{float(ratio.midpoint):.4f}")
        return AcceptanceRow(criterion=9, name="expansion-accuracy", passed=passed, detail=" ".join(parts))

    def determinism(self, consolidated: Report) -> AcceptanceRow:
        """Fresh services must reproduce the same bytes for a certificate and a bound table.

        The consolidated report is also rebuilt from copies of its rows and
        must serialize to the same bytes.
        """

        def render() -> List[bytes]:
            comparator = ComparatorService(self.schedule, workers=1)
            bounds = BoundsService(self.schedule)
            cert = comparator.check(SequenceId(family=SequenceFamily.BERNOULLI_ABS_2N), Claim.RATIO_DECREASING, 2, 10)
            table = bounds.check_grid("delta2", 4, 8)
            reports = [certificate_report(cert, self.metadata), bound_report("delta2-bernoulli", table, self.metadata)]
            return [emit_report(report, fmt) for report in reports for fmt in ReportFormat]

        same = render() == render()
        rebuilt = acceptance_report(
            [AcceptanceRow.model_validate(row.model_dump()) for row in consolidated.rows],
            ReportMetadata.model_validate(consolidated.metadata.model_dump()),
        )
        same &= all(emit_report(consolidated, fmt) == emit_report(rebuilt, fmt) for fmt in ReportFormat)
        return AcceptanceRow(criterion=10, name="deterministic-output", passed=same, detail="json+csv byte comparison")

    # ---- runner --------------------------------------------------------

    def run(self, only: Optional[Sequence[int]] = None) -> Report:
        criteria: List[Tuple[int, Callable[[], AcceptanceRow]]] = [
            (1, self.oracle_equivalence),
            (2, self.number_roots),
            (3, self.number_ratios),
            (4, self.s_family_ratios),
            (5, self.path_families),
            (6, self.delta_grid),
            (7, self.brackets),
            (8, self.solver),
            (9, self.expansions),
        ]
        rows: List[AcceptanceRow] = []
        for number, criterion in criteria:
            if only and number not in only:
                continue
            started = time.perf_counter()
            row = criterion()
            logger.info(
                "criterion_completed",
                criterion=number,
                name=row.name,
                passed=row.passed,
                seconds=round(time.perf_counter() - started, 3),
            )
            rows.append(row)
        if not only or 10 in only:
            rows.append(self.determinism(acceptance_report(rows, self.metadata)))
        return acceptance_report(rows, self.metadata)
