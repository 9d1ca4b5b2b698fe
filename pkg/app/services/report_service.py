"""Report assembly and deterministic JSON/CSV serialization."""
import csv
import io
import json
from datetime import datetime, timezone
from decimal import ROUND_CEILING, ROUND_FLOOR
from typing import Any, Dict, Iterable, List, Optional

from app.core.config import settings
from app.schemas.asymptotics import AsymptoticModel, ExpansionEvaluation
from app.schemas.bounds import BoundCheckResult
from app.schemas.certificate import Certificate
from app.schemas.interval import IntervalValue, format_endpoint
from app.schemas.report import (
    ROW_TYPES,
    AcceptanceRow,
    AsymRow,
    BoundRow,
    CertificateRow,
    Report,
    ReportFormat,
    ReportKind,
    ReportMetadata,
)


def build_metadata(
    precision_bits: Optional[int] = None,
    max_precision_bits: Optional[int] = None,
    with_timestamp: bool = False,
) -> ReportMetadata:
    """Tool name, version and precision settings; a timestamp only on request."""
    return ReportMetadata(
        tool=settings.APP_NAME,
        version=settings.APP_VERSION,
        precision_bits=precision_bits or settings.PRECISION_BITS,
        max_precision_bits=max_precision_bits or settings.MAX_PRECISION_BITS,
        timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds") if with_timestamp else None,
    )


def _interval_summary(value: IntervalValue) -> Dict[str, str]:
    return {"lo": format_endpoint(value.lo, ROUND_FLOOR), "hi": format_endpoint(value.hi, ROUND_CEILING)}


def certificate_report(certificate: Certificate, metadata: ReportMetadata) -> Report:
    rows = [
        CertificateRow(
            sequence=certificate.id.label,
            claim=v.claim.value,
            index=v.index,
            holds=v.holds,
            method=v.method.value,
            precision_bits=v.precision_bits,
        )
        for v in certificate.verdicts
    ]
    summary = {
        "sequence": certificate.id.label,
        "claim": certificate.claim.value,
        "n_lo": certificate.n_lo,
        "n_hi": certificate.n_hi,
        "all_hold": certificate.all_hold,
        "first_failure": certificate.first_failure,
        "holds_from": certificate.holds_from,
        "exact_verdicts": certificate.exact_count,
    }
    return Report(kind=ReportKind.CERTIFICATE, metadata=metadata, summary=summary, rows=rows)


def bound_report(which: str, results: Iterable[BoundCheckResult], metadata: ReportMetadata) -> Report:
    rows = [
        BoundRow(
            name=r.name,
            claim=r.claim.value,
            index=r.index,
            point=r.point,
            lo=format_endpoint(r.value.lo, ROUND_FLOOR),
            hi=format_endpoint(r.value.hi, ROUND_CEILING),
            holds=r.holds,
            precision_bits=r.value.precision_bits,
            reconstructed=r.reconstructed,
        )
        for r in results
    ]
    failures = [row.index if row.index is not None else row.point for row in rows if not row.holds]
    summary = {
        "bound": which,
        "checked": len(rows),
        "all_hold": not failures,
        "first_failure": failures[0] if failures else None,
    }
    return Report(kind=ReportKind.BOUND_TABLE, metadata=metadata, summary=summary, rows=rows)


def asym_report(
    evaluations: Iterable[ExpansionEvaluation],
    metadata: ReportMetadata,
    model: Optional[AsymptoticModel] = None,
) -> Report:
    rows = [
        AsymRow(
            sequence=e.label,
            index=e.n,
            terms=e.terms,
            exact=e.exact,
            approx_lo=format_endpoint(e.approximation.lo, ROUND_FLOOR),
            approx_hi=format_endpoint(e.approximation.hi, ROUND_CEILING),
            rel_err_lo=format_endpoint(e.relative_error.lo, ROUND_FLOOR),
            rel_err_hi=format_endpoint(e.relative_error.hi, ROUND_CEILING),
        )
        for e in evaluations
    ]
    summary: Dict[str, Any] = {"evaluations": len(rows)}
    if model is not None:
        summary["model"] = {
            "r": ",".join(str(x) for x in model.r),
            "lambda": _interval_summary(model.lam),
            "mu": _interval_summary(model.mu),
            "nu": _interval_summary(model.nu),
            "residual": format_endpoint(model.residual, ROUND_CEILING),
            "precision_bits": model.precision_bits,
        }
    return Report(kind=ReportKind.ASYM_TABLE, metadata=metadata, summary=summary, rows=rows)


def acceptance_report(rows: List[AcceptanceRow], metadata: ReportMetadata) -> Report:
    summary = {
        "criteria": len(rows),
        "passed": sum(1 for row in rows if row.passed),
        "all_pass": all(row.passed for row in rows),
    }
    return Report(kind=ReportKind.ACCEPTANCE, metadata=metadata, summary=summary, rows=rows)


def _csv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def emit_report(report: Report, format: ReportFormat = ReportFormat.JSON) -> bytes:
    """Serialize a report; identical reports give identical bytes."""
    format = ReportFormat(format)
    if format == ReportFormat.JSON:
        document = report.model_dump(mode="json")
        return (json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode("utf-8")

    columns = list(ROW_TYPES[report.kind].model_fields)
    buffer = io.StringIO()
    writer = csv.writer(buffer, quoting=csv.QUOTE_MINIMAL, lineterminator="\r\n")
    writer.writerow(columns)
    for row in report.rows:
        data = row.model_dump()
        writer.writerow([_csv_cell(data[column]) for column in columns])
    return buffer.getvalue().encode("utf-8")
