import csv
import io
import json

import pytest
from pydantic import ValidationError

from app.schemas.certificate import Direction
from app.schemas.report import BoundRow, CertificateRow, Report, ReportFormat, ReportKind
from app.services.report_service import (
    acceptance_report,
    bound_report,
    build_metadata,
    certificate_report,
    emit_report,
)


@pytest.fixture
def metadata():
    return build_metadata()


@pytest.fixture
def certificate(comparator, seq):
    return comparator.check_ratio_monotone(seq("bernoulli-abs"), Direction.DECREASING, 2, 10)


def test_certificate_report_json(certificate, metadata):
    report = certificate_report(certificate, metadata)
    document = json.loads(emit_report(report, ReportFormat.JSON))
    assert document["kind"] == "certificate"
    assert len(document["rows"]) == 9
    assert document["summary"]["all_hold"] is True
    assert document["summary"]["holds_from"] == 2
    assert document["summary"]["sequence"] == "bernoulli-abs"
    assert document["rows"][0]["claim"] == "ratio-decreasing"
    assert "timestamp" in document["metadata"] and document["metadata"]["timestamp"] is None


def test_emission_is_deterministic(comparator, seq, metadata):
    def build():
        cert = comparator.check_ratio_monotone(seq("bernoulli-abs"), Direction.DECREASING, 2, 10)
        return certificate_report(cert, metadata)

    for format in ReportFormat:
        assert emit_report(build(), format) == emit_report(build(), format)


def test_json_keys_are_sorted(certificate, metadata):
    text = emit_report(certificate_report(certificate, metadata)).decode("utf-8")
    assert text.endswith("}\n")
    assert text.index('"kind"') < text.index('"metadata"') < text.index('"rows"') < text.index('"summary"')


def test_certificate_csv(certificate, metadata):
    data = emit_report(certificate_report(certificate, metadata), ReportFormat.CSV).decode("utf-8")
    lines = data.split("\r\n")
    assert lines[0] == "sequence,claim,index,holds,method,precision_bits"
    assert lines[-1] == ""
    rows = list(csv.DictReader(io.StringIO(data)))
    assert len(rows) == 9
    assert {row["holds"] for row in rows} == {"true"}


def test_csv_quotes_parameter_strings(comparator, seq, metadata):
    cert = comparator.check_ratio_monotone(seq("sfam", 2, 2), Direction.INCREASING, 10, 12)
    data = emit_report(certificate_report(cert, metadata), ReportFormat.CSV).decode("utf-8")
    assert '"sfam[r=2,2]"' in data


def test_empty_bound_table(metadata):
    report = bound_report("delta2", [], metadata)
    assert report.summary == {"bound": "delta2", "checked": 0, "all_hold": True, "first_failure": None}
    assert emit_report(report, ReportFormat.CSV).decode("utf-8").count("\r\n") == 1


def test_bound_report(bounds, metadata):
    report = bound_report("delta2", bounds.check_grid("delta2", 4, 8), metadata)
    assert report.summary["checked"] == 5
    assert report.summary["all_hold"] is True
    assert all(row.hi.startswith("-") for row in report.rows)
    rows = list(csv.DictReader(io.StringIO(emit_report(report, ReportFormat.CSV).decode("utf-8"))))
    assert [row["index"] for row in rows] == ["4", "5", "6", "7", "8"]
    assert {row["point"] for row in rows} == {""}


def test_bound_report_first_failure(bounds, metadata):
    report = bound_report("delta1", bounds.check_grid("delta1", 1, 4), metadata)
    assert report.summary["all_hold"] is False
    assert report.summary["first_failure"] == 1


def test_acceptance_summary(metadata):
    from app.schemas.report import AcceptanceRow

    rows = [AcceptanceRow(criterion=1, name="a", passed=True), AcceptanceRow(criterion=2, name="b", passed=False)]
    assert acceptance_report(rows, metadata).summary == {"criteria": 2, "passed": 1, "all_pass": False}


def test_timestamp_only_on_request():
    assert build_metadata().timestamp is None
    stamped = build_metadata(with_timestamp=True)
    assert stamped.timestamp is not None and stamped.timestamp.endswith("+00:00")
    assert build_metadata(256, 1024).precision_bits == 256


def test_rows_must_match_kind(metadata):
    row = CertificateRow(sequence="motzkin", claim="root-increasing", index=1, holds=True, method="exact")
    Report(kind=ReportKind.CERTIFICATE, metadata=metadata, rows=[row])
    with pytest.raises(ValidationError):
        Report(kind=ReportKind.BOUND_TABLE, metadata=metadata, rows=[row])
    bound = BoundRow(name="x", claim="positive", lo="0", hi="1", holds=True, precision_bits=128)
    with pytest.raises(ValidationError):
        Report(kind=ReportKind.CERTIFICATE, metadata=metadata, rows=[bound])
