from app.services.reproduce_service import ReproduceService


def test_number_ratios_start_at_two(tmp_path):
    report = ReproduceService(max_n=30, cache_dir=str(tmp_path)).run(only=[3])
    (row,) = report.rows
    assert row.criterion == 3
    assert row.passed
    assert "tangent-abs:n0=2" in row.detail
    assert "bernoulli-abs:n0=2" in row.detail
    assert "euler-abs:n0=1" in row.detail


def test_determinism_uses_fresh_services(tmp_path):
    report = ReproduceService(max_n=10, cache_dir=str(tmp_path)).run(only=[1, 10])
    assert [row.criterion for row in report.rows] == [1, 10]
    assert all(row.passed for row in report.rows)
