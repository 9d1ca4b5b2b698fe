from app.services import bounds_service
from app.services.bounds_service import BoundsService


def test_health(client):
    for path in ("/health", "/api/v1/health"):
        response = client.get(path)
        assert response.status_code == 200
        body = response.json()
        assert body["status"] == "healthy"
        assert body["precision_schedule"][0] == 128
    assert client.get("/health/live").json()["status"] == "alive"


def test_sequence_window(client):
    response = client.get("/api/v1/sequences/motzkin/window", params={"start": 3, "count": 4})
    assert response.status_code == 200
    body = response.json()
    assert body["start"] == 3
    assert [v["numerator"] for v in body["values"]] == [4, 9, 21, 51]


def test_window_defaults_to_first_index(client):
    body = client.get("/api/v1/sequences/bernoulli-abs/window", params={"count": 2}).json()
    assert body["start"] == 1
    assert [(v["numerator"], v["denominator"]) for v in body["values"]] == [(1, 6), (1, 30)]


def test_s_family_window(client):
    body = client.get("/api/v1/sequences/sfam/window", params={"r": "2,2", "count": 4}).json()
    assert [v["numerator"] for v in body["values"]] == [1, 5, 73, 1445]


def test_unknown_family(client):
    response = client.get("/api/v1/sequences/catalan/window")
    assert response.status_code == 422
    assert response.json()["error"] == "ParameterError"


def test_check(client):
    payload = {"family": "bernoulli-abs", "claim": "ratio-decreasing", "n_lo": 2, "n_hi": 10}
    response = client.post("/api/v1/checks", json=payload)
    assert response.status_code == 200
    body = response.json()
    assert len(body["verdicts"]) == 9
    assert all(v["holds"] for v in body["verdicts"])


def test_check_rejects_out_of_domain_index(client):
    payload = {"family": "bernoulli-abs", "claim": "root-increasing", "n_lo": 0, "n_hi": 5}
    assert client.post("/api/v1/checks", json=payload).status_code == 422


def test_model(client):
    response = client.get("/api/v1/asymptotics/model", params={"r": "1,1"})
    assert response.status_code == 200
    body = response.json()
    for key, expected in (("lambda", 0.5 ** 0.5), ("mu", 3 + 2 * 2 ** 0.5)):
        lo, hi = float(body[key]["lo"]), float(body[key]["hi"])
        assert lo <= hi
        assert lo - 1e-9 < expected < hi + 1e-9
        assert hi - lo < 1e-9


def test_expansion(client):
    response = client.get("/api/v1/asymptotics/expansions/motzkin", params={"n": 100, "terms": 4})
    assert response.status_code == 200
    body = response.json()
    assert body["n"] == 100
    assert float(body["relative_error"]["hi"]) < 1e-8


def test_expansion_unknown_family(client):
    assert client.get("/api/v1/asymptotics/expansions/euler-abs", params={"n": 10}).status_code == 422


def test_bound(client):
    response = client.get("/api/v1/bounds/delta2", params={"n": 10, "kind": "tangent"})
    assert response.status_code == 200
    body = response.json()
    assert body["holds"] is True
    assert body["reconstructed"] is True
    assert body["claim"] == "negative"


def test_unknown_bound(client):
    assert client.get("/api/v1/bounds/zeta", params={"n": 3}).status_code == 422


def test_undecidable_is_conflict(client, monkeypatch):
    monkeypatch.setattr(bounds_service, "_bounds_service", BoundsService(schedule=[16]))
    response = client.get("/api/v1/bounds/eta", params={"n": 30})
    assert response.status_code == 409
    assert response.json()["error"] == "UndecidableError"
