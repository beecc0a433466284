import pytest
from fastapi.testclient import TestClient

from app.main import app

client = TestClient(app)


class TestRatesEndpoint:
    def test_single_rate(self) -> None:
        response = client.post("/rates", json={"protocol": "bb84", "m": 1, "q": 0.0, "p": 0.05})
        assert response.status_code == 200
        (row,) = response.json()
        assert row["rate"] == pytest.approx(0.427205, abs=1e-6)
        assert set(row) == {"p", "q", "Q", "rate", "i_xy", "i_xe"}

    def test_p_range(self) -> None:
        response = client.post("/rates", json={"protocol": "six-state", "m": 2, "q": 0.1, "p_range": [0.0, 0.1, 0.02]})
        assert response.status_code == 200
        assert [row["p"] for row in response.json()] == pytest.approx([0.0, 0.02, 0.04, 0.06, 0.08, 0.1])

    def test_missing_p_is_rejected(self) -> None:
        response = client.post("/rates", json={"protocol": "bb84", "m": 1})
        assert response.status_code == 422

    def test_p_range_beyond_one_half_is_rejected(self) -> None:
        response = client.post("/rates", json={"protocol": "bb84", "m": 1, "p_range": [0.4, 0.6, 0.1]})
        assert response.status_code == 422

    def test_domain_error_maps_to_400(self) -> None:
        response = client.post("/rates", json={"protocol": "six-state", "m1": 2, "m2": 2, "p": 0.1})
        assert response.status_code == 400


class TestThresholdsEndpoint:
    def test_hashing_threshold(self) -> None:
        response = client.post("/thresholds", json={"capacity": True, "m1": 1, "m2": 1})
        assert response.status_code == 200
        body = response.json()
        assert body["protocol"] == "capacity"
        assert body["p_max"] == pytest.approx(0.189290, abs=1e-5)

    def test_bb84_threshold(self) -> None:
        response = client.post("/thresholds", json={"protocol": "bb84", "m": 1, "q": 0.0})
        assert response.status_code == 200
        assert response.json()["p_max"] == pytest.approx(0.110028, abs=1e-5)

    def test_budget_maps_to_413(self, monkeypatch) -> None:
        monkeypatch.setattr("app.config.QKD_CLASS_BUDGET", 10)
        response = client.post("/thresholds", json={"capacity": True, "m1": 3, "m2": 10})
        assert response.status_code == 413


class TestCapacityEndpoint:
    def test_cat_code(self) -> None:
        response = client.post("/capacity", json={"m1": 5, "m2": 1, "p": 0.19})
        assert response.status_code == 200
        assert response.json()[0]["rate"] > 0.0

    def test_full_depolarizing_range(self) -> None:
        response = client.post("/capacity", json={"p_range": [0.5, 1.0, 0.25]})
        assert response.status_code == 200
        assert [row["p"] for row in response.json()] == pytest.approx([0.5, 0.75, 1.0])

    def test_probability_above_one_is_rejected(self) -> None:
        response = client.post("/capacity", json={"p": 1.2})
        assert response.status_code == 422


class TestSchurEndpoint:
    def test_qubit_pair(self) -> None:
        response = client.get("/schur", params={"n": 2, "q": 2})
        assert response.status_code == 200
        body = response.json()
        assert [vector["nu"] for vector in body["vectors"]] == [[2], [2], [2], [1, 1]]

    def test_budget_maps_to_413(self) -> None:
        response = client.get("/schur", params={"n": 5, "q": 8})
        assert response.status_code == 413
