from __future__ import annotations

import math

import pytest
from fastapi.testclient import TestClient

from photon_adder.main import app


@pytest.fixture(scope="module")
def client() -> TestClient:
    return TestClient(app)


def test_health(client):
    res = client.get("/api/health")
    assert res.status_code == 200
    assert res.json()["status"] == "ok"


def test_root(client):
    assert client.get("/api").json()["name"] == "photon-adder"
    assert client.get("/").json()["api_health"] == "/api/health"


def test_coherent_probability(client):
    res = client.get("/api/probability/coherent", params={"beta": 1.0, "t2": 0.8, "n0": 1})
    assert res.status_code == 200
    assert res.json()["probability"] == pytest.approx(0.2 * math.exp(-0.2) * 1.8, rel=1e-12)


def test_squeezed_probability_legacy(client):
    params = {"kappa": 0.67, "n0": 1, "kappa_prime": 0.6, "legacy": "true"}
    res = client.get("/api/probability/squeezed", params=params)
    assert res.status_code == 200
    assert res.json()["probability"] == pytest.approx(0.237786, abs=2e-6)


def test_query_validation(client):
    assert client.get("/api/probability/squeezed", params={"kappa": 1.2}).status_code == 422
    assert client.get("/api/probability/coherent", params={"beta": 1.0, "t2": 2}).status_code == 422


def test_conditional_state(client):
    body = {"input": {"family": "fock", "n": 1}, "beam_splitter": {"t2": 0.5}, "n0": 1}
    res = client.post("/api/conditional", json=body)
    assert res.status_code == 200
    doc = res.json()
    assert doc["cutoff"] == 2
    assert doc["re"] == pytest.approx([0.0, 0.0, 1.0])
    # |1> with one ancilla photon: P(0 clicks) = |R|^2 |T|^2 C(2, 1)
    assert doc["probability"] == pytest.approx(0.5, rel=1e-12)


def test_conditional_rejects_mixtures_and_files(client):
    res = client.post("/api/conditional", json={"input": {"family": "thermal", "nbar": 0.5}})
    assert res.status_code == 422
    assert res.json()["type"] == "DomainError"
    res = client.post("/api/quadrature", json={"input": {"family": "custom", "file": "/etc/passwd"}, "xs": [0.0]})
    assert res.status_code == 422


def test_degenerate_state_is_422(client):
    body = {"input": {"family": "coherent", "beta_re": 1.0}, "beam_splitter": {"t2": 0.0}, "n0": 1}
    res = client.post("/api/conditional", json=body)
    assert res.status_code == 422
    assert res.json()["type"] == "DegenerateStateError"


def test_quadrature_of_mixture(client):
    xs = [-1.0, 0.0, 1.0]
    res = client.post("/api/quadrature", json={"input": {"family": "thermal", "nbar": 0.3}, "n0": 1, "xs": xs})
    assert res.status_code == 200
    doc = res.json()
    assert len(doc["density"]) == 3
    assert doc["density"][0] == pytest.approx(doc["density"][2], rel=1e-10)
    assert 0 < doc["probability"] < 1
