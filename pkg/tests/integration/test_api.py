import os
import sys

import pytest
from fastapi.testclient import TestClient

# Add the src directory to the path so we can import our modules
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..', '..')))

from src.api.main import app
from src.circuit_ir import library


@pytest.fixture
def client():
    """Test client running the application startup hooks."""
    with TestClient(app) as test_client:
        yield test_client


def test_health(client):
    """Test the health endpoint."""
    response = client.get("/api/health")

    assert response.status_code == 200
    assert response.json()["status"] == "ok"


def test_validate_valid_circuit(client):
    """Test validation metrics for a well-formed circuit."""
    response = client.post("/api/circuits/validate", json={"source": library.FEEDFORWARD})

    assert response.status_code == 200
    data = response.json()
    assert data["valid"]
    assert data["stats"]["measurements"] == 1
    assert data["stats"]["if_gates"] == 1


def test_validate_reports_violations(client):
    """Test that structural violations are listed rather than raised."""
    response = client.post("/api/circuits/validate", json={"source": "qubits 2\nclbits 1\nif c0 == 1 : x q0\n"})

    data = response.json()
    assert response.status_code == 200
    assert not data["valid"]
    assert data["violations"][0]["rule"] == "bit read before write"
    assert data["violations"][0]["index"] == 0


def test_validate_syntax_error(client):
    """Test that unparsable text is a bad request."""
    response = client.post("/api/circuits/validate", json={"source": "qubits 2\nfoo q0\n"})

    assert response.status_code == 400
    assert "line 2" in response.json()["detail"]


def test_examples(client):
    """Test listing and fetching built-in circuits."""
    names = client.get("/api/circuits/examples").json()
    example = client.get("/api/circuits/examples/feedforward")
    missing = client.get("/api/circuits/examples/missing")

    assert "demo-probabilistic" in names
    assert example.json()["source"] == library.FEEDFORWARD
    assert missing.status_code == 404


def test_optimize_with_verification(client):
    """Test optimizing the probabilistic demo and certifying the result."""
    response = client.post("/api/optimize", json={"source": library.DEMO_PROBABILISTIC, "verify": True})

    assert response.status_code == 200
    data = response.json()
    assert "measure" not in data["circuit"]
    assert data["stats"]["measurements_after"] == 0
    assert data["stats"]["prob_gates_added"] == 1
    assert data["verification"]["passed"]


def test_optimize_switches(client):
    """Test that request flags reach the optimizer."""
    source = "qubits 1\nclbits 1\nh q0\nmeasure q0 -> c0\n"
    response = client.post("/api/optimize", json={"source": source, "enable_theorem2": False})

    assert response.json()["stats"]["measurements_after"] == 1
    assert response.json()["stats"]["decisions"][0]["reason"] == "theorem2 disabled"


def test_optimize_errors(client):
    """Test error status codes."""
    syntax = client.post("/api/optimize", json={"source": "qubits 1\nfoo q0\n"})
    invalid = client.post("/api/optimize", json={"source": "qubits 1\ncx q0 q0\n"})
    bad_limit = client.post("/api/optimize", json={"source": library.FEEDFORWARD, "n_max": 1})

    assert syntax.status_code == 400
    assert invalid.status_code == 422
    assert bad_limit.status_code == 422


def test_verify(client):
    """Test the equivalence endpoint."""
    same = client.post("/api/verify", json={"original": library.FEEDFORWARD, "optimized": library.FEEDFORWARD})
    different = client.post(
        "/api/verify", json={"original": library.FEEDFORWARD, "optimized": "qubits 2\nclbits 1\nh q0\n"}
    )

    assert same.json()["passed"]
    assert not different.json()["passed"]


def test_ensemble(client):
    """Test ensemble enumeration and the cap."""
    response = client.post("/api/ensemble", json={"source": library.PROBABILISTIC})
    capped = client.post("/api/ensemble", json={"source": library.PROBABILISTIC, "cap": 1})

    entries = response.json()["entries"]
    assert len(entries) == 4
    assert abs(sum(e["probability"] for e in entries) - 1) < 1e-12
    assert capped.status_code == 413


def test_ensemble_outcomes(client):
    """Test measurement records in ensemble entries."""
    unread = "qubits 1\nclbits 1\nh q0\nmeasure q0 -> c0\n"
    entries = client.post("/api/ensemble", json={"source": library.FEEDFORWARD}).json()["entries"]
    merged = client.post("/api/ensemble", json={"source": unread}).json()["entries"]

    assert [e["outcomes"] for e in entries] == [[{"c0": 0}], [{"c0": 1}]]
    assert len(merged) == 1
    assert merged[0]["outcomes"] == [{"c0": 0}, {"c0": 1}]


def test_shots(client):
    """Test shot compilation for consecutive seeds."""
    response = client.post("/api/shots", json={"source": library.PROBABILISTIC, "seed": 10, "count": 2})
    again = client.post("/api/shots", json={"source": library.PROBABILISTIC, "seed": 10, "count": 2})

    shots = response.json()["shots"]
    assert [s["seed"] for s in shots] == [10, 11]
    assert shots == again.json()["shots"]
