import json
import os
import sys
from io import StringIO

import pytest

# Add the src directory to the path so we can import our modules
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..', '..')))

from src.circuit_ir import library
from src.cli.main import (
    EXIT_CIRCUIT_ERROR, EXIT_OK, EXIT_RESOURCE_LIMIT, EXIT_VERIFICATION_FAILED, main,
)


@pytest.fixture
def circuit_file(tmp_path):
    """Write a built-in circuit to a temporary file."""
    def write(name: str, text: str = None):
        path = tmp_path / f"{name}.qc"
        path.write_text(text if text is not None else library.source(name))
        return str(path)
    return write


def run(argv):
    out = StringIO()
    code = main(argv, out=out)
    return code, out.getvalue()


def test_optimize_with_stats(circuit_file):
    """Test the optimized circuit followed by stats JSON on stdout."""
    code, text = run(["optimize", circuit_file("demo-probabilistic"), "--stats", "-"])
    circuit_text, stats_text = text.split("\n{", 1)
    stats = json.loads("{" + stats_text)

    assert code == EXIT_OK
    assert circuit_text.startswith("qubits 5")
    assert "measure" not in circuit_text
    assert stats["measurements_before"] == 2
    assert stats["measurements_after"] == 0
    assert stats["ifgates_converted"] == 2
    assert "wall_time_ms" not in stats
    assert [d["rule"] for d in stats["decisions"]] == ["theorem1", "basis_diagonal"]


def test_optimize_timing_and_output_file(circuit_file, tmp_path):
    """Test writing the circuit and stats to files with timing."""
    output = tmp_path / "out.qc"
    stats_path = tmp_path / "stats.json"
    code, text = run([
        "optimize", circuit_file("feedforward"), "-o", str(output),
        "--stats", str(stats_path), "--timing", "--verify",
    ])

    assert code == EXIT_OK
    assert text == ""
    assert output.read_text().startswith("qubits 2")
    assert json.loads(stats_path.read_text())["wall_time_ms"] >= 0


def test_optimize_is_deterministic(circuit_file):
    """Test that repeated runs print the same circuit and stats."""
    argv = ["optimize", circuit_file("demo-deterministic"), "--stats", "-"]

    assert run(argv) == run(argv)


def test_optimize_flags(circuit_file):
    """Test that rewrite switches reach the optimizer."""
    path = circuit_file("unread", "qubits 1\nclbits 1\nh q0\nmeasure q0 -> c0\n")

    _, kept = run(["optimize", path, "--no-theorem2"])
    _, removed = run(["optimize", path])
    assert "measure q0 -> c0" in kept
    assert "measure" not in removed


def test_parse_error_exit_code(circuit_file):
    """Test that malformed input exits with the circuit error code."""
    code, _ = run(["optimize", circuit_file("broken", "qubits 2\nfoo q0\n")])

    assert code == EXIT_CIRCUIT_ERROR


def test_missing_file_exit_code(tmp_path):
    """Test that an unreadable file exits with the circuit error code."""
    code, _ = run(["optimize", str(tmp_path / "missing.qc")])

    assert code == EXIT_CIRCUIT_ERROR


def test_invalid_option_exit_codes(circuit_file, tmp_path):
    """Test that out-of-range flags exit with the error code instead of raising."""
    path = circuit_file("feedforward")

    n_max, _ = run(["optimize", path, "--n-max", "1"])
    controls, _ = run(["verify", path, "--max-controls", "0"])
    seed, _ = run(["shots", path, "--seed", "-1", "--out-dir", str(tmp_path)])

    assert n_max == EXIT_CIRCUIT_ERROR
    assert controls == EXIT_CIRCUIT_ERROR
    assert seed == EXIT_CIRCUIT_ERROR


def test_ensemble_lines(circuit_file):
    """Test the four weighted circuits of the probabilistic example."""
    code, text = run(["ensemble", circuit_file("probabilistic")])

    assert code == EXIT_OK
    assert text.splitlines() == [
        "0.24\th q0",
        "0.36\th q0; x q1",
        "0.16\th q0; cx q0 q1",
        "0.24\th q0; cx q0 q1; x q1",
    ]


def test_ensemble_outcomes(circuit_file):
    """Test that measurement records are printed."""
    _, text = run(["ensemble", circuit_file("feedforward")])

    assert text.splitlines() == ["0.5\th q0\tc0=0", "0.5\th q0; x q1\tc0=1"]


def test_ensemble_merges_unread_outcomes(circuit_file):
    """Test one line for a measurement nothing reads, listing both records."""
    _, text = run(["ensemble", circuit_file("unread", "qubits 1\nclbits 1\nh q0\nmeasure q0 -> c0\n")])

    assert text.splitlines() == ["1\th q0\tc0=0 | c0=1"]


def test_ensemble_cap_exit_code(circuit_file):
    """Test that exceeding the ensemble cap exits with the resource code."""
    code, _ = run(["ensemble", circuit_file("probabilistic"), "--cap", "1"])

    assert code == EXIT_RESOURCE_LIMIT


def test_verify_single_file(circuit_file):
    """Test verifying a circuit against its own optimization."""
    code, text = run(["verify", circuit_file("demo-probabilistic")])

    assert code == EXIT_OK
    assert json.loads(text)["passed"]


def test_verify_two_files(circuit_file):
    """Test a failing comparison."""
    original = circuit_file("feedforward")
    coherent = circuit_file("coherent", "qubits 2\nclbits 1\nh q0\n")
    code, text = run(["verify", original, coherent])

    assert code == EXIT_VERIFICATION_FAILED
    assert not json.loads(text)["passed"]


def test_shots_are_reproducible(circuit_file, tmp_path):
    """Test shot files named by seed with identical content across runs."""
    path = circuit_file("probabilistic")
    first_dir, second_dir = tmp_path / "a", tmp_path / "b"

    code, text = run(["shots", path, "--shots", "3", "--seed", "5", "--out-dir", str(first_dir)])
    run(["shots", path, "--shots", "3", "--seed", "5", "--out-dir", str(second_dir)])

    assert code == EXIT_OK
    assert len(text.splitlines()) == 3
    names = sorted(p.name for p in first_dir.iterdir())
    assert names == ["probabilistic.shot5.qc", "probabilistic.shot6.qc", "probabilistic.shot7.qc"]
    for name in names:
        assert (first_dir / name).read_text() == (second_dir / name).read_text()
        assert "prob" not in (first_dir / name).read_text()


def test_examples_command():
    """Test listing and printing built-in circuits."""
    code, listing = run(["examples"])
    _, source = run(["examples", "feedforward"])
    missing, _ = run(["examples", "missing"])

    assert code == EXIT_OK
    assert "feedforward" in listing.split()
    assert source == library.FEEDFORWARD
    assert missing == EXIT_CIRCUIT_ERROR
