import math
import os
import sys

import pytest

# Add the src directory to the path so we can import our modules
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..', '..')))

from src.circuit_ir.parser import parse
from src.rewrite.optimizer import Decision, RewriteRule, optimize
from src.verify.equivalence import check_optimization

CORRECTIONS = ["x", "h", "rz(0.7)"]

# ry angles whose outcome-0 probability lies in [0.05, 0.95]
THETA_LOW = 2 * math.acos(math.sqrt(0.95))
THETA_HIGH = 2 * math.acos(math.sqrt(0.05))


def _prepared(rng, n_spectators: int) -> str:
    """Source lines putting q0 in a random pure state and entangling spectators with q1."""
    theta = rng.uniform(THETA_LOW, THETA_HIGH)
    phi = rng.uniform(0, 2 * math.pi)
    n_qubits = 2 + n_spectators
    lines = [f"qubits {n_qubits}", "clbits 1", f"ry({theta!r}) q0", f"rz({phi!r}) q0"]
    for q in range(2, n_qubits):
        lines += [f"h q{q}", f"cx q{q} q1"]
    return "\n".join(lines)


def test_feedforward_on_pure_qubit(rng, options):
    """Test that a classically-controlled correction becomes a quantum-controlled one."""
    for _ in range(20):
        correction = CORRECTIONS[rng.integers(len(CORRECTIONS))]
        source = _prepared(rng, int(rng.integers(1, 4)))
        source += f"\nmeasure q0 -> c0\nif c0 == 1 : {correction} q1\n"
        original = parse(source)
        optimized, report = optimize(original, options)

        assert report.records[0].rule is RewriteRule.THEOREM1
        assert 0.05 - 1e-9 <= report.records[0].p_zero <= 0.95 + 1e-9
        assert optimized.count_measurements() == 0
        assert optimized.count_prob_gates() == 1
        assert check_optimization(original, optimized).passed


def test_unread_measurement_on_pure_qubit(rng, options):
    """Test that a measurement nobody reads becomes a probabilistic flip."""
    for _ in range(20):
        source = _prepared(rng, int(rng.integers(1, 4)))
        source += "\nmeasure q0 -> c0\nh q0\ncx q0 q1\n"
        original = parse(source)
        optimized, report = optimize(original, options)

        assert report.records[0].rule is RewriteRule.THEOREM2
        assert optimized.count_measurements() == 0
        assert check_optimization(original, optimized).passed


def test_entangled_qubit_is_kept(rng, options):
    """Test that a measured qubit entangled with another keeps its measurement."""
    for _ in range(5):
        theta = rng.uniform(THETA_LOW, THETA_HIGH)
        original = parse(
            f"qubits 3\nclbits 1\nry({theta!r}) q0\ncx q0 q2\nmeasure q0 -> c0\nif c0 == 1 : x q1\n"
        )
        optimized, report = optimize(original, options)

        assert report.records[0].decision is Decision.SKIPPED
        assert report.records[0].reason == "purity failed"
        assert optimized == original
        assert check_optimization(original, optimized).passed


@pytest.mark.parametrize("value", [0, 1])
def test_condition_value(value, options):
    """Test both classical condition values."""
    original = parse(f"qubits 2\nclbits 1\nry(1.1) q0\nmeasure q0 -> c0\nif c0 == {value} : h q1\n")
    optimized, _ = optimize(original, options)

    assert optimized.count_if_gates() == 0
    assert check_optimization(original, optimized).passed
