import cmath
import math
import os
import sys

import numpy as np
import pytest

# Add the src directory to the path so we can import our modules
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..', '..')))

from src.circuit_ir import library
from src.circuit_ir.gates import u_matrix
from src.circuit_ir.models import Controlled, Gate, GateKind, IfGate, Measure, Prob
from src.circuit_ir.parser import parse
from src.core.exceptions import PreconditionError
from src.purity.purity_test import QubitAmplitudes
from src.qcp.analysis import QcpConfig
from src.rewrite.optimizer import Decision, OptimizeOptions, RewriteRule, optimize
from src.rewrite.rotation import synthesize_rotation
from src.rewrite.rules import (
    add_control, apply_basis_diagonal, apply_deterministic, apply_theorem1, apply_theorem2,
)
from src.rewrite.uses import Ineligible, UseSet, eligible_uses, scoped_uses
from src.verify.equivalence import check_optimization

SQRT1_2 = 1 / math.sqrt(2)
PLUS = QubitAmplitudes(SQRT1_2, SQRT1_2)


# Rotation synthesis

def test_rotation_sends_state_to_one(rng):
    """Test that the synthesized u gate maps random states to |1>."""
    for _ in range(50):
        theta, phase_a, phase_b = rng.uniform(0, math.pi), rng.uniform(-math.pi, math.pi), rng.uniform(-math.pi, math.pi)
        state = QubitAmplitudes(
            math.cos(theta / 2) * cmath.exp(1j * phase_a), math.sin(theta / 2) * cmath.exp(1j * phase_b)
        )
        spec = synthesize_rotation(state)
        image = u_matrix(spec.theta, spec.phi, spec.lam) @ np.array([state.alpha, state.beta])

        assert abs(image[0]) < 1e-9
        assert abs(abs(image[1]) - 1) < 1e-9


def test_rotation_of_zero_state():
    """Test that |0> needs a full flip and |1> none."""
    assert abs(synthesize_rotation(QubitAmplitudes(1, 0)).theta - math.pi) < 1e-12
    assert synthesize_rotation(QubitAmplitudes(0, 1)).theta == 0


def test_rotation_rejects_unnormalized_state():
    """Test the normalization precondition."""
    with pytest.raises(PreconditionError):
        synthesize_rotation(QubitAmplitudes(1, 1))


# Uses

USES_SOURCE = """\
qubits 3
clbits 2
h q0
measure q0 -> c0
if c0 == 1 : x q1
h q2
if c0 == 0 : z q2
measure q1 -> c0
if c0 == 1 : x q2
"""


def test_scoped_uses_stop_at_rewrite():
    """Test that uses end where the bit is measured again."""
    circuit = parse(USES_SOURCE)

    assert scoped_uses(circuit, 1) == [2, 4]
    assert scoped_uses(circuit, 5) == [6]
    assert eligible_uses(circuit, 1) == UseSet((2, 4))


def test_output_bit_is_ineligible():
    """Test that measurements into output bits are kept."""
    circuit = parse(USES_SOURCE.replace("clbits 2\n", "clbits 2\noutput c0\n"))

    assert eligible_uses(circuit, 1) == Ineligible("output bit")


def test_use_on_measured_qubit_is_ineligible():
    """Test that a use acting on the measured qubit blocks the rewrite."""
    circuit = parse("qubits 2\nclbits 1\nh q0\nmeasure q0 -> c0\nif c0 == 1 : cx q1 q0\n")

    assert eligible_uses(circuit, 1) == Ineligible("use acts on measured qubit")


def test_disturbed_qubit_is_ineligible():
    """Test that touching the measured qubit before a use blocks the rewrite."""
    circuit = parse("qubits 2\nclbits 1\nh q0\nmeasure q0 -> c0\nh q0\nif c0 == 1 : x q1\n")

    assert eligible_uses(circuit, 1) == Ineligible("qubit disturbed")


def test_eligible_uses_requires_measurement():
    """Test the precondition on the index."""
    with pytest.raises(PreconditionError):
        eligible_uses(parse(USES_SOURCE), 0)


# Rules

def test_add_control():
    """Test positive and negative controls on plain and controlled gates."""
    x1 = Gate(GateKind.X, (1,))

    assert add_control(x1, 0, 1) == Controlled((0,), (), x1)
    assert add_control(x1, 0, 0) == Controlled((), (0,), x1)
    assert add_control(Controlled((2,), (), x1), 0, 0) == Controlled((2,), (0,), x1)


def test_theorem1_rewrite():
    """Test the rotation, the probabilistic flip and the quantum control."""
    circuit = library.get("feedforward")
    rewritten = apply_theorem1(circuit, 1, UseSet((2,)), PLUS)

    assert rewritten[0] == Gate(GateKind.H, (0,))
    assert rewritten[1].kind is GateKind.U
    assert isinstance(rewritten[2], Prob)
    assert abs(rewritten[2].p - 0.5) < 1e-12
    assert rewritten[2].base == Gate(GateKind.X, (0,))
    assert rewritten[3] == Controlled((0,), (), Gate(GateKind.X, (1,)))
    assert rewritten.count_measurements() == 0

    # Check runtime equivalence
    assert check_optimization(circuit, rewritten).passed


def test_theorem1_negative_control():
    """Test that a use on value 0 becomes a negative control."""
    circuit = parse("qubits 2\nclbits 1\nh q0\nmeasure q0 -> c0\nif c0 == 0 : h q1\n")
    rewritten = apply_theorem1(circuit, 1, UseSet((2,)), PLUS)

    assert rewritten[3] == Controlled((), (0,), Gate(GateKind.H, (1,)))
    assert check_optimization(circuit, rewritten).passed


def test_theorem1_preconditions():
    """Test deterministic states and wrong uses are rejected."""
    circuit = library.get("feedforward")

    with pytest.raises(PreconditionError):
        apply_theorem1(circuit, 1, UseSet((2,)), QubitAmplitudes(1, 0))
    with pytest.raises(PreconditionError):
        apply_theorem1(circuit, 1, UseSet(()), PLUS)
    with pytest.raises(PreconditionError):
        apply_theorem1(circuit, 0, UseSet((2,)), PLUS)


def test_theorem2_rewrite():
    """Test an unread measurement."""
    circuit = parse("qubits 2\nclbits 1\nh q0\ncx q1 q0\nmeasure q0 -> c0\nh q1\n")
    rewritten = apply_theorem2(circuit, 2, PLUS)

    assert [type(i).__name__ for i in rewritten] == ["Gate", "Controlled", "Gate", "Prob", "Gate"]
    assert check_optimization(circuit, rewritten).passed


def test_theorem2_rejects_read_measurement():
    """Test that a read result needs the controlled rewrite."""
    with pytest.raises(PreconditionError):
        apply_theorem2(library.get("feedforward"), 1, PLUS)


def test_deterministic_rewrite():
    """Test inlining matching uses and dropping the others."""
    circuit = parse("qubits 2\nclbits 1\nx q0\nmeasure q0 -> c0\nif c0 == 1 : h q1\nif c0 == 0 : x q1\n")
    rewritten = apply_deterministic(circuit, 1, UseSet((2, 3)), 1)

    assert rewritten.instructions == (Gate(GateKind.X, (0,)), Gate(GateKind.H, (1,)))
    assert check_optimization(circuit, rewritten).passed
    with pytest.raises(PreconditionError):
        apply_deterministic(circuit, 1, UseSet((2, 3)), 2)


def test_basis_diagonal_rewrite():
    """Test dropping a measurement of a qubit that is already a basis state in every branch."""
    circuit = parse("qubits 2\nclbits 2\nh q0\nmeasure q0 -> c0\nmeasure q0 -> c1\nif c1 == 1 : x q1\n")
    rewritten = apply_basis_diagonal(circuit, 2, UseSet((3,)))

    assert rewritten.instructions == (
        Gate(GateKind.H, (0,)), Measure(0, 0), Controlled((0,), (), Gate(GateKind.X, (1,))),
    )
    assert check_optimization(circuit, rewritten).passed


# Optimizer

def test_optimize_feedforward(options):
    """Test the Theorem 1 path end to end."""
    circuit = library.get("feedforward")
    optimized, report = optimize(circuit, options)

    assert report.measurements_before == 1
    assert report.measurements_after == 0
    assert report.prob_gates_added == 1
    assert report.ifgates_converted == 1
    record = report.records[0]
    assert record.rule is RewriteRule.THEOREM1
    assert record.uses == [2]
    assert abs(record.p_zero - 0.5) < 1e-12
    assert optimized.count_if_gates() == 0


def test_optimize_skips_entangled_measurement(options):
    """Test that a Bell-pair half is kept."""
    circuit = parse("qubits 2\nclbits 1\nh q0\ncx q0 q1\nmeasure q0 -> c0\nif c0 == 1 : x q1\n")
    optimized, report = optimize(circuit, options)

    assert report.records[0].decision is Decision.SKIPPED
    assert report.records[0].reason == "purity failed"
    assert optimized == circuit


def test_optimize_skips_output_bit(options):
    """Test that output measurements are kept."""
    circuit = parse("qubits 1\nclbits 1\noutput c0\nh q0\nmeasure q0 -> c0\n")
    optimized, report = optimize(circuit, options)

    assert report.records[0].reason == "output bit"
    assert optimized.count_measurements() == 1


def test_optimize_theorem2_switch():
    """Test enabling and disabling the unread-measurement rewrite."""
    circuit = parse("qubits 1\nclbits 1\nh q0\nmeasure q0 -> c0\n")

    optimized, report = optimize(circuit, OptimizeOptions(enable_theorem2=False))
    assert report.records[0].reason == "theorem2 disabled"
    assert optimized.count_measurements() == 1

    optimized, report = optimize(circuit, OptimizeOptions())
    assert report.records[0].rule is RewriteRule.THEOREM2
    assert optimized.count_prob_gates() == 1
    assert report.ifgates_converted == 0


def test_optimize_basis_diagonal_switch():
    """Test the repeated-measurement rewrite and its switch."""
    circuit = parse("qubits 2\nclbits 2\nh q0\nmeasure q0 -> c0\nmeasure q0 -> c1\nif c1 == 1 : x q1\n")

    optimized, report = optimize(circuit, OptimizeOptions())
    assert [r.rule for r in report.records] == [RewriteRule.THEOREM2, RewriteRule.BASIS_DIAGONAL]
    assert optimized.count_measurements() == 0
    assert check_optimization(circuit, optimized).passed

    optimized, report = optimize(circuit, OptimizeOptions(enable_basis_diagonal=False))
    assert report.records[1].reason == "basis-diagonal rewrite disabled"
    assert optimized.count_measurements() == 1


def test_optimize_control_limit():
    """Test that uses already at the control limit are left alone."""
    circuit = parse("qubits 3\nclbits 1\nh q0\nh q1\nmeasure q0 -> c0\nif c0 == 1 : cx q1 q2\n")
    optimized, report = optimize(circuit, OptimizeOptions(qcp=QcpConfig(max_controls=1)))

    assert report.records[0].reason == "control limit"
    assert optimized.count_measurements() == 1


def test_optimize_top_group():
    """Test that a measurement on an overflowed group is kept."""
    circuit = parse("qubits 2\nclbits 1\nh q0\nh q1\ncx q0 q1\nmeasure q0 -> c0\n")
    _, report = optimize(circuit, OptimizeOptions(qcp=QcpConfig(n_max=2)))

    assert report.records[0].reason == "top"


def test_records_use_input_positions(options):
    """Test that record indices refer to the input circuit."""
    circuit = parse("qubits 2\nclbits 1\ncx q0 q1\nh q0\nmeasure q0 -> c0\nif c0 == 1 : x q1\n")
    optimized, report = optimize(circuit, options)

    assert report.records[0].index == 2
    assert report.records[0].uses == [3]
    assert optimized.gate_count == 4


def test_deterministic_measurement(options):
    """Test that a measurement with a fixed outcome disappears with its dead use."""
    circuit = parse("qubits 2\nclbits 1\nx q0\nmeasure q0 -> c0\nif c0 == 0 : x q1\nh q1\n")
    optimized, report = optimize(circuit, options)

    assert report.records[0].rule is RewriteRule.DETERMINISTIC
    assert optimized.instructions == (Gate(GateKind.X, (0,)), Gate(GateKind.H, (1,)))
