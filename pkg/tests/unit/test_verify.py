import math
import os
import sys

import numpy as np
import pytest

# Add the src directory to the path so we can import our modules
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..', '..')))

from src.circuit_ir import library
from src.circuit_ir.models import Circuit, Controlled, Gate, GateKind, IfGate, Measure
from src.circuit_ir.parser import parse
from src.core.exceptions import EnsembleShapeError, PreconditionError, ResourceLimitError
from src.verify.equivalence import check_optimization, compare_ensembles, ensembles_equal
from src.verify.simulator import simulate_dynamic, simulate_static
from factories import random_unitary

SQRT1_2 = 1 / math.sqrt(2)


def _measured_plus(n_qubits: int, output: bool = False) -> Circuit:
    header = f"qubits {n_qubits}\nclbits 1\n" + ("output c0\n" if output else "")
    return parse(header + "h q0\nmeasure q0 -> c0\n")


def test_simulate_bell_state():
    """Test the statevector of h followed by cx."""
    psi = simulate_static(parse("qubits 2\nh q0\ncx q0 q1\n"))

    assert np.allclose(psi, [SQRT1_2, 0, 0, SQRT1_2])


def test_simulate_from_basis_label():
    """Test a basis-state input, first qubit most significant."""
    psi = simulate_static(parse("qubits 2\nx q0\n"), initial="10")

    assert np.allclose(psi, [1, 0, 0, 0])
    with pytest.raises(ValueError):
        simulate_static(parse("qubits 2\nx q0\n"), initial="1")


def test_simulate_controlled_on_high_qubit():
    """Test a control above the target."""
    psi = simulate_static(parse("qubits 3\nx q2\ncx q2 q0\n"))

    assert abs(psi[0b101]) == pytest.approx(1)


def test_static_simulation_rejects_dynamic_circuit():
    """Test the static precondition."""
    with pytest.raises(PreconditionError):
        simulate_static(library.get("feedforward"))


def test_simulation_limits():
    """Test the size limits."""
    with pytest.raises(ResourceLimitError):
        simulate_static(Circuit(15, 0, ()))
    with pytest.raises(ResourceLimitError):
        simulate_dynamic(Circuit(3, 0, ()), max_qubits=2)
    with pytest.raises(ResourceLimitError):
        simulate_dynamic(_measured_plus(1), max_branches=1)


def test_dynamic_feedforward_branches():
    """Test branch order, probabilities and recorded bits."""
    ensemble = simulate_dynamic(library.get("feedforward"))
    zero, one = ensemble.branches

    assert zero.probability == pytest.approx(0.5)
    assert zero.bits == {0: 0}
    assert abs(zero.statevector[0b00]) == pytest.approx(1)
    assert one.bits == {0: 1}
    assert abs(one.statevector[0b11]) == pytest.approx(1)
    assert ensemble.total_probability == pytest.approx(1)


def test_density_matrix_of_measured_plus():
    """Test that measuring |+> gives the maximally mixed state."""
    rho = simulate_dynamic(_measured_plus(1)).density_matrix()

    assert np.allclose(rho, np.eye(2) / 2)


def test_measurement_equals_coin_flip_without_outputs():
    """Test that a discarded measurement of |+> matches a probabilistic x."""
    report = check_optimization(_measured_plus(1), parse("qubits 1\nclbits 1\nprob 0.5 x q0\n"))

    assert report.passed
    assert report.measurements_before == 1
    assert report.measurements_after == 0
    assert report.outputs == []


def test_output_bits_are_compared():
    """Test that removing a measurement whose bit is an output fails."""
    report = check_optimization(_measured_plus(1, output=True), parse("qubits 1\nclbits 1\nprob 0.5 x q0\n"))

    assert not report.passed
    assert report.distribution_distance == pytest.approx(0.5)
    assert report.outputs == [0]


def test_coherence_is_compared():
    """Test that dropping a measurement altogether fails."""
    a = simulate_dynamic(_measured_plus(1))
    b = simulate_dynamic(parse("qubits 1\nclbits 1\nh q0\n"))
    result = compare_ensembles(a, b, [])

    assert not result.equal
    assert result.state_distance == pytest.approx(0.5)
    assert not ensembles_equal(a, b, [])


def test_shape_mismatch():
    """Test comparisons across different qubit counts."""
    with pytest.raises(EnsembleShapeError):
        check_optimization(_measured_plus(1), _measured_plus(2))
    with pytest.raises(EnsembleShapeError):
        compare_ensembles(simulate_dynamic(_measured_plus(1)), simulate_dynamic(_measured_plus(2)), [])


def test_large_register_comparison():
    """Test the branch-overlap distance on registers above the dense limit."""
    coin = parse("qubits 11\nclbits 1\nprob 0.5 x q0\n")
    coherent = parse("qubits 11\nclbits 1\nh q0\n")

    assert check_optimization(_measured_plus(11), coin).passed
    failed = check_optimization(_measured_plus(11), coherent)
    assert not failed.passed
    assert failed.state_distance == pytest.approx(SQRT1_2)


def _dilated(circuit: Circuit) -> Circuit:
    """Replace the measurement by a copy onto an ancilla and classical controls by ancilla controls."""
    ancilla = circuit.n_qubits
    instructions = []
    for ins in circuit.instructions:
        if isinstance(ins, Measure):
            instructions.append(Controlled((ins.qubit,), (), Gate(GateKind.X, (ancilla,))))
        elif isinstance(ins, IfGate):
            base = ins.base
            pos, neg = (base.pos_controls, base.neg_controls) if isinstance(base, Controlled) else ((), ())
            gate = base.base if isinstance(base, Controlled) else base
            if ins.value:
                pos += (ancilla,)
            else:
                neg += (ancilla,)
            instructions.append(Controlled(pos, neg, gate))
        else:
            instructions.append(ins)
    return Circuit(circuit.n_qubits + 1, 0, tuple(instructions))


def test_measurement_matches_ancilla_dilation(rng):
    """Test branch simulation against the unitary with the measurement deferred to an ancilla."""
    for _ in range(40):
        n_qubits = int(rng.integers(1, 4))
        before = [random_unitary(rng, n_qubits) for _ in range(int(rng.integers(1, 6)))]
        measure = [Measure(int(rng.integers(n_qubits)), 0)]
        after = [
            IfGate(0, int(rng.integers(2)), random_unitary(rng, n_qubits)) if rng.random() < 0.5
            else random_unitary(rng, n_qubits)
            for _ in range(int(rng.integers(1, 6)))
        ]
        circuit = Circuit(n_qubits, 1, tuple(before + measure + after))

        rho = simulate_dynamic(circuit).density_matrix()
        psi = simulate_static(_dilated(circuit)).reshape(2 ** n_qubits, 2)
        assert np.max(np.abs(rho - psi @ psi.conj().T)) < 1e-9
