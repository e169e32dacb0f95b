from typing import List

from src.circuit_ir.models import (
    Barrier, Circuit, Controlled, Gate, GateKind, IfGate, Instruction, Measure, Prob, Unitary,
)


def _num(value: float) -> str:
    # repr round-trips a float exactly
    return repr(float(value))


def _qubits(qubits) -> str:
    return " ".join(f"q{q}" for q in qubits)


def _gate_text(gate: Gate) -> str:
    name = gate.kind.value
    if gate.params:
        name += "(" + ",".join(_num(p) for p in gate.params) + ")"
    return f"{name} {_qubits(gate.targets)}"


def _sugar_text(ctrl: Controlled):
    if not ctrl.sugar or ctrl.neg_controls or ctrl.base.params:
        return None
    kind, n_pos = ctrl.base.kind, len(ctrl.pos_controls)
    if n_pos == 1 and kind is GateKind.X:
        name = "cx"
    elif n_pos == 1 and kind is GateKind.Z:
        name = "cz"
    elif n_pos == 2 and kind is GateKind.X:
        name = "ccx"
    else:
        return None
    return f"{name} {_qubits(ctrl.pos_controls + ctrl.base.targets)}"


def unitary_text(unitary: Unitary) -> str:
    """Render a plain or controlled gate as it appears after ``if``/``prob`` prefixes."""
    if isinstance(unitary, Gate):
        return _gate_text(unitary)
    sugar = _sugar_text(unitary)
    if sugar is not None:
        return sugar
    parts = []
    if unitary.pos_controls:
        parts.append("ctrl " + ",".join(f"q{q}" for q in unitary.pos_controls))
    if unitary.neg_controls:
        parts.append("nctrl " + ",".join(f"q{q}" for q in unitary.neg_controls))
    return " ".join(parts) + " : " + _gate_text(unitary.base)


def instruction_text(ins: Instruction) -> str:
    """Render one instruction as a source line."""
    if isinstance(ins, Barrier):
        return "barrier"
    if isinstance(ins, Measure):
        return f"measure q{ins.qubit} -> c{ins.bit}"
    if isinstance(ins, IfGate):
        return f"if c{ins.bit} == {ins.value} : {unitary_text(ins.base)}"
    if isinstance(ins, Prob):
        return f"prob {_num(ins.p)} {unitary_text(ins.base)}"
    return unitary_text(ins)


def serialize(circuit: Circuit) -> str:
    """
    Render a circuit in the line grammar.

    Args:
        circuit: A valid circuit

    Returns:
        Source text accepted by ``parse``
    """
    lines: List[str] = [f"qubits {circuit.n_qubits}", f"clbits {circuit.n_clbits}"]
    if circuit.outputs:
        lines.append("output " + " ".join(f"c{b}" for b in sorted(circuit.outputs)))
    lines.extend(instruction_text(ins) for ins in circuit.instructions)
    return "\n".join(lines)


def serialize_inline(circuit: Circuit) -> str:
    """Render only the instructions on one line, separated by '; '."""
    if not circuit.instructions:
        return "(empty)"
    return "; ".join(instruction_text(ins) for ins in circuit.instructions)
