from dataclasses import dataclass
from typing import List, Optional

from src.circuit_ir.models import (
    Barrier, Circuit, Controlled, Gate, IfGate, Instruction, Measure, Prob,
)


@dataclass(frozen=True)
class Violation:
    """A broken structural rule, located by instruction index (None for header rules)."""
    index: Optional[int]
    rule: str
    message: str

    def __str__(self) -> str:
        where = "header" if self.index is None else f"instruction {self.index}"
        return f"{where}: {self.rule} ({self.message})"


def _check_gate(gate: Gate, index: int, out: List[Violation]) -> None:
    if len(gate.targets) != gate.kind.n_targets:
        out.append(Violation(index, "gate arity", f"{gate.kind.value} takes {gate.kind.n_targets} target(s)"))
    if len(gate.params) != gate.kind.n_params:
        out.append(Violation(index, "gate parameters", f"{gate.kind.value} takes {gate.kind.n_params} angle(s)"))


def _check_unitary(unitary, circuit: Circuit, index: int, max_controls: Optional[int], out: List[Violation]) -> None:
    if isinstance(unitary, Gate):
        _check_gate(unitary, index, out)
    elif isinstance(unitary, Controlled):
        if not isinstance(unitary.base, Gate):
            out.append(Violation(index, "controlled base", "base of a controlled gate must be a plain gate"))
            return
        _check_gate(unitary.base, index, out)
        n_controls = len(unitary.pos_controls) + len(unitary.neg_controls)
        if n_controls == 0:
            out.append(Violation(index, "empty controls", "controlled gate without controls"))
        if max_controls is not None and n_controls > max_controls:
            out.append(Violation(index, "too many controls", f"{n_controls} > {max_controls}"))
    else:
        return
    qubits = unitary.qubits
    for q in qubits:
        if not 0 <= q < circuit.n_qubits:
            out.append(Violation(index, "qubit out of range", f"q{q} not declared"))
    if len(set(qubits)) != len(qubits):
        out.append(Violation(index, "duplicate qubit", "a qubit appears twice in one instruction"))


def _check_instruction(ins: Instruction, circuit: Circuit, index: int, written: set,
                       max_controls: Optional[int], out: List[Violation]) -> None:
    if isinstance(ins, Barrier):
        return
    if isinstance(ins, Measure):
        if not 0 <= ins.qubit < circuit.n_qubits:
            out.append(Violation(index, "qubit out of range", f"q{ins.qubit} not declared"))
        if not 0 <= ins.bit < circuit.n_clbits:
            out.append(Violation(index, "clbit out of range", f"c{ins.bit} not declared"))
        written.add(ins.bit)
        return
    if isinstance(ins, IfGate):
        if not 0 <= ins.bit < circuit.n_clbits:
            out.append(Violation(index, "clbit out of range", f"c{ins.bit} not declared"))
        elif ins.bit not in written:
            out.append(Violation(index, "bit read before write", f"c{ins.bit} is read before any measurement writes it"))
        if ins.value not in (0, 1):
            out.append(Violation(index, "condition value", "condition must compare against 0 or 1"))
        if not isinstance(ins.base, (Gate, Controlled)):
            out.append(Violation(index, "if wraps dynamic op", "classical control must wrap a gate"))
            return
        _check_unitary(ins.base, circuit, index, max_controls, out)
        return
    if isinstance(ins, Prob):
        if not 0.0 <= ins.p <= 1.0:
            out.append(Violation(index, "prob out of range", f"p = {ins.p!r} not in [0, 1]"))
        if not isinstance(ins.base, (Gate, Controlled)):
            out.append(Violation(index, "prob wraps dynamic op", "probabilistic gate must wrap a gate"))
            return
        _check_unitary(ins.base, circuit, index, max_controls, out)
        return
    if isinstance(ins, (Gate, Controlled)):
        _check_unitary(ins, circuit, index, max_controls, out)
        return
    out.append(Violation(index, "unknown instruction", type(ins).__name__))


def validate(circuit: Circuit, max_controls: Optional[int] = None) -> List[Violation]:
    """
    Check every structural rule of a circuit.

    Args:
        circuit: The circuit to check
        max_controls: Upper bound on controls per gate, or None to skip the check

    Returns:
        All violations found, empty when the circuit is valid
    """
    violations: List[Violation] = []
    if circuit.n_qubits < 1:
        violations.append(Violation(None, "empty register", "at least one qubit is required"))
    if circuit.n_clbits < 0:
        violations.append(Violation(None, "clbit count", "clbit count must be non-negative"))
    for bit in sorted(circuit.outputs):
        if not 0 <= bit < circuit.n_clbits:
            violations.append(Violation(None, "output out of range", f"c{bit} not declared"))

    written: set = set()
    for index, ins in enumerate(circuit.instructions):
        _check_instruction(ins, circuit, index, written, max_controls, violations)
    return violations
