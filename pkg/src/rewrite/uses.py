from dataclasses import dataclass
from typing import List, Tuple, Union

from src.circuit_ir.models import Barrier, Circuit, IfGate, Measure
from src.core.exceptions import PreconditionError


@dataclass(frozen=True)
class UseSet:
    """Indices of the classically-controlled gates reading a measured bit."""
    indices: Tuple[int, ...]

    def __len__(self) -> int:
        return len(self.indices)


@dataclass(frozen=True)
class Ineligible:
    reason: str


def scoped_uses(circuit: Circuit, meas_index: int) -> List[int]:
    """IfGates reading the measured bit before the next measurement writes it again."""
    bit = circuit[meas_index].bit
    uses = []
    for j in range(meas_index + 1, len(circuit)):
        ins = circuit[j]
        if isinstance(ins, Measure) and ins.bit == bit:
            break
        if isinstance(ins, IfGate) and ins.bit == bit:
            uses.append(j)
    return uses


def eligible_uses(circuit: Circuit, meas_index: int) -> Union[UseSet, Ineligible]:
    """
    Find the uses of a measurement that a rewrite may turn into quantum controls.

    Args:
        circuit: The circuit
        meas_index: Index of a Measure instruction

    Returns:
        The uses, or the first condition that rules the measurement out
    """
    measure = circuit[meas_index]
    if not isinstance(measure, Measure):
        raise PreconditionError(f"instruction {meas_index} is not a measurement")
    if measure.bit in circuit.outputs:
        return Ineligible("output bit")

    uses = scoped_uses(circuit, meas_index)
    for j in uses:
        if measure.qubit in circuit[j].base.qubits:
            return Ineligible("use acts on measured qubit")
    if uses:
        use_set = set(uses)
        for j in range(meas_index + 1, uses[-1]):
            ins = circuit[j]
            if isinstance(ins, Barrier) or j in use_set:
                continue
            if measure.qubit in ins.qubits:
                return Ineligible("qubit disturbed")
    return UseSet(tuple(uses))
