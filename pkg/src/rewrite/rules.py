from typing import Dict, List

from src.circuit_ir.models import (
    Circuit, Controlled, Gate, GateKind, IfGate, Instruction, Measure, Prob, Unitary,
)
from src.core.exceptions import PreconditionError
from src.purity.purity_test import QubitAmplitudes
from src.rewrite.rotation import synthesize_rotation
from src.rewrite.uses import UseSet, eligible_uses, scoped_uses

# instruction index -> instructions replacing it (empty list deletes it)
EditPlan = Dict[int, List[Instruction]]


def add_control(unitary: Unitary, qubit: int, value: int) -> Controlled:
    """Condition a gate on ``qubit`` holding ``value``."""
    if isinstance(unitary, Gate):
        pos, neg, base = (), (), unitary
    else:
        pos, neg, base = unitary.pos_controls, unitary.neg_controls, unitary.base
    if value == 1:
        return Controlled(pos + (qubit,), neg, base)
    return Controlled(pos, neg + (qubit,), base)


def control_count(unitary: Unitary) -> int:
    if isinstance(unitary, Gate):
        return 0
    return len(unitary.pos_controls) + len(unitary.neg_controls)


def apply_plan(circuit: Circuit, plan: EditPlan) -> Circuit:
    """Rebuild a circuit with every planned index replaced."""
    instructions: List[Instruction] = []
    for index, ins in enumerate(circuit.instructions):
        if index in plan:
            instructions.extend(plan[index])
        else:
            instructions.append(ins)
    return circuit.with_instructions(instructions)


def _measure_at(circuit: Circuit, meas_index: int) -> Measure:
    ins = circuit[meas_index]
    if not isinstance(ins, Measure):
        raise PreconditionError(f"instruction {meas_index} is not a measurement")
    return ins


def _check_uses(circuit: Circuit, measure: Measure, meas_index: int, uses: UseSet) -> None:
    if list(uses.indices) != scoped_uses(circuit, meas_index):
        raise PreconditionError("uses do not match the classical reads of the measured bit")
    for j in uses.indices:
        if measure.qubit in circuit[j].base.qubits:
            raise PreconditionError(f"use at {j} acts on the measured qubit")


def _check_probabilistic(state: QubitAmplitudes, prob_tol: float) -> float:
    p = state.p_zero
    if p <= prob_tol or p >= 1.0 - prob_tol:
        raise PreconditionError(f"outcome is deterministic (p = {p!r}); use the deterministic rewrite")
    return p


def _quantum_controls(circuit: Circuit, measure: Measure, uses: UseSet) -> EditPlan:
    return {
        j: [add_control(circuit[j].base, measure.qubit, circuit[j].value)]
        for j in uses.indices
    }


def plan_theorem1(circuit: Circuit, meas_index: int, uses: UseSet, state: QubitAmplitudes,
                  prob_tol: float = 1e-9) -> EditPlan:
    measure = _measure_at(circuit, meas_index)
    _check_uses(circuit, measure, meas_index, uses)
    p = _check_probabilistic(state, prob_tol)
    rotation = synthesize_rotation(state)
    plan = _quantum_controls(circuit, measure, uses)
    plan[meas_index] = [rotation.gate(measure.qubit), Prob(p, Gate(GateKind.X, (measure.qubit,)))]
    return plan


def plan_theorem2(circuit: Circuit, meas_index: int, state: QubitAmplitudes,
                  prob_tol: float = 1e-9) -> EditPlan:
    measure = _measure_at(circuit, meas_index)
    uses = eligible_uses(circuit, meas_index)
    if not isinstance(uses, UseSet) or len(uses):
        raise PreconditionError("measurement result is read; the controlled rewrite applies")
    p = _check_probabilistic(state, prob_tol)
    rotation = synthesize_rotation(state)
    return {meas_index: [rotation.gate(measure.qubit), Prob(p, Gate(GateKind.X, (measure.qubit,)))]}


def plan_deterministic(circuit: Circuit, meas_index: int, uses: UseSet, outcome: int) -> EditPlan:
    measure = _measure_at(circuit, meas_index)
    _check_uses(circuit, measure, meas_index, uses)
    if outcome not in (0, 1):
        raise PreconditionError("outcome must be 0 or 1")
    plan: EditPlan = {meas_index: []}
    for j in uses.indices:
        use: IfGate = circuit[j]
        plan[j] = [use.base] if use.value == outcome else []
    return plan


def plan_basis_diagonal(circuit: Circuit, meas_index: int, uses: UseSet) -> EditPlan:
    measure = _measure_at(circuit, meas_index)
    _check_uses(circuit, measure, meas_index, uses)
    plan = _quantum_controls(circuit, measure, uses)
    plan[meas_index] = []
    return plan


def apply_theorem1(circuit: Circuit, meas_index: int, uses: UseSet, state: QubitAmplitudes,
                   prob_tol: float = 1e-9) -> Circuit:
    """
    Replace a measurement of a known pure qubit whose result is read.

    The measurement becomes a rotation to |1> followed by ``prob p x`` with
    p = |alpha|^2; every use ``if c == v : G`` becomes G controlled on the
    qubit (positive for v = 1, negative for v = 0).

    Args:
        circuit: The circuit
        meas_index: Index of the measurement
        uses: Uses from ``eligible_uses``
        state: The measured qubit's state
        prob_tol: Distance from 0 or 1 below which the outcome counts as deterministic

    Returns:
        The rewritten circuit
    """
    return apply_plan(circuit, plan_theorem1(circuit, meas_index, uses, state, prob_tol))


def apply_theorem2(circuit: Circuit, meas_index: int, state: QubitAmplitudes,
                   prob_tol: float = 1e-9) -> Circuit:
    """Replace an unread measurement of a known pure qubit by a rotation and ``prob p x``."""
    return apply_plan(circuit, plan_theorem2(circuit, meas_index, state, prob_tol))


def apply_deterministic(circuit: Circuit, meas_index: int, uses: UseSet, outcome: int) -> Circuit:
    """Drop a measurement with a fixed outcome, inlining or deleting its uses."""
    return apply_plan(circuit, plan_deterministic(circuit, meas_index, uses, outcome))


def apply_basis_diagonal(circuit: Circuit, meas_index: int, uses: UseSet) -> Circuit:
    """Drop a measurement of a branchwise basis-state qubit; uses become quantum controls."""
    return apply_plan(circuit, plan_basis_diagonal(circuit, meas_index, uses))
