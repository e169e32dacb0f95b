from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

from loguru import logger

from src.circuit_ir.gates import matrix_rows
from src.circuit_ir.models import (
    DIAGONAL_KINDS, MONOMIAL_KINDS, Barrier, Circuit, Controlled, Gate, IfGate, Instruction,
    Measure, Prob, Unitary,
)
from src.core.exceptions import PreconditionError
from src.purity.purity_test import factor_qubit, purity_test
from src.qcp.analysis import AnalysisState, ClbitValue, GroupKind, GroupState, QcpConfig
from src.qcp.sparse_state import ControlVerdict, SparseState


class SimplifyKind(str, Enum):
    """What the propagation pass does to an instruction."""
    KEEP = "keep"
    REMOVE = "remove"
    STRIP_CONTROLS = "strip_controls"
    REPLACE_WITH = "replace_with"


@dataclass(frozen=True)
class SimplifyAction:
    kind: SimplifyKind
    replacement: Optional[Instruction] = None

    def emitted(self, original: Instruction) -> Optional[Instruction]:
        """The instruction left in the simplified circuit, or None when removed."""
        if self.kind is SimplifyKind.KEEP:
            return original
        if self.kind is SimplifyKind.REMOVE:
            return None
        return self.replacement


KEEP = SimplifyAction(SimplifyKind.KEEP)
REMOVE = SimplifyAction(SimplifyKind.REMOVE)


def _replace(instruction: Instruction) -> SimplifyAction:
    return SimplifyAction(SimplifyKind.REPLACE_WITH, instruction)


@dataclass(frozen=True)
class PropagationResult:
    """Simplified circuit, per-instruction pre-states and bookkeeping."""
    circuit: Circuit
    trace: List[AnalysisState]
    origins: List[int]
    final_state: AnalysisState
    updates: int


class ConstantPropagator:
    """
    Forward propagation of the |0...0> input through a circuit within bounded group sizes.

    ``updates`` counts basis-state updates (sparse matrix-vector products and
    tensor products) across every call on this instance.
    """

    def __init__(self, config: Optional[QcpConfig] = None):
        self.config = config or QcpConfig()
        self.updates = 0

    # Unitary evolution

    def _evolve(self, s: AnalysisState, gate: Gate, controls: Tuple[Tuple[int, int], ...]) -> None:
        qubits = [q for q, _ in controls] + list(gate.targets)
        groups = s.groups_of(qubits)
        total = 1
        for group in groups:
            total *= group.state.size
        if total > self.config.n_max:
            logger.debug("group overflow ({} > {}), poisoning {}", total, self.config.n_max, qubits)
            s.poison(qubits)
            return
        merged = groups[0].state
        for group in groups[1:]:
            merged = merged.tensor(group.state)
        if len(groups) > 1:
            self.updates += total
        new_state, updates = merged.apply(matrix_rows(gate), gate.targets, controls, self.config.amplitude_tol)
        self.updates += updates
        if new_state.size > self.config.n_max:
            logger.debug("group overflow after {} ({} entries)", gate.kind.value, new_state.size)
            s.poison(qubits)
            return
        s.set_group(GroupState.known(new_state))

    def _apply_gate(self, s: AnalysisState, gate: Gate) -> None:
        groups = s.groups_of(gate.targets)
        if all(g.is_known for g in groups):
            self._evolve(s, gate, ())
        elif len(gate.targets) == 1 and groups[0].kind is GroupKind.BASIS_DIAGONAL and gate.kind in MONOMIAL_KINDS:
            return
        else:
            s.poison(gate.targets)

    def _isolate(self, s: AnalysisState, qubit: int, value: int) -> None:
        """Split a qubit holding a constant bit out of its Known group."""
        group = s.group(qubit)
        if len(group.qubits) == 1:
            return
        rest = GroupState.known(group.state.drop_qubit(qubit))
        s.split(qubit, GroupState.known(SparseState.basis((qubit,), str(value))), rest)

    def _apply_uncertain_gate(self, s: AnalysisState, gate: Gate) -> None:
        """Account for a gate that fires in some execution branches only."""
        if len(gate.targets) == 1 and gate.kind in MONOMIAL_KINDS:
            qubit = gate.targets[0]
            group = s.group(qubit)
            if group.kind is GroupKind.BASIS_DIAGONAL:
                return
            if group.is_known:
                value = group.state.constant_bit(qubit)
                if value is not None:
                    # a diagonal gate only adds a global phase to a constant bit
                    if gate.kind in DIAGONAL_KINDS:
                        return
                    self._isolate(s, qubit, value)
                    s.set_group(GroupState.basis_diagonal(qubit))
                    return
        s.poison(gate.targets)

    def _resolve_controls(self, s: AnalysisState, ctrl: Controlled):
        """
        Decide the controls that Known groups settle.

        Returns:
            None when some group never satisfies its controls, otherwise the
            (qubit, value) pairs still undecided and whether any were stripped
        """
        per_group = {}
        for q, v in ctrl.controls:
            group = s.group(q)
            if group.is_known:
                per_group.setdefault(id(group), (group, []))[1].append((q, v))
        decided = set()
        for group, requirements in per_group.values():
            verdict = group.state.control_verdict(requirements)
            if verdict is ControlVerdict.NEVER:
                return None
            if verdict is ControlVerdict.ALWAYS:
                decided.update(q for q, _ in requirements)
        remaining = tuple((q, v) for q, v in ctrl.controls if q not in decided)
        return remaining, bool(decided)

    @staticmethod
    def _rebuild(ctrl: Controlled, remaining: Tuple[Tuple[int, int], ...]) -> Unitary:
        if not remaining:
            return ctrl.base
        pos = tuple(q for q, v in remaining if v == 1)
        neg = tuple(q for q, v in remaining if v == 0)
        return Controlled(pos, neg, ctrl.base)

    def _apply_controlled(self, s: AnalysisState, ctrl: Controlled) -> SimplifyAction:
        resolution = self._resolve_controls(s, ctrl)
        if resolution is None:
            return REMOVE
        remaining, stripped = resolution
        if not remaining:
            self._apply_gate(s, ctrl.base)
            return SimplifyAction(SimplifyKind.STRIP_CONTROLS, ctrl.base)

        control_groups = [s.group(q) for q, _ in remaining]
        target_groups = s.groups_of(ctrl.base.targets)
        if all(g.is_known for g in control_groups) and all(g.is_known for g in target_groups):
            self._evolve(s, ctrl.base, remaining)
        elif all(g.kind is GroupKind.BASIS_DIAGONAL for g in control_groups):
            # basis-state controls act like a classical condition
            self._apply_uncertain_gate(s, ctrl.base)
        else:
            unsettled = [q for q, _ in remaining if s.group(q).kind is not GroupKind.BASIS_DIAGONAL]
            s.poison(unsettled + list(ctrl.base.targets))
        return _replace(self._rebuild(ctrl, remaining)) if stripped else KEEP

    def _apply_unitary(self, s: AnalysisState, unitary: Unitary) -> SimplifyAction:
        if isinstance(unitary, Gate):
            self._apply_gate(s, unitary)
            return KEEP
        return self._apply_controlled(s, unitary)

    def _apply_uncertain(self, s: AnalysisState, unitary: Unitary) -> Optional[Unitary]:
        """
        Account for a (controlled) gate applied in some branches only.

        Returns:
            The possibly simplified gate, or None when it can never fire
        """
        if isinstance(unitary, Gate):
            self._apply_uncertain_gate(s, unitary)
            return unitary
        resolution = self._resolve_controls(s, unitary)
        if resolution is None:
            return None
        remaining, stripped = resolution
        groups = [s.group(q) for q, _ in remaining]
        if all(g.kind is GroupKind.BASIS_DIAGONAL for g in groups):
            self._apply_uncertain_gate(s, unitary.base)
        else:
            unsettled = [q for q, _ in remaining if s.group(q).kind is not GroupKind.BASIS_DIAGONAL]
            s.poison(unsettled + list(unitary.base.targets))
        return self._rebuild(unitary, remaining) if stripped else unitary

    # Dynamic instructions

    def _apply_if(self, s: AnalysisState, ins: IfGate) -> SimplifyAction:
        value = s.clbit(ins.bit)
        if value is ClbitValue.UNKNOWN:
            base = self._apply_uncertain(s, ins.base)
            if base is None:
                return REMOVE
            return KEEP if base is ins.base else _replace(IfGate(ins.bit, ins.value, base))
        if value is not ClbitValue.const(ins.value):
            return REMOVE
        action = self._apply_unitary(s, ins.base)
        if action.kind is SimplifyKind.REMOVE:
            return REMOVE
        return _replace(action.emitted(ins.base))

    def _apply_prob(self, s: AnalysisState, ins: Prob) -> SimplifyAction:
        if ins.p == 0.0:
            return REMOVE
        if ins.p == 1.0:
            action = self._apply_unitary(s, ins.base)
            return REMOVE if action.kind is SimplifyKind.REMOVE else _replace(action.emitted(ins.base))
        base = self._apply_uncertain(s, ins.base)
        if base is None:
            return REMOVE
        return KEEP if base is ins.base else _replace(Prob(ins.p, base))

    def measure(self, s: AnalysisState, ins: Measure) -> None:
        """
        Update the state for a measurement.

        A deterministic outcome fixes the bit and leaves the qubit in that basis
        state. Otherwise the bit is unknown and the qubit is branchwise a basis
        state; the rest of its group stays Known only when the qubit was separable.
        """
        qubit = ins.qubit
        group = s.group(qubit)
        s.set_clbit(ins.bit, ClbitValue.UNKNOWN)
        if group.kind is GroupKind.BASIS_DIAGONAL:
            return
        if group.kind is GroupKind.TOP:
            rest = [q for q in group.qubits if q != qubit]
            s.split(qubit, GroupState.basis_diagonal(qubit), GroupState.top(rest) if rest else None)
            return

        state = group.state
        position = state.position(qubit)
        if not purity_test(state, position):
            rest = [q for q in group.qubits if q != qubit]
            s.split(qubit, GroupState.basis_diagonal(qubit), GroupState.top(rest))
            return
        factor = factor_qubit(state, position)
        rest = GroupState.known(factor.remainder) if factor.remainder.qubits else None
        p_zero = factor.qubit_state.p_zero
        if p_zero >= 1.0 - self.config.prob_tol or p_zero <= self.config.prob_tol:
            outcome = 0 if p_zero >= 0.5 else 1
            s.split(qubit, GroupState.known(SparseState.basis((qubit,), str(outcome))), rest)
            s.set_clbit(ins.bit, ClbitValue.const(outcome))
        else:
            s.split(qubit, GroupState.basis_diagonal(qubit), rest)

    def step(self, s: AnalysisState, ins: Instruction) -> SimplifyAction:
        """
        Apply one non-measurement instruction to a working state in place.

        Args:
            s: Mutable working state
            ins: The instruction

        Returns:
            The simplification for the instruction
        """
        if isinstance(ins, Barrier):
            return KEEP
        if isinstance(ins, Measure):
            raise PreconditionError("measurements are handled by ConstantPropagator.measure")
        if isinstance(ins, IfGate):
            return self._apply_if(s, ins)
        if isinstance(ins, Prob):
            return self._apply_prob(s, ins)
        return self._apply_unitary(s, ins)

    def propagate(self, circuit: Circuit) -> PropagationResult:
        """
        Run the pass over a whole circuit.

        Args:
            circuit: A valid circuit

        Returns:
            The simplified circuit with the state before each kept instruction
        """
        s = AnalysisState.initial(circuit.n_qubits, circuit.n_clbits).copy()
        kept: List[Instruction] = []
        trace: List[AnalysisState] = []
        origins: List[int] = []
        for index, ins in enumerate(circuit.instructions):
            before = s.snapshot()
            if isinstance(ins, Measure):
                self.measure(s, ins)
                emitted: Optional[Instruction] = ins
            else:
                action = self.step(s, ins)
                emitted = action.emitted(ins)
                if action.kind is not SimplifyKind.KEEP:
                    logger.debug("instruction {}: {}", index, action.kind.value)
            if emitted is None:
                continue
            kept.append(emitted)
            trace.append(before)
            origins.append(index)
        return PropagationResult(circuit.with_instructions(kept), trace, origins, s.snapshot(), self.updates)


def init_state(n_qubits: int, n_clbits: int = 0) -> AnalysisState:
    """
    The analysis state of the |0...0> input.

    Args:
        n_qubits: Number of qubits, at least one
        n_clbits: Number of classical bits

    Returns:
        Singleton Known groups and unknown classical bits
    """
    if n_qubits < 1:
        raise ValueError("a circuit needs at least one qubit")
    return AnalysisState.initial(n_qubits, n_clbits).snapshot()


def apply_instruction(s: AnalysisState, ins: Instruction,
                      config: Optional[QcpConfig] = None) -> Tuple[AnalysisState, SimplifyAction]:
    """Pure single-step form of the pass: returns the post-state and the action."""
    working = s.copy()
    propagator = ConstantPropagator(config)
    if isinstance(ins, Measure):
        propagator.measure(working, ins)
        return working.snapshot(), KEEP
    action = propagator.step(working, ins)
    return working.snapshot(), action


def run(circuit: Circuit, config: Optional[QcpConfig] = None) -> Tuple[Circuit, List[AnalysisState]]:
    result = ConstantPropagator(config).propagate(circuit)
    return result.circuit, result.trace
