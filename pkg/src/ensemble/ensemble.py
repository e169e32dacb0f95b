from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

import numpy as np
from loguru import logger

from src.circuit_ir.models import (
    Barrier, Circuit, Controlled, Gate, GateKind, IfGate, Instruction, Measure, Prob, Unitary,
)
from src.core.config import get_settings
from src.core.exceptions import EnsembleShapeError, ResourceLimitError
from src.verify.simulator import BRANCH_TOL, apply_unitary, initial_tensor, measure_outcomes

Outcomes = Tuple[Tuple[int, int], ...]
NO_MEASUREMENTS: FrozenSet[Outcomes] = frozenset({()})


@dataclass(frozen=True)
class EnsembleEntry:
    """
    A static circuit and its probability.

    ``outcomes`` annotates the measurement records that lead to the circuit; it
    takes no part in merging.
    """
    probability: float
    circuit: Circuit
    outcomes: FrozenSet[Outcomes] = NO_MEASUREMENTS


def normalize(circuit: Circuit) -> Circuit:
    """Drop identity gates; the order of everything else is kept."""
    return circuit.with_instructions(
        ins for ins in circuit.instructions if not (isinstance(ins, Gate) and ins.kind is GateKind.ID)
    )


@dataclass(frozen=True)
class Ensemble:
    """
    Finite multiset of static circuits with probabilities.

    Entries with the same normalized circuit are merged; their outcome records
    are pooled.
    """
    n_qubits: int
    n_clbits: int
    entries: Tuple[EnsembleEntry, ...]

    @classmethod
    def build(cls, n_qubits: int, n_clbits: int, entries: Iterable[EnsembleEntry]) -> "Ensemble":
        probabilities: Dict[Circuit, float] = {}
        records: Dict[Circuit, FrozenSet[Outcomes]] = {}
        for entry in entries:
            if entry.probability <= BRANCH_TOL:
                continue
            circuit = normalize(entry.circuit)
            probabilities[circuit] = probabilities.get(circuit, 0.0) + entry.probability
            records[circuit] = records.get(circuit, frozenset()) | entry.outcomes
        return cls(
            n_qubits,
            n_clbits,
            tuple(EnsembleEntry(p, circuit, records[circuit]) for circuit, p in probabilities.items()),
        )

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def total_probability(self) -> float:
        return sum(e.probability for e in self.entries)

    def probability_of(self, circuit: Circuit) -> float:
        key = normalize(circuit)
        return sum(e.probability for e in self.entries if e.circuit == key)

    def equals(self, other: "Ensemble", tol: float = 1e-12) -> bool:
        """Multiset equality with probabilities compared within ``tol``."""
        if (self.n_qubits, self.n_clbits) != (other.n_qubits, other.n_clbits):
            return False
        mine = {e.circuit: e.probability for e in self.entries}
        theirs = {e.circuit: e.probability for e in other.entries}
        if set(mine) != set(theirs):
            return False
        return all(abs(mine[key] - theirs[key]) <= tol for key in mine)


@dataclass(frozen=True)
class Branch:
    """One path through the enumeration, before its residual circuit is merged."""
    probability: float
    residual: Tuple[Instruction, ...] = ()
    psi: Optional[np.ndarray] = field(default=None, compare=False)
    bits: Tuple[Tuple[int, int], ...] = ()

    def bit(self, index: int) -> Optional[int]:
        return dict(self.bits).get(index)

    def then(self, unitary: Unitary) -> "Branch":
        psi = apply_unitary(self.psi, unitary) if self.psi is not None else None
        return replace(self, residual=self.residual + (unitary,), psi=psi)


def expand(branch: Branch, ins: Instruction) -> List[Branch]:
    """
    The children of a branch after one instruction.

    Probabilistic gates fork on inclusion and measurements on their Born
    outcomes; every other instruction has one child. Child probabilities sum to
    the parent's.
    """
    if isinstance(ins, (Gate, Controlled)):
        return [branch.then(ins)]
    if isinstance(ins, Barrier):
        return [replace(branch, residual=branch.residual + (ins,))]
    if isinstance(ins, Prob):
        return [
            replace(branch, probability=branch.probability * (1.0 - ins.p)),
            replace(branch.then(ins.base), probability=branch.probability * ins.p),
        ]
    if isinstance(ins, IfGate):
        return [branch.then(ins.base)] if branch.bit(ins.bit) == ins.value else [branch]
    children = []
    for value, weight, projected in measure_outcomes(branch.psi, ins.qubit):
        children.append(replace(
            branch,
            probability=branch.probability * weight,
            psi=projected,
            bits=branch.bits + ((ins.bit, value),),
        ))
    return children


def _outcome_record(bits: Tuple[Tuple[int, int], ...]) -> Outcomes:
    # the last write to each bit, in bit order
    return tuple(sorted(dict(bits).items()))


def enumerate_ensemble(circuit: Circuit, cap: Optional[int] = None) -> Ensemble:
    """
    Exact ensemble of static circuits a circuit stands for, from the |0...0> input.

    Every probabilistic gate branches on inclusion. Every measurement branches on
    its Born outcomes, found by simulating the branch; classically-controlled
    gates are then inlined or dropped according to the branch's bits. The
    measurements themselves leave the residual circuit, so branches that differ
    only in discarded outcomes merge. Each entry keeps the outcome records that
    lead to it.

    Args:
        circuit: A valid circuit
        cap: Maximum number of branches, defaults to settings

    Returns:
        The merged ensemble
    """
    settings = get_settings()
    if cap is None:
        cap = settings.ensemble_cap
    if circuit.count_prob_gates() > settings.max_prob_gates:
        raise ResourceLimitError(f"more than {settings.max_prob_gates} probabilistic gates")
    track_state = circuit.count_measurements() > 0
    if track_state and circuit.n_qubits > settings.max_dynamic_qubits:
        raise ResourceLimitError(
            f"{circuit.n_qubits} qubits exceeds the dynamic simulation limit {settings.max_dynamic_qubits}"
        )

    branches = [Branch(1.0, psi=initial_tensor(circuit.n_qubits, None) if track_state else None)]
    for ins in circuit.instructions:
        branches = [child for b in branches for child in expand(b, ins) if child.probability > BRANCH_TOL]
        if len(branches) > cap:
            raise ResourceLimitError(f"ensemble exceeds {cap} entries")

    ensemble = Ensemble.build(
        circuit.n_qubits,
        circuit.n_clbits,
        (EnsembleEntry(
            b.probability,
            Circuit(circuit.n_qubits, circuit.n_clbits, b.residual, circuit.outputs),
            frozenset({_outcome_record(b.bits)}),
        ) for b in branches),
    )
    logger.debug("ensemble of {} entries from {} branches", len(ensemble), len(branches))
    return ensemble


def _shift_unitary(unitary: Unitary, dq: int) -> Unitary:
    if isinstance(unitary, Gate):
        return replace(unitary, targets=tuple(q + dq for q in unitary.targets))
    return Controlled(
        tuple(q + dq for q in unitary.pos_controls),
        tuple(q + dq for q in unitary.neg_controls),
        _shift_unitary(unitary.base, dq),
        sugar=unitary.sugar,
    )


def shift_instruction(ins: Instruction, dq: int, dc: int) -> Instruction:
    """Move an instruction to qubits ``q + dq`` and classical bits ``c + dc``."""
    if isinstance(ins, (Gate, Controlled)):
        return _shift_unitary(ins, dq)
    if isinstance(ins, Measure):
        return Measure(ins.qubit + dq, ins.bit + dc)
    if isinstance(ins, IfGate):
        return IfGate(ins.bit + dc, ins.value, _shift_unitary(ins.base, dq))
    if isinstance(ins, Prob):
        return Prob(ins.p, _shift_unitary(ins.base, dq))
    return ins


def compose_seq(first: Ensemble, second: Ensemble) -> Ensemble:
    """
    Sequential composition: every pair runs ``first``'s circuit then ``second``'s.

    Raises:
        EnsembleShapeError: The qubit counts differ
    """
    if first.n_qubits != second.n_qubits:
        raise EnsembleShapeError(f"cannot sequence {first.n_qubits} and {second.n_qubits} qubit ensembles")
    n_clbits = max(first.n_clbits, second.n_clbits)
    entries = []
    for a in first.entries:
        for b in second.entries:
            circuit = Circuit(
                first.n_qubits, n_clbits,
                a.circuit.instructions + b.circuit.instructions,
                a.circuit.outputs | b.circuit.outputs,
            )
            outcomes = frozenset(_outcome_record(x + y) for x in a.outcomes for y in b.outcomes)
            entries.append(EnsembleEntry(a.probability * b.probability, circuit, outcomes))
    return Ensemble.build(first.n_qubits, n_clbits, entries)


def compose_par(first: Ensemble, second: Ensemble) -> Ensemble:
    """Parallel composition: ``second``'s registers are placed after ``first``'s."""
    n_qubits = first.n_qubits + second.n_qubits
    n_clbits = first.n_clbits + second.n_clbits
    dq, dc = first.n_qubits, first.n_clbits
    entries = []
    for a in first.entries:
        for b in second.entries:
            shifted = tuple(shift_instruction(ins, dq, dc) for ins in b.circuit.instructions)
            circuit = Circuit(
                n_qubits, n_clbits,
                a.circuit.instructions + shifted,
                a.circuit.outputs | frozenset(c + dc for c in b.circuit.outputs),
            )
            outcomes = frozenset(
                _outcome_record(x + tuple((bit + dc, value) for bit, value in y))
                for x in a.outcomes for y in b.outcomes
            )
            entries.append(EnsembleEntry(a.probability * b.probability, circuit, outcomes))
    return Ensemble.build(n_qubits, n_clbits, entries)
