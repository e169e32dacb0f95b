from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger

from src.circuit_ir.gates import gate_matrix
from src.circuit_ir.models import Barrier, Circuit, Controlled, Gate, IfGate, Measure, Prob, Unitary
from src.core.config import get_settings
from src.core.exceptions import PreconditionError, ResourceLimitError

BRANCH_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class OutputBranch:
    """One execution branch: its probability, final state and recorded bits."""
    probability: float
    statevector: np.ndarray
    bits: Dict[int, int] = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class OutputEnsemble:
    """All execution branches of a circuit run from |0...0>."""
    n_qubits: int
    branches: Tuple[OutputBranch, ...]

    @property
    def total_probability(self) -> float:
        return sum(b.probability for b in self.branches)

    def density_matrix(self) -> np.ndarray:
        dim = 2 ** self.n_qubits
        rho = np.zeros((dim, dim), dtype=complex)
        for branch in self.branches:
            rho += branch.probability * np.outer(branch.statevector, branch.statevector.conj())
        return rho


def _apply_matrix(psi: np.ndarray, matrix: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    k = len(axes)
    tensor = matrix.reshape([2] * (2 * k))
    out = np.tensordot(tensor, psi, axes=(list(range(k, 2 * k)), list(axes)))
    return np.moveaxis(out, list(range(k)), list(axes))


def apply_unitary(psi: np.ndarray, unitary: Unitary) -> np.ndarray:
    """
    Apply a plain or controlled gate to a state tensor of shape [2] * n.

    Args:
        psi: State tensor, axis q belongs to qubit q
        unitary: The gate

    Returns:
        A new state tensor
    """
    if isinstance(unitary, Gate):
        return _apply_matrix(psi, gate_matrix(unitary), unitary.targets)
    index = [slice(None)] * psi.ndim
    for q, value in unitary.controls:
        index[q] = value
    index = tuple(index)
    control_axes = sorted(q for q, _ in unitary.controls)
    # sub-tensor axes after dropping the fixed control axes
    axes = [t - sum(1 for c in control_axes if c < t) for t in unitary.base.targets]
    out = psi.copy()
    out[index] = _apply_matrix(psi[index], gate_matrix(unitary.base), axes)
    return out


def initial_tensor(n_qubits: int, initial: Union[None, str, np.ndarray]) -> np.ndarray:
    if initial is None:
        vector = np.zeros(2 ** n_qubits, dtype=complex)
        vector[0] = 1.0
    elif isinstance(initial, str):
        if len(initial) != n_qubits or set(initial) - {"0", "1"}:
            raise ValueError(f"basis label {initial!r} does not match {n_qubits} qubits")
        vector = np.zeros(2 ** n_qubits, dtype=complex)
        vector[int(initial, 2)] = 1.0
    else:
        vector = np.asarray(initial, dtype=complex)
        if vector.shape != (2 ** n_qubits,):
            raise ValueError("input statevector has the wrong length")
    return vector.reshape([2] * n_qubits)


def simulate_static(circuit: Circuit, initial: Union[None, str, np.ndarray] = None,
                    max_qubits: Optional[int] = None) -> np.ndarray:
    """
    Exact statevector of a static circuit.

    Args:
        circuit: Circuit without measurements, classical controls or probabilistic gates
        initial: None for |0...0>, a basis label such as "010", or a statevector
        max_qubits: Size limit, defaults to settings

    Returns:
        The final statevector, qubit 0 most significant
    """
    limit = get_settings().max_static_qubits if max_qubits is None else max_qubits
    if circuit.n_qubits > limit:
        raise ResourceLimitError(f"{circuit.n_qubits} qubits exceeds the static simulation limit {limit}")
    if not circuit.is_static:
        raise PreconditionError("static simulation does not accept dynamic or probabilistic instructions")
    psi = initial_tensor(circuit.n_qubits, initial)
    for ins in circuit.instructions:
        if isinstance(ins, Barrier):
            continue
        psi = apply_unitary(psi, ins)
    return psi.reshape(-1)


def measure_outcomes(psi: np.ndarray, qubit: int) -> List[Tuple[int, float, np.ndarray]]:
    outcomes = []
    for value in (0, 1):
        index = [slice(None)] * psi.ndim
        index[qubit] = 1 - value
        projected = psi.copy()
        projected[tuple(index)] = 0
        weight = float(np.vdot(projected, projected).real)
        if weight > BRANCH_TOL:
            outcomes.append((value, weight, projected / np.sqrt(weight)))
    return outcomes


def simulate_dynamic(circuit: Circuit, max_qubits: Optional[int] = None,
                     max_prob_gates: Optional[int] = None,
                     max_branches: Optional[int] = None) -> OutputEnsemble:
    """
    Branch-complete simulation from |0...0>.

    Probabilistic gates branch on inclusion, measurements on their Born outcomes,
    classically-controlled gates follow each branch's recorded bits. Branches are
    kept in a fixed order: exclusion before inclusion, outcome 0 before 1.

    Args:
        circuit: Any valid circuit
        max_qubits: Qubit limit, defaults to settings
        max_prob_gates: Probabilistic-gate limit, defaults to settings
        max_branches: Branch-count limit, defaults to settings

    Returns:
        Every branch of nonzero probability
    """
    settings = get_settings()
    max_qubits = settings.max_dynamic_qubits if max_qubits is None else max_qubits
    max_prob_gates = settings.max_prob_gates if max_prob_gates is None else max_prob_gates
    max_branches = settings.max_branches if max_branches is None else max_branches
    if circuit.n_qubits > max_qubits:
        raise ResourceLimitError(f"{circuit.n_qubits} qubits exceeds the dynamic simulation limit {max_qubits}")
    if circuit.count_prob_gates() > max_prob_gates:
        raise ResourceLimitError(f"more than {max_prob_gates} probabilistic gates")

    branches: List[Tuple[float, np.ndarray, Dict[int, int]]] = [
        (1.0, initial_tensor(circuit.n_qubits, None), {})
    ]
    for ins in circuit.instructions:
        if isinstance(ins, Barrier):
            continue
        if isinstance(ins, (Gate, Controlled)):
            branches = [(p, apply_unitary(psi, ins), bits) for p, psi, bits in branches]
            continue
        children = []
        for p, psi, bits in branches:
            if isinstance(ins, IfGate):
                fired = bits.get(ins.bit) == ins.value
                children.append((p, apply_unitary(psi, ins.base) if fired else psi, bits))
            elif isinstance(ins, Prob):
                if p * (1.0 - ins.p) > BRANCH_TOL:
                    children.append((p * (1.0 - ins.p), psi, bits))
                if p * ins.p > BRANCH_TOL:
                    children.append((p * ins.p, apply_unitary(psi, ins.base), bits))
            elif isinstance(ins, Measure):
                for value, weight, projected in measure_outcomes(psi, ins.qubit):
                    if p * weight > BRANCH_TOL:
                        children.append((p * weight, projected, {**bits, ins.bit: value}))
        if len(children) > max_branches:
            raise ResourceLimitError(f"more than {max_branches} execution branches")
        branches = children

    logger.debug("simulated {} branch(es) over {} qubit(s)", len(branches), circuit.n_qubits)
    return OutputEnsemble(
        circuit.n_qubits,
        tuple(OutputBranch(p, psi.reshape(-1), bits) for p, psi, bits in branches),
    )
