from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

import numpy as np
from loguru import logger
from pydantic import BaseModel

from src.circuit_ir.models import Circuit
from src.core.config import get_settings
from src.core.exceptions import EnsembleShapeError
from src.verify.simulator import OutputEnsemble, simulate_dynamic

# Above this dimension the Frobenius norm (an upper bound of the max norm) is used
DENSE_DIMENSION_LIMIT = 1024
# Squared Frobenius norms below this are rounding noise of the overlap sums
SQUARED_NOISE_FLOOR = 1e-13


class EquivalenceResult(BaseModel):
    """Outcome of comparing two output ensembles."""
    equal: bool
    distribution_distance: float
    state_distance: float


class VerificationReport(BaseModel):
    """Verdict of the oracle on an optimization."""
    passed: bool
    tol: float
    distribution_distance: float
    state_distance: float
    measurements_before: int
    measurements_after: int
    outputs: List[int]


Group = List[Tuple[float, np.ndarray]]


def _group_by_outputs(ensemble: OutputEnsemble, outputs: Iterable[int]) -> Dict[Tuple[int, ...], Group]:
    keys = sorted(outputs)
    grouped: Dict[Tuple[int, ...], Group] = {}
    for branch in ensemble.branches:
        key = tuple(branch.bits.get(b, 0) for b in keys)
        grouped.setdefault(key, []).append((branch.probability, branch.statevector))
    return grouped


def _state_distance(a: Group, b: Group, weight_a: float, weight_b: float) -> float:
    """Distance between the conditional mixed states of two branch groups."""
    dim = a[0][1].shape[0]
    wa = np.array([p / weight_a for p, _ in a])
    wb = np.array([p / weight_b for p, _ in b])
    va = np.stack([v for _, v in a], axis=1)
    vb = np.stack([v for _, v in b], axis=1)
    if dim <= DENSE_DIMENSION_LIMIT:
        rho_a = (va * wa) @ va.conj().T
        rho_b = (vb * wb) @ vb.conj().T
        return float(np.max(np.abs(rho_a - rho_b)))
    # ||rho_a - rho_b||_F^2 from branch overlaps
    gaa = np.abs(va.conj().T @ va) ** 2
    gbb = np.abs(vb.conj().T @ vb) ** 2
    gab = np.abs(va.conj().T @ vb) ** 2
    squared = wa @ gaa @ wa + wb @ gbb @ wb - 2 * wa @ gab @ wb
    if squared <= SQUARED_NOISE_FLOOR:
        return 0.0
    return float(np.sqrt(squared))


def compare_ensembles(a: OutputEnsemble, b: OutputEnsemble, outputs: Iterable[int],
                      tol: Optional[float] = None) -> EquivalenceResult:
    """
    Compare two output ensembles on the output bits and the conditional states.

    Args:
        a: First ensemble
        b: Second ensemble
        outputs: Classical bits whose joint distribution must agree
        tol: Tolerance, defaults to settings

    Returns:
        Distances and the verdict
    """
    if a.n_qubits != b.n_qubits:
        raise EnsembleShapeError(f"qubit counts differ: {a.n_qubits} vs {b.n_qubits}")
    tol = get_settings().verify_tol if tol is None else tol
    outputs = list(outputs)
    groups_a = _group_by_outputs(a, outputs)
    groups_b = _group_by_outputs(b, outputs)

    distribution_distance = 0.0
    state_distance = 0.0
    for key in sorted(set(groups_a) | set(groups_b)):
        weight_a = sum(p for p, _ in groups_a.get(key, []))
        weight_b = sum(p for p, _ in groups_b.get(key, []))
        distribution_distance = max(distribution_distance, abs(weight_a - weight_b))
        if weight_a <= tol or weight_b <= tol:
            continue
        state_distance = max(state_distance, _state_distance(groups_a[key], groups_b[key], weight_a, weight_b))

    equal = distribution_distance <= tol and state_distance <= tol
    return EquivalenceResult(equal=equal, distribution_distance=distribution_distance, state_distance=state_distance)


def ensembles_equal(a: OutputEnsemble, b: OutputEnsemble, outputs: Iterable[int],
                    tol: Optional[float] = None) -> bool:
    return compare_ensembles(a, b, outputs, tol).equal


def check_optimization(original: Circuit, optimized: Circuit, tol: Optional[float] = None) -> VerificationReport:
    """
    Certify that an optimized circuit is runtime-equivalent to the original from |0...0>.

    Args:
        original: Circuit before optimization; its output bits are compared
        optimized: Circuit after optimization
        tol: Tolerance, defaults to settings

    Returns:
        The verification report
    """
    if original.n_qubits != optimized.n_qubits:
        raise EnsembleShapeError("original and optimized circuits have different qubit counts")
    tol = get_settings().verify_tol if tol is None else tol
    outputs: FrozenSet[int] = original.outputs
    result = compare_ensembles(simulate_dynamic(original), simulate_dynamic(optimized), outputs, tol)
    report = VerificationReport(
        passed=result.equal,
        tol=tol,
        distribution_distance=result.distribution_distance,
        state_distance=result.state_distance,
        measurements_before=original.count_measurements(),
        measurements_after=optimized.count_measurements(),
        outputs=sorted(outputs),
    )
    logger.info(
        "verification {}: distribution distance {:.3g}, state distance {:.3g}",
        "passed" if report.passed else "failed", report.distribution_distance, report.state_distance,
    )
    return report
