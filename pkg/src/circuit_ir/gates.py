import cmath
import math
from typing import Tuple

import numpy as np

from src.circuit_ir.models import Gate, GateKind

_SQRT1_2 = 1.0 / math.sqrt(2.0)

_FIXED = {
    GateKind.ID: np.eye(2, dtype=complex),
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    GateKind.Z: np.array([[1, 0], [0, -1]], dtype=complex),
    GateKind.H: np.array([[_SQRT1_2, _SQRT1_2], [_SQRT1_2, -_SQRT1_2]], dtype=complex),
    GateKind.S: np.array([[1, 0], [0, 1j]], dtype=complex),
    GateKind.SDG: np.array([[1, 0], [0, -1j]], dtype=complex),
    GateKind.T: np.array([[1, 0], [0, cmath.exp(1j * math.pi / 4)]], dtype=complex),
    GateKind.TDG: np.array([[1, 0], [0, cmath.exp(-1j * math.pi / 4)]], dtype=complex),
    # First target is the most significant index bit
    GateKind.SWAP: np.array(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
    ),
}


def rx_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def ry_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz_matrix(theta: float) -> np.ndarray:
    return np.array([[cmath.exp(-0.5j * theta), 0], [0, cmath.exp(0.5j * theta)]], dtype=complex)


def u_matrix(theta: float, phi: float, lam: float) -> np.ndarray:
    """
    The generic single-qubit rotation.

    Args:
        theta: Polar angle
        phi: Phase applied to the |1> row
        lam: Phase applied to the |1> column

    Returns:
        [[cos(θ/2), -e^{iλ} sin(θ/2)], [e^{iφ} sin(θ/2), e^{i(φ+λ)} cos(θ/2)]]
    """
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [
            [c, -cmath.exp(1j * lam) * s],
            [cmath.exp(1j * phi) * s, cmath.exp(1j * (phi + lam)) * c],
        ],
        dtype=complex,
    )


def gate_matrix(gate: Gate) -> np.ndarray:
    """
    Unitary matrix of a primitive gate over its targets.

    Args:
        gate: The gate

    Returns:
        A 2x2 or 4x4 complex matrix, first target most significant
    """
    kind = gate.kind
    if kind in _FIXED:
        return _FIXED[kind].copy()
    if kind is GateKind.RX:
        return rx_matrix(*gate.params)
    if kind is GateKind.RY:
        return ry_matrix(*gate.params)
    if kind is GateKind.RZ:
        return rz_matrix(*gate.params)
    return u_matrix(*gate.params)


def matrix_rows(gate: Gate) -> Tuple[Tuple[complex, ...], ...]:
    """Gate matrix as nested Python tuples, for the sparse simulator's inner loops."""
    return tuple(tuple(complex(v) for v in row) for row in gate_matrix(gate).tolist())
