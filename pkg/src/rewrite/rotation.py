import cmath
import math
from dataclasses import dataclass

from src.circuit_ir.models import Gate, GateKind
from src.core.exceptions import PreconditionError
from src.purity.purity_test import QubitAmplitudes


@dataclass(frozen=True)
class RotationSpec:
    """Angles of a ``u`` gate that sends a known qubit state to |1>."""
    theta: float
    phi: float
    lam: float

    def gate(self, qubit: int) -> Gate:
        return Gate(GateKind.U, (qubit,), (self.theta, self.phi, self.lam))


def synthesize_rotation(state: QubitAmplitudes, tol: float = 1e-9) -> RotationSpec:
    """
    Angles of [[beta, -alpha], [conj(alpha), conj(beta)]] up to global phase.

    Args:
        state: Normalized single-qubit amplitudes
        tol: Normalization tolerance

    Returns:
        A rotation with u(theta, phi, lam) (alpha, beta) = (0, e^{i delta})
    """
    if not state.is_normalized(tol):
        raise PreconditionError(f"qubit state is not normalized (norm {state.norm:.12g})")
    arg_alpha = cmath.phase(state.alpha) if state.alpha != 0 else 0.0
    arg_beta = cmath.phase(state.beta) if state.beta != 0 else 0.0
    return RotationSpec(
        theta=2.0 * math.atan2(abs(state.alpha), abs(state.beta)),
        phi=-arg_alpha - arg_beta,
        lam=arg_alpha - arg_beta,
    )
