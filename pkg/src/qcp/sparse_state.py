import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Mapping, Optional, Sequence, Tuple

import numpy as np

AMPLITUDE_TOL = 1e-12


class ControlVerdict(str, Enum):
    """How often a set of control conditions holds across a sparse state's basis strings."""
    ALWAYS = "always"
    NEVER = "never"
    SOMETIMES = "sometimes"


@dataclass(frozen=True, eq=False)
class SparseState:
    """
    Pure state of one entanglement group as a map from basis strings to amplitudes.

    Character ``j`` of every key is the value of ``qubits[j]``.
    """
    qubits: Tuple[int, ...]
    amplitudes: Mapping[str, complex]

    @classmethod
    def basis(cls, qubits: Sequence[int], bits: Optional[str] = None) -> "SparseState":
        qubits = tuple(qubits)
        bits = "0" * len(qubits) if bits is None else bits
        return cls(qubits, {bits: 1.0 + 0j})

    @classmethod
    def from_amplitudes(cls, qubits: Sequence[int], amplitudes: Mapping[str, complex],
                        tol: float = AMPLITUDE_TOL) -> "SparseState":
        """
        Build a state after pruning tiny amplitudes and renormalizing.

        Args:
            qubits: Group members in key order
            amplitudes: Raw amplitudes, possibly unnormalized
            tol: Magnitude below which an amplitude is dropped

        Returns:
            The normalized state
        """
        kept = {k: complex(a) for k, a in amplitudes.items() if abs(a) >= tol}
        if not kept:
            raise ValueError("state has no amplitude above the pruning threshold")
        norm = math.sqrt(sum(abs(a) ** 2 for a in kept.values()))
        return cls(tuple(qubits), {k: a / norm for k, a in kept.items()})

    @property
    def size(self) -> int:
        return len(self.amplitudes)

    def position(self, qubit: int) -> int:
        return self.qubits.index(qubit)

    def tensor(self, other: "SparseState") -> "SparseState":
        amplitudes = {
            k1 + k2: a1 * a2
            for k1, a1 in self.amplitudes.items()
            for k2, a2 in other.amplitudes.items()
        }
        return SparseState(self.qubits + other.qubits, amplitudes)

    def apply(self, rows: Sequence[Sequence[complex]], targets: Sequence[int],
              controls: Sequence[Tuple[int, int]] = (), tol: float = AMPLITUDE_TOL) -> Tuple["SparseState", int]:
        """
        Apply a (controlled) unitary to the sparse amplitudes.

        Args:
            rows: Matrix over the targets, first target most significant
            targets: Target qubits, all members of this group
            controls: (qubit, required value) pairs, all members of this group
            tol: Pruning threshold for the result

        Returns:
            The new state and the number of basis-state updates performed
        """
        pos_t = [self.position(t) for t in targets]
        pos_c = [(self.position(q), "1" if v else "0") for q, v in controls]
        width = len(pos_t)
        out: Dict[str, complex] = {}
        updates = 0
        for key, amp in self.amplitudes.items():
            if any(key[p] != v for p, v in pos_c):
                out[key] = out.get(key, 0j) + amp
                continue
            col = 0
            for p in pos_t:
                col = (col << 1) | (key[p] == "1")
            chars = list(key)
            for row, matrix_row in enumerate(rows):
                m = matrix_row[col]
                if m == 0:
                    continue
                for j, p in enumerate(pos_t):
                    chars[p] = "1" if (row >> (width - 1 - j)) & 1 else "0"
                new_key = "".join(chars)
                out[new_key] = out.get(new_key, 0j) + m * amp
                updates += 1
        return SparseState.from_amplitudes(self.qubits, out, tol), updates

    def control_verdict(self, controls: Sequence[Tuple[int, int]]) -> ControlVerdict:
        positions = [(self.position(q), "1" if v else "0") for q, v in controls]
        satisfied = [all(key[p] == v for p, v in positions) for key in self.amplitudes]
        if all(satisfied):
            return ControlVerdict.ALWAYS
        if not any(satisfied):
            return ControlVerdict.NEVER
        return ControlVerdict.SOMETIMES

    def constant_bit(self, qubit: int) -> Optional[int]:
        """The value of ``qubit`` if every basis string agrees on it, else None."""
        p = self.position(qubit)
        values = {key[p] for key in self.amplitudes}
        if len(values) != 1:
            return None
        return int(values.pop())

    def drop_qubit(self, qubit: int) -> "SparseState":
        """Remove a qubit that holds a constant bit; the remaining amplitudes are unchanged."""
        p = self.position(qubit)
        if self.constant_bit(qubit) is None:
            raise ValueError(f"q{qubit} is not in a basis state")
        amplitudes = {key[:p] + key[p + 1:]: amp for key, amp in self.amplitudes.items()}
        return SparseState(self.qubits[:p] + self.qubits[p + 1:], amplitudes)

    def probability_of_one(self, qubit: int) -> float:
        p = self.position(qubit)
        return sum(abs(a) ** 2 for k, a in self.amplitudes.items() if k[p] == "1")

    def to_dense(self) -> np.ndarray:
        vector = np.zeros(2 ** len(self.qubits), dtype=complex)
        for key, amp in self.amplitudes.items():
            vector[int(key, 2) if key else 0] += amp
        return vector

    def __repr__(self) -> str:
        terms = ", ".join(f"{k}: {a:.4g}" for k, a in self.amplitudes.items())
        return f"SparseState(q={list(self.qubits)}, {{{terms}}})"
