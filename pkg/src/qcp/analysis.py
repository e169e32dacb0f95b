from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Union

from pydantic import BaseModel, ConfigDict, Field

from src.core.config import Settings, get_settings
from src.qcp.sparse_state import SparseState


class QcpConfig(BaseModel):
    """Limits of the constant propagation pass."""
    model_config = ConfigDict(frozen=True)

    n_max: int = Field(default=64, ge=2, description="Basis-state cap per entanglement group")
    max_controls: int = Field(default=3, ge=1, description="Maximum controls per gate")
    amplitude_tol: float = Field(default=1e-12, gt=0)
    prob_tol: float = Field(default=1e-9, gt=0)

    @classmethod
    def from_settings(cls, settings: Optional[Settings] = None, **overrides) -> "QcpConfig":
        settings = settings or get_settings()
        values = {
            "n_max": settings.n_max,
            "max_controls": settings.max_controls,
            "amplitude_tol": settings.amplitude_tol,
            "prob_tol": settings.prob_tol,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


class GroupKind(str, Enum):
    """Lattice element describing what is known about an entanglement group."""
    KNOWN = "known"
    BASIS_DIAGONAL = "basis_diagonal"
    TOP = "top"


class ClbitValue(str, Enum):
    """Constant lattice for classical bits."""
    ZERO = "0"
    ONE = "1"
    UNKNOWN = "unknown"

    @classmethod
    def const(cls, value: int) -> "ClbitValue":
        return cls.ONE if value else cls.ZERO

    @property
    def is_const(self) -> bool:
        return self is not ClbitValue.UNKNOWN


@dataclass(frozen=True, eq=False)
class GroupState:
    """One entanglement group and what the analysis knows about it."""
    kind: GroupKind
    qubits: tuple
    state: Optional[SparseState] = None

    @classmethod
    def known(cls, state: SparseState) -> "GroupState":
        return cls(GroupKind.KNOWN, state.qubits, state)

    @classmethod
    def basis_diagonal(cls, qubit: int) -> "GroupState":
        return cls(GroupKind.BASIS_DIAGONAL, (qubit,))

    @classmethod
    def top(cls, qubits: Iterable[int]) -> "GroupState":
        return cls(GroupKind.TOP, tuple(sorted(qubits)))

    @property
    def is_known(self) -> bool:
        return self.kind is GroupKind.KNOWN


class AnalysisState:
    """
    Partition of the qubits into groups plus the classical-bit lattice.

    Every qubit points at the GroupState of its group; qubits sharing the same
    object form one partition block. Snapshots hold tuples and are never mutated.
    """

    __slots__ = ("_groups", "_clbits")

    def __init__(self, groups: Union[List[GroupState], tuple], clbits: Union[List[ClbitValue], tuple]):
        self._groups = groups
        self._clbits = clbits

    @classmethod
    def initial(cls, n_qubits: int, n_clbits: int = 0) -> "AnalysisState":
        groups = [GroupState.known(SparseState.basis((q,))) for q in range(n_qubits)]
        return cls(groups, [ClbitValue.UNKNOWN] * n_clbits)

    @property
    def n_qubits(self) -> int:
        return len(self._groups)

    @property
    def n_clbits(self) -> int:
        return len(self._clbits)

    def group(self, qubit: int) -> GroupState:
        return self._groups[qubit]

    def groups(self) -> List[GroupState]:
        """Distinct groups ordered by their lowest qubit."""
        seen = set()
        result = []
        for group in self._groups:
            if id(group) not in seen:
                seen.add(id(group))
                result.append(group)
        return result

    def groups_of(self, qubits: Sequence[int]) -> List[GroupState]:
        """Distinct groups spanned by ``qubits``, in order of first appearance."""
        seen = set()
        result = []
        for q in qubits:
            group = self._groups[q]
            if id(group) not in seen:
                seen.add(id(group))
                result.append(group)
        return result

    def clbit(self, bit: int) -> ClbitValue:
        # bits past the register have never been written
        return self._clbits[bit] if bit < len(self._clbits) else ClbitValue.UNKNOWN

    def same_group(self, a: int, b: int) -> bool:
        return self._groups[a] is self._groups[b]

    def snapshot(self) -> "AnalysisState":
        return AnalysisState(tuple(self._groups), tuple(self._clbits))

    def copy(self) -> "AnalysisState":
        """A mutable copy; groups are shared since GroupState values are immutable."""
        return AnalysisState(list(self._groups), list(self._clbits))

    # Mutators, only for working copies

    def set_group(self, group: GroupState) -> None:
        for q in group.qubits:
            self._groups[q] = group

    def set_clbit(self, bit: int, value: ClbitValue) -> None:
        if bit >= len(self._clbits):
            self._clbits.extend([ClbitValue.UNKNOWN] * (bit + 1 - len(self._clbits)))
        self._clbits[bit] = value

    def poison(self, qubits: Iterable[int]) -> None:
        """Merge every group spanned by ``qubits`` into a single Top group."""
        members = set()
        for group in self.groups_of(list(qubits)):
            members.update(group.qubits)
        if members:
            self.set_group(GroupState.top(members))

    def split(self, qubit: int, own: GroupState, rest: Optional[GroupState]) -> None:
        """Detach ``qubit`` from its group; ``rest`` describes the remaining members."""
        old = self._groups[qubit]
        others = tuple(q for q in old.qubits if q != qubit)
        self.set_group(own)
        if others:
            if rest is None or set(rest.qubits) != set(others):
                raise ValueError("remainder group must cover the other members")
            self.set_group(rest)

    def __repr__(self) -> str:
        parts = []
        for group in self.groups():
            label = group.kind.value if not group.is_known else repr(group.state)
            parts.append(f"{list(group.qubits)}={label}")
        bits = "".join("?" if v is ClbitValue.UNKNOWN else v.value for v in self._clbits)
        return f"AnalysisState({'; '.join(parts)} | c={bits})"
