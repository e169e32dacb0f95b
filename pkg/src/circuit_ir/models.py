from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterable, Iterator, Tuple, Union


class GateKind(str, Enum):
    """Primitive gate kinds of the circuit language."""
    ID = "id"
    X = "x"
    Y = "y"
    Z = "z"
    H = "h"
    S = "s"
    SDG = "sdg"
    T = "t"
    TDG = "tdg"
    SWAP = "swap"
    RX = "rx"
    RY = "ry"
    RZ = "rz"
    U = "u"

    @property
    def n_targets(self) -> int:
        return 2 if self is GateKind.SWAP else 1

    @property
    def n_params(self) -> int:
        if self is GateKind.U:
            return 3
        if self in (GateKind.RX, GateKind.RY, GateKind.RZ):
            return 1
        return 0


# Kinds whose matrix has exactly one nonzero entry per column
MONOMIAL_KINDS: FrozenSet[GateKind] = frozenset({
    GateKind.ID, GateKind.X, GateKind.Y, GateKind.Z, GateKind.S, GateKind.SDG,
    GateKind.T, GateKind.TDG, GateKind.RZ, GateKind.SWAP,
})

DIAGONAL_KINDS: FrozenSet[GateKind] = frozenset({
    GateKind.ID, GateKind.Z, GateKind.S, GateKind.SDG, GateKind.T, GateKind.TDG, GateKind.RZ,
})


@dataclass(frozen=True)
class Gate:
    """An uncontrolled primitive gate."""
    kind: GateKind
    targets: Tuple[int, ...]
    params: Tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "kind", GateKind(self.kind))
        object.__setattr__(self, "targets", tuple(self.targets))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))

    @property
    def qubits(self) -> Tuple[int, ...]:
        return self.targets


@dataclass(frozen=True)
class Controlled:
    """A gate applied when every positive control is 1 and every negative control is 0.

    ``sugar`` remembers a ``cx``/``cz``/``ccx`` spelling and takes no part in equality.
    """
    pos_controls: Tuple[int, ...]
    neg_controls: Tuple[int, ...]
    base: Gate
    sugar: bool = field(default=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "pos_controls", tuple(self.pos_controls))
        object.__setattr__(self, "neg_controls", tuple(self.neg_controls))

    @property
    def controls(self) -> Tuple[Tuple[int, int], ...]:
        """(qubit, required value) pairs, positive controls first."""
        return tuple((q, 1) for q in self.pos_controls) + tuple((q, 0) for q in self.neg_controls)

    @property
    def qubits(self) -> Tuple[int, ...]:
        return self.pos_controls + self.neg_controls + self.base.targets


@dataclass(frozen=True)
class Measure:
    """Z-basis measurement of one qubit into one classical bit."""
    qubit: int
    bit: int

    @property
    def qubits(self) -> Tuple[int, ...]:
        return (self.qubit,)


@dataclass(frozen=True)
class IfGate:
    """A gate executed only when a classical bit holds ``value``."""
    bit: int
    value: int
    base: Union[Gate, Controlled]

    @property
    def qubits(self) -> Tuple[int, ...]:
        return self.base.qubits


@dataclass(frozen=True)
class Prob:
    """A probabilistic gate: ``base`` with probability ``p``, identity otherwise."""
    p: float
    base: Union[Gate, Controlled]

    def __post_init__(self):
        object.__setattr__(self, "p", float(self.p))

    @property
    def qubits(self) -> Tuple[int, ...]:
        return self.base.qubits


@dataclass(frozen=True)
class Barrier:
    """Scheduling barrier; no effect on the state."""

    @property
    def qubits(self) -> Tuple[int, ...]:
        return ()


Unitary = Union[Gate, Controlled]
Instruction = Union[Gate, Controlled, Measure, IfGate, Prob, Barrier]


def unitary_acts_on(unitary: Unitary, qubit: int) -> bool:
    """Check whether a gate touches a qubit as control or target."""
    return qubit in unitary.qubits


@dataclass(frozen=True)
class Circuit:
    """An immutable program over ``n_qubits`` qubits and ``n_clbits`` classical bits."""
    n_qubits: int
    n_clbits: int
    instructions: Tuple[Instruction, ...] = ()
    outputs: FrozenSet[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "instructions", tuple(self.instructions))
        object.__setattr__(self, "outputs", frozenset(self.outputs))

    def __len__(self) -> int:
        return len(self.instructions)

    def __iter__(self) -> Iterator[Instruction]:
        return iter(self.instructions)

    def __getitem__(self, index: int) -> Instruction:
        return self.instructions[index]

    def with_instructions(self, instructions: Iterable[Instruction]) -> "Circuit":
        """Return a copy with the same registers and a new instruction list."""
        return Circuit(self.n_qubits, self.n_clbits, tuple(instructions), self.outputs)

    @property
    def is_static(self) -> bool:
        return not any(isinstance(ins, (Measure, IfGate, Prob)) for ins in self.instructions)

    def count_measurements(self) -> int:
        return sum(1 for ins in self.instructions if isinstance(ins, Measure))

    def count_prob_gates(self) -> int:
        return sum(1 for ins in self.instructions if isinstance(ins, Prob))

    def count_if_gates(self) -> int:
        return sum(1 for ins in self.instructions if isinstance(ins, IfGate))

    @property
    def gate_count(self) -> int:
        """Number of unitary-bearing instructions (plain, controlled, classical or probabilistic)."""
        return sum(1 for ins in self.instructions if isinstance(ins, (Gate, Controlled, IfGate, Prob)))

    @property
    def depth(self) -> int:
        """
        Circuit depth by greedy layering.

        Classical bits are wires too: a measurement occupies its qubit and its bit,
        a classically-controlled gate occupies its qubits and the bit it reads.
        A barrier aligns every wire without adding a layer.

        Returns:
            The number of layers
        """
        levels: Dict[Tuple[str, int], int] = {}
        depth = 0
        for ins in self.instructions:
            if isinstance(ins, Barrier):
                for q in range(self.n_qubits):
                    levels[("q", q)] = depth
                for b in range(self.n_clbits):
                    levels[("c", b)] = depth
                continue
            wires = [("q", q) for q in ins.qubits]
            if isinstance(ins, (Measure, IfGate)):
                wires.append(("c", ins.bit))
            layer = 1 + max((levels.get(w, 0) for w in wires), default=0)
            for w in wires:
                levels[w] = layer
            depth = max(depth, layer)
        return depth
