"""Built-in example circuits with their opaque blocks instantiated by standard gates."""

from typing import Dict, List

from src.circuit_ir.models import Circuit
from src.circuit_ir.parser import parse

# Constant propagation walk-through: Toffoli never fires, controlled-V always fires (V := h)
QCP_WALKTHROUGH = """\
qubits 3
clbits 0
h q0
cx q0 q1
x q1
ccx q0 q1 q2
cx q0 q1
ctrl q1 : h q2
"""

QCP_WALKTHROUGH_SIMPLIFIED = """\
qubits 3
clbits 0
h q0
cx q0 q1
x q1
cx q0 q1
h q2
"""

# U1 := h; cx builds |Phi> on q0 q1, U2 := ry; cx on q2 q3, V := x, U3 := h; cx; ry; cx
REDUNDANT_MEASUREMENT = """\
qubits 4
clbits 1
h q0
cx q0 q1
ry(0.7) q2
cx q2 q3
cx q1 q0
cx q1 q2
cx q0 q1
measure q0 -> c0
if c0 == 1 : x q3
h q0
cx q0 q3
ry(0.4) q1
cx q1 q2
"""

REDUNDANT_MEASUREMENT_FREE = """\
qubits 4
clbits 1
h q0
cx q0 q1
ry(0.7) q2
cx q2 q3
cx q1 q0
cx q1 q2
cx q0 q1
h q0
cx q0 q3
ry(0.4) q1
cx q1 q2
"""

FEEDFORWARD = """\
qubits 2
clbits 1
h q0
measure q0 -> c0
if c0 == 1 : x q1
"""

PROBABILISTIC = """\
qubits 2
clbits 0
h q0
prob 0.4 cx q0 q1
prob 0.6 x q1
"""

# U1 := x on q1, U2 := h on q3; q1 reads 0, so U2 is conditioned on value 0
DEMO_DETERMINISTIC = """\
qubits 4
clbits 2
h q0
h q1
cz q0 q1
cx q0 q2
cx q2 q3
cz q1 q3
ccx q2 q3 q0
measure q0 -> c0
if c0 == 1 : x q1
h q1
z q1
measure q1 -> c1
if c1 == 0 : h q3
"""

# U1 := h q2, U2 := h q4, U4 := x q3, U5 := h q0, U6 := x q4
DEMO_PROBABILISTIC = """\
qubits 5
clbits 2
h q0
h q2
h q4
cx q0 q1
ccx q2 q4 q3
x q0
cx q1 q2
ccx q0 q1 q2
h q0
h q1
cx q1 q0
t q0
measure q1 -> c0
if c0 == 1 : x q3
ctrl q1 : h q0
y q1
measure q1 -> c1
if c1 == 1 : x q4
"""

_SOURCES: Dict[str, str] = {
    "qcp-walkthrough": QCP_WALKTHROUGH,
    "qcp-walkthrough-simplified": QCP_WALKTHROUGH_SIMPLIFIED,
    "redundant-measurement": REDUNDANT_MEASUREMENT,
    "redundant-measurement-free": REDUNDANT_MEASUREMENT_FREE,
    "feedforward": FEEDFORWARD,
    "probabilistic": PROBABILISTIC,
    "demo-deterministic": DEMO_DETERMINISTIC,
    "demo-probabilistic": DEMO_PROBABILISTIC,
}


def names() -> List[str]:
    return sorted(_SOURCES)


def source(name: str) -> str:
    """
    Get the source text of a built-in circuit.

    Args:
        name: One of ``names()``

    Returns:
        The circuit source

    Raises:
        KeyError: Unknown name
    """
    if name not in _SOURCES:
        raise KeyError(f"unknown example circuit {name!r}; known: {', '.join(names())}")
    return _SOURCES[name]


def get(name: str) -> Circuit:
    return parse(source(name))
