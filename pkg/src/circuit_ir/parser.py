import math
import re
from typing import List, Optional, Tuple

from src.circuit_ir.models import (
    Barrier, Circuit, Controlled, Gate, GateKind, IfGate, Instruction, Measure, Prob, Unitary,
)
from src.circuit_ir.validation import validate
from src.core.exceptions import CircuitSyntaxError, CircuitValidationError

_GATE_RE = re.compile(r"^(?P<kind>[a-z]+)\s*(?:\((?P<params>[^)]*)\))?\s*(?P<operands>.*)$")
_QUBIT_RE = re.compile(r"^q(\d+)$")
_CLBIT_RE = re.compile(r"^c(\d+)$")
_MEASURE_RE = re.compile(r"^measure\s+(\S+)\s*->\s*(\S+)$")
_IF_RE = re.compile(r"^if\s+(\S+)\s*==\s*(\S+)\s*:\s*(.+)$")
_PROB_RE = re.compile(r"^prob\s+(\S+)\s+(.+)$")

_SUGAR = {"cx": (1, GateKind.X), "cz": (1, GateKind.Z), "ccx": (2, GateKind.X)}


def _qubit(token: str, line: int) -> int:
    match = _QUBIT_RE.match(token)
    if not match:
        raise CircuitSyntaxError(f"expected a qubit reference, got {token!r}", line)
    return int(match.group(1))


def _clbit(token: str, line: int) -> int:
    match = _CLBIT_RE.match(token)
    if not match:
        raise CircuitSyntaxError(f"expected a classical bit reference, got {token!r}", line)
    return int(match.group(1))


def _number(token: str, line: int, what: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise CircuitSyntaxError(f"expected a number for {what}, got {token!r}", line) from None
    if not math.isfinite(value):
        raise CircuitSyntaxError(f"{what} must be finite", line)
    return value


def _qubit_list(text: str, line: int) -> Tuple[int, ...]:
    tokens = [t for t in re.split(r"[\s,]+", text.strip()) if t]
    if not tokens:
        raise CircuitSyntaxError("missing qubit operands", line)
    return tuple(_qubit(t, line) for t in tokens)


def _parse_gate(text: str, line: int) -> Unitary:
    """Parse a plain gate line or one of the controlled sugars."""
    match = _GATE_RE.match(text.strip())
    if not match:
        raise CircuitSyntaxError(f"cannot read gate {text!r}", line)
    name, params, operands = match.group("kind"), match.group("params"), match.group("operands")
    qubits = _qubit_list(operands, line)

    if name in _SUGAR:
        n_controls, kind = _SUGAR[name]
        if params is not None or len(qubits) != n_controls + 1:
            raise CircuitSyntaxError(f"{name} takes {n_controls + 1} qubits and no angles", line)
        return Controlled(qubits[:-1], (), Gate(kind, (qubits[-1],)), sugar=True)

    try:
        kind = GateKind(name)
    except ValueError:
        raise CircuitSyntaxError(f"unknown gate {name!r}", line) from None
    angles: Tuple[float, ...] = ()
    if params is not None:
        angles = tuple(_number(p.strip(), line, "angle") for p in params.split(","))
    if len(angles) != kind.n_params:
        raise CircuitSyntaxError(f"{name} takes {kind.n_params} angle(s)", line)
    if len(qubits) != kind.n_targets:
        raise CircuitSyntaxError(f"{name} takes {kind.n_targets} qubit(s)", line)
    return Gate(kind, qubits, angles)


def _parse_unitary(text: str, line: int) -> Unitary:
    """Parse a gate line optionally prefixed by ``ctrl``/``nctrl`` control lists."""
    text = text.strip()
    if not (text.startswith("ctrl ") or text.startswith("nctrl ")):
        return _parse_gate(text, line)
    head, sep, tail = text.partition(":")
    if not sep:
        raise CircuitSyntaxError("controlled gate needs ':' before the base gate", line)
    pos: List[int] = []
    neg: List[int] = []
    # ctrl and nctrl sections may appear in either order
    target = pos
    for token in (t for t in re.split(r"[\s,]+", head.strip()) if t):
        if token in ("ctrl", "nctrl"):
            target = neg if token == "nctrl" else pos
        else:
            target.append(_qubit(token, line))
    if not pos and not neg:
        raise CircuitSyntaxError("controlled gate has no controls", line)
    base = _parse_gate(tail, line)
    if isinstance(base, Controlled):
        raise CircuitSyntaxError("base of a controlled gate must be a plain gate", line)
    return Controlled(tuple(pos), tuple(neg), base)


def _parse_instruction(text: str, line: int) -> Instruction:
    if text == "barrier":
        return Barrier()
    if text.startswith("measure"):
        match = _MEASURE_RE.match(text)
        if not match:
            raise CircuitSyntaxError("expected 'measure q<i> -> c<j>'", line)
        return Measure(_qubit(match.group(1), line), _clbit(match.group(2), line))
    if text.startswith("if "):
        match = _IF_RE.match(text)
        if not match:
            raise CircuitSyntaxError("expected 'if c<j> == <0|1> : <gate>'", line)
        value = match.group(2)
        if value not in ("0", "1"):
            raise CircuitSyntaxError("condition value must be 0 or 1", line)
        return IfGate(_clbit(match.group(1), line), int(value), _parse_unitary(match.group(3), line))
    if text.startswith("prob "):
        match = _PROB_RE.match(text)
        if not match:
            raise CircuitSyntaxError("expected 'prob <p> <gate>'", line)
        p = _number(match.group(1), line, "probability")
        if not 0.0 <= p <= 1.0:
            raise CircuitSyntaxError(f"probability {p!r} outside [0, 1]", line)
        return Prob(p, _parse_unitary(match.group(2), line))
    return _parse_unitary(text, line)


def parse(text: str, max_controls: Optional[int] = None) -> Circuit:
    """
    Parse circuit source text.

    Args:
        text: Source in the line grammar
        max_controls: Optional bound on controls per gate

    Returns:
        The validated circuit

    Raises:
        CircuitSyntaxError: The text does not follow the grammar
        CircuitValidationError: The circuit breaks a structural rule
    """
    n_qubits: Optional[int] = None
    n_clbits = 0
    outputs: Tuple[int, ...] = ()
    instructions: List[Instruction] = []

    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if not content:
            continue
        keyword = content.split(None, 1)[0]

        if keyword in ("qubits", "clbits", "output"):
            if instructions:
                raise CircuitSyntaxError(f"'{keyword}' header after the first instruction", number)
            args = content.split()[1:]
            if keyword == "output":
                outputs += tuple(_clbit(t, number) for t in args)
                continue
            if len(args) != 1 or not args[0].isdigit():
                raise CircuitSyntaxError(f"expected '{keyword} <count>'", number)
            if keyword == "qubits":
                n_qubits = int(args[0])
            else:
                n_clbits = int(args[0])
            continue

        if n_qubits is None:
            raise CircuitSyntaxError("'qubits' header must come before instructions", number)
        instructions.append(_parse_instruction(content, number))

    if n_qubits is None:
        raise CircuitSyntaxError("missing 'qubits' header")

    circuit = Circuit(n_qubits, n_clbits, tuple(instructions), frozenset(outputs))
    violations = validate(circuit, max_controls)
    if violations:
        raise CircuitValidationError(violations)
    return circuit
