from fastapi import APIRouter, HTTPException, status
from typing import List

from src.api.errors import http_error
from src.api.schemas.circuits import (
    CircuitSource, CircuitStats, ExampleResponse, ValidationResponse, ViolationResponse,
)
from src.circuit_ir import library
from src.circuit_ir.models import Circuit
from src.circuit_ir.parser import parse
from src.core.config import get_settings
from src.core.exceptions import CircuitSyntaxError, CircuitValidationError

# Router
router = APIRouter()


def circuit_stats(circuit: Circuit) -> CircuitStats:
    return CircuitStats(
        qubits=circuit.n_qubits,
        clbits=circuit.n_clbits,
        gates=circuit.gate_count,
        measurements=circuit.count_measurements(),
        prob_gates=circuit.count_prob_gates(),
        if_gates=circuit.count_if_gates(),
        depth=circuit.depth,
    )


@router.post("/validate", response_model=ValidationResponse)
async def validate_circuit(request: CircuitSource):
    """Parse and validate circuit text."""
    try:
        circuit = parse(request.source, max_controls=get_settings().max_controls)
    except CircuitSyntaxError as e:
        raise http_error(e)
    except CircuitValidationError as e:
        return ValidationResponse(
            valid=False,
            violations=[ViolationResponse.model_validate(v) for v in e.violations],
        )
    return ValidationResponse(valid=True, stats=circuit_stats(circuit))


@router.get("/examples", response_model=List[str])
async def list_examples():
    """List the built-in example circuits."""
    return library.names()


@router.get("/examples/{name}", response_model=ExampleResponse)
async def get_example(name: str):
    """Get the text of a built-in example circuit."""
    try:
        source = library.source(name)
    except KeyError:
        raise HTTPException(
            status_code=status.HTTP_404_NOT_FOUND,
            detail=f"Example '{name}' not found",
        )
    return ExampleResponse(name=name, source=source)
