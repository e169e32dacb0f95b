from fastapi import APIRouter

from src.api.errors import http_error
from src.api.schemas.ensemble import (
    EnsembleEntryResponse, EnsembleRequest, EnsembleResponse, ShotResponse, ShotsRequest, ShotsResponse,
)
from src.circuit_ir.parser import parse
from src.circuit_ir.serializer import serialize, serialize_inline
from src.core.exceptions import MeasureLessError
from src.ensemble.compiler import compile_shots
from src.ensemble.ensemble import enumerate_ensemble

# Router
router = APIRouter()


@router.post("/ensemble", response_model=EnsembleResponse)
async def get_ensemble(request: EnsembleRequest):
    """Enumerate the exact ensemble of static circuits."""
    try:
        ensemble = enumerate_ensemble(parse(request.source), cap=request.cap)
    except MeasureLessError as e:
        raise http_error(e)

    return EnsembleResponse(entries=[
        EnsembleEntryResponse(
            probability=entry.probability,
            circuit=serialize_inline(entry.circuit),
            outcomes=[
                {f"c{bit}": value for bit, value in record} for record in sorted(entry.outcomes) if record
            ],
        )
        for entry in ensemble.entries
    ])


@router.post("/shots", response_model=ShotsResponse)
async def get_shots(request: ShotsRequest):
    """Compile the probabilistic gates of a circuit for consecutive seeds."""
    try:
        circuit = parse(request.source)
    except MeasureLessError as e:
        raise http_error(e)

    return ShotsResponse(shots=[
        ShotResponse(seed=seed, circuit=serialize(shot))
        for seed, shot in compile_shots(circuit, request.seed, request.count)
    ])
