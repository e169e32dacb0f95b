from fastapi import APIRouter

from src.api.errors import http_error
from src.api.schemas.optimize import OptimizeRequest, OptimizeResponse, VerifyRequest
from src.circuit_ir.parser import parse
from src.circuit_ir.serializer import serialize
from src.core.engine import optimize_source
from src.core.exceptions import MeasureLessError
from src.rewrite.optimizer import OptimizeOptions
from src.verify.equivalence import VerificationReport, check_optimization

# Router
router = APIRouter()


@router.post("/optimize", response_model=OptimizeResponse)
async def optimize_circuit(request: OptimizeRequest):
    """Eliminate the mid-circuit measurements of a circuit."""
    options = OptimizeOptions.from_settings(
        n_max=request.n_max,
        max_controls=request.max_controls,
        enable_theorem2=request.enable_theorem2,
        enable_basis_diagonal=request.enable_basis_diagonal,
    )
    try:
        outcome = optimize_source(request.source, options, verify=request.verify)
    except MeasureLessError as e:
        raise http_error(e)

    return OptimizeResponse(
        circuit=serialize(outcome.optimized),
        stats=outcome.stats,
        verification=outcome.verification,
    )


@router.post("/verify", response_model=VerificationReport)
async def verify_circuits(request: VerifyRequest):
    """Check that two circuits are runtime-equivalent from |0...0>."""
    try:
        original = parse(request.original)
        optimized = parse(request.optimized)
        return check_optimization(original, optimized, request.tol)
    except MeasureLessError as e:
        raise http_error(e)
