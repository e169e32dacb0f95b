from pydantic import BaseModel
from typing import List, Optional


class CircuitSource(BaseModel):
    """Schema for a request carrying circuit text."""
    source: str


class CircuitStats(BaseModel):
    """Schema for circuit size metrics."""
    qubits: int
    clbits: int
    gates: int
    measurements: int
    prob_gates: int
    if_gates: int
    depth: int


class ViolationResponse(BaseModel):
    """Schema for a broken structural rule."""
    index: Optional[int] = None
    rule: str
    message: str

    class Config:
        from_attributes = True


class ValidationResponse(BaseModel):
    """Schema for validation response."""
    valid: bool
    violations: List[ViolationResponse] = []
    stats: Optional[CircuitStats] = None


class ExampleResponse(BaseModel):
    """Schema for a built-in example circuit."""
    name: str
    source: str
