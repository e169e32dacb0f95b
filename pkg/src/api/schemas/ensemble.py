from pydantic import BaseModel, Field
from typing import Dict, List, Optional


class EnsembleRequest(BaseModel):
    """Schema for an ensemble enumeration request."""
    source: str
    cap: Optional[int] = Field(default=None, ge=1)


class EnsembleEntryResponse(BaseModel):
    """Schema for one static circuit of an ensemble."""
    probability: float
    circuit: str
    outcomes: List[Dict[str, int]] = []


class EnsembleResponse(BaseModel):
    """Schema for ensemble response."""
    entries: List[EnsembleEntryResponse]


class ShotsRequest(BaseModel):
    """Schema for a shot compilation request."""
    source: str
    seed: int = Field(default=0, ge=0, lt=2 ** 64)
    count: int = Field(default=1, ge=1, le=10000)


class ShotResponse(BaseModel):
    """Schema for one compiled shot."""
    seed: int
    circuit: str


class ShotsResponse(BaseModel):
    """Schema for shots response."""
    shots: List[ShotResponse]
