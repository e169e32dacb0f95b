from pydantic import BaseModel, Field
from typing import Optional

from src.cli.stats import StatsRecord
from src.verify.equivalence import VerificationReport


class OptimizeRequest(BaseModel):
    """Schema for an optimization request; unset fields fall back to settings."""
    source: str
    n_max: Optional[int] = Field(default=None, ge=2)
    max_controls: Optional[int] = Field(default=None, ge=1)
    enable_theorem2: bool = True
    enable_basis_diagonal: bool = True
    verify: bool = False


class OptimizeResponse(BaseModel):
    """Schema for an optimization response."""
    circuit: str
    stats: StatsRecord
    verification: Optional[VerificationReport] = None


class VerifyRequest(BaseModel):
    """Schema for an equivalence check of two circuits."""
    original: str
    optimized: str
    tol: Optional[float] = Field(default=None, gt=0)
