from typing import List, Optional

from pydantic import BaseModel

from src.circuit_ir.models import Circuit
from src.rewrite.optimizer import MeasurementRecord, RewriteReport


class StatsRecord(BaseModel):
    """
    Statistics of one optimization run, written as JSON by ``optimize --stats``.

    Field names are part of the output format and must stay stable.
    """
    qubits: int
    clbits: int
    gates_before: int
    gates_after: int
    measurements_before: int
    measurements_after: int
    prob_gates_added: int
    ifgates_converted: int
    depth_before: int
    depth_after: int
    decisions: List[MeasurementRecord]
    wall_time_ms: Optional[float] = None

    class Config:
        from_attributes = True


def build_stats(original: Circuit, optimized: Circuit, report: RewriteReport,
                wall_time_ms: Optional[float] = None) -> StatsRecord:
    return StatsRecord(
        qubits=original.n_qubits,
        clbits=original.n_clbits,
        gates_before=original.gate_count,
        gates_after=optimized.gate_count,
        measurements_before=report.measurements_before,
        measurements_after=report.measurements_after,
        prob_gates_added=report.prob_gates_added,
        ifgates_converted=report.ifgates_converted,
        depth_before=original.depth,
        depth_after=optimized.depth,
        decisions=report.records,
        wall_time_ms=wall_time_ms,
    )


def stats_json(stats: StatsRecord, include_timing: bool = False) -> str:
    """Render stats as indented JSON; wall time is left out unless asked for."""
    exclude = None if include_timing else {"wall_time_ms"}
    return stats.model_dump_json(indent=2, exclude=exclude)
