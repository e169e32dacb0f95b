from enum import Enum
from typing import List, Optional, Tuple

from loguru import logger
from pydantic import BaseModel, Field

from src.circuit_ir.models import Circuit, Measure
from src.core.config import Settings, get_settings
from src.purity.purity_test import factor_qubit, purity_test
from src.qcp.analysis import AnalysisState, GroupKind, QcpConfig
from src.qcp.propagation import ConstantPropagator
from src.rewrite.rules import (
    EditPlan, apply_plan, control_count, plan_basis_diagonal, plan_deterministic, plan_theorem1,
    plan_theorem2,
)
from src.rewrite.uses import Ineligible, UseSet, eligible_uses


class OptimizeOptions(BaseModel):
    """Switches for the measurement elimination pipeline."""
    qcp: QcpConfig = Field(default_factory=QcpConfig)
    enable_theorem2: bool = True
    enable_basis_diagonal: bool = True

    @classmethod
    def from_settings(cls, settings: Optional[Settings] = None, n_max: Optional[int] = None,
                      max_controls: Optional[int] = None, **flags) -> "OptimizeOptions":
        qcp = QcpConfig.from_settings(settings or get_settings(), n_max=n_max, max_controls=max_controls)
        return cls(qcp=qcp, **flags)


class RewriteRule(str, Enum):
    """Which rewrite eliminated a measurement."""
    THEOREM1 = "theorem1"
    THEOREM2 = "theorem2"
    BASIS_DIAGONAL = "basis_diagonal"
    DETERMINISTIC = "deterministic"


class Decision(str, Enum):
    REWRITTEN = "rewritten"
    SKIPPED = "skipped"


class MeasurementRecord(BaseModel):
    """What happened to one measurement of the input circuit."""
    index: int
    qubit: int
    bit: int
    decision: Decision
    rule: Optional[RewriteRule] = None
    reason: Optional[str] = None
    p_zero: Optional[float] = None
    uses: List[int] = Field(default_factory=list)


class RewriteReport(BaseModel):
    records: List[MeasurementRecord] = Field(default_factory=list)
    measurements_before: int = 0
    measurements_after: int = 0
    prob_gates_added: int = 0
    ifgates_converted: int = 0

    @property
    def rewritten(self) -> List[MeasurementRecord]:
        return [r for r in self.records if r.decision is Decision.REWRITTEN]

    @property
    def skipped(self) -> List[MeasurementRecord]:
        return [r for r in self.records if r.decision is Decision.SKIPPED]


def _exceeds_controls(circuit: Circuit, uses: UseSet, max_controls: int) -> bool:
    return any(control_count(circuit[j].base) + 1 > max_controls for j in uses.indices)


def _decide(circuit: Circuit, index: int, pre: AnalysisState,
            options: OptimizeOptions) -> Tuple[MeasurementRecord, EditPlan]:
    """Pick the rewrite for the measurement at ``index`` from its pre-state."""
    measure: Measure = circuit[index]
    record = MeasurementRecord(index=index, qubit=measure.qubit, bit=measure.bit, decision=Decision.SKIPPED)
    group = pre.group(measure.qubit)

    uses = eligible_uses(circuit, index)
    if isinstance(uses, Ineligible):
        record.reason = uses.reason
        return record, {}
    record.uses = list(uses.indices)
    if group.kind is GroupKind.TOP:
        record.reason = "top"
        return record, {}

    max_controls = options.qcp.max_controls
    if group.kind is GroupKind.BASIS_DIAGONAL:
        if not options.enable_basis_diagonal:
            record.reason = "basis-diagonal rewrite disabled"
            return record, {}
        if _exceeds_controls(circuit, uses, max_controls):
            record.reason = "control limit"
            return record, {}
        record.decision, record.rule = Decision.REWRITTEN, RewriteRule.BASIS_DIAGONAL
        return record, plan_basis_diagonal(circuit, index, uses)

    state = group.state
    position = state.position(measure.qubit)
    if not purity_test(state, position):
        record.reason = "purity failed"
        return record, {}
    qubit_state = factor_qubit(state, position).qubit_state
    p_zero = qubit_state.p_zero
    record.p_zero = p_zero
    prob_tol = options.qcp.prob_tol

    if p_zero >= 1.0 - prob_tol or p_zero <= prob_tol:
        outcome = 0 if p_zero >= 0.5 else 1
        record.decision, record.rule = Decision.REWRITTEN, RewriteRule.DETERMINISTIC
        return record, plan_deterministic(circuit, index, uses, outcome)
    if len(uses):
        if _exceeds_controls(circuit, uses, max_controls):
            record.reason = "control limit"
            return record, {}
        record.decision, record.rule = Decision.REWRITTEN, RewriteRule.THEOREM1
        return record, plan_theorem1(circuit, index, uses, qubit_state, prob_tol)
    if not options.enable_theorem2:
        record.reason = "theorem2 disabled"
        return record, {}
    record.decision, record.rule = Decision.REWRITTEN, RewriteRule.THEOREM2
    return record, plan_theorem2(circuit, index, qubit_state, prob_tol)


def optimize(circuit: Circuit, options: Optional[OptimizeOptions] = None) -> Tuple[Circuit, RewriteReport]:
    """
    Eliminate every mid-circuit measurement the propagated constants allow.

    Constant propagation runs once; each measurement is then decided from the
    abstract state just before it. The propagation already models the state a
    rewrite leaves behind (a quantum control on a basis-state qubit behaves like
    an unknown classical condition), so a single trace serves every decision.
    All edits are collected and applied in one pass.

    Args:
        circuit: A valid circuit
        options: Pipeline switches, defaults to settings

    Returns:
        The optimized circuit and the per-measurement report
    """
    options = options or OptimizeOptions.from_settings()
    propagation = ConstantPropagator(options.qcp).propagate(circuit)
    simplified = propagation.circuit

    report = RewriteReport(measurements_before=circuit.count_measurements())
    plan: EditPlan = {}
    for index, ins in enumerate(simplified.instructions):
        if not isinstance(ins, Measure):
            continue
        record, edits = _decide(simplified, index, propagation.trace[index], options)
        plan.update(edits)
        if record.rule is RewriteRule.THEOREM1:
            report.prob_gates_added += 1
            report.ifgates_converted += len(record.uses)
        elif record.rule is RewriteRule.THEOREM2:
            report.prob_gates_added += 1
        elif record.rule is RewriteRule.BASIS_DIAGONAL:
            report.ifgates_converted += len(record.uses)
        # report positions in the input circuit
        record.index = propagation.origins[index]
        record.uses = [propagation.origins[j] for j in record.uses]
        if record.decision is Decision.SKIPPED:
            logger.debug("measurement {} skipped: {}", record.index, record.reason)
        report.records.append(record)

    optimized = apply_plan(simplified, plan)
    report.measurements_after = optimized.count_measurements()
    logger.info(
        "optimized: measurements {} -> {}, {} prob gate(s) added, {} classical control(s) converted",
        report.measurements_before, report.measurements_after, report.prob_gates_added, report.ifgates_converted,
    )
    return optimized, report
