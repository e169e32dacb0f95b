import time
from dataclasses import dataclass
from typing import Optional

from loguru import logger

from src.circuit_ir.models import Circuit
from src.circuit_ir.parser import parse
from src.cli.stats import StatsRecord, build_stats
from src.core.config import get_settings
from src.rewrite.optimizer import OptimizeOptions, RewriteReport, optimize
from src.verify.equivalence import VerificationReport, check_optimization


@dataclass
class OptimizationOutcome:
    """Everything one optimization run produces."""
    original: Circuit
    optimized: Circuit
    report: RewriteReport
    stats: StatsRecord
    verification: Optional[VerificationReport] = None


def optimize_circuit(circuit: Circuit, options: Optional[OptimizeOptions] = None,
                     verify: bool = False) -> OptimizationOutcome:
    """
    Optimize a parsed circuit and optionally certify the result.

    Args:
        circuit: The input circuit
        options: Pipeline switches, defaults to settings
        verify: Run the equivalence oracle when the circuit is small enough

    Returns:
        The optimization outcome
    """
    options = options or OptimizeOptions.from_settings()
    started = time.perf_counter()
    optimized, report = optimize(circuit, options)
    wall_time_ms = (time.perf_counter() - started) * 1000.0
    stats = build_stats(circuit, optimized, report, wall_time_ms)

    verification = None
    if verify:
        limit = get_settings().max_dynamic_qubits
        if circuit.n_qubits <= limit:
            verification = check_optimization(circuit, optimized)
        else:
            logger.warning("verification skipped: {} qubits exceeds {}", circuit.n_qubits, limit)
    return OptimizationOutcome(circuit, optimized, report, stats, verification)


def optimize_source(source: str, options: Optional[OptimizeOptions] = None,
                    verify: bool = False) -> OptimizationOutcome:
    """Parse circuit text, then optimize it as ``optimize_circuit`` does."""
    options = options or OptimizeOptions.from_settings()
    circuit = parse(source, max_controls=options.qcp.max_controls)
    return optimize_circuit(circuit, options, verify)
