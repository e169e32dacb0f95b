import argparse
import sys
from pathlib import Path
from typing import List, Optional, TextIO

from loguru import logger
from pydantic import ValidationError
from tqdm import tqdm

from src.circuit_ir import library
from src.circuit_ir.models import Circuit
from src.circuit_ir.parser import parse
from src.circuit_ir.serializer import serialize, serialize_inline
from src.cli.stats import stats_json
from src.core.config import get_settings
from src.core.engine import optimize_circuit
from src.core.exceptions import CircuitError, MeasureLessError, ResourceLimitError
from src.core.logging import setup_logging
from src.ensemble.compiler import compile_shots
from src.ensemble.ensemble import enumerate_ensemble
from src.rewrite.optimizer import OptimizeOptions
from src.verify.equivalence import VerificationReport, check_optimization

EXIT_OK = 0
EXIT_CIRCUIT_ERROR = 1
EXIT_VERIFICATION_FAILED = 2
EXIT_RESOURCE_LIMIT = 3


def _read_circuit(path: str, max_controls: Optional[int] = None) -> Circuit:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return parse(text, max_controls=max_controls)


def _write(text: str, path: Optional[str], out: TextIO) -> None:
    if path and path != "-":
        Path(path).write_text(text + "\n")
    else:
        out.write(text + "\n")


def _options(args: argparse.Namespace) -> OptimizeOptions:
    return OptimizeOptions.from_settings(
        n_max=args.n_max,
        max_controls=args.max_controls,
        enable_theorem2=not args.no_theorem2,
        enable_basis_diagonal=not args.no_basis_diagonal,
    )


def _emit_shots(circuit: Circuit, stem: str, seed: int, count: int, out_dir: str) -> List[Path]:
    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for shot_seed, shot in tqdm(compile_shots(circuit, seed, count), total=count,
                                desc="shots", disable=count < 100, file=sys.stderr):
        target = directory / f"{stem}.shot{shot_seed}.qc"
        target.write_text(serialize(shot) + "\n")
        written.append(target)
    logger.info("wrote {} shot(s) to {}", len(written), directory)
    return written


def _verdict(report: VerificationReport, out: TextIO) -> int:
    out.write(report.model_dump_json(indent=2) + "\n")
    return EXIT_OK if report.passed else EXIT_VERIFICATION_FAILED


def cmd_optimize(args: argparse.Namespace, out: TextIO) -> int:
    options = _options(args)
    circuit = _read_circuit(args.circuit, options.qcp.max_controls)
    outcome = optimize_circuit(circuit, options, verify=args.verify)
    _write(serialize(outcome.optimized), args.output, out)
    if args.stats:
        _write(stats_json(outcome.stats, include_timing=args.timing), args.stats, out)
    if args.shots:
        _emit_shots(outcome.optimized, Path(args.circuit).stem or "circuit", args.seed, args.shots, args.out_dir)
    if outcome.verification is not None and not outcome.verification.passed:
        logger.error("optimized circuit is not equivalent to the input")
        return EXIT_VERIFICATION_FAILED
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, out: TextIO) -> int:
    original = _read_circuit(args.original)
    if args.optimized:
        optimized = _read_circuit(args.optimized)
        return _verdict(check_optimization(original, optimized, args.tol), out)
    outcome = optimize_circuit(original, _options(args))
    return _verdict(check_optimization(original, outcome.optimized, args.tol), out)


def cmd_shots(args: argparse.Namespace, out: TextIO) -> int:
    circuit = _read_circuit(args.circuit)
    stem = Path(args.circuit).stem or "circuit"
    for path in _emit_shots(circuit, stem, args.seed, args.shots, args.out_dir):
        out.write(f"{path}\n")
    return EXIT_OK


def cmd_ensemble(args: argparse.Namespace, out: TextIO) -> int:
    ensemble = enumerate_ensemble(_read_circuit(args.circuit), cap=args.cap)
    for entry in ensemble.entries:
        line = f"{entry.probability:.12g}\t{serialize_inline(entry.circuit)}"
        records = [
            " ".join(f"c{bit}={value}" for bit, value in record) for record in sorted(entry.outcomes) if record
        ]
        if records:
            line += "\t" + " | ".join(records)
        out.write(line + "\n")
    logger.info("ensemble of {} circuit(s)", len(ensemble))
    return EXIT_OK


def cmd_examples(args: argparse.Namespace, out: TextIO) -> int:
    if args.name is None:
        out.write("\n".join(library.names()) + "\n")
        return EXIT_OK
    try:
        out.write(library.source(args.name))
    except KeyError:
        logger.error("no example named {!r}", args.name)
        return EXIT_CIRCUIT_ERROR
    return EXIT_OK


def _add_optimizer_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n-max", type=int, default=None, help="largest entanglement group kept exactly")
    parser.add_argument("--max-controls", type=int, default=None, help="control limit for converted gates")
    parser.add_argument("--no-theorem2", action="store_true", help="keep measurements whose result is unread")
    parser.add_argument("--no-basis-diagonal", action="store_true",
                        help="keep measurements of basis-state mixtures")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="measureless", description="Mid-circuit measurement eliminator")
    parser.add_argument("--log-level", default=None, help="loguru level for stderr output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("optimize", help="optimize a circuit file")
    p.add_argument("circuit", help="circuit file, '-' for stdin")
    p.add_argument("-o", "--output", default=None, help="write the optimized circuit here instead of stdout")
    _add_optimizer_flags(p)
    p.add_argument("--verify", action="store_true", help="certify the result with the equivalence oracle")
    p.add_argument("--stats", default=None, metavar="PATH", help="write stats JSON to PATH, '-' for stdout")
    p.add_argument("--timing", action="store_true", help="include wall time in the stats")
    p.add_argument("--shots", type=int, default=0, help="also emit N compiled shots of the result")
    p.add_argument("--seed", type=int, default=0, help="first shot seed")
    p.add_argument("--out-dir", default=".", help="directory for shot files")
    p.set_defaults(handler=cmd_optimize)

    p = sub.add_parser("verify", help="check two circuits, or a circuit against its optimization")
    p.add_argument("original")
    p.add_argument("optimized", nargs="?", default=None)
    _add_optimizer_flags(p)
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("shots", help="compile probabilistic gates into concrete shots")
    p.add_argument("circuit")
    p.add_argument("--shots", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(handler=cmd_shots)

    p = sub.add_parser("ensemble", help="print the exact ensemble of static circuits")
    p.add_argument("circuit")
    p.add_argument("--cap", type=int, default=None)
    p.set_defaults(handler=cmd_ensemble)

    p = sub.add_parser("examples", help="list built-in circuits or print one")
    p.add_argument("name", nargs="?", default=None)
    p.set_defaults(handler=cmd_examples)
    return parser


def main(argv: Optional[List[str]] = None, out: Optional[TextIO] = None) -> int:
    """
    Run the command line.

    Args:
        argv: Arguments without the program name, defaults to sys.argv
        out: Stream for results, defaults to stdout

    Returns:
        Process exit code
    """
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level or get_settings().log_level)
    out = out or sys.stdout
    try:
        return args.handler(args, out)
    except (CircuitError, OSError) as e:
        logger.error(str(e))
        return EXIT_CIRCUIT_ERROR
    except ResourceLimitError as e:
        logger.error(str(e))
        return EXIT_RESOURCE_LIMIT
    except MeasureLessError as e:
        logger.error(str(e))
        return EXIT_CIRCUIT_ERROR
    except ValidationError as e:
        logger.error("invalid option: {}", "; ".join(error["msg"] for error in e.errors()))
        return EXIT_CIRCUIT_ERROR
    except ValueError as e:
        logger.error("invalid option: {}", e)
        return EXIT_CIRCUIT_ERROR
