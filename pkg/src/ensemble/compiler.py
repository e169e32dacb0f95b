from typing import Iterator, List, Tuple

from src.circuit_ir.models import Circuit, Instruction, Prob
from src.ensemble.prng import uniform


def compile_shot(circuit: Circuit, seed: int) -> Circuit:
    """
    Resolve every probabilistic gate for one shot.

    Each ``prob p G`` at index i becomes ``G`` when the uniform draw keyed by
    (seed, i) is below p and disappears otherwise. Measurements and classical
    controls are left untouched.

    Args:
        circuit: A valid circuit
        seed: Unsigned 64-bit shot seed

    Returns:
        The compiled circuit
    """
    compiled: List[Instruction] = []
    for index, ins in enumerate(circuit.instructions):
        if isinstance(ins, Prob):
            if uniform(seed, index) < ins.p:
                compiled.append(ins.base)
            continue
        compiled.append(ins)
    return circuit.with_instructions(compiled)


def compile_shots(circuit: Circuit, seed: int, count: int) -> Iterator[Tuple[int, Circuit]]:
    """
    Compile ``count`` shots with consecutive seeds starting at ``seed``.

    Seeds past 2^64 - 1 wrap to 0.

    Raises:
        ValueError: ``seed`` is not an unsigned 64-bit integer
    """
    if not 0 <= seed < 1 << 64:
        raise ValueError(f"seed {seed} is not an unsigned 64-bit integer")
    for offset in range(count):
        shot_seed = (seed + offset) % (1 << 64)
        yield shot_seed, compile_shot(circuit, shot_seed)
