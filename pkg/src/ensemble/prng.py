import numpy as np

_U64 = 1 << 64


def shot_generator(seed: int, index: int) -> np.random.Generator:
    """
    Counter-based generator for one probabilistic gate of one shot.

    The Philox key packs the shot seed and the instruction index, so each draw
    depends only on that pair and never on the order of evaluation.

    Args:
        seed: Shot seed, an unsigned 64-bit integer
        index: Instruction index inside the circuit

    Returns:
        A fresh numpy generator
    """
    if not 0 <= seed < _U64:
        raise ValueError(f"seed {seed} is not an unsigned 64-bit integer")
    if not 0 <= index < _U64:
        raise ValueError(f"instruction index {index} out of range")
    return np.random.Generator(np.random.Philox(key=(seed << 64) | index))


def uniform(seed: int, index: int) -> float:
    return float(shot_generator(seed, index).random())
