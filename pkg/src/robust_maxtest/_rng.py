import numpy as np


def substream(seed: int, *keys: int) -> np.random.Generator:
    """Independent generator for ``keys`` under a master ``seed``.

    The mapping (seed, keys) -> stream is fixed, so results do not depend on
    how work is scheduled across threads.
    """
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.PCG64(ss))


def derive_seed(seed: int, *keys: int) -> int:
    """64-bit seed derived from a master seed and integer keys."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in keys))
    return int(ss.generate_state(1, dtype=np.uint64)[0])
