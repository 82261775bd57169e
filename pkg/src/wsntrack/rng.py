"""Named random sub-streams derived from one integer seed.

Each consumer (topology, mobility, channel, loss) draws from its own stream,
so turning channel noise on does not change target trajectories.
"""

import numpy as np

STREAMS = {"topology": 0, "mobility": 1, "channel": 2, "loss": 3}


def substream(seed: int, name: str) -> np.random.Generator:
    try:
        key = STREAMS[name]
    except KeyError:
        raise ValueError(f"unknown random stream {name!r}") from None
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=int(seed), spawn_key=(key,))))
