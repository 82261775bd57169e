"""A hand-built network on which every target hears exactly three references.

References form a chain along the x axis, 8 m apart, leading to the sink at
the origin. Each cell pairs two chain nodes with a "cap" reference 9 m above
their midpoint; a cell's targets sit on that midpoint between y = 2 and 5 m.
With a 10 m radio range a target then reaches its two chain nodes and its cap
and nothing else, and targets in different cells (16 m apart) cannot hear one
another, so every cell is exactly one group.
"""

from __future__ import annotations

import numpy as np

from .config import SimConfig, validate_config
from .topology import NetworkTopology, topology_from_positions

CALIBRATION_RANGE_M = 10.0
CELL_PITCH_M = 16.0
CHAIN_SPACING_M = 8.0
DEFAULT_CELL_SIZES = (6, 2, 1, 1)


def calibration_topology(cell_sizes=DEFAULT_CELL_SIZES) -> NetworkTopology:
    n_cells = len(cell_sizes)
    chain_len = 2 * n_cells
    chain = [(CHAIN_SPACING_M * (i + 1), 0.0) for i in range(chain_len)]
    caps, targets = [], []
    for k, size in enumerate(cell_sizes):
        mid_x = CHAIN_SPACING_M * (2 * k + 1) + CHAIN_SPACING_M / 2
        caps.append((mid_x, 9.0))
        ys = np.linspace(2.0, 5.0, size) if size > 1 else [3.5]
        targets += [(mid_x, float(y)) for y in ys]
    return topology_from_positions((0.0, 0.0), chain + caps, targets, CALIBRATION_RANGE_M)


def calibration_config(seed: int = 0, **overrides) -> SimConfig:
    """Static targets, noiseless channel, default timing (360 s at f = 2 s)."""
    settings = dict(
        radio_range_m=CALIBRATION_RANGE_M,
        min_speed_mps=0.0,
        max_speed_mps=0.0,
        noise_sigma_db=0.0,
        duration_s=360.0,
        reporting_period_s=2.0,
        num_targets=sum(DEFAULT_CELL_SIZES),
        num_references=3 * len(DEFAULT_CELL_SIZES),
        seed=seed,
    )
    settings.update(overrides)
    return validate_config(settings)
