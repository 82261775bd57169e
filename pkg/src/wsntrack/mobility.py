"""Random-waypoint motion for mobile targets."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field

import numpy as np


@dataclass
class TargetState:
    id: int
    true_position: tuple[float, float]
    waypoint: tuple[float, float]
    speed: float
    estimated_position: tuple[float, float] | None = None
    covering_references: list[int] = field(default_factory=list)

    def __post_init__(self):
        if self.speed < 0:
            raise ValueError("speed must be non-negative")


def _draw_waypoint(bounds, rng: np.random.Generator) -> tuple[float, float]:
    (x0, y0), (x1, y1) = bounds
    return float(rng.uniform(x0, x1)), float(rng.uniform(y0, y1))


def _draw_speed(speed_range, rng: np.random.Generator) -> float:
    lo, hi = speed_range
    return float(lo) if hi <= lo else float(rng.uniform(lo, hi))


def initial_target_state(target_id: int, position, bounds, speed_range, rng: np.random.Generator) -> TargetState:
    pos = (float(position[0]), float(position[1]))
    return TargetState(target_id, pos, _draw_waypoint(bounds, rng), _draw_speed(speed_range, rng))


def random_waypoint_step(
    state: TargetState,
    dt: float,
    bounds,
    rng: np.random.Generator,
    speed_range: tuple[float, float] = (0.5, 1.5),
) -> TargetState:
    """Advance one target by ``dt`` seconds.

    ``bounds`` is ``((xmin, ymin), (xmax, ymax))``. A target that reaches its
    waypoint stops there for the rest of the step and draws a fresh waypoint
    and speed.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    if state.speed == 0:
        return dataclasses.replace(state, covering_references=list(state.covering_references))

    x, y = state.true_position
    wx, wy = state.waypoint
    remaining = math.hypot(wx - x, wy - y)
    step = state.speed * dt
    if step < remaining:
        frac = step / remaining
        new_pos = (x + (wx - x) * frac, y + (wy - y) * frac)
        return dataclasses.replace(state, true_position=new_pos, covering_references=list(state.covering_references))

    (x0, y0), (x1, y1) = bounds
    arrived = (min(max(wx, x0), x1), min(max(wy, y0), y1))
    return dataclasses.replace(
        state,
        true_position=arrived,
        waypoint=_draw_waypoint(bounds, rng),
        speed=_draw_speed(speed_range, rng),
        covering_references=list(state.covering_references),
    )
