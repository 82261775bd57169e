"""Node roster, grid layout, radio connectivity and hop counts to the sink."""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .config import SimConfig
from .rng import substream

UNREACHABLE = -1


class TopologyError(RuntimeError):
    """The network cannot be built or cannot reach the sink."""


class NodeRole(enum.Enum):
    SINK = "sink"
    REFERENCE = "reference"
    TARGET = "target"


@dataclass(frozen=True, eq=False)
class NetworkTopology:
    """Immutable snapshot of the network.

    Node ids are dense: the sink is 0, references follow, then targets.
    ``hops_to_sink`` holds ``UNREACHABLE`` (-1) for nodes with no path.
    Targets are leaves for routing: they can originate or receive traffic
    but never relay it, so moving targets never alter backbone routes.
    """

    roles: tuple[NodeRole, ...]
    positions: np.ndarray
    radio_range_m: float
    adjacency: tuple[frozenset[int], ...] = field(repr=False)
    hops_to_sink: np.ndarray = field(repr=False)

    @property
    def num_nodes(self) -> int:
        return len(self.roles)

    @property
    def sink(self) -> int:
        return 0

    @property
    def references(self) -> list[int]:
        return [i for i, r in enumerate(self.roles) if r is NodeRole.REFERENCE]

    @property
    def targets(self) -> list[int]:
        return [i for i, r in enumerate(self.roles) if r is NodeRole.TARGET]

    def is_relay(self, node: int) -> bool:
        return self.roles[node] is not NodeRole.TARGET

    def reachable(self, node: int) -> bool:
        return self.hops_to_sink[node] != UNREACHABLE

    def distance(self, a: int, b: int) -> float:
        return math.dist(self.positions[a], self.positions[b])

    def with_target_positions(self, target_positions) -> "NetworkTopology":
        """Return a copy with targets moved; backbone nodes keep their places."""
        pos = self.positions.copy()
        tids = self.targets
        pos[tids] = np.asarray(target_positions, dtype=float).reshape(len(tids), 2)
        return _assemble(self.roles, pos, self.radio_range_m)


def build_adjacency(positions: np.ndarray, radio_range_m: float) -> tuple[frozenset[int], ...]:
    pos = np.asarray(positions, dtype=float)
    diff = pos[:, None, :] - pos[None, :, :]
    dist = np.sqrt((diff**2).sum(axis=-1))
    within = dist <= radio_range_m
    np.fill_diagonal(within, False)
    return tuple(frozenset(np.flatnonzero(row).tolist()) for row in within)


def hop_counts_to_sink(topology: NetworkTopology) -> np.ndarray:
    """Breadth-first hop counts from the sink; targets are reached but never expanded."""
    return _bfs(topology.roles, topology.adjacency, topology.sink)


def _bfs(roles, adjacency, origin: int) -> np.ndarray:
    hops = np.full(len(roles), UNREACHABLE, dtype=np.int64)
    hops[origin] = 0
    queue = deque([origin])
    while queue:
        u = queue.popleft()
        if u != origin and roles[u] is NodeRole.TARGET:
            continue
        for v in sorted(adjacency[u]):
            if hops[v] == UNREACHABLE:
                hops[v] = hops[u] + 1
                queue.append(v)
    return hops


def _assemble(roles, positions, radio_range_m) -> NetworkTopology:
    roles = tuple(roles)
    positions = np.asarray(positions, dtype=float)
    positions.setflags(write=False)
    adjacency = build_adjacency(positions, radio_range_m)
    hops = _bfs(roles, adjacency, 0)
    hops.setflags(write=False)
    return NetworkTopology(roles, positions, float(radio_range_m), adjacency, hops)


def topology_from_positions(sink, references, targets=(), radio_range_m: float = 16.0) -> NetworkTopology:
    """Assemble a topology from explicit coordinates."""
    refs = np.asarray(references, dtype=float).reshape(-1, 2)
    tgts = np.asarray(targets, dtype=float).reshape(-1, 2)
    positions = np.vstack([np.asarray(sink, dtype=float).reshape(1, 2), refs, tgts])
    roles = [NodeRole.SINK] + [NodeRole.REFERENCE] * len(refs) + [NodeRole.TARGET] * len(tgts)
    return _assemble(roles, positions, radio_range_m)


def lattice_shape(count: int, width: float, height: float) -> tuple[int, int]:
    """Factor ``count`` into (cols, rows) with cols/rows closest to width/height."""
    aspect = width / height
    best = None
    for rows in range(1, count + 1):
        if count % rows:
            continue
        cols = count // rows
        score = abs(math.log(cols / rows) - math.log(aspect))
        if best is None or score < best[0] - 1e-12:
            best = (score, cols, rows)
    return best[1], best[2]


def lattice_positions(count: int, width: float, height: float) -> np.ndarray:
    if not (width > 0 and height > 0):
        raise TopologyError(f"grid {width}x{height} m leaves no room for references")
    cols, rows = lattice_shape(count, width, height)
    xs = np.array([width / 2]) if cols == 1 else np.linspace(0.0, width, cols)
    ys = np.array([height / 2]) if rows == 1 else np.linspace(0.0, height, rows)
    if (cols > 1 and not np.all(np.diff(xs) > 0)) or (rows > 1 and not np.all(np.diff(ys) > 0)):
        raise TopologyError(f"grid {width}x{height} m too small for {count} references")
    # row-major from the (0, 0) corner
    return np.array([(x, y) for y in ys for x in xs], dtype=float)


def build_grid_topology(config: SimConfig) -> NetworkTopology:
    """References on a regular lattice, sink at a corner, targets uniform at random."""
    refs = lattice_positions(config.num_references, config.grid_width_m, config.grid_height_m)
    rng = substream(config.seed, "topology")
    targets = np.column_stack(
        [
            rng.uniform(0.0, config.grid_width_m, config.num_targets),
            rng.uniform(0.0, config.grid_height_m, config.num_targets),
        ]
    )
    return topology_from_positions(config.sink_position, refs, targets, config.radio_range_m)
