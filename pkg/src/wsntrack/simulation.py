"""Top-level simulation driver."""

from __future__ import annotations

import hashlib
import math

import numpy as np

from .channel import ChannelParams
from .config import SimConfig
from .energy import EnergyLedger, battery_life
from .engine import Engine, EventKind
from .metrics import MetricsCollector, MetricsReport, NodeEnergy
from .mobility import TargetState, initial_target_state, random_waypoint_step
from .protocols import ROUND_PROCEDURES, STRATEGIES, RoundContext
from .rng import substream
from .topology import NetworkTopology, TopologyError, build_grid_topology


class Simulation:
    """One replication of one strategy.

    Pass ``topology`` to run on a hand-built network instead of the default
    lattice; target start positions are then taken from it.
    """

    def __init__(self, config: SimConfig, strategy: str, topology: NetworkTopology | None = None):
        if strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {strategy!r}; expected one of {', '.join(STRATEGIES)}")
        self.config = config
        self.strategy = strategy
        self.topology = topology if topology is not None else build_grid_topology(config)

        refs = self.topology.references
        reachable = [r for r in refs if self.topology.reachable(r)]
        if refs and not reachable:
            raise TopologyError("the sink is unreachable from every reference node")
        self.unreachable = len(refs) - len(reachable)

        self.bounds = ((0.0, 0.0), (config.grid_width_m, config.grid_height_m))
        self.speed_range = (config.min_speed_mps, config.max_speed_mps)
        self.mobility_rng = substream(config.seed, "mobility")
        self.channel_rng = substream(config.seed, "channel")

        self.ledger = EnergyLedger.from_config(config, self.topology.num_nodes, exempt=(self.topology.sink,))
        self.metrics = MetricsCollector(strategy)
        self.engine = Engine(
            self.topology, self.ledger, self.metrics, config.loss_rate, substream(config.seed, "loss")
        )
        self.states: list[TargetState] = [
            initial_target_state(t, self.topology.positions[t], self.bounds, self.speed_range, self.mobility_rng)
            for t in self.topology.targets
        ]
        self.ctx = RoundContext(
            channel=ChannelParams.from_config(config),
            rng=self.channel_rng,
            bounds=self.bounds,
            threshold_fraction=config.leader_energy_threshold_fraction,
            capacity=config.aggregation_capacity,
        )
        self._digest = hashlib.sha256()

    def _schedule(self) -> None:
        cfg = self.config
        events = [(k * cfg.reporting_period_s, 1, EventKind.REPORTING_ROUND, k) for k in range(1, cfg.rounds + 1)]
        if cfg.max_speed_mps > 0:
            n_ticks = int(math.floor(cfg.duration_s / cfg.mobility_dt_s + 1e-9))
            events += [(j * cfg.mobility_dt_s, 0, EventKind.MOBILITY_TICK, j) for j in range(1, n_ticks + 1)]
        # ticks before rounds at equal times, so a round sees the moved targets
        for time, _, kind, payload in sorted(events, key=lambda e: (e[0], e[1], e[3])):
            self.engine.queue.schedule(time, kind, payload)

    def _move_targets(self) -> None:
        dt = self.config.mobility_dt_s
        self.states = [
            random_waypoint_step(st, dt, self.bounds, self.mobility_rng, self.speed_range) for st in self.states
        ]

    def _reporting_round(self, k: int) -> None:
        positions = np.array([st.true_position for st in self.states], dtype=float).reshape(-1, 2)
        self._digest.update(positions.tobytes())
        if len(self.states):
            self.topology = self.topology.with_target_positions(positions)
            self.engine.set_topology(self.topology)
        self.engine.round = k
        ROUND_PROCEDURES[self.strategy](k, self.topology, self.states, self.engine, self.ctx)
        self.metrics.close_round(k, self.ledger)

    def run(self) -> MetricsReport:
        self._schedule()
        queue = self.engine.queue
        while len(queue):
            ev = queue.pop()
            if ev.kind is EventKind.MOBILITY_TICK:
                self._move_targets()
            elif ev.kind is EventKind.REPORTING_ROUND:
                self._reporting_round(ev.payload)
            else:
                self.engine.process_hop(ev)
        return self.report()

    def report(self) -> MetricsReport:
        cfg, ledger, m = self.config, self.ledger, self.metrics
        rounds = len(m.per_round)
        consumed = ledger.consumed()
        remaining = ledger.remaining()
        energy = []
        for node, role in enumerate(self.topology.roles):
            per_round = consumed[node] / rounds if rounds else 0.0
            energy.append(
                NodeEnergy(
                    node_id=node,
                    node_class=role.value,
                    tx_count=int(ledger.tx_count[node]),
                    rx_count=int(ledger.rx_count[node]),
                    consumed_mAh=float(consumed[node]),
                    remaining_mAh=float(remaining[node]),
                    est_lifetime_s=battery_life(float(per_round), cfg.init_energy_mAh, cfg.reporting_period_s),
                )
            )
        return MetricsReport(
            strategy=self.strategy,
            seed=cfg.seed,
            rounds=rounds,
            reporting_period_s=cfg.reporting_period_s,
            init_energy_mAh=cfg.init_energy_mAh,
            per_round=list(m.per_round),
            localization=list(m.localization),
            groups=list(m.groups),
            energy=energy,
            generated=dict(m.generated),
            delivered=dict(m.delivered),
            dropped=dict(m.dropped),
            routing_errors=m.routing_errors,
            localization_failures=m.localization_failures,
            leader_fallbacks=m.leader_fallbacks,
            unreachable_nodes=self.unreachable,
            delivered_sink_hops=m.delivered_sink_hops,
            depletion_times=dict(m.depletion_times),
            trajectory_digest=self._digest.hexdigest(),
        )


def run(config: SimConfig, strategy: str, topology: NetworkTopology | None = None) -> MetricsReport:
    """Simulate ``strategy`` for ``config.rounds`` reporting rounds."""
    return Simulation(config, strategy, topology).run()
