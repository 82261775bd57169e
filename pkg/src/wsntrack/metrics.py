"""Counters collected during a run and the final report."""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass, field

from .energy import EnergyLedger, battery_life


class MessageKind(enum.Enum):
    LOCAL_EXCHANGE = "local_exchange"
    READING = "reading"
    LOCATION_REPORT = "location_report"
    GROUP_REPORT = "group_report"
    GLOBAL_AGGREGATE = "global_aggregate"

    @property
    def sink_bound(self) -> bool:
        return self in SINK_BOUND


SINK_BOUND = frozenset({MessageKind.READING, MessageKind.LOCATION_REPORT, MessageKind.GLOBAL_AGGREGATE})


@dataclass(frozen=True)
class RoundMetrics:
    round: int
    strategy: str
    local_msgs: int
    group_msgs: int
    global_msgs: int
    sink_msgs: int
    drops: int
    energy_consumed_total: float


@dataclass(frozen=True)
class LocalizationRecord:
    round: int
    target_id: int
    error_m: float | None  # None marks a failed localization


@dataclass(frozen=True)
class GroupRecord:
    round: int
    leader_id: int
    member_ids: tuple[int, ...]


@dataclass(frozen=True)
class NodeEnergy:
    node_id: int
    node_class: str
    tx_count: int
    rx_count: int
    consumed_mAh: float
    remaining_mAh: float
    est_lifetime_s: float


@dataclass
class MetricsReport:
    strategy: str
    seed: int
    rounds: int
    reporting_period_s: float
    init_energy_mAh: float
    per_round: list[RoundMetrics] = field(default_factory=list)
    localization: list[LocalizationRecord] = field(default_factory=list)
    groups: list[GroupRecord] = field(default_factory=list)
    energy: list[NodeEnergy] = field(default_factory=list)
    generated: dict[MessageKind, int] = field(default_factory=dict)
    delivered: dict[MessageKind, int] = field(default_factory=dict)
    dropped: dict[MessageKind, int] = field(default_factory=dict)
    routing_errors: int = 0
    localization_failures: int = 0
    leader_fallbacks: int = 0
    unreachable_nodes: int = 0
    delivered_sink_hops: int = 0
    depletion_times: dict[int, float] = field(default_factory=dict)
    trajectory_digest: str = ""

    # -- message totals ---------------------------------------------------
    @property
    def local_msgs(self) -> int:
        return self.generated.get(MessageKind.LOCAL_EXCHANGE, 0)

    @property
    def group_msgs(self) -> int:
        return self.generated.get(MessageKind.GROUP_REPORT, 0)

    @property
    def sink_msgs(self) -> int:
        """Sink-bound messages that actually arrived at the sink."""
        return sum(self.delivered.get(k, 0) for k in SINK_BOUND)

    @property
    def drops(self) -> int:
        return sum(self.dropped.values())

    @property
    def mean_hops(self) -> float:
        """Average path length of sink-bound messages delivered."""
        n = self.sink_msgs
        return self.delivered_sink_hops / n if n else math.nan

    # -- energy -----------------------------------------------------------
    @property
    def energy_consumed_total(self) -> float:
        return sum(e.consumed_mAh for e in self.energy)

    def _class_rows(self, node_class: str) -> list[NodeEnergy]:
        return [e for e in self.energy if e.node_class == node_class]

    def mean_consumption(self, node_class: str) -> float:
        rows = self._class_rows(node_class)
        return sum(e.consumed_mAh for e in rows) / len(rows) if rows else 0.0

    def mean_battery_life(self, node_class: str) -> float:
        """Lifetime of an average node of ``node_class``, from its mean drain per round."""
        if self.rounds == 0:
            return math.inf
        per_round = self.mean_consumption(node_class) / self.rounds
        return battery_life(per_round, self.init_energy_mAh, self.reporting_period_s)

    @property
    def localization_errors(self) -> list[float]:
        return [r.error_m for r in self.localization if r.error_m is not None]


class MetricsCollector:
    """Mutable counters the engine updates while a run is in progress."""

    def __init__(self, strategy: str):
        self.strategy = strategy
        self.generated: Counter = Counter()
        self.delivered: Counter = Counter()
        self.dropped: Counter = Counter()
        self.round_generated: Counter = Counter()
        self.round_delivered: Counter = Counter()
        self.round_drops = 0
        self.routing_errors = 0
        self.localization_failures = 0
        self.leader_fallbacks = 0
        self.delivered_sink_hops = 0
        self.per_round: list[RoundMetrics] = []
        self.localization: list[LocalizationRecord] = []
        self.groups: list[GroupRecord] = []
        self.depletion_times: dict[int, float] = {}

    def record_sent(self, kind: MessageKind) -> None:
        self.generated[kind] += 1
        self.round_generated[kind] += 1

    def record_delivered(self, kind: MessageKind, hops: int) -> None:
        self.delivered[kind] += 1
        self.round_delivered[kind] += 1
        if kind.sink_bound:
            self.delivered_sink_hops += hops

    def record_drop(self, kind: MessageKind) -> None:
        self.dropped[kind] += 1
        self.round_drops += 1

    def record_routing_error(self, kind: MessageKind) -> None:
        self.routing_errors += 1
        self.record_drop(kind)

    def record_localization(self, round_index: int, target_id: int, error_m: float | None) -> None:
        self.localization.append(LocalizationRecord(round_index, target_id, error_m))
        if error_m is None:
            self.localization_failures += 1

    def close_round(self, round_index: int, ledger: EnergyLedger) -> RoundMetrics:
        g, d = self.round_generated, self.round_delivered
        row = RoundMetrics(
            round=round_index,
            strategy=self.strategy,
            local_msgs=g[MessageKind.LOCAL_EXCHANGE],
            group_msgs=g[MessageKind.GROUP_REPORT],
            global_msgs=sum(g[k] for k in SINK_BOUND),
            sink_msgs=sum(d[k] for k in SINK_BOUND),
            drops=self.round_drops,
            energy_consumed_total=float(ledger.consumed().sum()),
        )
        self.per_round.append(row)
        self.round_generated = Counter()
        self.round_delivered = Counter()
        self.round_drops = 0
        return row
