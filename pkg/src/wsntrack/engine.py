"""Event queue, shortest-path routing and hop-by-hop packet delivery."""

from __future__ import annotations

import enum
import heapq
import itertools
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .energy import Direction, EnergyLedger
from .metrics import MessageKind, MetricsCollector
from .topology import UNREACHABLE, NetworkTopology, _bfs


class RoutingError(RuntimeError):
    """No relay path exists between two nodes."""


class EventKind(enum.Enum):
    MOBILITY_TICK = "mobility_tick"
    REPORTING_ROUND = "reporting_round"
    PACKET_HOP = "packet_hop"


@dataclass(order=True)
class Event:
    time: float
    seq: int
    kind: EventKind = field(compare=False)
    payload: Any = field(default=None, compare=False)


class EventQueue:
    """Min-heap of events; equal timestamps run in insertion order."""

    def __init__(self):
        self._heap: list[Event] = []
        self._seq = itertools.count()
        self.clock = 0.0

    def __len__(self) -> int:
        return len(self._heap)

    def schedule(self, time: float, kind: EventKind, payload: Any = None) -> Event:
        if time < self.clock:
            raise ValueError(f"cannot schedule at t={time} before clock {self.clock}")
        ev = Event(time, next(self._seq), kind, payload)
        heapq.heappush(self._heap, ev)
        return ev

    def peek(self) -> Event | None:
        return self._heap[0] if self._heap else None

    def pop(self) -> Event:
        ev = heapq.heappop(self._heap)
        self.clock = ev.time
        return ev


@dataclass
class MessageRecord:
    kind: MessageKind
    src: int
    dst: int
    hop_path: list[int]
    round: int
    payload_locations: int = 1
    payload: tuple = ()

    def __post_init__(self):
        if not self.hop_path or self.hop_path[0] != self.src or self.hop_path[-1] != self.dst:
            raise ValueError("hop_path must start at src and end at dst")
        if self.kind is MessageKind.GLOBAL_AGGREGATE and self.payload_locations < 1:
            raise ValueError("aggregate messages carry at least one location")

    @property
    def hops(self) -> int:
        return len(self.hop_path) - 1


def route(src: int, dst: int, topology: NetworkTopology) -> list[int]:
    """Shortest relay path from ``src`` to ``dst``.

    Only the sink and references relay. Among equal-length paths the one
    whose first differing hop has the lower id wins.
    """
    if src == dst:
        return [src]
    if dst in topology.adjacency[src]:
        return [src, dst]
    if dst == topology.sink:
        dist = topology.hops_to_sink
    else:
        dist = _bfs(topology.roles, topology.adjacency, dst)
    if dist[src] == UNREACHABLE:
        raise RoutingError(f"no path from {src} to {dst}")
    path = [src]
    u = src
    while u != dst:
        step = dist[u] - 1
        u = min(v for v in topology.adjacency[u] if dist[v] == step and (v == dst or topology.is_relay(v)))
        path.append(u)
    return path


class HopOutcome(enum.Enum):
    OK = "ok"
    DEPLETED = "depleted"
    LOST = "lost"


def traverse_hop(u: int, v: int, ledger: EnergyLedger, lost: bool = False) -> HopOutcome:
    """Charge one hop u -> v. A depleted endpoint blocks the hop before any charge."""
    if ledger.is_depleted(u) or ledger.is_depleted(v):
        ledger.depleted_flag[u if ledger.is_depleted(u) else v] = True
        return HopOutcome.DEPLETED
    ledger.charge(u, Direction.TX)
    if lost:
        return HopOutcome.LOST
    ledger.charge(v, Direction.RX)
    return HopOutcome.OK


def _check_path(message: MessageRecord, topology: NetworkTopology) -> None:
    for u, v in zip(message.hop_path, message.hop_path[1:]):
        if v not in topology.adjacency[u]:
            raise ValueError(f"hop {u}->{v} is not a radio link")


def deliver(
    message: MessageRecord,
    topology: NetworkTopology,
    ledger: EnergyLedger,
    metrics: MetricsCollector,
    loss_rate: float = 0.0,
    rng: np.random.Generator | None = None,
) -> bool:
    """Push ``message`` along its whole path at once; returns True on arrival."""
    _check_path(message, topology)
    metrics.record_sent(message.kind)
    for u, v in zip(message.hop_path, message.hop_path[1:]):
        lost = loss_rate > 0 and rng is not None and rng.random() < loss_rate
        if traverse_hop(u, v, ledger, lost) is not HopOutcome.OK:
            metrics.record_drop(message.kind)
            return False
    metrics.record_delivered(message.kind, message.hops)
    return True


class Engine:
    """Discrete-event core shared by the protocol round procedures.

    Packets are sent as chains of PACKET_HOP events stamped with the current
    clock; :meth:`drain` runs them so a protocol phase can inspect what got
    through before starting the next phase.
    """

    def __init__(
        self,
        topology: NetworkTopology,
        ledger: EnergyLedger,
        metrics: MetricsCollector,
        loss_rate: float = 0.0,
        loss_rng: np.random.Generator | None = None,
    ):
        self.topology = topology
        self.ledger = ledger
        self.metrics = metrics
        self.loss_rate = loss_rate
        self.loss_rng = loss_rng
        self.queue = EventQueue()
        self.round = 0
        self._sink_routes: dict[int, list[int]] = {}

    @property
    def now(self) -> float:
        return self.queue.clock

    def set_topology(self, topology: NetworkTopology) -> None:
        self.topology = topology

    def route(self, src: int, dst: int) -> list[int]:
        # backbone routes to the sink never change; cache them
        if dst == self.topology.sink and self.topology.is_relay(src):
            cached = self._sink_routes.get(src)
            if cached is None:
                cached = self._sink_routes[src] = route(src, dst, self.topology)
            return cached
        return route(src, dst, self.topology)

    def message(self, kind: MessageKind, src: int, dst: int, **kw) -> MessageRecord | None:
        """Build a routed message, or count a routing error and return None."""
        try:
            path = self.route(src, dst)
        except RoutingError:
            self.metrics.record_routing_error(kind)
            return None
        return MessageRecord(kind, src, dst, list(path), self.round, **kw)

    def send(self, message: MessageRecord, on_delivered: Callable[[MessageRecord], None] | None = None) -> None:
        _check_path(message, self.topology)
        self.metrics.record_sent(message.kind)
        if message.hops == 0:
            self._arrive(message, on_delivered)
            return
        self.queue.schedule(self.now, EventKind.PACKET_HOP, (message, 0, on_delivered))

    def _arrive(self, message, on_delivered) -> None:
        self.metrics.record_delivered(message.kind, message.hops)
        if on_delivered is not None:
            on_delivered(message)

    def process_hop(self, event: Event) -> None:
        message, i, on_delivered = event.payload
        u, v = message.hop_path[i], message.hop_path[i + 1]
        lost = self.loss_rate > 0 and self.loss_rng is not None and self.loss_rng.random() < self.loss_rate
        outcome = traverse_hop(u, v, self.ledger, lost)
        for node in (u, v):
            if node not in self.metrics.depletion_times and self.ledger.is_depleted(node):
                self.metrics.depletion_times[node] = self.now
        if outcome is not HopOutcome.OK:
            self.metrics.record_drop(message.kind)
        elif i + 1 == message.hops:
            self._arrive(message, on_delivered)
        else:
            self.queue.schedule(self.now, EventKind.PACKET_HOP, (message, i + 1, on_delivered))

    def drain(self) -> None:
        """Run every pending packet hop due at the current time."""
        while True:
            head = self.queue.peek()
            if head is None or head.kind is not EventKind.PACKET_HOP or head.time > self.now:
                return
            self.process_hop(self.queue.pop())

    def transmit(self, message: MessageRecord) -> bool:
        """Send one message and run it to completion; True if it arrived."""
        arrived = []
        self.send(message, arrived.append)
        self.drain()
        return bool(arrived)
