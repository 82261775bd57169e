"""Per-round procedures for the three tracking strategies."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .channel import ChannelParams, distance_from_rss, rss_at_distance
from .energy import EnergyLedger
from .engine import Engine, MessageRecord
from .localization import DegenerateGeometryError, covering_references, localize_target, trilaterate
from .metrics import GroupRecord, MessageKind
from .mobility import TargetState
from .topology import UNREACHABLE, NetworkTopology

STRATEGIES = ("centralized", "decentralized", "improved")


@dataclass(frozen=True)
class Group:
    leader_id: int
    member_ids: tuple[int, ...]  # includes the leader, ascending

    @property
    def size(self) -> int:
        return len(self.member_ids)


@dataclass(frozen=True)
class GroupAssignment:
    groups: tuple[Group, ...]
    round: int = 0
    fallback_leaders: tuple[int, ...] = ()

    def leader_of(self, target_id: int) -> int:
        for g in self.groups:
            if target_id in g.member_ids:
                return g.leader_id
        raise KeyError(target_id)


@dataclass
class RoundContext:
    """What a round procedure needs besides topology and target states."""

    channel: ChannelParams
    rng: object  # channel-noise generator
    bounds: tuple
    threshold_fraction: float
    capacity: int


def _leader_key(node: int, hops, ledger: EnergyLedger):
    return (hops[node], -ledger.remaining(node), node)


def elect_leader(candidates: Iterable[int], hops, ledger: EnergyLedger, threshold: float) -> int:
    """Pick the candidate with fewest hops to the sink, then most energy, then lowest id.

    Only candidates holding at least ``threshold * init`` mAh are eligible; if
    none qualifies the same ordering is applied to all of them.
    """
    pool = list(candidates)
    if not pool:
        raise ValueError("cannot elect a leader from an empty candidate set")
    floor = threshold * ledger.init_mAh
    eligible = [c for c in pool if ledger.remaining(c) >= floor]
    return min(eligible or pool, key=lambda c: _leader_key(c, hops, ledger))


def form_groups(targets: Iterable[int], topology: NetworkTopology, ledger: EnergyLedger, threshold: float, round_index: int = 0) -> GroupAssignment:
    """Greedy grouping: elect a leader among the ungrouped, absorb everyone in its range, repeat."""
    hops = topology.hops_to_sink
    ungrouped = set(targets)
    floor = threshold * ledger.init_mAh
    groups, fallbacks = [], []
    while ungrouped:
        leader = elect_leader(sorted(ungrouped), hops, ledger, threshold)
        if ledger.remaining(leader) < floor:
            fallbacks.append(leader)
        members = {leader} | {t for t in ungrouped if t in topology.adjacency[leader]}
        ungrouped -= members
        groups.append(Group(leader, tuple(sorted(members))))
    return GroupAssignment(tuple(groups), round_index, tuple(fallbacks))


def aggregate(locations: Sequence, capacity: int) -> list[list]:
    """Split ``locations`` (already in member-id order) into packets of at most ``capacity``."""
    if capacity < 1:
        raise ValueError("capacity must be >= 1")
    locs = list(locations)
    return [locs[i : i + capacity] for i in range(0, len(locs), capacity)]


# -- round procedures -----------------------------------------------------

def _localization_error(est, truth) -> float | None:
    return None if est is None else math.dist(est, truth)


def _self_localize(round_index, topology, states: Sequence[TargetState], engine: Engine, ctx: RoundContext):
    """Every target samples its covering references; returns ids that localized."""
    localized = []
    for st in states:
        def exchange(ref, _tid=st.id):
            msg = engine.message(MessageKind.LOCAL_EXCHANGE, ref, _tid)
            return msg is not None and engine.transmit(msg)

        est = localize_target(st, topology, ctx.channel, ctx.rng, bounds=ctx.bounds, exchange=exchange)
        engine.metrics.record_localization(round_index, st.id, _localization_error(est, st.true_position))
        if est is not None and topology.hops_to_sink[st.id] != UNREACHABLE:
            localized.append(st.id)
    return localized


def centralized_round(round_index: int, topology: NetworkTopology, states: Sequence[TargetState], engine: Engine, ctx: RoundContext) -> None:
    """Each covering reference forwards its RSS reading; the sink trilaterates."""
    readings: dict[int, list[tuple[int, float]]] = {st.id: [] for st in states}

    def at_sink(msg: MessageRecord) -> None:
        tid, ref, rss = msg.payload
        readings[tid].append((ref, rss))

    for st in states:
        st.covering_references = covering_references(st.id, topology)
        for ref in st.covering_references:
            d = max(math.dist(st.true_position, topology.positions[ref]), 1e-9)
            noise = ctx.rng.standard_normal() if ctx.channel.noise_sigma_db > 0 else None
            rss = rss_at_distance(d, ctx.channel, noise)
            msg = engine.message(MessageKind.READING, ref, topology.sink, payload=(st.id, ref, rss))
            if msg is not None:
                engine.send(msg, at_sink)
    engine.drain()

    for st in states:
        got = sorted(readings[st.id])
        est = None
        if len(got) >= 3:
            refs = [r for r, _ in got]
            dists = [distance_from_rss(v, ctx.channel) for _, v in got]
            try:
                est = trilaterate(topology.positions[refs], dists, bounds=ctx.bounds)
            except DegenerateGeometryError:
                est = None
        st.estimated_position = est
        engine.metrics.record_localization(round_index, st.id, _localization_error(est, st.true_position))


def decentralized_round(round_index: int, topology: NetworkTopology, states: Sequence[TargetState], engine: Engine, ctx: RoundContext) -> None:
    """Targets localize themselves and each sends one report to the sink."""
    by_id = {st.id: st for st in states}
    for tid in _self_localize(round_index, topology, states, engine, ctx):
        msg = engine.message(
            MessageKind.LOCATION_REPORT, tid, topology.sink, payload=((tid, by_id[tid].estimated_position),)
        )
        if msg is not None:
            engine.send(msg)
    engine.drain()


def improved_round(round_index: int, topology: NetworkTopology, states: Sequence[TargetState], engine: Engine, ctx: RoundContext) -> GroupAssignment:
    """Self-localize, group, report to leaders, leaders aggregate to the sink."""
    by_id = {st.id: st for st in states}
    localized = _self_localize(round_index, topology, states, engine, ctx)
    assignment = form_groups(localized, topology, engine.ledger, ctx.threshold_fraction, round_index)
    engine.metrics.leader_fallbacks += len(assignment.fallback_leaders)

    inbox: dict[int, list[tuple[int, tuple]]] = {g.leader_id: [] for g in assignment.groups}

    def at_leader(msg: MessageRecord) -> None:
        inbox[msg.dst].extend(msg.payload)

    for g in assignment.groups:
        engine.metrics.groups.append(GroupRecord(round_index, g.leader_id, g.member_ids))
        for m in g.member_ids:
            if m == g.leader_id:
                continue
            msg = engine.message(
                MessageKind.GROUP_REPORT, m, g.leader_id, payload=((m, by_id[m].estimated_position),)
            )
            if msg is not None:
                engine.send(msg, at_leader)
    engine.drain()

    for g in assignment.groups:
        own = (g.leader_id, by_id[g.leader_id].estimated_position)
        locations = sorted([own, *inbox[g.leader_id]], key=lambda item: item[0])
        for packet in aggregate(locations, ctx.capacity):
            msg = engine.message(
                MessageKind.GLOBAL_AGGREGATE,
                g.leader_id,
                topology.sink,
                payload_locations=len(packet),
                payload=tuple(packet),
            )
            if msg is not None:
                engine.send(msg)
    engine.drain()
    return assignment


ROUND_PROCEDURES = {
    "centralized": centralized_round,
    "decentralized": decentralized_round,
    "improved": improved_round,
}
