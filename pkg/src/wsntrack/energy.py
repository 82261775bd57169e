"""Per-node energy ledger with packet-level tx/rx charging."""

from __future__ import annotations

import enum
import math

import numpy as np

from .config import SimConfig


class Direction(enum.Enum):
    TX = "tx"
    RX = "rx"


def per_packet_energy(draw_mA: float, packet_size_bytes: float, data_rate_bps: float) -> float:
    """Charge in mAh drawn while one packet is on the air."""
    if not (draw_mA > 0 and packet_size_bytes > 0 and data_rate_bps > 0):
        raise ValueError("draw, packet size and data rate must all be positive")
    airtime_s = packet_size_bytes * 8 / data_rate_bps
    return draw_mA * airtime_s / 3600.0


def battery_life(consumption_per_round: float, init: float, round_period_s: float) -> float:
    """Seconds until ``init`` mAh is exhausted at a constant per-round drain.

    Returns ``math.inf`` for a node that consumes nothing.
    """
    if consumption_per_round < 0:
        raise ValueError("consumption must be non-negative")
    if consumption_per_round == 0:
        return math.inf
    return init / consumption_per_round * round_period_s


class EnergyLedger:
    """Remaining charge and tx/rx counters for every node.

    Consumption is derived from the integer counters, so a node that was
    charged ``n`` times holds exactly ``init - n * cost``. ``exempt`` nodes
    (the mains-powered sink) are charged but never deplete.
    """

    def __init__(self, num_nodes: int, init_mAh: float, tx_cost: float, rx_cost: float, exempt=()):
        self.init_mAh = float(init_mAh)
        self.tx_cost = float(tx_cost)
        self.rx_cost = float(rx_cost)
        self.tx_count = np.zeros(num_nodes, dtype=np.int64)
        self.rx_count = np.zeros(num_nodes, dtype=np.int64)
        self.exempt = frozenset(exempt)
        self.depleted_flag = np.zeros(num_nodes, dtype=bool)

    @classmethod
    def from_config(cls, cfg: SimConfig, num_nodes: int, exempt=(0,)) -> "EnergyLedger":
        return cls(
            num_nodes,
            cfg.init_energy_mAh,
            per_packet_energy(cfg.tx_draw_mA, cfg.packet_size_bytes, cfg.data_rate_bps),
            per_packet_energy(cfg.rx_draw_mA, cfg.packet_size_bytes, cfg.data_rate_bps),
            exempt=exempt,
        )

    def __len__(self) -> int:
        return len(self.tx_count)

    def raw_consumed(self, node=None):
        if node is None:
            return self.tx_count * self.tx_cost + self.rx_count * self.rx_cost
        return self.tx_count[node] * self.tx_cost + self.rx_count[node] * self.rx_cost

    def consumed(self, node=None):
        """Charge drawn so far, capped at the battery size for non-exempt nodes."""
        raw = self.raw_consumed(node)
        if node is None:
            capped = np.minimum(raw, self.init_mAh)
            for n in self.exempt:
                capped[n] = raw[n]
            return capped
        return raw if node in self.exempt else min(raw, self.init_mAh)

    def remaining(self, node=None):
        if node is None:
            rem = np.maximum(self.init_mAh - self.raw_consumed(), 0.0)
            for n in self.exempt:
                rem[n] = self.init_mAh
            return rem
        if node in self.exempt:
            return self.init_mAh
        return max(self.init_mAh - self.raw_consumed(node), 0.0)

    def is_depleted(self, node: int) -> bool:
        return node not in self.exempt and self.raw_consumed(node) >= self.init_mAh

    def charge(self, node: int, direction: Direction) -> bool:
        """Debit one packet; returns False (and flags the node) if it is already empty."""
        if self.is_depleted(node):
            self.depleted_flag[node] = True
            return False
        if direction is Direction.TX:
            self.tx_count[node] += 1
        else:
            self.rx_count[node] += 1
        return True

    def total_consumed(self) -> float:
        return float(self.raw_consumed().sum())


def charge(ledger: EnergyLedger, node: int, direction: Direction) -> bool:
    return ledger.charge(node, direction)
