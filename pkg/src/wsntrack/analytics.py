"""Closed-form message and energy counts, and their comparison with simulation.

Two evaluation modes are offered. ``"literal"`` evaluates the formulas over the
reals exactly as written (``m / capacity``, ``l / f``). ``"simulated"`` uses
whole rounds and whole packets (``floor(l / f)``, ``ceil(m / capacity)``) and
therefore matches what the simulator counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .metrics import MetricsReport

LITERAL = "literal"
SIMULATED = "simulated"
MODES = (LITERAL, SIMULATED)


@dataclass(frozen=True)
class AnalyticsInputs:
    r: float = 3  # covering references per target
    m: float = 10  # targets
    l: float = 360.0  # experiment length, s
    f: float = 2.0  # reporting period, s
    h: float = 5.0  # average hops
    tx_cost: float = 44.0
    rx_cost: float = 49.0
    capacity: int = 5

    def __post_init__(self):
        if not self.f > 0:
            raise ValueError("f must be positive")
        if self.l < 0 or self.r < 0 or self.m < 0 or self.h < 0:
            raise ValueError("r, m, l and h must be non-negative")
        if self.capacity < 1:
            raise ValueError("capacity must be >= 1")

    def rounds(self, mode: str = SIMULATED) -> float:
        _check_mode(mode)
        ratio = self.l / self.f
        return math.floor(ratio + 1e-9) if mode == SIMULATED else ratio


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def predict_n1(inputs: AnalyticsInputs, mode: str = SIMULATED):
    """Reference-to-target (or reference-to-sink) readings: r * m * rounds."""
    return inputs.r * inputs.m * inputs.rounds(mode)


def predict_n2(inputs: AnalyticsInputs, mode: str = SIMULATED):
    """Target-to-sink reports: m * rounds."""
    return inputs.m * inputs.rounds(mode)


def predict_n3(inputs: AnalyticsInputs, mode: str = SIMULATED):
    """Member-to-leader reports for a single group of all m targets."""
    if inputs.m == 0:
        return 0
    return (inputs.m - 1) * inputs.rounds(mode)


def predict_n4(inputs: AnalyticsInputs, mode: str = SIMULATED):
    """Leader-to-sink aggregate packets for a single group."""
    per_round = math.ceil(inputs.m / inputs.capacity) if mode == SIMULATED else inputs.m / inputs.capacity
    return per_round * inputs.rounds(mode)


def group_counts(group_sizes_per_round: Iterable[Iterable[int]], capacity: int) -> tuple[int, int]:
    """(member reports, aggregate packets) summed over every group of every round."""
    n3 = n4 = 0
    for sizes in group_sizes_per_round:
        for z in sizes:
            n3 += z - 1
            n4 += math.ceil(z / capacity)
    return n3, n4


def packet_energy(n, tx_cost: float, rx_cost: float):
    """Energy to send and receive ``n`` packets over one hop."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return n * tx_cost + n * rx_cost


def predict_energy(strategy: str, inputs: AnalyticsInputs, mode: str = SIMULATED, hop_exact: bool = False):
    """Network energy for one strategy.

    As written, every term is multiplied by ``h``. With ``hop_exact=True`` the
    single-hop local exchanges are charged once and only sink-bound traffic
    is multiplied by ``h``, which is what the simulator actually spends.
    """
    P = lambda n: packet_energy(n, inputs.tx_cost, inputs.rx_cost)  # noqa: E731
    h = inputs.h
    local_factor = 1 if hop_exact else h
    if strategy == "centralized":
        return P(predict_n1(inputs, mode)) * h
    if strategy == "decentralized":
        return P(predict_n1(inputs, mode)) * local_factor + P(predict_n2(inputs, mode)) * h
    if strategy == "improved":
        return P(predict_n1(inputs, mode)) * local_factor + P(predict_n4(inputs, mode)) * h
    raise ValueError(f"unknown strategy {strategy!r}")


@dataclass(frozen=True)
class CostReport:
    n1: float
    n2: float
    n3: float
    n4: float
    e_centralized: float
    e_decentralized: float
    e_improved: float
    mode: str
    hop_exact: bool = False


def cost_report(inputs: AnalyticsInputs, mode: str = SIMULATED, hop_exact: bool = False) -> CostReport:
    return CostReport(
        n1=predict_n1(inputs, mode),
        n2=predict_n2(inputs, mode),
        n3=predict_n3(inputs, mode),
        n4=predict_n4(inputs, mode),
        e_centralized=predict_energy("centralized", inputs, mode, hop_exact),
        e_decentralized=predict_energy("decentralized", inputs, mode, hop_exact),
        e_improved=predict_energy("improved", inputs, mode, hop_exact),
        mode=mode,
        hop_exact=hop_exact,
    )


@dataclass(frozen=True)
class Comparison:
    strategy: str
    simulated: dict[str, float]
    predicted: dict[str, float]
    deltas: dict[str, float]
    drops: int
    energy_simulated: float = 0.0
    energy_as_written: float = 0.0
    energy_hop_exact: float = 0.0
    notes: tuple[str, ...] = field(default=())

    @property
    def exact(self) -> bool:
        return all(d == 0 for d in self.deltas.values())

    @property
    def flagged(self) -> bool:
        return not self.exact


def _group_sizes_by_round(report: MetricsReport) -> list[list[int]]:
    by_round: dict[int, list[int]] = {}
    for g in report.groups:
        by_round.setdefault(g.round, []).append(len(g.member_ids))
    return [by_round[k] for k in sorted(by_round)]


def compare_sim_to_closed_form(report: MetricsReport, inputs: AnalyticsInputs) -> Comparison:
    """Per-kind differences (simulated minus predicted) for one finished run.

    ``inputs.r``/``m``/``l``/``f`` should describe the run. For the improved
    strategy the group terms are evaluated per recorded group, summing
    ``z - 1`` and ``ceil(z / capacity)``, so several groups per round are
    handled. Energy is reported, not compared: the as-written formulas and
    the simulator disagree on how often single-hop traffic is multiplied by h.
    """
    strategy = report.strategy
    sim = {
        "local": report.local_msgs,
        "group": report.group_msgs,
        "sink": report.sink_msgs,
    }
    n1 = predict_n1(inputs)
    if strategy == "centralized":
        pred = {"local": 0, "group": 0, "sink": n1}
    elif strategy == "decentralized":
        pred = {"local": n1, "group": 0, "sink": predict_n2(inputs)}
    elif strategy == "improved":
        g3, g4 = group_counts(_group_sizes_by_round(report), inputs.capacity)
        pred = {"local": n1, "group": g3, "sink": g4}
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    deltas = {k: sim[k] - pred[k] for k in sim}

    notes = []
    if report.drops:
        by_kind = ", ".join(f"{k.value}={v}" for k, v in sorted(report.dropped.items(), key=lambda kv: kv[0].value) if v)
        notes.append(f"{report.drops} messages dropped ({by_kind})")
    if report.routing_errors:
        notes.append(f"{report.routing_errors} routing errors")

    h_inputs = inputs
    if report.sink_msgs:
        h_inputs = AnalyticsInputs(
            inputs.r, inputs.m, inputs.l, inputs.f, report.mean_hops, inputs.tx_cost, inputs.rx_cost, inputs.capacity
        )
    return Comparison(
        strategy=strategy,
        simulated=sim,
        predicted=pred,
        deltas=deltas,
        drops=report.drops,
        energy_simulated=report.energy_consumed_total,
        energy_as_written=predict_energy(strategy, h_inputs),
        energy_hop_exact=predict_energy(strategy, h_inputs, hop_exact=True),
        notes=tuple(notes),
    )


def sweep_predictions(base: AnalyticsInputs, variable: str, values: Sequence[float], mode: str = SIMULATED) -> list[tuple[float, CostReport]]:
    """Cost reports with one input field varied across ``values``."""
    if variable not in AnalyticsInputs.__dataclass_fields__:
        raise ValueError(f"cannot sweep unknown input {variable!r}")
    out = []
    for v in values:
        fields = {**base.__dict__, variable: v}
        out.append((v, cost_report(AnalyticsInputs(**fields), mode)))
    return out

