"""CSV and manifest emission (and parsing back) for simulation results."""

from __future__ import annotations

import csv
import json
import math
import statistics
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable

from .config import SimConfig
from .metrics import GroupRecord, LocalizationRecord, MetricsReport, NodeEnergy, RoundMetrics

METRICS_COLUMNS = [
    "round",
    "strategy",
    "local_msgs",
    "group_msgs",
    "global_msgs",
    "sink_msgs",
    "drops",
    "energy_consumed_total",
]
LOCALIZATION_COLUMNS = ["round", "target_id", "error_m"]
ENERGY_COLUMNS = ["node_id", "class", "tx_count", "rx_count", "consumed_mAh", "remaining_mAh", "est_lifetime_s"]
GROUP_COLUMNS = ["round", "leader_id", "member_ids"]
COMPARE_COLUMNS = [
    "strategy",
    "sink_msgs",
    "target_to_target_msgs",
    "reference_battery_life_s",
    "target_battery_life_s",
    "reference_energy_mAh",
    "target_energy_mAh",
]
SWEEP_COLUMNS = ["variable", "level", "strategy", "metric", "value", "seed"]

FAIL = "FAIL"


def fmt_float(x: float) -> str:
    # repr round-trips exactly; inf/nan spelled the way float() reads them
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(float(x))


def _writer(fh):
    return csv.writer(fh, lineterminator="\n")


def _write(path: Path, header: list[str], rows: Iterable[list]) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = _writer(fh)
        w.writerow(header)
        w.writerows(rows)
    return path


def _read(path: Path, header: list[str]) -> list[dict[str, str]]:
    with Path(path).open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != header:
            raise ValueError(f"{path}: expected columns {header}, got {reader.fieldnames}")
        return list(reader)


# -- per-round metrics --------------------------------------------------------

def write_metrics_csv(path, rows: Iterable[RoundMetrics]) -> Path:
    return _write(
        path,
        METRICS_COLUMNS,
        (
            [r.round, r.strategy, r.local_msgs, r.group_msgs, r.global_msgs, r.sink_msgs, r.drops, fmt_float(r.energy_consumed_total)]
            for r in rows
        ),
    )


def read_metrics_csv(path) -> list[RoundMetrics]:
    return [
        RoundMetrics(
            round=int(d["round"]),
            strategy=d["strategy"],
            local_msgs=int(d["local_msgs"]),
            group_msgs=int(d["group_msgs"]),
            global_msgs=int(d["global_msgs"]),
            sink_msgs=int(d["sink_msgs"]),
            drops=int(d["drops"]),
            energy_consumed_total=float(d["energy_consumed_total"]),
        )
        for d in _read(path, METRICS_COLUMNS)
    ]


# -- localization ---------------------------------------------------------------

def write_localization_csv(path, rows: Iterable[LocalizationRecord]) -> Path:
    return _write(
        path,
        LOCALIZATION_COLUMNS,
        ([r.round, r.target_id, FAIL if r.error_m is None else fmt_float(r.error_m)] for r in rows),
    )


def read_localization_csv(path) -> list[LocalizationRecord]:
    return [
        LocalizationRecord(int(d["round"]), int(d["target_id"]), None if d["error_m"] == FAIL else float(d["error_m"]))
        for d in _read(path, LOCALIZATION_COLUMNS)
    ]


# -- energy ----------------------------------------------------------------------

def write_energy_csv(path, rows: Iterable[NodeEnergy]) -> Path:
    return _write(
        path,
        ENERGY_COLUMNS,
        (
            [
                e.node_id,
                e.node_class,
                e.tx_count,
                e.rx_count,
                fmt_float(e.consumed_mAh),
                fmt_float(e.remaining_mAh),
                fmt_float(e.est_lifetime_s),
            ]
            for e in rows
        ),
    )


def read_energy_csv(path) -> list[NodeEnergy]:
    return [
        NodeEnergy(
            node_id=int(d["node_id"]),
            node_class=d["class"],
            tx_count=int(d["tx_count"]),
            rx_count=int(d["rx_count"]),
            consumed_mAh=float(d["consumed_mAh"]),
            remaining_mAh=float(d["remaining_mAh"]),
            est_lifetime_s=float(d["est_lifetime_s"]),
        )
        for d in _read(path, ENERGY_COLUMNS)
    ]


# -- groups ------------------------------------------------------------------------

def write_groups_csv(path, rows: Iterable[GroupRecord]) -> Path:
    return _write(path, GROUP_COLUMNS, ([g.round, g.leader_id, ";".join(map(str, g.member_ids))] for g in rows))


def read_groups_csv(path) -> list[GroupRecord]:
    return [
        GroupRecord(int(d["round"]), int(d["leader_id"]), tuple(int(x) for x in d["member_ids"].split(";") if x))
        for d in _read(path, GROUP_COLUMNS)
    ]


# -- cross-strategy tables -----------------------------------------------------------

def compare_row(report: MetricsReport) -> list:
    return [
        report.strategy,
        report.sink_msgs,
        report.group_msgs,
        fmt_float(report.mean_battery_life("reference")),
        fmt_float(report.mean_battery_life("target")),
        fmt_float(report.mean_consumption("reference")),
        fmt_float(report.mean_consumption("target")),
    ]


def write_compare_csv(path, reports: Iterable[MetricsReport]) -> Path:
    return _write(path, COMPARE_COLUMNS, (compare_row(r) for r in reports))


def read_compare_csv(path) -> list[dict]:
    out = []
    for d in _read(path, COMPARE_COLUMNS):
        row = {"strategy": d["strategy"], "sink_msgs": int(d["sink_msgs"]), "target_to_target_msgs": int(d["target_to_target_msgs"])}
        for k in COMPARE_COLUMNS[3:]:
            row[k] = float(d[k])
        out.append(row)
    return out


SWEEP_METRICS = (
    "sink_msgs",
    "target_to_target_msgs",
    "local_msgs",
    "reference_battery_life_s",
    "target_battery_life_s",
    "reference_energy_mAh",
    "target_energy_mAh",
)


def sweep_metrics(report: MetricsReport) -> dict[str, float]:
    return {
        "sink_msgs": report.sink_msgs,
        "target_to_target_msgs": report.group_msgs,
        "local_msgs": report.local_msgs,
        "reference_battery_life_s": report.mean_battery_life("reference"),
        "target_battery_life_s": report.mean_battery_life("target"),
        "reference_energy_mAh": report.mean_consumption("reference"),
        "target_energy_mAh": report.mean_consumption("target"),
    }


def write_sweep_csv(path, rows: Iterable[tuple]) -> Path:
    """Rows are (variable, level, strategy, metric, value, seed)."""
    formatted = (
        [var, fmt_float(level) if isinstance(level, float) else level, strat, metric, fmt_float(value) if isinstance(value, float) else value, seed]
        for var, level, strat, metric, value, seed in rows
    )
    return _write(path, SWEEP_COLUMNS, formatted)


def read_sweep_csv(path) -> list[dict]:
    return _read(path, SWEEP_COLUMNS)


# -- run directory ----------------------------------------------------------------------

def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def unique_run_dir(base, label: str) -> Path:
    """Create and return ``base/label``, suffixing ``-2``, ``-3``... if it exists."""
    base = Path(base)
    base.mkdir(parents=True, exist_ok=True)
    candidate = base / label
    n = 1
    while True:
        try:
            candidate.mkdir()
            return candidate
        except FileExistsError:
            n += 1
            candidate = base / f"{label}-{n}"


def write_manifest(out_dir: Path, strategy: str, config: SimConfig, started_at: str | None = None, finished_at: str | None = None) -> Path:
    manifest = {
        "strategy": strategy,
        "seed": config.seed,
        "config": config.to_dict(),
        "output_dir": str(out_dir),
        "started_at": started_at or _now(),
        "finished_at": finished_at,
    }
    path = Path(out_dir) / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def write_report(out_dir, report: MetricsReport, dump_groups: bool = False) -> dict[str, Path]:
    out_dir = Path(out_dir)
    paths = {
        "metrics": write_metrics_csv(out_dir / "metrics.csv", report.per_round),
        "localization": write_localization_csv(out_dir / "localization.csv", report.localization),
        "energy": write_energy_csv(out_dir / "energy.csv", report.energy),
    }
    if dump_groups:
        paths["groups"] = write_groups_csv(out_dir / "groups.csv", report.groups)
    return paths


def summary_text(report: MetricsReport) -> str:
    errs = report.localization_errors
    median = statistics.median(errs) if errs else math.nan
    lines = [
        f"strategy               {report.strategy}",
        f"seed                   {report.seed}",
        f"rounds                 {report.rounds}",
        f"local messages         {report.local_msgs}",
        f"group messages         {report.group_msgs}",
        f"sink-bound delivered   {report.sink_msgs}",
        f"drops                  {report.drops}",
        f"mean hops to sink      {report.mean_hops:.3f}",
        f"localization failures  {report.localization_failures}",
        f"median loc. error (m)  {median:.4g}",
        f"leader fallbacks       {report.leader_fallbacks}",
        f"unreachable nodes      {report.unreachable_nodes}",
        f"energy consumed (mAh)  {report.energy_consumed_total:.6g}",
        f"ref. battery life (s)  {report.mean_battery_life('reference'):.6g}",
        f"tgt. battery life (s)  {report.mean_battery_life('target'):.6g}",
    ]
    return "\n".join(lines) + "\n"
