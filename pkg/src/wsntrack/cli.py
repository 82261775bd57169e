"""Command-line entry point: ``wsntrack {run,compare,predict,sweep}``.

Exit codes: 0 ok, 2 bad configuration or arguments, 3 topology error,
4 internal error.
"""

from __future__ import annotations

import argparse
import sys
import traceback
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import analytics, io
from .config import ConfigError, SimConfig, load_config
from .energy import per_packet_energy
from .protocols import STRATEGIES
from .simulation import run
from .topology import TopologyError

EXIT_OK, EXIT_CONFIG, EXIT_TOPOLOGY, EXIT_INTERNAL = 0, 2, 3, 4

SWEEP_VARIABLES = {
    "targets": "num_targets",
    "references": "num_references",
    "frequency": "reporting_period_s",
}


class UsageError(Exception):
    pass


# -- argument parsing ----------------------------------------------------------------

def _sim_flags(p: argparse.ArgumentParser, out_default: str) -> None:
    p.add_argument("--config", type=Path, help="flat key = value file with SimConfig fields")
    p.add_argument("--seed", type=int)
    p.add_argument("--duration", type=float, help="simulated seconds (l)")
    p.add_argument("--targets", type=int, help="number of mobile targets")
    p.add_argument("--references", type=int, help="number of reference nodes")
    p.add_argument("--frequency", type=float, help="reporting period in seconds (f)")
    p.add_argument("--loss-rate", type=float, help="per-hop loss probability (default 0)")
    p.add_argument("--out-dir", type=Path, default=Path(out_default))
    p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wsntrack", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="simulate one strategy")
    p.add_argument("--strategy", choices=STRATEGIES, default="improved")
    p.add_argument("--dump-groups", action="store_true", help="also write groups.csv")
    _sim_flags(p, "runs")

    p = sub.add_parser("compare", help="simulate all three strategies on the same network")
    p.add_argument("--plot", action="store_true", help="also write compare.png (needs matplotlib)")
    _sim_flags(p, "runs")

    p = sub.add_parser("sweep", help="compare across a grid of one variable")
    p.add_argument("--variable", choices=sorted(SWEEP_VARIABLES), required=True)
    p.add_argument("--values", required=True, help="comma list (1,5,10) or range START:STOP[:STEP], inclusive")
    p.add_argument("--replications", type=int, default=1, help="seeds seed..seed+K-1 per point")
    _sim_flags(p, "runs")

    p = sub.add_parser("predict", help="closed-form message and energy counts", add_help=False)
    p.add_argument("--help", action="help", help="show this help message and exit")
    p.add_argument("-r", type=float, default=3, help="covering references per target")
    p.add_argument("-m", type=float, default=10, help="mobile targets")
    p.add_argument("-l", type=float, default=360.0, help="experiment length, seconds")
    p.add_argument("-f", type=float, default=2.0, help="reporting period, seconds")
    p.add_argument("--lf", type=float, help="number of rounds l/f directly (overrides -l/-f)")
    p.add_argument("-H", "--hops", type=float, default=5.0, help="average hops h")
    p.add_argument("--capacity", type=int, default=5)
    p.add_argument("--tx-cost", type=float, help="per-packet tx energy (default: 44 mA, 127 B at 250 kbps, in mAh)")
    p.add_argument("--rx-cost", type=float, help="per-packet rx energy (default: 49 mA, 127 B at 250 kbps, in mAh)")
    p.add_argument("--sweep", help="VAR=START:STOP[:STEP] over one of r, m, l, f, h")
    p.add_argument("--csv", type=Path, help="write the table as CSV")
    return parser


def parse_values(spec: str) -> list[float]:
    spec = spec.strip()
    try:
        if ":" in spec:
            parts = [float(x) for x in spec.split(":")]
            if len(parts) not in (2, 3):
                raise ValueError
            start, stop = parts[0], parts[1]
            step = parts[2] if len(parts) == 3 else 1.0
            if step <= 0:
                raise ValueError
            out, v = [], start
            while v <= stop + 1e-9:
                out.append(v)
                v = start + step * len(out)
            return out
        return [float(x) for x in spec.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"cannot parse values {spec!r}") from None


def _as_level(v: float):
    return int(v) if float(v).is_integer() else float(v)


def config_from_args(args, **extra) -> SimConfig:
    overrides = {
        "seed": args.seed,
        "duration_s": args.duration,
        "num_targets": args.targets,
        "num_references": args.references,
        "reporting_period_s": args.frequency,
        "loss_rate": args.loss_rate,
        **extra,
    }
    return load_config(args.config, overrides)


# -- commands ------------------------------------------------------------------------------

def _run_one(job):
    cfg, strategy = job
    return run(cfg, strategy)


def _run_jobs(jobs, workers: int):
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_one, jobs))
    return [_run_one(j) for j in jobs]


def cmd_run(args) -> int:
    cfg = config_from_args(args)
    out = io.unique_run_dir(args.out_dir, f"{args.strategy}-seed{cfg.seed}")
    started = io._now()
    io.write_manifest(out, args.strategy, cfg, started_at=started)
    report = run(cfg, args.strategy)
    io.write_report(out, report, dump_groups=args.dump_groups)
    summary = io.summary_text(report)
    (out / "summary.txt").write_text(summary)
    io.write_manifest(out, args.strategy, cfg, started_at=started, finished_at=io._now())
    print(summary, end="")
    print(f"results written to {out}")
    return EXIT_OK


def per_round_ordering_violations(reports) -> list[int]:
    """Rounds where sink-bound counts break centralized >= decentralized >= improved."""
    by = {r.strategy: r.per_round for r in reports}
    bad = []
    for c, d, i in zip(by["centralized"], by["decentralized"], by["improved"]):
        if not (c.global_msgs >= d.global_msgs >= i.global_msgs):
            bad.append(c.round)
    return bad


def cmd_compare(args) -> int:
    cfg = config_from_args(args)
    out = io.unique_run_dir(args.out_dir, f"compare-seed{cfg.seed}")
    started = io._now()
    io.write_manifest(out, "compare", cfg, started_at=started)
    reports = _run_jobs([(cfg, s) for s in STRATEGIES], args.jobs)
    for rep in reports:
        sub = out / rep.strategy
        sub.mkdir()
        io.write_report(sub, rep)
    io.write_compare_csv(out / "compare.csv", reports)

    digests = {r.trajectory_digest for r in reports}
    print(f"{'strategy':<14}{'sink msgs':>10}{'tgt-tgt':>9}{'ref life (s)':>15}{'tgt life (s)':>15}")
    for r in reports:
        print(
            f"{r.strategy:<14}{r.sink_msgs:>10}{r.group_msgs:>9}"
            f"{r.mean_battery_life('reference'):>15.6g}{r.mean_battery_life('target'):>15.6g}"
        )
    print(f"trajectory digest {reports[0].trajectory_digest[:16]} ({'shared' if len(digests) == 1 else 'MISMATCH'})")
    bad = per_round_ordering_violations(reports)
    if bad:
        print(f"warning: per-round sink ordering violated in rounds {bad[:10]}", file=sys.stderr)
    if args.plot:
        _plot_compare(out / "compare.png", reports)
    io.write_manifest(out, "compare", cfg, started_at=started, finished_at=io._now())
    print(f"results written to {out}")
    return EXIT_OK if len(digests) == 1 else EXIT_INTERNAL


def _plot_compare(path: Path, reports) -> None:
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not installed; skipping plot", file=sys.stderr)
        return
    names = [r.strategy for r in reports]
    fig, axes = plt.subplots(1, 3, figsize=(11, 3.2))
    axes[0].bar(names, [r.sink_msgs for r in reports])
    axes[0].set_title("sink-bound messages")
    axes[1].bar(names, [r.group_msgs for r in reports])
    axes[1].set_title("target-to-target messages")
    axes[2].bar(names, [r.mean_battery_life("reference") / 3600 for r in reports])
    axes[2].set_title("reference battery life (h)")
    for ax in axes:
        ax.tick_params(axis="x", labelrotation=20)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def sweep_rows(base: SimConfig, variable: str, values, replications: int, workers: int = 1) -> list[tuple]:
    field = SWEEP_VARIABLES[variable]
    jobs, keys = [], []
    for v in values:
        for k in range(replications):
            cfg = base.replace(**{field: v, "seed": base.seed + k})
            for s in STRATEGIES:
                jobs.append((cfg, s))
                keys.append((_as_level(v), s, cfg.seed))
    reports = _run_jobs(jobs, workers)
    rows = []
    for (level, strategy, seed), rep in zip(keys, reports):
        for metric, value in io.sweep_metrics(rep).items():
            rows.append((variable, level, strategy, metric, value, seed))
    rows.sort(key=lambda r: (r[1], STRATEGIES.index(r[2]), r[3], r[5]))
    return rows


def cmd_sweep(args) -> int:
    values = parse_values(args.values)
    if not values or args.replications < 1:
        raise UsageError("sweep grid is empty")
    base = config_from_args(args)
    out = io.unique_run_dir(args.out_dir, f"sweep-{args.variable}-seed{base.seed}")
    started = io._now()
    io.write_manifest(out, "sweep", base, started_at=started)
    rows = sweep_rows(base, args.variable, values, args.replications, args.jobs)
    io.write_sweep_csv(out / "sweep.csv", rows)
    io.write_manifest(out, "sweep", base, started_at=started, finished_at=io._now())
    print(f"{len(rows)} rows written to {out / 'sweep.csv'}")
    return EXIT_OK


def _predict_inputs(args) -> analytics.AnalyticsInputs:
    l, f = (args.lf, 1.0) if args.lf is not None else (args.l, args.f)
    tx = args.tx_cost if args.tx_cost is not None else per_packet_energy(44.0, 127, 250_000)
    rx = args.rx_cost if args.rx_cost is not None else per_packet_energy(49.0, 127, 250_000)
    try:
        return analytics.AnalyticsInputs(args.r, args.m, l, f, args.hops, tx, rx, args.capacity)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


PREDICT_COLUMNS = ["mode", "r", "m", "l", "f", "h", "n1", "n2", "n3", "n4", "E_cn", "E_dc", "E_imp"]


def predict_rows(inputs: analytics.AnalyticsInputs, sweep: str | None = None) -> list[list]:
    points = [inputs]
    if sweep:
        name, _, rng = sweep.partition("=")
        name = name.strip()
        if name not in ("r", "m", "l", "f", "h") or not rng:
            raise UsageError(f"bad --sweep {sweep!r}; expected VAR=START:STOP[:STEP] with VAR in r,m,l,f,h")
        try:
            points = [analytics.AnalyticsInputs(**{**inputs.__dict__, name: v}) for v in parse_values(rng)]
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    rows = []
    for p in points:
        for mode in (analytics.LITERAL, analytics.SIMULATED):
            c = analytics.cost_report(p, mode)
            rows.append([mode, p.r, p.m, p.l, p.f, p.h, c.n1, c.n2, c.n3, c.n4, c.e_centralized, c.e_decentralized, c.e_improved])
    return rows


def _num(x) -> str:
    if isinstance(x, str):
        return x
    return str(int(x)) if float(x).is_integer() else f"{x:.6g}"


def _csv_cell(x) -> str:
    if isinstance(x, str):
        return x
    return str(int(x)) if float(x).is_integer() else io.fmt_float(x)


def cmd_predict(args) -> int:
    rows = predict_rows(_predict_inputs(args), args.sweep)
    cells = [PREDICT_COLUMNS] + [[_num(v) for v in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(PREDICT_COLUMNS))]
    for r in cells:
        print("  ".join(c.rjust(w) for c, w in zip(r, widths)))
    if args.csv:
        args.csv.parent.mkdir(parents=True, exist_ok=True)
        io._write(args.csv, PREDICT_COLUMNS, ([_csv_cell(v) for v in row] for row in rows))
    return EXIT_OK


COMMANDS = {"run": cmd_run, "compare": cmd_compare, "sweep": cmd_sweep, "predict": cmd_predict}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TopologyError as exc:
        print(f"topology error: {exc}", file=sys.stderr)
        return EXIT_TOPOLOGY
    except Exception:  # noqa: BLE001
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
