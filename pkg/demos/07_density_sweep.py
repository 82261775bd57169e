"""
Target density sweep
====================

The advantage of aggregation grows with the number of targets: more targets
share each leader's packets. This sweeps the target count with the same
helper the ``sweep`` subcommand uses.
"""

from collections import defaultdict

from wsntrack.cli import sweep_rows
from wsntrack.config import validate_config

base = validate_config({"duration_s": 60})
rows = sweep_rows(base, "targets", [2, 5, 10, 20], replications=2)

sink = defaultdict(list)
for variable, level, strategy, metric, value, seed in rows:
    if metric == "sink_msgs":
        sink[level, strategy].append(value)

print(f"{'targets':>8}{'central':>10}{'decentral':>11}{'improved':>10}{'saving':>9}")
for m in (2, 5, 10, 20):
    mean = {s: sum(sink[m, s]) / len(sink[m, s]) for s in ("centralized", "decentralized", "improved")}
    print(f"{m:>8}{mean['centralized']:>10.0f}{mean['decentralized']:>11.0f}{mean['improved']:>10.0f}{1 - mean['improved'] / mean['decentralized']:>9.0%}")
