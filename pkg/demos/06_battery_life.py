"""
Battery life from packet counts
===============================

Every transmission and reception costs current times airtime. Extrapolating a
short run's drain gives a lifetime estimate; a long run on a small battery
checks it.
"""

import numpy as np

from wsntrack.calibration import calibration_config, calibration_topology
from wsntrack.energy import battery_life, per_packet_energy
from wsntrack.simulation import run

tx = per_packet_energy(44, 127, 250_000)
rx = per_packet_energy(49, 127, 250_000)
print(f"per packet: tx {tx:.4e} mAh, rx {rx:.4e} mAh")
print(f"packets a 27 mAh node can send: {27 / tx:,.0f}")

topo = calibration_topology()
probe = run(calibration_config(duration_s=60.0, init_energy_mAh=1e6), "centralized", topo)
drain = np.array([e.consumed_mAh for e in probe.energy[1:]]) / probe.rounds
hot = int(np.argmax(drain)) + 1
print(f"busiest relay: node {hot}, {drain[hot - 1]:.3e} mAh per round")

init = 0.05
estimate = battery_life(drain[hot - 1], init, 2.0)
long = run(calibration_config(duration_s=3600.0, init_energy_mAh=init), "centralized", topo)
print(f"estimated life {estimate:.1f} s, observed depletion at {long.depletion_times[hot]:.1f} s")
