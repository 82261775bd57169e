"""
Simulator versus formulas on a calibration network
==================================================

On a network where every target hears exactly three references, the
simulator's message counters should match the counting formulas to the
packet.
"""

from wsntrack.analytics import AnalyticsInputs, compare_sim_to_closed_form
from wsntrack.calibration import calibration_config, calibration_topology
from wsntrack.localization import covering_references
from wsntrack.simulation import run

topo = calibration_topology()
print("targets:", topo.targets)
print("coverage:", [len(covering_references(t, topo)) for t in topo.targets])

cfg = calibration_config()
inputs = AnalyticsInputs(r=3, m=len(topo.targets), l=cfg.duration_s, f=cfg.reporting_period_s)

for strategy in ("centralized", "decentralized", "improved"):
    rep = run(cfg, strategy, topo)
    cmp = compare_sim_to_closed_form(rep, inputs)
    print(f"{strategy:<14} simulated {cmp.simulated}  deltas {cmp.deltas}")

# Shrink the batteries and relays start to die; the comparison now reports a
# shortfall and says where the packets went.
starved = run(calibration_config(init_energy_mAh=0.02), "centralized", topo)
cmp = compare_sim_to_closed_form(starved, inputs)
print("starved run:", cmp.deltas, cmp.notes)
