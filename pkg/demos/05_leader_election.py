"""
Grouping and leader election
============================

Targets within radio range of one another form a group. The leader is the
member closest to the sink in hops, then the one with most charge left, then
the lowest id. Members below the energy floor only lead when nobody else can.
"""

from wsntrack.energy import EnergyLedger
from wsntrack.protocols import elect_leader, form_groups
from wsntrack.topology import topology_from_positions

# a short chain of references with three targets clustered at the far end
refs = [(8, 0), (16, 0), (24, 0), (32, 0)]
targets = [(30, 6), (26, 5), (34, 4)]
topo = topology_from_positions((0, 0), refs, targets, radio_range_m=10)
print("hops:", dict(zip(topo.targets, topo.hops_to_sink[topo.targets].tolist())))

ledger = EnergyLedger(topo.num_nodes, init_mAh=27.0, tx_cost=1.0, rx_cost=1.0)
groups = form_groups(topo.targets, topo, ledger, threshold=0.2)
for g in groups.groups:
    print("leader", g.leader_id, "members", g.member_ids)

# drain the natural leader below the 20% floor and elect again
ledger.tx_count[groups.groups[0].leader_id] = 25
again = form_groups(topo.targets, topo, ledger, threshold=0.2)
print("after draining:", [(g.leader_id, g.member_ids) for g in again.groups])

# candidate order never matters
print({elect_leader(order, topo.hops_to_sink, ledger, 0.2) for order in ([5, 6, 7], [7, 6, 5], [6, 5, 7])})
