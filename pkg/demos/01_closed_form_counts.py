"""
Message counts from the closed-form model
=========================================

How many packets does each tracking strategy put on the air? Before running
any simulation we can answer that with four counting formulas.
"""

from wsntrack.analytics import LITERAL, SIMULATED, AnalyticsInputs, cost_report

# Three references hear each of ten targets, every 2 s for a minute.
x = AnalyticsInputs(r=3, m=10, l=60, f=2, h=5, tx_cost=44, rx_cost=49)
rep = cost_report(x)
print(f"readings (r*m*rounds)      n1 = {rep.n1}")
print(f"self reports (m*rounds)    n2 = {rep.n2}")
print(f"member->leader             n3 = {rep.n3}")
print(f"leader aggregates          n4 = {rep.n4}")

# With 20 rounds instead of 30 the grouped protocol needs 180 member reports
# and 40 aggregate packets for a single group of ten.
twenty = AnalyticsInputs(r=3, m=10, l=20, f=1, capacity=5)
print("20 rounds:", cost_report(twenty).n3, cost_report(twenty).n4)

# Fractional packets cannot be sent. Six targets with capacity five
# need two packets per round, not 1.2.
six = AnalyticsInputs(m=6, l=10, f=1, capacity=5)
print("n4 literal  :", cost_report(six, LITERAL).n4)
print("n4 simulated:", cost_report(six, SIMULATED).n4)

# Energy terms multiply every packet by h as written; hop_exact charges the
# single-hop local exchanges only once.
for exact in (False, True):
    r = cost_report(x, hop_exact=exact)
    print(f"hop_exact={exact!s:<5}  Ecn={r.e_centralized:>9.0f}  Edc={r.e_decentralized:>9.0f}  Eimp={r.e_improved:>9.0f}")
