"""Losing a relay mid-run.

The diamond again, but relay A is switched off halfway through. EMP still
holds the path through B and moves onto it without a new flood; AODV has
to rediscover.
"""
from manetsim.harness import Network, ScenarioConfig
from manetsim.world import MobilityParams

S, A, B, D = range(4)
positions = [(0.0, 200.0), (130.0, 290.0), (130.0, 110.0), (260.0, 200.0)]
config = ScenarioConfig(node_count=4, source_count=1, mobility=MobilityParams(0.0, 0.0, 0.0))
T_FAIL = 30.1

for protocol in ("EMP", "AODV"):
    net = Network(config.with_overrides(protocol=protocol), positions=positions)
    for k in range(200):
        net.send_at(5.0 + 0.25 * k, S, D)
    net.run_until(T_FAIL)
    net.world.disable(A)
    net.run_until(60.0)
    recs = net.log.records
    rreq_after = sum(1 for r in recs if r[2] == "RREQ" and r[3] == "tx" and r[0] > T_FAIL)
    late = [r for r in recs if r[2] == "data" and r[3] == "deliver" and r[0] > T_FAIL]
    delays = []
    born = {r[4]: r[0] for r in recs if r[2] == "data" and r[3] == "originate"}
    for r in late:
        delays.append(r[0] - born[r[4]])
    print(f"{protocol:5} RREQs after failure {rreq_after:2d}   delivered afterwards {len(late):3d}   "
          f"worst delay {max(delays):.3f} s")
