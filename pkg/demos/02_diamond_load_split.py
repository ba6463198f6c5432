"""Per-packet next-hop choice on a symmetric diamond.

S reaches D through two relays A and B. After a few enquiry rounds both
relays look identical in S's SONNET table, so EMP alternates between them
packet by packet. AODV keeps the single route it discovered.
"""
from manetsim.harness import Network, ScenarioConfig
from manetsim.world import MobilityParams

S, A, B, D = range(4)
positions = [(0.0, 200.0), (130.0, 290.0), (130.0, 110.0), (260.0, 200.0)]
config = ScenarioConfig(node_count=4, source_count=1, mobility=MobilityParams(0.0, 0.0, 0.0))


def relay_counts(protocol, packets=200):
    net = Network(config.with_overrides(protocol=protocol), positions=positions)
    for k in range(packets):
        net.send_at(5.0 + 0.25 * k, S, D)
    net.run_until(5.0 + 0.25 * packets + 1.0)
    tx = [r for r in net.log.records if r[2] == "data" and r[3] == "tx"]
    return net, {relay: sum(1 for r in tx if r[1] == relay) for relay in (A, B)}


for protocol in ("EMP", "AODV"):
    net, counts = relay_counts(protocol)
    print(f"{protocol:5} relay A {counts[A]:4d}   relay B {counts[B]:4d}   delivered {net.log.delivered}")

net, _ = relay_counts("EMP", packets=8)
print("\nS's SONNET table after the EMP run:")
for row in net.agents[S].sonnet.snapshot():
    print("  ", {k: (round(v, 3) if isinstance(v, float) else getattr(v, "value", v)) for k, v in row.items()})
