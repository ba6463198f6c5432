"""One scenario, three protocols.

Runs the default 50-node field for 100 s with 10 CBR sources under each
protocol and prints the three metrics side by side. Mobility and traffic
come from the same seed, so only the routing differs between rows.
"""
from dataclasses import replace

from manetsim.harness import ScenarioConfig, run_scenario

base = replace(ScenarioConfig(), source_count=10, master_seed=1)

print(f"{'protocol':8} {'pdf':>7} {'delay ms':>9} {'nrl':>7} {'control tx':>10}")
for protocol in ("DSR", "AODV", "EMP"):
    s = run_scenario(replace(base, protocol=protocol), record_trace=False).summary
    print(f"{protocol:8} {s.pdf:7.4f} {1000 * s.avg_delay:9.3f} {s.nrl:7.3f} {s.control_tx:10d}")
