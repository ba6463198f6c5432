"""Checking one run against its own packet log.

Dumps the trace of an EMP run, reloads it, and recomputes the metrics and
the structural checks (loops, conservation, radio range, SONNET counters)
from the file alone.
"""
import tempfile
from dataclasses import replace
from pathlib import Path

from manetsim import audit
from manetsim.harness import ScenarioConfig, recompute_metrics, run_scenario
from manetsim.trace import load_trace

config = replace(ScenarioConfig(), protocol="EMP", source_count=20, master_seed=4)
with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "emp.trace"
    result = run_scenario(config, trace_path=path)
    records = load_trace(path)
    print(f"{len(records)} records; first lines:")
    print("".join(path.read_text().splitlines(keepends=True)[:5]))

print("streaming summary  ", result.summary)
print("recomputed from log", recompute_metrics(records))
print("looping deliveries ", len(audit.loop_violations(records)))
print("conservation holds ", audit.conservation_ok(records))
print("out-of-range hops  ", len(audit.neighbor_violations(records, result.network.world)))
print("SONNET mismatches  ", len(audit.sonnet_violations(result.network, records)))
