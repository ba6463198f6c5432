"""A reduced source-count sweep written as CSV plus plot series.

Three seeds instead of ten keep this under a couple of minutes. The files
land in ./sweep_out; every .dat file is ``sources mean`` pairs ready for
gnuplot or matplotlib. Pass --full for the ten-seed version.
"""
import sys
import time
from pathlib import Path

from manetsim.harness import ScenarioConfig, emit, read_csv, sweep

seeds = range(1, 11) if "--full" in sys.argv else range(1, 4)
out = Path("sweep_out")
out.mkdir(exist_ok=True)

t0 = time.perf_counter()
result = sweep(ScenarioConfig(), sources=(10, 20, 30, 40), seeds=seeds)
print(f"{len(result.rows)} runs in {time.perf_counter() - t0:.0f} s")

emit(result.rows, "csv", out / "results.csv")
files = emit(result.rows, "plotdata", out / "plotdata")
assert read_csv(out / "results.csv") == result.rows

for metric, label in (("pdf", "PDF"), ("avg_delay", "delay [s]"), ("nrl", "NRL")):
    print(f"\n{label}")
    print("sources " + "".join(f"{p:>10}" for p in ("DSR", "AODV", "EMP")))
    for k in (10, 20, 30, 40):
        row = "".join(f"{result.cell(p, k).mean[metric]:10.4f}" for p in ("DSR", "AODV", "EMP"))
        print(f"{k:7d} {row}")
print("\nwrote", ", ".join(p.name for p in files))
