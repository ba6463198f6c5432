"""Command-line entry point: single scenario runs and the source-count sweep.

Exit codes: 0 success, 2 configuration error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

from .harness.config import PROTOCOLS, ConfigError, load_config
from .harness.output import write_csv, write_plotdata
from .harness.runner import RunRow, run_scenario, sweep

log = logging.getLogger("manetsim")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="manetsim", description=__doc__.splitlines()[0])
    p.add_argument("--config", required=True, help="scenario file (key = value lines)")
    p.add_argument("--protocol", choices=PROTOCOLS, type=str.upper)
    p.add_argument("--sources", type=int, help="number of CBR sources")
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--duration", type=float, help="simulated seconds")
    p.add_argument("--out", default=".", help="output directory (default: current)")
    p.add_argument("--sweep", action="store_true", help="run every protocol over sources 10,20,30,40")
    p.add_argument("--seeds", type=int, default=10, help="seeds per sweep cell (default 10)")
    p.add_argument("--sweep-sources", default="10,20,30,40", help="comma-separated source counts")
    p.add_argument("--workers", type=int, default=1, help="parallel processes for --sweep")
    p.add_argument("--dump-trace", metavar="PATH", help="write the packet log of a single run")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        config = load_config(args.config).with_overrides(
            protocol=args.protocol, source_count=args.sources, master_seed=args.seed, duration=args.duration)
        sweep_sources = [int(x) for x in args.sweep_sources.split(",") if x.strip()]
        if args.seeds < 1 or not sweep_sources:
            raise ConfigError("--seeds and --sweep-sources must be non-empty")
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        started = time.perf_counter()
        if args.sweep:
            first = config.master_seed
            seeds = range(first, first + args.seeds)
            result = sweep(config, sweep_sources, seeds, workers=args.workers)
            rows = result.rows
            for cell in result.cells:
                log.info("%-4s sources=%2d pdf=%.4f delay=%.4fs nrl=%.3f", cell.protocol, cell.sources,
                         cell.mean["pdf"], cell.mean["avg_delay"], cell.mean["nrl"])
        else:
            result = run_scenario(config, trace_path=args.dump_trace, record_trace=False, keep_network=False)
            rows = [RunRow.from_summary(config.protocol, config.source_count, config.master_seed, result.summary)]
        write_csv(rows, out / "results.csv")
        write_plotdata(rows, out / "plotdata")
        log.info("%d run(s) in %.1f s -> %s", len(rows), time.perf_counter() - started, out)
    except Exception as exc:  # noqa: BLE001 - any failure past config is a runtime error
        print(f"runtime error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
