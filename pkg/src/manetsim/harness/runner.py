"""Single scenario runs and the multi-seed source-count sweep."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from ..trace import MetricsSummary
from .config import PROTOCOLS, ScenarioConfig
from .network import Network
from .traffic import CbrFlow, generate_traffic, schedule_flows

METRICS = ("pdf", "avg_delay", "nrl")


@dataclass
class ScenarioResult:
    config: ScenarioConfig
    summary: MetricsSummary
    log: object
    trace: list
    flows: list[CbrFlow]
    network: Optional[Network] = None
    snapshots: list = field(default_factory=list)


def take_snapshot(net: Network) -> dict:
    """Routing-table and SONNET state of every EMP node at the current time."""
    nodes = {}
    for agent in net.agents:
        if hasattr(agent, "sonnet"):
            nodes[agent.id] = {"routes": agent.route_snapshot(), "sonnet": agent.sonnet.snapshot()}
    return {"time": net.now, "nodes": nodes}


def run_scenario(config: ScenarioConfig, trace_path=None, record_trace: bool = True,
                 snapshot_interval: Optional[float] = None,
                 on_snapshot: Optional[Callable[[dict], None]] = None,
                 keep_network: bool = True) -> ScenarioResult:
    """Run one scenario to ``config.duration`` and summarise it.

    Data packets still buffered or in flight at the end are logged as
    ``pending``. With ``snapshot_interval`` set, EMP table snapshots are
    taken periodically and passed to ``on_snapshot`` (or collected).
    """
    config = config.validate()
    net = Network(config, record_trace=record_trace)
    flows = generate_traffic(config, net.streams["traffic"])
    schedule_flows(net, flows, config.duration, config.payload_size)

    snapshots: list = []
    if snapshot_interval and config.protocol == "EMP":
        sink = on_snapshot or snapshots.append

        def snap(k: int) -> None:
            sink(take_snapshot(net))
            net.sim.schedule((k + 1) * snapshot_interval, snap, k + 1, label="snapshot")

        net.sim.schedule(snapshot_interval, snap, 1, label="snapshot")

    net.run_until(config.duration)
    net.log.close()
    if trace_path is not None:
        net.log.dump(trace_path)
    return ScenarioResult(config, net.log.summary(), net.log, net.sim.trace, flows,
                          net if keep_network else None, snapshots)


@dataclass(frozen=True)
class RunRow:
    protocol: str
    sources: int
    seed: int
    pdf: Optional[float]
    avg_delay_s: Optional[float]
    nrl: Optional[float]
    originated: int
    delivered: int
    control_tx: int

    @classmethod
    def from_summary(cls, protocol: str, sources: int, seed: int, s: MetricsSummary) -> "RunRow":
        return cls(protocol, sources, seed, s.pdf, s.avg_delay, s.nrl, s.originated, s.delivered, s.control_tx)

    def metric(self, name: str) -> Optional[float]:
        return self.avg_delay_s if name == "avg_delay" else getattr(self, name)


@dataclass(frozen=True)
class CellStats:
    protocol: str
    sources: int
    n: int
    mean: dict
    std: dict


def sweep_configs(config: ScenarioConfig, sources, seeds, protocols=PROTOCOLS) -> list[ScenarioConfig]:
    """Configs in row order: protocol, then sources ascending, then seed."""
    if not sources or not seeds or not protocols:
        raise ValueError("sources, seeds and protocols must be non-empty")
    return [
        replace(config, protocol=p, source_count=k, master_seed=s).validate()
        for p in protocols
        for k in sorted(sources)
        for s in seeds
    ]


def _run_row(config: ScenarioConfig) -> RunRow:
    result = run_scenario(config, record_trace=False, keep_network=False)
    return RunRow.from_summary(config.protocol, config.source_count, config.master_seed, result.summary)


def cell_stats(rows: list[RunRow]) -> list[CellStats]:
    """Per (protocol, sources) mean and sample std over seeds, absent values skipped."""
    groups: dict[tuple, list[RunRow]] = {}
    for row in rows:
        groups.setdefault((row.protocol, row.sources), []).append(row)
    cells = []
    for (protocol, sources), members in groups.items():
        mean, std = {}, {}
        for name in METRICS:
            values = np.array([r.metric(name) for r in members if r.metric(name) is not None], dtype=float)
            mean[name] = float(values.mean()) if values.size else math.nan
            std[name] = float(values.std(ddof=1)) if values.size > 1 else 0.0
        cells.append(CellStats(protocol, sources, len(members), mean, std))
    return cells


@dataclass
class SweepResult:
    rows: list[RunRow]
    cells: list[CellStats]

    def cell(self, protocol: str, sources: int) -> CellStats:
        for c in self.cells:
            if c.protocol == protocol and c.sources == sources:
                return c
        raise KeyError((protocol, sources))


def sweep(config: ScenarioConfig, sources=(10, 20, 30, 40), seeds=range(1, 11), protocols=PROTOCOLS,
          workers: int = 1, runner: Callable[[ScenarioConfig], RunRow] = _run_row) -> SweepResult:
    """One run per (protocol, source count, seed); runs are independent and may use a process pool."""
    configs = sweep_configs(config, list(sources), list(seeds), list(protocols))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(runner, configs))
    else:
        rows = [runner(c) for c in configs]
    return SweepResult(rows, cell_stats(rows))
