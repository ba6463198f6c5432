"""Constant-bit-rate flows between random source/sink pairs."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..core import RngStream, draw_uniform
from .config import ScenarioConfig, TooManySources


@dataclass(frozen=True)
class CbrFlow:
    source: int
    sink: int
    rate: float
    start_at: float

    def __post_init__(self):
        if self.source == self.sink:
            raise ValueError("a flow needs distinct source and sink")

    def send_time(self, k: int) -> float:
        return self.start_at + k / self.rate

    def count(self, duration: float) -> int:
        """Number of packets originated strictly before ``duration``."""
        if duration <= self.start_at:
            return 0
        n = math.ceil((duration - self.start_at) * self.rate)
        while n > 0 and self.send_time(n - 1) >= duration:
            n -= 1
        while self.send_time(n) < duration:
            n += 1
        return n

    def send_times(self, duration: float) -> list[float]:
        return [self.send_time(k) for k in range(self.count(duration))]


def generate_traffic(config: ScenarioConfig, rng: RngStream) -> list[CbrFlow]:
    """Distinct random sources, each paired with a uniformly drawn other node."""
    n = config.node_count
    if config.source_count > n:
        raise TooManySources(f"{config.source_count} sources but only {n} nodes")
    sources = rng.sample(range(n), config.source_count)
    flows = []
    for src in sources:
        sink = rng.choice([u for u in range(n) if u != src])
        start = draw_uniform(rng, 0.0, config.traffic_start_max)
        flows.append(CbrFlow(src, sink, config.cbr_rate, start))
    return flows


def schedule_flows(net, flows: list[CbrFlow], duration: float, payload_size: int = 512) -> None:
    """Arrange for every flow to originate packets on its fixed grid until ``duration``."""
    for flow in flows:
        if flow.count(duration) > 0:
            net.sim.schedule(flow.send_time(0), _emit, net, flow, 0, duration, payload_size, label="cbr")


def _emit(net, flow: CbrFlow, k: int, duration: float, payload_size: int) -> None:
    net.agents[flow.source].originate(flow.sink, payload_size)
    t_next = flow.send_time(k + 1)
    if t_next < duration:
        net.sim.schedule(t_next, _emit, net, flow, k + 1, duration, payload_size, label="cbr")
