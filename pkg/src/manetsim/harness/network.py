"""Assembles kernel, world and per-node agents into one runnable network."""

from __future__ import annotations

from ..core import RngStreams, Simulator
from ..protocols import AGENTS
from ..trace import PacketLog
from ..world import RandomWaypoint, StaticPlacement, World
from .config import ConfigError, ScenarioConfig


class Network:
    """One simulated MANET running a single protocol.

    ``positions`` pins every node in place (static topology); otherwise the
    nodes follow random-waypoint motion seeded from ``config.master_seed``.
    """

    def __init__(self, config: ScenarioConfig, positions=None, record_trace: bool = True):
        self.config = config.validate()
        self.sim = Simulator(record_trace=record_trace)
        self.streams = RngStreams(config.master_seed)
        self.log = PacketLog()
        self.log.bind(self.sim)
        if positions is not None:
            if len(positions) != config.node_count:
                raise ConfigError(f"{len(positions)} positions for {config.node_count} nodes")
            motion = StaticPlacement(positions)
        else:
            motion = RandomWaypoint(config.node_count, config.field, config.mobility, self.streams)
        self.world = World(self.sim, motion, config.radio, self.streams, self.log)
        self._uid = 0
        cls = AGENTS[config.protocol]
        self.agents = [cls(i, self) for i in range(config.node_count)]
        self.world.attach(self.agents)
        for agent in self.agents:
            agent.start()

    def next_uid(self) -> int:
        self._uid += 1
        return self._uid

    def send(self, src: int, dst: int, size: int | None = None):
        return self.agents[src].originate(dst, size or self.config.payload_size)

    def send_at(self, t: float, src: int, dst: int) -> None:
        self.sim.schedule(t, self.send, src, dst, label="send")

    def run_until(self, t: float):
        return self.sim.run_until(t)

    @property
    def now(self) -> float:
        return self.sim.now

    def rreq_count(self) -> int:
        return sum(1 for r in self.log.records if r[2] == "RREQ" and r[3] == "tx")

    def discoveries(self) -> int:
        return sum(a.discoveries for a in self.agents)
