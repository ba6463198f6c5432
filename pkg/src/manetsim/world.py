"""Node motion, unit-disk connectivity and the abstract radio."""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field

from .core import RngStreams, draw_uniform
from .packets import DATA


class UnknownNode(KeyError):
    pass


@dataclass(frozen=True)
class FieldSpec:
    width: float = 1500.0
    height: float = 300.0

    def __post_init__(self):
        if not (self.width > 0 and self.height > 0):
            raise ValueError(f"field must have positive size, got {self.width} x {self.height}")


@dataclass(frozen=True)
class RadioParams:
    range: float = 250.0
    hop_delay: float = 0.002
    loss_prob: float = 0.0
    max_retries: int = 3
    retry_gap: float = 0.05

    def __post_init__(self):
        if not self.range > 0:
            raise ValueError("radio range must be positive")
        if not self.hop_delay > 0:
            raise ValueError("hop_delay must be positive")
        if not 0.0 <= self.loss_prob <= 1.0:
            raise ValueError("loss_prob must lie in [0, 1]")
        if self.max_retries < 0 or self.retry_gap < 0:
            raise ValueError("max_retries and retry_gap must be non-negative")


@dataclass(frozen=True)
class MobilityParams:
    v_min: float = 1.0
    v_max: float = 20.0
    pause: float = 0.0

    def __post_init__(self):
        if not 0 <= self.v_min <= self.v_max:
            raise ValueError("need 0 <= v_min <= v_max")
        if self.pause < 0:
            raise ValueError("pause must be non-negative")


@dataclass(frozen=True, slots=True)
class MotionState:
    """One leg of random-waypoint motion: travel origin -> waypoint, then pause."""

    node: int
    origin: tuple
    waypoint: tuple
    speed: float
    depart_at: float
    pause: float = 0.0
    arrive_at: float = field(init=False)
    ends_at: float = field(init=False)

    def __post_init__(self):
        if self.speed <= 0:
            arrive = math.inf
        else:
            dist = math.hypot(self.waypoint[0] - self.origin[0], self.waypoint[1] - self.origin[1])
            arrive = self.depart_at + dist / self.speed
        object.__setattr__(self, "arrive_at", arrive)
        object.__setattr__(self, "ends_at", arrive + self.pause)

    def position(self, t: float) -> tuple:
        if t <= self.depart_at or self.speed <= 0:
            return self.origin
        arrive = self.arrive_at
        if t >= arrive:
            return self.waypoint
        frac = (t - self.depart_at) / (arrive - self.depart_at)
        ox, oy = self.origin
        wx, wy = self.waypoint
        return (ox + (wx - ox) * frac, oy + (wy - oy) * frac)


class StaticPlacement:
    """Nodes that never move."""

    def __init__(self, positions):
        self._positions = [(float(x), float(y)) for x, y in positions]
        self.n = len(self._positions)

    def position_at(self, node: int, t: float) -> tuple:
        return self._positions[node]

    def positions(self, t: float) -> list:
        return self._positions


class RandomWaypoint:
    """Random-waypoint motion with legs generated lazily per node.

    Every node draws from its own stream (``mobility/<node>``), so the
    trajectories do not depend on the order in which positions are queried.
    """

    def __init__(self, n: int, field: FieldSpec, params: MobilityParams, streams: RngStreams):
        self.n = n
        self.field = field
        self.params = params
        self._rngs = [streams[f"mobility/{i}"] for i in range(n)]
        self._legs: list[list[MotionState]] = []
        self._starts: list[list[float]] = []
        self._cursor = [0] * n
        for i in range(n):
            rng = self._rngs[i]
            origin = (draw_uniform(rng, 0.0, field.width), draw_uniform(rng, 0.0, field.height))
            self._legs.append([self._next_leg(i, origin, 0.0)])
            self._starts.append([0.0])

    def _next_leg(self, node: int, origin: tuple, depart: float) -> MotionState:
        rng = self._rngs[node]
        waypoint = (draw_uniform(rng, 0.0, self.field.width), draw_uniform(rng, 0.0, self.field.height))
        speed = draw_uniform(rng, self.params.v_min, self.params.v_max)
        return MotionState(node, origin, waypoint, speed, depart, self.params.pause)

    def legs(self, node: int) -> list[MotionState]:
        return self._legs[node]

    def _leg(self, node: int, t: float) -> MotionState:
        legs = self._legs[node]
        k = self._cursor[node]
        leg = legs[k]
        if leg.depart_at <= t < leg.ends_at:
            return leg
        if t < leg.depart_at:
            k = bisect_right(self._starts[node], t) - 1
            return legs[max(k, 0)]
        while t >= leg.ends_at:
            k += 1
            if k == len(legs):
                legs.append(self._next_leg(node, leg.waypoint, leg.ends_at))
                self._starts[node].append(leg.ends_at)
            leg = legs[k]
        self._cursor[node] = k
        return leg

    def position_at(self, node: int, t: float) -> tuple:
        return self._leg(node, t).position(t)

    def positions(self, t: float) -> list:
        return [self._leg(i, t).position(t) for i in range(self.n)]


class World:
    """Connectivity and frame delivery on top of a motion model.

    Agents attached to the world must provide ``receive(packet, sender)``,
    ``link_ok(packet, receiver)``, ``link_failed(packet, receiver)``,
    ``transmitted()`` and ``can_transmit()``.
    """

    def __init__(self, sim, motion, radio: RadioParams, streams: RngStreams, log=None):
        self.sim = sim
        self.motion = motion
        self.radio = radio
        self.n = motion.n
        self.log = log
        self._radio_rng = streams["radio"]
        self.agents: list = []
        self.disabled: set[int] = set()
        self._pos_t = None
        self._pos: list = []
        self._range2 = radio.range * radio.range

    def attach(self, agents) -> None:
        self.agents = list(agents)

    def _check(self, node: int) -> None:
        if not 0 <= node < self.n:
            raise UnknownNode(node)

    def disable(self, node: int) -> None:
        """Switch a node's radio off: it neither sends nor receives."""
        self._check(node)
        self.disabled.add(node)

    def enable(self, node: int) -> None:
        self.disabled.discard(node)

    def positions(self, t: float) -> list:
        if t != self._pos_t:
            self._pos = self.motion.positions(t)
            self._pos_t = t
        return self._pos

    def position_at(self, node: int, t: float) -> tuple:
        self._check(node)
        if t < 0:
            raise ValueError("t must be non-negative")
        return self.motion.position_at(node, t)

    def _pair(self, a: int, b: int, t: float) -> tuple:
        if t == self._pos_t:
            pos = self._pos
            return pos[a], pos[b]
        at = self.motion.position_at
        return at(a, t), at(b, t)

    def distance(self, a: int, b: int, t: float) -> float:
        self._check(a)
        self._check(b)
        pa, pb = self._pair(a, b, t)
        return math.hypot(pa[0] - pb[0], pa[1] - pb[1])

    def in_range(self, a: int, b: int, t: float) -> bool:
        if a in self.disabled or b in self.disabled:
            return False
        pa, pb = self._pair(a, b, t)
        dx = pa[0] - pb[0]
        dy = pa[1] - pb[1]
        return dx * dx + dy * dy <= self._range2

    def neighbors(self, node: int, t: float) -> list[int]:
        """Other nodes within radio range (boundary inclusive), ascending."""
        self._check(node)
        if node in self.disabled:
            return []
        pos = self.positions(t)
        x, y = pos[node]
        r2 = self._range2
        disabled = self.disabled
        out = []
        for u, (ux, uy) in enumerate(pos):
            if u != node and (x - ux) ** 2 + (y - uy) ** 2 <= r2 and u not in disabled:
                out.append(u)
        return out

    def signal_strength(self, sender: int, receiver: int, t: float) -> float:
        d = self.distance(sender, receiver, t)
        return max(0.0, 1.0 - d / self.radio.range)

    def _lost(self) -> bool:
        p = self.radio.loss_prob
        return p > 0.0 and self._radio_rng.random() < p

    # ------------------------------------------------------------ transmission
    def broadcast(self, sender: int, packet) -> int:
        """One-hop broadcast; returns the number of copies scheduled."""
        sim = self.sim
        agent = self.agents[sender]
        if not agent.can_transmit():
            return 0
        agent.transmitted()
        if self.log is not None:
            self.log.tx(sender, packet)
        receivers = [u for u in self.neighbors(sender, sim.now) if not self._lost()]
        if receivers:
            sim.schedule(sim.now + self.radio.hop_delay, self._deliver_all, sender, packet, receivers, label="bcast")
        return len(receivers)

    def _deliver_all(self, sender: int, packet, receivers: list) -> None:
        agents = self.agents
        for u in receivers:
            if u not in self.disabled:
                agents[u].receive(packet, sender)

    def unicast(self, sender: int, receiver: int, packet) -> None:
        """Acknowledged unicast with bounded retries; the outcome comes back as feedback."""
        if receiver == sender:
            raise ValueError("unicast receiver must differ from sender")
        if packet.kind != DATA and self.log is not None:
            self.log.tx(sender, packet, receiver)
        self._attempt(sender, receiver, packet, 0)

    def _attempt(self, sender: int, receiver: int, packet, attempt: int) -> None:
        sim = self.sim
        agent = self.agents[sender]
        radio = self.radio
        if agent.can_transmit():
            agent.transmitted()
            if self.in_range(sender, receiver, sim.now) and not self._lost():
                if packet.kind == DATA and self.log is not None:
                    self.log.tx(sender, packet, receiver)
                sim.schedule(sim.now + radio.hop_delay, self._arrive, sender, receiver, packet, label="ucast")
                return
        if attempt < radio.max_retries:
            sim.schedule(sim.now + radio.retry_gap, self._attempt, sender, receiver, packet, attempt + 1,
                         label="retry")
        else:
            sim.schedule(sim.now + radio.hop_delay, self._failed, sender, receiver, packet, label="linkfail")

    def _arrive(self, sender: int, receiver: int, packet) -> None:
        self.agents[receiver].receive(packet, sender)
        self.agents[sender].link_ok(packet, receiver)

    def _failed(self, sender: int, receiver: int, packet) -> None:
        self.agents[sender].link_failed(packet, receiver)
