"""Behaviour shared by the on-demand routing agents: send buffer,
discovery retry timers and the data-plane bookkeeping hooks."""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass

from ..packets import DataPacket


@dataclass(frozen=True)
class RoutingParams:
    buffer_capacity: int = 64
    buffer_timeout: float = 30.0
    route_lifetime: float = 10.0
    rreq_seen_ttl: float = 5.0
    # first discovery retry fires after rreq_timeout, doubling up to rreq_timeout_max
    rreq_timeout: float = 0.5
    rreq_timeout_max: float = 10.0
    # a source counts as having pending traffic if it originated this recently
    active_flow_window: float = 1.0


class SendBuffer:
    """FIFO of data packets waiting for a route, bounded in size and age."""

    def __init__(self, capacity: int, timeout: float):
        self.capacity = capacity
        self.timeout = timeout
        self._entries: OrderedDict[int, tuple] = OrderedDict()

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, uid: int) -> bool:
        return uid in self._entries

    def push(self, packet, now: float):
        """Add ``packet``; returns the evicted oldest packet if the buffer was full."""
        evicted = None
        if len(self._entries) >= self.capacity:
            _, (evicted, _) = self._entries.popitem(last=False)
        self._entries[packet.uid] = (packet, now)
        return evicted

    def remove(self, uid: int):
        entry = self._entries.pop(uid, None)
        return None if entry is None else entry[0]

    def has(self, dst: int) -> bool:
        return any(p.dst == dst for p, _ in self._entries.values())

    def pop_for(self, dst: int) -> list:
        out = [p for p, _ in self._entries.values() if p.dst == dst]
        for p in out:
            del self._entries[p.uid]
        return out

    def packets(self) -> list:
        return [p for p, _ in self._entries.values()]


class RoutingAgent:
    """Per-node protocol instance. Subclasses implement the routing logic."""

    name = "base"

    def __init__(self, node_id: int, net):
        self.id = node_id
        self.net = net
        self.sim = net.sim
        self.world = net.world
        self.log = net.log
        self.params: RoutingParams = net.config.routing
        self.buffer = SendBuffer(self.params.buffer_capacity, self.params.buffer_timeout)
        self._discovering: dict[int, tuple] = {}
        self._last_sent: dict[int, float] = {}
        self.discoveries = 0

    # ------------------------------------------------------------ radio hooks
    def start(self) -> None:
        pass

    def can_transmit(self) -> bool:
        return True

    def transmitted(self) -> None:
        pass

    def link_ok(self, packet, receiver: int) -> None:
        pass

    def receive(self, packet, sender: int) -> None:
        raise NotImplementedError

    def link_failed(self, packet, receiver: int) -> None:
        raise NotImplementedError

    # ------------------------------------------------------------ data plane
    def originate(self, dst: int, size: int = 512) -> DataPacket:
        packet = DataPacket(self.net.next_uid(), self.id, dst, self.sim.now, size)
        packet.visited.append(self.id)
        self.log.originate(self.id, packet)
        self._last_sent[dst] = self.sim.now
        if dst == self.id:
            self.deliver(packet)
        else:
            self.send_data(packet)
        return packet

    def send_data(self, packet) -> None:
        """Send a packet this node originated, or buffer it and discover."""
        raise NotImplementedError

    def deliver(self, packet) -> None:
        self.log.deliver(self.id, packet)

    def drop(self, packet, reason: str) -> None:
        self.log.drop(self.id, packet, reason)

    def accept_data(self, packet) -> None:
        packet.visited.append(self.id)

    def buffer_packet(self, packet) -> None:
        evicted = self.buffer.push(packet, self.sim.now)
        if evicted is not None:
            self.drop(evicted, "buffer_full")
        self.sim.schedule(self.sim.now + self.buffer.timeout, self._buffer_expired, packet.uid, label="buftimeout")
        self.start_discovery(packet.dst)

    def _buffer_expired(self, uid: int) -> None:
        packet = self.buffer.remove(uid)
        if packet is not None:
            self.drop(packet, "buffer_timeout")

    def flush_buffer(self, dst: int) -> None:
        self._discovering.pop(dst, None)
        for packet in self.buffer.pop_for(dst):
            self.send_data(packet)

    def has_pending_traffic(self, dst: int) -> bool:
        last = self._last_sent.get(dst)
        recent = last is not None and self.sim.now - last <= self.params.active_flow_window
        return recent or self.buffer.has(dst)

    # ------------------------------------------------------------ discovery
    def start_discovery(self, dst: int) -> None:
        if dst in self._discovering:
            return
        self._issue_discovery(dst, 0)

    def restart_discovery(self, dst: int) -> None:
        """Discover ``dst`` now, even if an earlier attempt is still waiting."""
        self._discovering.pop(dst, None)
        self._issue_discovery(dst, 0)

    def _issue_discovery(self, dst: int, attempt: int) -> None:
        token = self.net.next_uid()
        self._discovering[dst] = (attempt, token)
        self.discoveries += 1
        self.send_rreq(dst)
        wait = min(self.params.rreq_timeout * 2 ** attempt, self.params.rreq_timeout_max)
        self.sim.schedule(self.sim.now + wait, self._discovery_timeout, dst, token, label="rreqtimeout")

    def _discovery_timeout(self, dst: int, token: int) -> None:
        state = self._discovering.get(dst)
        if state is None or state[1] != token:
            return
        if self.buffer.has(dst) and not self.has_route(dst):
            self._issue_discovery(dst, state[0] + 1)
        else:
            del self._discovering[dst]

    def send_rreq(self, dst: int) -> None:
        raise NotImplementedError

    def has_route(self, dst: int) -> bool:
        raise NotImplementedError
