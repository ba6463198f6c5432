"""Enhanced multipath routing (EMP).

Distance-vector discovery that keeps several loop-free, link-disjoint
paths per destination (advertised-hop-count rule), combined with the
SONNET neighbour table, which picks the next hop afresh for every data
packet so that traffic is spread over the available paths.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from ..packets import DataPacket, Enquiry, Rerr, Rrep, Rreq
from .base import RoutingAgent
from .sonnet import NeighborState, SonnetTable, score_entry


@dataclass(frozen=True)
class EmpParams:
    t_enq: float = 1.0
    # rows idle longer than this are purged; None means 3 * t_enq
    t_stale: Optional[float] = None
    weights: tuple = (1.0, 1.0, 1.0)
    k: int = 3
    theta: float = 0.3
    epsilon: float = 0.05
    c_tx: float = 1e-4
    window: float = 1.0

    @property
    def stale_after(self) -> float:
        return 3.0 * self.t_enq if self.t_stale is None else self.t_stale


@dataclass
class PathEntry:
    next_hop: int
    last_hop: int
    hop_count: int


@dataclass
class MultipathRoute:
    destination: int
    dest_seq: int
    advertised_hop_count: int
    paths: list = field(default_factory=list)
    expires_at: float = 0.0


def multipath_update(route: Optional[MultipathRoute], dest: int, seq: int, advertised: int, via: int,
                     first_hop: int, expires_at: float):
    """Apply one route advertisement; returns ``(route, accepted)``.

    ``advertised`` is the sender's advertised hop count to ``dest`` and
    ``first_hop`` is the node adjacent to ``dest`` on the advertised path.
    A newer sequence number replaces the path set and freezes the new
    advertised hop count; at equal sequence numbers a path is added only if
    it comes from a strictly closer advertiser and shares neither its next
    hop nor its last hop with an existing path. An emptied route keeps its
    frozen advertised hop count, otherwise loops could form.
    """
    path = PathEntry(via, first_hop, advertised + 1)
    if route is None or seq > route.dest_seq:
        return MultipathRoute(dest, seq, advertised + 1, [path], expires_at), True
    if seq < route.dest_seq or advertised >= route.advertised_hop_count:
        return route, False
    for p in route.paths:
        if p.next_hop == via or p.last_hop == first_hop:
            return route, False
    route.paths.append(path)
    route.expires_at = max(route.expires_at, expires_at)
    return route, True


class NodeVitals:
    """Battery drained per transmitted frame; bandwidth use over a sliding window."""

    def __init__(self, c_tx: float = 1e-4, window: float = 1.0, hop_delay: float = 0.002):
        self.c_tx = c_tx
        self.window = window
        self.hop_delay = hop_delay
        self.frames = 0
        self._recent: deque = deque()

    @property
    def battery(self) -> float:
        return max(0.0, 1.0 - self.frames * self.c_tx)

    def record_transmission(self, now: float) -> None:
        self.frames += 1
        self._recent.append(now)

    def bandwidth_usage(self, now: float) -> float:
        recent = self._recent
        cutoff = now - self.window
        while recent and recent[0] <= cutoff:
            recent.popleft()
        return min(1.0, len(recent) * self.hop_delay / self.window)


class EmpAgent(RoutingAgent):
    name = "EMP"

    def __init__(self, node_id, net):
        super().__init__(node_id, net)
        self.emp: EmpParams = net.config.emp
        self.table: dict[int, MultipathRoute] = {}
        self.sonnet = SonnetTable(self.emp.k, self.emp.theta)
        self.vitals = NodeVitals(self.emp.c_tx, self.emp.window, self.world.radio.hop_delay)
        self.seen: dict[tuple, float] = {}
        self.reply_seq: dict[tuple, int] = {}
        self.rrep_used: dict[tuple, set] = {}
        self.own_seq = 0
        self.broadcast_id = 0
        self.enquiries_sent = 0
        self._rr: dict[int, int] = {}
        self._probes: set = set()

    # ------------------------------------------------------------ enquiries
    def start(self) -> None:
        self.sim.schedule(self.emp.t_enq, self._enquiry_tick, 1, label="enquiry")

    def can_transmit(self) -> bool:
        return self.vitals.frames * self.vitals.c_tx < 1.0

    def transmitted(self) -> None:
        self.vitals.record_transmission(self.sim.now)

    def _enquiry_tick(self, k: int) -> None:
        now = self.sim.now
        self.sonnet.expire(now, self.emp.stale_after)
        if self.can_transmit():
            msg = Enquiry(self.net.next_uid(), self.id, self.vitals.battery, self.vitals.bandwidth_usage(now))
            self.enquiries_sent += 1
            self.world.broadcast(self.id, msg)
            self.sim.schedule((k + 1) * self.emp.t_enq, self._enquiry_tick, k + 1, label="enquiry")

    def handle_enquiry(self, msg: Enquiry, sender: int) -> None:
        now = self.sim.now
        signal = self.world.signal_strength(sender, self.id, now)
        self.sonnet.handle_enquiry(sender, msg.battery, msg.bandwidth_usage, signal, now)
        self.log.rx(self.id, msg, sender)

    # ------------------------------------------------------------ table
    def route(self, dst: int):
        route = self.table.get(dst)
        if route is not None and route.paths and self.sim.now < route.expires_at:
            return route
        return None

    def has_route(self, dst: int) -> bool:
        return self.route(dst) is not None

    def _advert(self, dest, seq, advertised, via, first_hop) -> bool:
        expires = self.sim.now + self.params.route_lifetime
        route, accepted = multipath_update(self.table.get(dest), dest, seq, advertised, via, first_hop, expires)
        self.table[dest] = route
        return accepted

    def _seen(self, key: tuple) -> bool:
        now = self.sim.now
        expiry = self.seen.get(key)
        if expiry is not None and now < expiry:
            return True
        if len(self.seen) > 512:
            self.seen = {k: v for k, v in self.seen.items() if v > now}
        self.seen[key] = now + self.params.rreq_seen_ttl
        return False

    def select_next_hop(self, route: MultipathRoute, exclude=()) -> Optional[int]:
        """Next hop for one data packet; None if every path leads back into ``exclude``."""
        paths = [p for p in route.paths if p.next_hop not in exclude] if exclude else route.paths
        if not paths:
            return None
        weights = self.emp.weights
        scored = []
        for p in paths:
            row = self.sonnet.get(p.next_hop)
            if row is not None:
                scored.append((score_entry(row, weights), p, row))
        if not scored:
            self._probe_later(route)
            return min(paths, key=lambda p: (p.hop_count, p.next_hop)).next_hop
        stable = [s for s in scored if s[2].neighbor_state is NeighborState.STABLE]
        pool = stable or scored
        best = max(s[0] for s in pool)
        band = sorted((s[1] for s in pool if s[0] >= best - self.emp.epsilon),
                      key=lambda p: (p.hop_count, p.next_hop))
        # the turn advances even with a single candidate so alternation survives path changes
        turn = self._rr.get(route.destination, 0)
        self._rr[route.destination] = turn + 1
        return band[turn % len(band)].next_hop

    def _probe_later(self, route: MultipathRoute) -> None:
        key = (route.destination, route.dest_seq)
        if key not in self._probes:
            self._probes.add(key)
            self.sim.schedule(self.sim.now + self.emp.stale_after, self._probe, route.destination, label="probe")

    def _probe(self, dst: int) -> None:
        route = self.route(dst)
        if route is None or any(self.sonnet.get(p.next_hop) for p in route.paths):
            return
        if self.has_pending_traffic(dst):
            self.restart_discovery(dst)

    def _forward(self, packet: DataPacket) -> bool:
        route = self.route(packet.dst)
        if route is None:
            return False
        route.expires_at = self.sim.now + self.params.route_lifetime
        # a route that changed while the packet was in flight may point back where it came from
        nxt = self.select_next_hop(route, packet.visited)
        if nxt is None:
            self.drop(packet, "loop")
        else:
            self.world.unicast(self.id, nxt, packet)
        return True

    # ------------------------------------------------------------ origination
    def send_data(self, packet: DataPacket) -> None:
        if not self._forward(packet):
            self.buffer_packet(packet)

    def send_rreq(self, dst: int) -> None:
        self.own_seq += 1
        self.broadcast_id += 1
        self._seen((self.id, self.broadcast_id))
        known = self.table.get(dst)
        rreq = Rreq(self.net.next_uid(), self.id, self.broadcast_id, self.own_seq, dst,
                    None if known is None else known.dest_seq, 0, None)
        self.world.broadcast(self.id, rreq)

    # ------------------------------------------------------------ reception
    def receive(self, packet, sender: int) -> None:
        if isinstance(packet, DataPacket):
            self.handle_data(packet)
        elif isinstance(packet, Enquiry):
            self.handle_enquiry(packet, sender)
        elif isinstance(packet, Rreq):
            self.handle_rreq(packet, sender)
        elif isinstance(packet, Rrep):
            self.handle_rrep(packet, sender)
        elif isinstance(packet, Rerr):
            self.handle_rerr(packet, sender)

    def handle_data(self, packet: DataPacket) -> None:
        self.accept_data(packet)
        if packet.dst == self.id:
            self.deliver(packet)
        elif not self._forward(packet):
            self.drop(packet, "no_route")
            known = self.table.get(packet.dst)
            seq = known.dest_seq + 1 if known is not None else 0
            self.world.broadcast(self.id, Rerr(self.net.next_uid(), ((packet.dst, seq),)))

    def handle_rreq(self, rreq: Rreq, sender: int) -> None:
        if rreq.origin == self.id:
            return
        first_hop = self.id if rreq.first_hop is None else rreq.first_hop
        accepted = self._advert(rreq.origin, rreq.origin_seq, rreq.hop_count, sender, first_hop)
        key = (rreq.origin, rreq.broadcast_id)
        duplicate = self._seen(key)
        if rreq.dst == self.id:
            if not duplicate:
                self.own_seq = max(self.own_seq, rreq.dest_seq or 0) + 1
                self.reply_seq[key] = self.own_seq
            if accepted and key in self.reply_seq:
                rrep = Rrep(self.net.next_uid(), rreq.origin, self.id, self.reply_seq[key], 0, None)
                self.world.unicast(self.id, sender, rrep)
            return
        if duplicate:
            return
        back = self.table.get(rreq.origin)
        if back is None or not back.paths or back.dest_seq != rreq.origin_seq:
            return
        self.world.broadcast(self.id, Rreq(rreq.uid, rreq.origin, rreq.broadcast_id, rreq.origin_seq, rreq.dst,
                                           rreq.dest_seq, back.advertised_hop_count, first_hop))

    def handle_rrep(self, rrep: Rrep, sender: int) -> None:
        first_hop = self.id if rrep.first_hop is None else rrep.first_hop
        if not self._advert(rrep.dest, rrep.dest_seq, rrep.hop_count, sender, first_hop):
            return
        if rrep.origin == self.id:
            self.flush_buffer(rrep.dest)
            return
        back = self.route(rrep.origin)
        if back is None:
            return
        used = self.rrep_used.setdefault((rrep.origin, rrep.dest, rrep.dest_seq), set())
        for p in sorted(back.paths, key=lambda p: (p.hop_count, p.next_hop)):
            if p.next_hop not in used:
                used.add(p.next_hop)
                advertised = self.table[rrep.dest].advertised_hop_count
                self.world.unicast(self.id, p.next_hop, Rrep(rrep.uid, rrep.origin, rrep.dest, rrep.dest_seq,
                                                             advertised, first_hop))
                return

    def handle_rerr(self, rerr: Rerr, sender: int) -> None:
        lost = []
        for dst, seq in rerr.unreachable:
            route = self.table.get(dst)
            if route is None or not route.paths:
                continue
            kept = [p for p in route.paths if p.next_hop != sender]
            if len(kept) == len(route.paths):
                continue
            route.paths = kept
            if not kept:
                route.dest_seq = max(route.dest_seq, seq)
                lost.append((dst, route.dest_seq))
        if lost:
            self.world.broadcast(self.id, Rerr(self.net.next_uid(), tuple(lost)))
            self._rediscover(d for d, _ in lost)

    # ------------------------------------------------------------ maintenance
    def link_failed(self, packet, receiver: int) -> None:
        lost = []
        for route in self.table.values():
            if not route.paths:
                continue
            kept = [p for p in route.paths if p.next_hop != receiver]
            if len(kept) != len(route.paths):
                route.paths = kept
                if not kept:
                    route.dest_seq += 1
                    lost.append((route.destination, route.dest_seq))
        if lost:
            self.world.broadcast(self.id, Rerr(self.net.next_uid(), tuple(lost)))
        skip = None
        if isinstance(packet, DataPacket):
            # alternate paths first; only then fall back to rediscovery
            if not self._forward(packet):
                if packet.src == self.id:
                    skip = packet.dst
                    self._discovering.pop(packet.dst, None)
                    self.buffer_packet(packet)
                else:
                    self.drop(packet, "link_break")
        self._rediscover(d for d, _ in lost if d != skip)

    def _rediscover(self, dsts) -> None:
        for dst in dsts:
            if dst != self.id and self.has_pending_traffic(dst) and not self.has_route(dst):
                self.restart_discovery(dst)

    # ------------------------------------------------------------ snapshots
    def route_snapshot(self) -> list[dict]:
        out = []
        for dst in sorted(self.table):
            r = self.table[dst]
            out.append({
                "destination": dst,
                "dest_seq": r.dest_seq,
                "advertised_hop_count": r.advertised_hop_count,
                "paths": [(p.next_hop, p.last_hop, p.hop_count) for p in r.paths],
            })
        return out
