"""Ad hoc On-demand Distance Vector routing with destination sequence numbers."""

from __future__ import annotations

from dataclasses import dataclass

from ..packets import DataPacket, Rerr, Rrep, Rreq
from .base import RoutingAgent


def freshness_better(candidate: tuple, current: tuple) -> bool:
    """True iff ``(seq, hops)`` candidate is fresher, or as fresh and shorter."""
    c_seq, c_hops = candidate
    seq, hops = current
    return c_seq > seq or (c_seq == seq and c_hops < hops)


@dataclass
class AodvRouteEntry:
    destination: int
    dest_seq: int
    hop_count: int
    next_hop: int
    expires_at: float
    valid: bool = True


class AodvAgent(RoutingAgent):
    name = "AODV"

    def __init__(self, node_id, net):
        super().__init__(node_id, net)
        self.table: dict[int, AodvRouteEntry] = {}
        self.seen: dict[tuple, float] = {}
        self.own_seq = 0
        self.broadcast_id = 0

    # ------------------------------------------------------------ table
    def route(self, dst: int):
        """The usable entry for ``dst`` or None."""
        entry = self.table.get(dst)
        if entry is not None and entry.valid and self.sim.now < entry.expires_at:
            return entry
        return None

    def has_route(self, dst: int) -> bool:
        return self.route(dst) is not None

    def update_route(self, dst: int, seq: int, hops: int, via: int) -> bool:
        entry = self.table.get(dst)
        if entry is not None and not freshness_better((seq, hops), (entry.dest_seq, entry.hop_count)):
            # an invalidated entry only guards its sequence number, not its hop count
            if entry.valid or seq < entry.dest_seq:
                return False
        expires = self.sim.now + self.params.route_lifetime
        if entry is None:
            self.table[dst] = AodvRouteEntry(dst, seq, hops, via, expires)
        else:
            entry.dest_seq, entry.hop_count, entry.next_hop = seq, hops, via
            entry.expires_at, entry.valid = expires, True
        return True

    def _seen(self, key: tuple) -> bool:
        now = self.sim.now
        expiry = self.seen.get(key)
        if expiry is not None and now < expiry:
            return True
        if len(self.seen) > 512:
            self.seen = {k: v for k, v in self.seen.items() if v > now}
        self.seen[key] = now + self.params.rreq_seen_ttl
        return False

    # ------------------------------------------------------------ origination
    def send_data(self, packet: DataPacket) -> None:
        entry = self.route(packet.dst)
        if entry is None:
            self.buffer_packet(packet)
            return
        entry.expires_at = self.sim.now + self.params.route_lifetime
        self.world.unicast(self.id, entry.next_hop, packet)

    def send_rreq(self, dst: int) -> None:
        self.own_seq += 1
        self.broadcast_id += 1
        self._seen((self.id, self.broadcast_id))
        known = self.table.get(dst)
        rreq = Rreq(self.net.next_uid(), self.id, self.broadcast_id, self.own_seq, dst,
                    None if known is None else known.dest_seq, 0)
        self.world.broadcast(self.id, rreq)

    # ------------------------------------------------------------ reception
    def receive(self, packet, sender: int) -> None:
        if isinstance(packet, DataPacket):
            self.handle_data(packet)
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
            return
        entry = self.route(packet.dst)
        if entry is None:
            self.drop(packet, "no_route")
            known = self.table.get(packet.dst)
            seq = known.dest_seq + 1 if known is not None else 0
            self.world.broadcast(self.id, Rerr(self.net.next_uid(), ((packet.dst, seq),)))
            return
        entry.expires_at = self.sim.now + self.params.route_lifetime
        self.world.unicast(self.id, entry.next_hop, packet)

    def handle_rreq(self, rreq: Rreq, sender: int) -> None:
        if rreq.origin == self.id or self._seen((rreq.origin, rreq.broadcast_id)):
            return
        self.update_route(rreq.origin, rreq.origin_seq, rreq.hop_count + 1, sender)
        if rreq.dst == self.id:
            # a destination's number only moves up, past anything the requester knew
            self.own_seq = max(self.own_seq, rreq.dest_seq or 0) + 1
            rrep = Rrep(self.net.next_uid(), rreq.origin, self.id, self.own_seq, 0)
            self.world.unicast(self.id, sender, rrep)
        else:
            self.world.broadcast(self.id, Rreq(rreq.uid, rreq.origin, rreq.broadcast_id, rreq.origin_seq,
                                               rreq.dst, rreq.dest_seq, rreq.hop_count + 1))

    def handle_rrep(self, rrep: Rrep, sender: int) -> None:
        # a stale reply still travels on: its origin may have nothing fresher
        self.update_route(rrep.dest, rrep.dest_seq, rrep.hop_count + 1, sender)
        if rrep.origin == self.id:
            if self.has_route(rrep.dest):
                self.flush_buffer(rrep.dest)
            return
        back = self.route(rrep.origin)
        if back is None:
            return
        back.expires_at = self.sim.now + self.params.route_lifetime
        self.world.unicast(self.id, back.next_hop, Rrep(rrep.uid, rrep.origin, rrep.dest, rrep.dest_seq,
                                                        rrep.hop_count + 1))

    def handle_rerr(self, rerr: Rerr, sender: int) -> None:
        lost = []
        for dst, seq in rerr.unreachable:
            entry = self.table.get(dst)
            if entry is not None and entry.valid and entry.next_hop == sender:
                entry.valid = False
                entry.dest_seq = max(entry.dest_seq, seq)
                lost.append((dst, entry.dest_seq))
        if lost:
            self.world.broadcast(self.id, Rerr(self.net.next_uid(), tuple(lost)))
            self._rediscover([d for d, _ in lost])

    # ------------------------------------------------------------ maintenance
    def link_failed(self, packet, receiver: int) -> None:
        lost = []
        for entry in self.table.values():
            if entry.valid and entry.next_hop == receiver:
                entry.valid = False
                entry.dest_seq += 1
                lost.append((entry.destination, entry.dest_seq))
        if lost:
            self.world.broadcast(self.id, Rerr(self.net.next_uid(), tuple(lost)))
        if isinstance(packet, DataPacket):
            if packet.src == self.id:
                self._discovering.pop(packet.dst, None)
                self.send_data(packet)
            else:
                self.drop(packet, "link_break")
        self._rediscover([d for d, _ in lost if not isinstance(packet, DataPacket) or d != packet.dst
                          or packet.src != self.id])

    def _rediscover(self, dsts) -> None:
        for dst in dsts:
            if dst != self.id and self.has_pending_traffic(dst) and not self.has_route(dst):
                self.restart_discovery(dst)
