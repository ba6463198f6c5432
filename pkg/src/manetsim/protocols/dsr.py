"""Dynamic Source Routing: route-record flooding, source-routed data and
route-error driven cache purging."""

from __future__ import annotations

from ..packets import DataPacket, DsrRerr, DsrRrep, DsrRreq
from .base import RoutingAgent


def route_has_link(route: tuple, u: int, v: int) -> bool:
    for a, b in zip(route, route[1:]):
        if (a == u and b == v) or (a == v and b == u):
            return True
    return False


class RouteCache:
    """Complete source routes per destination, all starting at ``owner``."""

    def __init__(self, owner: int):
        self.owner = owner
        # dict keys keep insertion order and give O(1) duplicate checks
        self._routes: dict[int, dict[tuple, None]] = {}
        self._best: dict[int, tuple] = {}

    def add(self, route) -> bool:
        route = tuple(route)
        if len(route) < 2 or route[0] != self.owner or len(set(route)) != len(route):
            raise ValueError(f"not a loop-free route from {self.owner}: {route}")
        dst = route[-1]
        routes = self._routes.setdefault(dst, {})
        if route in routes:
            return False
        routes[route] = None
        best = self._best.get(dst)
        if best is None or (len(route), route) < (len(best), best):
            self._best[dst] = route
        return True

    def best(self, dst: int):
        """Fewest hops, ties broken by lexicographic node order."""
        return self._best.get(dst)

    def routes(self, dst: int) -> list[tuple]:
        return list(self._routes.get(dst, ()))

    def all_routes(self) -> list[tuple]:
        return [r for routes in self._routes.values() for r in routes]

    def purge_link(self, u: int, v: int) -> int:
        removed = 0
        for dst in list(self._routes):
            routes = self._routes[dst]
            gone = [r for r in routes if route_has_link(r, u, v)]
            if not gone:
                continue
            removed += len(gone)
            for r in gone:
                del routes[r]
            if routes:
                self._best[dst] = min(routes, key=lambda r: (len(r), r))
            else:
                del self._routes[dst]
                del self._best[dst]
        return removed


class DsrAgent(RoutingAgent):
    name = "DSR"

    def __init__(self, node_id, net):
        super().__init__(node_id, net)
        self.cache = RouteCache(node_id)
        self.seen: set[tuple] = set()
        self.request_id = 0

    def has_route(self, dst: int) -> bool:
        return self.cache.best(dst) is not None

    # ------------------------------------------------------------ origination
    def send_data(self, packet: DataPacket) -> None:
        route = self.cache.best(packet.dst)
        if route is None:
            self.buffer_packet(packet)
            return
        packet.route = route
        packet.index = 0
        self.world.unicast(self.id, route[1], packet)

    def send_rreq(self, dst: int) -> None:
        self.request_id += 1
        self.seen.add((self.id, self.request_id))
        rreq = DsrRreq(self.net.next_uid(), self.id, self.request_id, dst, (self.id,))
        self.world.broadcast(self.id, rreq)

    # ------------------------------------------------------------ reception
    def receive(self, packet, sender: int) -> None:
        if isinstance(packet, DataPacket):
            self.handle_data(packet)
        elif isinstance(packet, DsrRreq):
            self.handle_rreq(packet)
        elif isinstance(packet, DsrRrep):
            self.handle_rrep(packet)
        elif isinstance(packet, DsrRerr):
            self.handle_rerr(packet)

    def learn(self, path: tuple, i: int) -> None:
        """Cache both directions of ``path`` as seen from position ``i``."""
        if i < len(path) - 1:
            self.cache.add(path[i:])
        if i > 0:
            self.cache.add(path[i::-1])

    def handle_data(self, packet: DataPacket) -> None:
        self.accept_data(packet)
        packet.index += 1
        self.learn(packet.route, packet.index)
        if packet.dst == self.id:
            self.deliver(packet)
            return
        self.world.unicast(self.id, packet.route[packet.index + 1], packet)

    def handle_rreq(self, rreq: DsrRreq) -> None:
        key = (rreq.initiator, rreq.request_id)
        if key in self.seen or self.id in rreq.record:
            return
        self.seen.add(key)
        record = rreq.record + (self.id,)
        # links are symmetric, so the reversed record is usable right away
        self.cache.add(record[::-1])
        if self.id == rreq.target:
            self.world.unicast(self.id, record[-2], DsrRrep(self.net.next_uid(), record))
        else:
            self.world.broadcast(self.id, DsrRreq(rreq.uid, rreq.initiator, rreq.request_id, rreq.target, record))

    def handle_rrep(self, rrep: DsrRrep) -> None:
        route = rrep.route
        try:
            i = route.index(self.id)
        except ValueError:
            return
        self.learn(route, i)
        if i == 0:
            self.flush_buffer(route[-1])
        else:
            self.world.unicast(self.id, route[i - 1], rrep)

    def handle_rerr(self, rerr: DsrRerr) -> None:
        self.cache.purge_link(*rerr.link)
        i = rerr.path.index(self.id)
        if i == len(rerr.path) - 1:
            if self.has_pending_traffic(rerr.target) and not self.has_route(rerr.target):
                self.restart_discovery(rerr.target)
        else:
            self.world.unicast(self.id, rerr.path[i + 1], rerr)

    # ------------------------------------------------------------ maintenance
    def link_failed(self, packet, receiver: int) -> None:
        self.cache.purge_link(self.id, receiver)
        if not isinstance(packet, DataPacket):
            return
        if packet.src == self.id:
            # failed on our own first hop: retry on another cached route or rediscover
            packet.route = None
            if not self.has_route(packet.dst):
                self._discovering.pop(packet.dst, None)
            self.send_data(packet)
            return
        self.drop(packet, "link_break")
        back = packet.route[: packet.index + 1][::-1]
        rerr = DsrRerr(self.net.next_uid(), (self.id, receiver), packet.dst, back)
        self.world.unicast(self.id, back[1], rerr)
