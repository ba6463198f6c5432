import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import CHAIN, B, C, D, S, make_net, sent
from manetsim.packets import DsrRreq
from manetsim.protocols.dsr import RouteCache, route_has_link


def spy(net):
    calls = []
    world = net.world
    orig_b, orig_u = world.broadcast, world.unicast
    world.broadcast = lambda sender, p: (calls.append(("b", sender, p)), orig_b(sender, p))[1]
    world.unicast = lambda sender, rx, p: (calls.append(("u", sender, rx, p)), orig_u(sender, rx, p))[1]
    return calls


def test_local_delivery_sends_nothing():
    net = make_net("DSR", CHAIN)
    net.send(S, S)
    net.run_until(1.0)
    assert net.log.delivered == 1
    assert [r for r in net.log.records if r[3] == "tx"] == []


def test_cache_hit_source_routes_the_packet():
    net = make_net("DSR", CHAIN)
    net.agents[S].cache.add((S, B, C, D))
    calls = spy(net)
    packet = net.send(S, D)
    assert calls[0][:3] == ("u", S, B)
    assert packet.route == (S, B, C, D)


def test_cache_miss_buffers_and_floods_once():
    net = make_net("DSR", CHAIN)
    net.send(S, D)
    assert len(net.agents[S].buffer) == 1
    assert len(sent(net, "RREQ")) == 1


def test_duplicate_request_is_discarded():
    net = make_net("DSR", CHAIN)
    calls = spy(net)
    rreq = DsrRreq(99, S, 1, D, (S,))
    net.agents[B].handle_rreq(rreq)
    net.agents[B].handle_rreq(rreq)
    assert len(calls) == 1


def test_intermediate_appends_itself():
    net = make_net("DSR", CHAIN)
    calls = spy(net)
    net.agents[B].handle_rreq(DsrRreq(99, S, 1, D, (S,)))
    [(_, sender, packet)] = calls
    assert sender == B and packet.record == (S, B)


def test_target_replies_along_reversed_record():
    net = make_net("DSR", CHAIN)
    net.send(S, D)
    net.run_until(2.0)
    hops = [(r[1], r[5]) for r in sent(net, "RREP")]
    assert hops == [(D, C), (C, B), (B, S)]
    assert net.agents[S].cache.best(D) == (S, B, C, D)
    # hop count equals the BFS distance on the chain
    assert len(net.agents[S].cache.best(D)) - 1 == 3


def test_buffered_packet_flushed_on_reply():
    net = make_net("DSR", CHAIN)
    net.send(S, D)
    net.run_until(2.0)
    assert net.log.delivered == 1
    assert len(net.agents[S].buffer) == 0


def test_later_packets_skip_discovery_and_are_faster():
    net = make_net("DSR", CHAIN)
    net.send_at(0.0, S, D)
    net.send_at(1.0, S, D)
    net.run_until(3.0)
    delays = {}
    for t, _node, kind, event, uid, _ in net.log.records:
        if kind == "data" and event == "originate":
            delays[uid] = -t
        elif kind == "data" and event == "deliver":
            delays[uid] += t
    first, second = sorted(delays.items())
    assert second[1] < first[1]
    assert second[1] == pytest.approx(3 * 0.002)
    assert len(sent(net, "RREQ")) == 3  # one flood: S, B, C rebroadcast


def test_identical_route_is_idempotent():
    cache = RouteCache(S)
    assert cache.add((S, B, C, D))
    assert not cache.add((S, B, C, D))
    assert cache.routes(D) == [(S, B, C, D)]


def test_purge_removes_only_routes_over_the_link():
    cache = RouteCache(0)
    cache.add((0, 1, 2, 3))
    cache.add((0, 4, 3))
    assert cache.purge_link(2, 1) == 1
    assert cache.routes(3) == [(0, 4, 3)]
    assert cache.best(3) == (0, 4, 3)


def test_best_route_prefers_fewer_hops_then_lexicographic():
    cache = RouteCache(0)
    cache.add((0, 5, 6, 9))
    cache.add((0, 3, 9))
    cache.add((0, 2, 9))
    assert cache.best(9) == (0, 2, 9)


def test_cache_rejects_foreign_or_looping_routes():
    cache = RouteCache(0)
    with pytest.raises(ValueError):
        cache.add((1, 2))
    with pytest.raises(ValueError):
        cache.add((0, 1, 0, 2))


def test_mid_route_break_purges_source_and_rediscovers():
    net = make_net("DSR", CHAIN)
    net.send_at(0.0, S, D)
    net.run_until(1.0)
    before = len([r for r in sent(net, "RREQ") if r[1] == S])
    net.world.disable(C)
    net.send_at(1.0, S, D)
    net.run_until(2.0)
    assert not any(route_has_link(r, B, C) for r in net.agents[S].cache.all_routes())
    assert [(r[1], r[5]) for r in sent(net, "RERR")] == [(B, S)]
    assert len([r for r in sent(net, "RREQ") if r[1] == S]) > before
    assert [r[3] for r in net.log.records if r[2] == "data" and r[1] == B][-1] == "drop:link_break"


def test_last_hop_break_reports_back_to_source():
    net = make_net("DSR", CHAIN)
    net.send_at(0.0, S, D)
    net.run_until(1.0)
    net.world.disable(D)
    net.send_at(1.0, S, D)
    net.run_until(2.0)
    assert [(r[1], r[5]) for r in sent(net, "RERR")] == [(C, B), (B, S)]
    assert net.agents[S].cache.best(D) is None


@given(st.lists(st.permutations(range(1, 7)).map(lambda p: (0,) + tuple(p[:3])), min_size=1, max_size=10),
       st.tuples(st.integers(0, 6), st.integers(0, 6)))
def test_cache_never_keeps_a_purged_link(routes, link):
    cache = RouteCache(0)
    for r in routes:
        cache.add(r)
    cache.purge_link(*link)
    for r in cache.all_routes():
        assert r[0] == 0 and len(set(r)) == len(r)
        assert not route_has_link(r, *link)
    for dst in {r[-1] for r in cache.all_routes()}:
        assert cache.best(dst) == min(cache.routes(dst), key=lambda r: (len(r), r))
