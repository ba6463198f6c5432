import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from manetsim.core import RngStreams, Simulator
from manetsim.packets import DataPacket
from manetsim.world import (FieldSpec, MobilityParams, MotionState, RadioParams, RandomWaypoint, StaticPlacement,
                            UnknownNode, World)


class Recorder:
    def __init__(self, sim):
        self.sim = sim
        self.events = []

    def can_transmit(self):
        return True

    def transmitted(self):
        pass

    def receive(self, packet, sender):
        self.events.append(("rx", self.sim.now, sender))

    def link_ok(self, packet, receiver):
        self.events.append(("ok", self.sim.now, receiver))

    def link_failed(self, packet, receiver):
        self.events.append(("fail", self.sim.now, receiver))


def build(positions, **radio):
    sim = Simulator()
    world = World(sim, StaticPlacement(positions), RadioParams(**radio), RngStreams(1))
    agents = [Recorder(sim) for _ in positions]
    world.attach(agents)
    return sim, world, agents


def data(uid=1):
    return DataPacket(uid, 0, 1, 0.0, 512)


def test_midway_position():
    leg = MotionState(0, (0.0, 0.0), (100.0, 0.0), 10.0, 0.0)
    assert leg.position(5.0) == (50.0, 0.0)


def test_arrival_clamps_to_waypoint():
    leg = MotionState(0, (0.0, 0.0), (100.0, 0.0), 10.0, 0.0)
    assert leg.arrive_at == 10.0
    assert leg.position(10.0) == (100.0, 0.0)
    assert leg.position(12.0) == (100.0, 0.0)


def test_zero_speed_is_stationary():
    leg = MotionState(0, (3.0, 4.0), (100.0, 0.0), 0.0, 0.0)
    assert all(leg.position(t) == (3.0, 4.0) for t in (0.0, 1.0, 1e6))


def test_boundary_distance_is_a_link():
    _, world, _ = build([(0.0, 0.0), (250.0, 0.0), (501.0, 0.0)])
    assert world.neighbors(0, 0.0) == [1]
    assert world.neighbors(1, 0.0) == [0]
    # 251 m apart
    assert 2 not in world.neighbors(1, 0.0)


def test_unknown_node():
    _, world, _ = build([(0.0, 0.0), (1.0, 0.0)])
    with pytest.raises(UnknownNode):
        world.neighbors(5, 0.0)


def test_neighbor_relation_is_symmetric():
    streams = RngStreams(11)
    motion = RandomWaypoint(50, FieldSpec(), MobilityParams(), streams)
    world = World(Simulator(), motion, RadioParams(), streams)
    for t in (0.0, 17.5, 60.0):
        for u in range(50):
            for v in world.neighbors(u, t):
                assert u in world.neighbors(v, t)


@pytest.mark.parametrize("d, expected", [(0.0, 1.0), (250.0, 0.0), (125.0, 0.5), (400.0, 0.0)])
def test_signal_strength(d, expected):
    _, world, _ = build([(0.0, 0.0), (d, 0.0)])
    assert world.signal_strength(0, 1, 0.0) == pytest.approx(expected, abs=1e-12)


@given(st.floats(0, 600), st.floats(0, 600))
def test_signal_monotone_in_distance(d1, d2):
    _, world, _ = build([(0.0, 0.0), (min(d1, d2), 0.0), (max(d1, d2), 0.0)])
    s_near = world.signal_strength(0, 1, 0.0)
    s_far = world.signal_strength(0, 2, 0.0)
    assert 0.0 <= s_far <= s_near <= 1.0


def test_broadcast_without_neighbors_is_silent():
    sim, world, agents = build([(0.0, 0.0), (1000.0, 0.0)])
    assert world.broadcast(0, data()) == 0
    sim.run_until(10.0)
    assert sim.trace == []
    assert all(a.events == [] for a in agents)


def test_unicast_in_range_arrives_after_one_hop_delay():
    sim, world, agents = build([(0.0, 0.0), (100.0, 0.0)])
    sim.run_until(1.0)
    world.unicast(0, 1, data())
    sim.run_until(2.0)
    assert agents[1].events == [("rx", 1.002, 0)]
    assert agents[0].events == [("ok", 1.002, 1)]


def test_unicast_out_of_range_fails_after_retries():
    sim, world, agents = build([(0.0, 0.0), (300.0, 0.0)])
    sim.run_until(1.0)
    world.unicast(0, 1, data())
    sim.run_until(5.0)
    assert agents[1].events == []
    [(what, t, peer)] = agents[0].events
    # 3 retries 0.05 s apart, then one hop delay
    assert what == "fail" and peer == 1
    assert t == pytest.approx(1.0 + 3 * 0.05 + 0.002, abs=1e-12)


def test_unicast_to_self_is_rejected():
    _, world, _ = build([(0.0, 0.0), (1.0, 0.0)])
    with pytest.raises(ValueError):
        world.unicast(0, 0, data())


def test_total_loss_always_fails():
    sim, world, agents = build([(0.0, 0.0), (10.0, 0.0)], loss_prob=1.0)
    world.unicast(0, 1, data())
    sim.run_until(1.0)
    assert agents[0].events[0][0] == "fail"


def test_disabled_node_is_unreachable():
    sim, world, agents = build([(0.0, 0.0), (10.0, 0.0)])
    world.disable(1)
    assert world.neighbors(0, 0.0) == []
    world.unicast(0, 1, data())
    sim.run_until(1.0)
    assert agents[0].events[0][0] == "fail"


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.floats(0, 500))
def test_positions_stay_in_field(seed, t):
    field = FieldSpec()
    motion = RandomWaypoint(20, field, MobilityParams(), RngStreams(seed))
    for x, y in motion.positions(t):
        assert 0.0 <= x <= field.width and 0.0 <= y <= field.height


def test_trajectories_independent_of_query_order():
    a = RandomWaypoint(5, FieldSpec(), MobilityParams(), RngStreams(9))
    b = RandomWaypoint(5, FieldSpec(), MobilityParams(), RngStreams(9))
    late = [a.position_at(i, 90.0) for i in range(5)]
    for t in range(0, 90, 3):
        b.positions(float(t))
    assert [b.position_at(i, 90.0) for i in range(5)] == late
    assert a.position_at(2, 10.0) == b.position_at(2, 10.0)


def test_motion_is_continuous_across_legs():
    motion = RandomWaypoint(1, FieldSpec(), MobilityParams(), RngStreams(4))
    motion.position_at(0, 200.0)
    legs = motion.legs(0)
    for prev, nxt in zip(legs, legs[1:]):
        assert nxt.origin == prev.waypoint
        assert math.isclose(nxt.depart_at, prev.ends_at)


def test_invalid_parameters():
    with pytest.raises(ValueError):
        FieldSpec(0, 10)
    with pytest.raises(ValueError):
        RadioParams(range=0)
    with pytest.raises(ValueError):
        RadioParams(hop_delay=0)
    with pytest.raises(ValueError):
        MobilityParams(5, 1)
