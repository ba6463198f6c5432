"""Trace- and snapshot-level property checks shared by tests and demos."""

from __future__ import annotations

from collections import defaultdict

from .packets import DATA
from .trace import enquiry_receptions
from .protocols.sonnet import COLUMNS


def hop_sequences(records) -> dict[int, list[int]]:
    """Per data uid: source followed by every receiver of a logged hop."""
    seqs: dict[int, list[int]] = {}
    for _t, node, kind, event, uid, peer in records:
        if kind != DATA:
            continue
        if event == "originate":
            seqs[uid] = [node]
        elif event == "tx":
            seqs[uid].append(peer)
    return seqs


def loop_violations(records) -> list[int]:
    """Delivered data uids whose hop sequence repeats a node."""
    seqs = hop_sequences(records)
    delivered = [r[4] for r in records if r[2] == DATA and r[3] == "deliver"]
    return [uid for uid in delivered if len(set(seqs[uid])) != len(seqs[uid])]


def neighbor_violations(records, world) -> list[tuple]:
    """Data hops whose endpoints were out of range at transmission time."""
    bad = []
    for t, node, kind, event, uid, peer in records:
        if kind == DATA and event == "tx" and world.distance(node, peer, t) > world.radio.range:
            bad.append((t, node, peer, uid))
    return bad


def conservation_ok(records) -> bool:
    """Every originated data packet ends exactly once: delivered, dropped or pending."""
    state: dict[int, int] = defaultdict(int)
    originated = set()
    for _t, _node, kind, event, uid, _peer in records:
        if kind != DATA:
            continue
        if event == "originate":
            originated.add(uid)
        elif event == "deliver" or event == "pending" or event.startswith("drop:"):
            state[uid] += 1
    return set(state) == originated and all(v == 1 for v in state.values())


def disjointness_violations(snapshot: dict) -> list[tuple]:
    bad = []
    for node, tables in snapshot["nodes"].items():
        for route in tables["routes"]:
            paths = route["paths"]
            next_hops = [p[0] for p in paths]
            last_hops = [p[1] for p in paths]
            if len(set(next_hops)) != len(next_hops) or len(set(last_hops)) != len(last_hops):
                bad.append((snapshot["time"], node, route["destination"], route["dest_seq"]))
    return bad


def sonnet_violations(net, records) -> list[tuple]:
    """Rows whose counter disagrees with the logged receptions, or with missing columns."""
    counts: dict[tuple, list[float]] = defaultdict(list)
    for t, receiver, sender in enquiry_receptions(records):
        counts[(receiver, sender)].append(t)
    bad = []
    for agent in net.agents:
        for row in agent.sonnet.rows.values():
            n = sum(1 for t in counts[(agent.id, row.ip_address)] if t >= row.created_at)
            fields = row.as_row()
            if n != row.em_counter or set(fields) != set(COLUMNS) or any(v is None for v in fields.values()):
                bad.append((agent.id, row.ip_address, row.em_counter, n))
    return bad
