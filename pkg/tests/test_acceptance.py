"""Acceptance criteria 1-9, one pass/fail line each in the terminal summary.

The source-count sweep (3 protocols x sources 10-40 x 10 seeds) runs once per
module and feeds criteria 3, 4, 5, 8 and 9.
"""

import filecmp
import time
from dataclasses import dataclass, field

import networkx as nx
import numpy as np
import pytest

from conftest import DIAMOND, make_net, sent
from manetsim import audit
from manetsim.cli import main
from manetsim.harness import RunRow, ScenarioConfig, cell_stats, recompute_metrics, run_scenario, sweep_configs
from manetsim.trace import load_trace

S, A, B, D = range(4)


def record(report, n, title, ok, detail):
    report.append(f"[{'PASS' if ok else 'FAIL'}] {n}. {title}: {detail}")
    assert ok, detail


@dataclass
class SweepAudit:
    rows: list = field(default_factory=list)
    loops: dict = field(default_factory=dict)
    disjoint: dict = field(default_factory=dict)
    snapshots: int = 0
    oracle_mismatch: list = field(default_factory=list)
    sonnet: dict = field(default_factory=dict)
    sonnet_rows: int = 0
    conservation: list = field(default_factory=list)
    seconds: float = 0.0


@pytest.fixture(scope="module")
def table1(tmp_path_factory):
    out = SweepAudit()
    trace_path = tmp_path_factory.mktemp("traces") / "run.txt"
    started = time.perf_counter()
    for config in sweep_configs(ScenarioConfig(), [10, 20, 30, 40], range(1, 11)):
        key = (config.protocol, config.source_count, config.master_seed)
        bad_snaps = []

        def on_snapshot(snap):
            out.snapshots += 1
            bad_snaps.extend(audit.disjointness_violations(snap))

        result = run_scenario(config, trace_path=trace_path, record_trace=False, snapshot_interval=1.0,
                              on_snapshot=on_snapshot)
        records = load_trace(trace_path)
        out.rows.append(RunRow.from_summary(*key, result.summary))
        out.loops[key] = audit.loop_violations(records)
        out.disjoint[key] = bad_snaps
        if recompute_metrics(records) != result.summary:
            out.oracle_mismatch.append(key)
        if not audit.conservation_ok(records):
            out.conservation.append(key)
        if config.protocol == "EMP":
            out.sonnet[key] = audit.sonnet_violations(result.network, records)
            out.sonnet_rows += sum(len(a.sonnet) for a in result.network.agents)
    out.seconds = time.perf_counter() - started
    return out


def test_1_determinism(tmp_path, acceptance_report):
    conf = tmp_path / "s.conf"
    conf.write_text("source_count = 40\nseed = 3\n")
    worst = 0.0
    same = True
    for protocol in ("DSR", "AODV", "EMP"):
        outs = []
        for k in range(2):
            out = tmp_path / f"{protocol}{k}"
            t0 = time.perf_counter()
            assert main(["--config", str(conf), "--protocol", protocol, "--out", str(out),
                         "--dump-trace", str(out) + ".trace"]) == 0
            worst = max(worst, time.perf_counter() - t0)
            outs.append(out)
        same &= filecmp.cmp(outs[0] / "results.csv", outs[1] / "results.csv", shallow=False)
        same &= filecmp.cmp(str(outs[0]) + ".trace", str(outs[1]) + ".trace", shallow=False)
    record(acceptance_report, 1, "determinism", same and worst < 5.0,
           f"byte-identical CSV+trace={same}, slowest run {worst:.2f} s (limit 5 s)")


def _random_topology(rng, n=15, side=700.0, radius=250.0):
    while True:
        pos = rng.uniform(0.0, side, size=(n, 2))
        g = nx.Graph()
        g.add_nodes_from(range(n))
        for u in range(n):
            for v in range(u + 1, n):
                if np.hypot(*(pos[u] - pos[v])) <= radius:
                    g.add_edge(u, v)
        if nx.is_connected(g):
            return [tuple(map(float, p)) for p in pos], g


def _discovered_hops(protocol, positions, src, dst):
    net = make_net(protocol, positions, record_trace=False)
    net.send(src, dst)
    net.run_until(2.0)
    agent = net.agents[src]
    if net.log.delivered != 1:
        return None
    if protocol == "DSR":
        return len(agent.cache.best(dst)) - 1
    return agent.table[dst].hop_count


def test_2_bfs_oracle(acceptance_report):
    rng = np.random.default_rng(2024)
    checked = 0
    mismatches = []
    for topo in range(20):
        positions, graph = _random_topology(rng)
        dist = dict(nx.all_pairs_shortest_path_length(graph))
        for _ in range(30):
            src, dst = (int(x) for x in rng.choice(15, size=2, replace=False))
            for protocol in ("DSR", "AODV"):
                hops = _discovered_hops(protocol, positions, src, dst)
                checked += 1
                if hops != dist[src][dst]:
                    mismatches.append((topo, protocol, src, dst, hops, dist[src][dst]))
    record(acceptance_report, 2, "route oracle", not mismatches,
           f"{checked} discoveries on 20 topologies, {len(mismatches)} differ from BFS {mismatches[:3]}")


def test_3_loop_freedom(table1, acceptance_report):
    bad = {k: v for k, v in table1.loops.items() if v}
    record(acceptance_report, 3, "loop freedom", not bad,
           f"{len(table1.rows)} runs, {sum(map(len, bad.values()))} looping deliveries {list(bad)[:3]}")


def test_4_disjointness(table1, acceptance_report):
    bad = {k: v for k, v in table1.disjoint.items() if v}
    record(acceptance_report, 4, "multipath disjointness", not bad and table1.snapshots > 0,
           f"{table1.snapshots} EMP snapshots, {sum(map(len, bad.values()))} violations")


def test_5_trends(table1, acceptance_report):
    cells = {(c.protocol, c.sources): c.mean for c in cell_stats(table1.rows)}
    m = lambda p, k, metric: cells[(p, k)][metric]  # noqa: E731
    a = m("AODV", 40, "pdf") > m("DSR", 40, "pdf") and m("AODV", 30, "pdf") >= m("DSR", 30, "pdf") - 0.01
    b = all(m("AODV", k, "nrl") > m("DSR", k, "nrl") for k in (10, 20, 30, 40))
    c = all(m("DSR", k, "avg_delay") > m("AODV", k, "avg_delay") for k in (10, 20))
    detail = (
        f"(a) pdf30 {m('AODV', 30, 'pdf'):.4f}/{m('DSR', 30, 'pdf'):.4f} "
        f"pdf40 {m('AODV', 40, 'pdf'):.4f}/{m('DSR', 40, 'pdf'):.4f} {'ok' if a else 'FAIL'}; "
        "(b) nrl " + " ".join(f"{m('AODV', k, 'nrl'):.3f}/{m('DSR', k, 'nrl'):.3f}" for k in (10, 20, 30, 40))
        + f" {'ok' if b else 'FAIL'}; "
        "(c) delay DSR/AODV " + " ".join(f"{m('DSR', k, 'avg_delay'):.5f}/{m('AODV', k, 'avg_delay'):.5f}"
                                         for k in (10, 20)) + f" {'ok' if c else 'FAIL'}; "
        f"sweep {table1.seconds:.0f} s"
    )
    record(acceptance_report, 5, "trend reproduction", a and b and c and table1.seconds < 600, detail)


def _relay_counts(net):
    return [sum(1 for r in sent(net, "data") if r[1] == relay) for relay in (A, B)]


def test_6_load_split(acceptance_report):
    counts = {}
    for protocol in ("EMP", "AODV"):
        net = make_net(protocol, DIAMOND, record_trace=False)
        # start after three enquiry rounds so both relays are STABLE
        for k in range(1000):
            net.send_at(5.0 + 0.25 * k, S, D)
        net.run_until(260.0)
        assert net.log.delivered == 1000
        counts[protocol] = _relay_counts(net)
    ok = counts["EMP"] == [500, 500] and sorted(counts["AODV"]) == [0, 1000]
    record(acceptance_report, 6, "EMP load distribution", ok,
           f"relay A/B carried EMP {counts['EMP']}, AODV {counts['AODV']}")


def test_7_failover(acceptance_report):
    outcome = {}
    for protocol in ("EMP", "AODV"):
        net = make_net(protocol, DIAMOND, record_trace=False)
        for k in range(400):
            net.send_at(5.0 + 0.25 * k, S, D)
        net.run_until(55.1)
        net.world.disable(A)
        net.run_until(120.0)
        recs = net.log.records
        after = {r[4] for r in recs if r[2] == "data" and r[3] == "originate" and r[0] > 55.1}
        delivered = {r[4] for r in recs if r[2] == "data" and r[3] == "deliver"} & after
        via_a = {r[4] for r in recs if r[2] == "data" and r[3] == "tx" and r[1] == A} & after
        rreqs = sum(1 for r in sent(net, "RREQ") if r[0] > 55.1)
        outcome[protocol] = (len(after), len(delivered), len(via_a), rreqs)
    e_after, e_deliv, e_via_a, e_rreq = outcome["EMP"]
    ok = e_after > 0 and e_deliv == e_after and e_via_a == 0 and e_rreq == 0 and outcome["AODV"][3] >= 1
    record(acceptance_report, 7, "EMP failover", ok,
           f"EMP delivered {e_deliv}/{e_after} post-failure, {e_via_a} via failed relay, {e_rreq} new RREQs; "
           f"AODV {outcome['AODV'][3]} new RREQs")


def test_8_metrics_oracle(table1, acceptance_report):
    record(acceptance_report, 8, "metrics oracle", not table1.oracle_mismatch and not table1.conservation,
           f"{len(table1.rows)} dumped traces recomputed, {len(table1.oracle_mismatch)} mismatches, "
           f"{len(table1.conservation)} conservation failures")


def test_9_sonnet_bookkeeping(table1, acceptance_report):
    net = make_net("EMP", DIAMOND)
    net.send_at(5.0, S, D)
    net.run_until(20.0)
    extra = audit.sonnet_violations(net, net.log.records)
    bad = {k: v for k, v in table1.sonnet.items() if v}
    record(acceptance_report, 9, "SONNET bookkeeping", not bad and not extra and table1.sonnet_rows > 0,
           f"{table1.sonnet_rows} rows over {len(table1.sonnet)} EMP runs, "
           f"{sum(map(len, bad.values())) + len(extra)} violations")
