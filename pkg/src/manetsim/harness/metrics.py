"""The three performance metrics, recomputed from raw packet-log records.

These traversals are deliberately independent of the streaming counters in
:class:`~manetsim.trace.PacketLog`; agreement between the two is checked by
the acceptance suite.
"""

from __future__ import annotations

from typing import Iterable, Optional

from ..packets import CONTROL_KINDS, DATA
from ..trace import MetricsSummary, summarize


def _records(log) -> list:
    return log.records if hasattr(log, "records") else list(log)


def compute_pdf(log) -> Optional[float]:
    """Delivered / originated data packets; None when nothing was originated."""
    originated = delivered = 0
    for rec in _records(log):
        if rec[2] == DATA:
            if rec[3] == "originate":
                originated += 1
            elif rec[3] == "deliver":
                delivered += 1
    return delivered / originated if originated else None


def compute_avg_delay(log) -> Optional[float]:
    """Mean originate-to-deliver time over delivered packets only."""
    started: dict[int, float] = {}
    total = 0.0
    n = 0
    for t, _node, kind, event, uid, _peer in _records(log):
        if kind != DATA:
            continue
        if event == "originate":
            started[uid] = t
        elif event == "deliver":
            total += t - started[uid]
            n += 1
    return total / n if n else None


def compute_nrl(log) -> Optional[float]:
    """Per-hop control transmissions per delivered data packet."""
    control = delivered = 0
    for _t, _node, kind, event, _uid, _peer in _records(log):
        if kind == DATA:
            delivered += event == "deliver"
        elif event == "tx" and kind in CONTROL_KINDS:
            control += 1
    return control / delivered if delivered else None


def recompute_metrics(records: Iterable[tuple]) -> MetricsSummary:
    records = list(records)
    originated = sum(1 for r in records if r[2] == DATA and r[3] == "originate")
    delivered = sum(1 for r in records if r[2] == DATA and r[3] == "deliver")
    control_tx = sum(1 for r in records if r[3] == "tx" and r[2] in CONTROL_KINDS)
    avg = compute_avg_delay(records)
    # rebuild the sum the same way the streaming counter does to compare exactly
    delay_sum = 0.0
    if avg is not None:
        started: dict[int, float] = {}
        for t, _node, kind, event, uid, _peer in records:
            if kind == DATA and event == "originate":
                started[uid] = t
            elif kind == DATA and event == "deliver":
                delay_sum += t - started[uid]
    return summarize(originated, delivered, control_tx, delay_sum)
