"""Per-packet provenance log with streaming metric accumulators.

Each record is a tuple ``(time, node, kind, event, uid, peer)``. Events:

* ``originate`` / ``deliver`` / ``drop:<reason>`` / ``pending`` for data,
* ``tx`` for every per-hop transmission (data: logged on the successful
  attempt and ``peer`` is the receiver; control: logged when sent),
* ``rx`` for enquiry receptions (``peer`` is the enquiring neighbour).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .packets import CONTROL_KINDS, DATA, ENQ  # noqa: F401


@dataclass(frozen=True)
class MetricsSummary:
    pdf: Optional[float]
    avg_delay: Optional[float]
    nrl: Optional[float]
    originated: int
    delivered: int
    control_tx: int


def summarize(originated: int, delivered: int, control_tx: int, delay_sum: float) -> MetricsSummary:
    # absent (None) rather than 0 when the denominator is zero
    pdf = delivered / originated if originated else None
    avg_delay = delay_sum / delivered if delivered else None
    nrl = control_tx / delivered if delivered else None
    return MetricsSummary(pdf, avg_delay, nrl, originated, delivered, control_tx)


class PacketLog:
    def __init__(self):
        self.records: list[tuple] = []
        self.originated = 0
        self.delivered = 0
        self.dropped = 0
        self.control_tx = 0
        self.delay_sum = 0.0
        self._open: dict[int, float] = {}
        self._sim = None

    def bind(self, sim) -> None:
        self._sim = sim

    # ------------------------------------------------------------ writers
    def originate(self, node: int, packet) -> None:
        self.records.append((self._sim.now, node, DATA, "originate", packet.uid, None))
        self.originated += 1
        self._open[packet.uid] = packet.created_at

    def deliver(self, node: int, packet) -> None:
        now = self._sim.now
        self.records.append((now, node, DATA, "deliver", packet.uid, None))
        del self._open[packet.uid]
        self.delivered += 1
        self.delay_sum += now - packet.created_at

    def drop(self, node: int, packet, reason: str) -> None:
        self.records.append((self._sim.now, node, DATA, "drop:" + reason, packet.uid, None))
        del self._open[packet.uid]
        self.dropped += 1

    def tx(self, node: int, packet, peer: Optional[int] = None) -> None:
        kind = packet.kind
        self.records.append((self._sim.now, node, kind, "tx", packet.uid, peer))
        if kind != DATA:
            self.control_tx += 1

    def rx(self, node: int, packet, peer: int) -> None:
        self.records.append((self._sim.now, node, packet.kind, "rx", packet.uid, peer))

    def close(self) -> int:
        """Mark every unresolved data packet as pending; returns how many."""
        now = self._sim.now
        for uid in sorted(self._open):
            self.records.append((now, -1, DATA, "pending", uid, None))
        n = len(self._open)
        self._open.clear()
        return n

    def summary(self) -> MetricsSummary:
        return summarize(self.originated, self.delivered, self.control_tx, self.delay_sum)

    # ------------------------------------------------------------ dump/load
    def dump_lines(self) -> Iterable[str]:
        for t, node, kind, event, uid, peer in self.records:
            yield f"{t!r} {node} {kind} {event} {uid} {'-' if peer is None else peer}\n"

    def dump(self, path) -> None:
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.writelines(self.dump_lines())


def parse_trace(lines: Iterable[str]) -> list[tuple]:
    records = []
    for line in lines:
        t, node, kind, event, uid, peer = line.split()
        records.append((float(t), int(node), kind, event, int(uid), None if peer == "-" else int(peer)))
    return records


def load_trace(path) -> list[tuple]:
    with open(path, encoding="ascii") as fh:
        return parse_trace(fh)


def enquiry_receptions(records: Iterable[tuple]) -> list[tuple]:
    """``(time, receiver, sender)`` for every enquiry reception."""
    return [(t, node, peer) for t, node, kind, event, _uid, peer in records if kind == ENQ and event == "rx"]
