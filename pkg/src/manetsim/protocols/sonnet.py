"""Search of Next Node Enquiry Table: per-neighbour stability and vitals,
refreshed by periodic one-hop enquiry broadcasts."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum


class NeighborState(str, Enum):
    STABLE = "STABLE"
    UNSTABLE = "UNSTABLE"
    UNKNOWN = "UNKNOWN"


COLUMNS = (
    "ip_address",
    "mac_address",
    "em_counter",
    "time_stamp",
    "neighbor_state",
    "resource_usage_pct",
    "battery_power_left",
    "signal_strength",
)


@dataclass
class SonnetEntry:
    ip_address: int
    mac_address: int
    em_counter: int
    time_stamp: float
    neighbor_state: NeighborState
    resource_usage_pct: float
    battery_power_left: float
    signal_strength: float
    created_at: float = 0.0
    samples: deque = field(default_factory=deque, repr=False)

    def as_row(self) -> dict:
        return {name: getattr(self, name) for name in COLUMNS}


def classify_state(samples, k: int = 3, theta: float = 0.3) -> NeighborState:
    """STABLE when the last ``k`` signal samples all reach ``theta``."""
    recent = list(samples)[-k:]
    if len(recent) < k:
        return NeighborState.UNKNOWN
    if all(s >= theta for s in recent):
        return NeighborState.STABLE
    return NeighborState.UNSTABLE


def score(signal: float, battery: float, usage: float, weights=(1.0, 1.0, 1.0)) -> float:
    """Weighted mean of signal, battery and spare bandwidth; lies in [0, 1]."""
    w_sig, w_bat, w_bw = weights
    total = w_sig + w_bat + w_bw
    return (w_sig * signal + w_bat * battery + w_bw * (1.0 - usage)) / total


def score_entry(entry: SonnetEntry, weights=(1.0, 1.0, 1.0)) -> float:
    return score(entry.signal_strength, entry.battery_power_left, entry.resource_usage_pct, weights)


class SonnetTable:
    def __init__(self, k: int = 3, theta: float = 0.3):
        self.k = k
        self.theta = theta
        self.rows: dict[tuple, SonnetEntry] = {}
        self._by_ip: dict[int, SonnetEntry] = {}

    def __len__(self) -> int:
        return len(self.rows)

    def get(self, node: int):
        return self._by_ip.get(node)

    def handle_enquiry(self, sender: int, battery: float, bandwidth_usage: float, signal: float,
                       now: float) -> SonnetEntry:
        key = (sender, sender)
        row = self.rows.get(key)
        if row is None:
            row = SonnetEntry(sender, sender, 0, now, NeighborState.UNKNOWN, 0.0, 0.0, 0.0, created_at=now,
                              samples=deque(maxlen=self.k))
            self.rows[key] = row
            self._by_ip[sender] = row
        row.em_counter += 1
        row.time_stamp = now
        row.resource_usage_pct = min(max(bandwidth_usage, 0.0), 1.0)
        row.battery_power_left = min(max(battery, 0.0), 1.0)
        row.signal_strength = min(max(signal, 0.0), 1.0)
        row.samples.append(row.signal_strength)
        row.neighbor_state = classify_state(row.samples, self.k, self.theta)
        return row

    def expire(self, now: float, stale_after: float) -> list[int]:
        gone = [key for key, row in self.rows.items() if now - row.time_stamp > stale_after]
        for key in gone:
            del self.rows[key]
            del self._by_ip[key[0]]
        return [key[0] for key in gone]

    def snapshot(self) -> list[dict]:
        return [self.rows[key].as_row() for key in sorted(self.rows)]
