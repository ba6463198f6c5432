"""Discrete-event kernel: virtual clock, event queue and seeded random streams."""

from __future__ import annotations

import hashlib
import heapq
import random
from dataclasses import dataclass
from typing import Any, Callable


class SchedulingInPast(ValueError):
    pass


class InvalidRange(ValueError):
    pass


@dataclass(frozen=True)
class TraceEntry:
    """One executed event: its id, firing time and a short label."""

    id: int
    fire_at: float
    label: str


class Simulator:
    """Single-clock event queue ordered by ``(fire_at, id)``.

    Ids are handed out in scheduling order, so events due at the same
    instant run first-scheduled-first.
    """

    def __init__(self, record_trace: bool = True):
        self.now = 0.0
        self._queue: list = []
        self._next_id = 0
        self.record_trace = record_trace
        self.trace: list[TraceEntry] = []

    def schedule(self, at: float, action: Callable[..., Any], *args, label: str = "") -> int:
        if at < self.now:
            raise SchedulingInPast(f"cannot schedule at {at!r}, clock is {self.now!r}")
        eid = self._next_id
        self._next_id += 1
        heapq.heappush(self._queue, (at, eid, action, args, label))
        return eid

    def pending(self) -> int:
        return len(self._queue)

    def run_until(self, t_end: float) -> list[TraceEntry]:
        """Execute every event with ``fire_at <= t_end``; return those executed."""
        if t_end < self.now:
            raise SchedulingInPast(f"run_until({t_end!r}) is before clock {self.now!r}")
        queue = self._queue
        executed: list[TraceEntry] = []
        pop = heapq.heappop
        while queue and queue[0][0] <= t_end:
            at, eid, action, args, label = pop(queue)
            self.now = at
            if self.record_trace:
                executed.append(TraceEntry(eid, at, label))
            action(*args)
        self.now = t_end
        if self.record_trace:
            self.trace.extend(executed)
        return executed


def derive_seed(master_seed: int, label: str) -> int:
    """64-bit seed for stream ``label``; independent of stream creation order."""
    digest = hashlib.sha256(f"{int(master_seed)}/{label}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


class RngStream:
    """A labelled pseudo-random stream (Mersenne Twister, platform stable)."""

    def __init__(self, master_seed: int, label: str):
        self.stream_label = label
        self.seed = derive_seed(master_seed, label)
        self._rng = random.Random(self.seed)

    def uniform(self, lo: float, hi: float) -> float:
        return draw_uniform(self, lo, hi)

    def random(self) -> float:
        return self._rng.random()

    def sample(self, population, k: int) -> list:
        return self._rng.sample(population, k)

    def choice(self, seq):
        return seq[self._rng.randrange(len(seq))]


def draw_uniform(stream: RngStream, lo: float, hi: float) -> float:
    """Uniform draw on ``[lo, hi)``; returns ``lo`` when the range is degenerate."""
    if lo > hi:
        raise InvalidRange(f"lo={lo!r} > hi={hi!r}")
    if lo == hi:
        return lo
    value = lo + (hi - lo) * stream._rng.random()
    # rounding can land exactly on hi for wide ranges
    return value if value < hi else lo


class RngStreams:
    """Factory handing out one stream per label, all rooted at ``master_seed``."""

    def __init__(self, master_seed: int):
        self.master_seed = master_seed
        self._streams: dict[str, RngStream] = {}

    def __getitem__(self, label: str) -> RngStream:
        stream = self._streams.get(label)
        if stream is None:
            stream = self._streams[label] = RngStream(self.master_seed, label)
        return stream
