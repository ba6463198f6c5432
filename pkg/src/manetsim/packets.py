"""Packet types carried by the simulated radio.

Control packets are immutable and shared between all receivers of a
broadcast; handlers build a modified copy with ``dataclasses.replace``.
Data packets travel by unicast only and are updated in place per hop.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

DATA = "data"
RREQ = "RREQ"
RREP = "RREP"
RERR = "RERR"
ENQ = "ENQ"

CONTROL_KINDS = (RREQ, RREP, RERR, ENQ)


@dataclass(eq=False, slots=True)
class DataPacket:
    uid: int
    src: int
    dst: int
    created_at: float
    size: int = 512
    # DSR source route and the index of the current holder in it
    route: Optional[tuple] = None
    index: int = 0
    visited: list = field(default_factory=list)

    kind = DATA


# -- DSR ----------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class DsrRreq:
    uid: int
    initiator: int
    request_id: int
    target: int
    record: tuple

    kind = RREQ


@dataclass(frozen=True, slots=True)
class DsrRrep:
    uid: int
    route: tuple  # initiator .. target

    kind = RREP


@dataclass(frozen=True, slots=True)
class DsrRerr:
    uid: int
    link: tuple  # (detecting node, unreachable next hop)
    target: int  # destination of the route that broke
    path: tuple  # reverse path from detecting node to the data source

    kind = RERR


# -- AODV / EMP ---------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Rreq:
    uid: int
    origin: int
    broadcast_id: int
    origin_seq: int
    dst: int
    dest_seq: Optional[int]
    hop_count: int = 0
    # EMP only: origin's neighbour on the path this copy took
    first_hop: Optional[int] = None

    kind = RREQ


@dataclass(frozen=True, slots=True)
class Rrep:
    uid: int
    origin: int
    dest: int
    dest_seq: int
    hop_count: int = 0
    # EMP only: destination's neighbour on the path this copy took
    first_hop: Optional[int] = None

    kind = RREP


@dataclass(frozen=True, slots=True)
class Rerr:
    uid: int
    unreachable: tuple  # ((dest, seq), ...)

    kind = RERR


@dataclass(frozen=True, slots=True)
class Enquiry:
    uid: int
    sender: int
    battery: float
    bandwidth_usage: float

    kind = ENQ
