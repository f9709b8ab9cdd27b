"""Packet and event primitives for the discrete-event engine."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

__all__ = ["PacketKind", "Packet", "SimEvent"]


class PacketKind(enum.Enum):
    RREQ = "rreq"
    RREP = "rrep"
    DATA = "data"
    TRUST_REC = "trust_rec"


@dataclass
class Packet:
    kind: PacketKind
    src: int
    dst: int
    flow: int
    seq: int
    size: int
    created_at: float
    trace: list[int] = field(default_factory=list)

    def __post_init__(self):
        if self.size <= 0:
            raise ValueError("packet size must be positive")

    @property
    def uid(self) -> str:
        return f"{self.flow}-{self.seq}"

    def visit(self, node: int) -> None:
        """Append a hop; the trace must stay acyclic."""
        if node in self.trace:
            raise ValueError(f"routing loop: node {node} already in {self.trace}")
        self.trace.append(node)


@dataclass(order=True)
class SimEvent:
    """Heap entry: ordered by time, then by insertion sequence."""

    time: float
    seq: int
    kind: str = field(compare=False)
    payload: tuple = field(compare=False, default=())
