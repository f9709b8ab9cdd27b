"""Seeded discrete-event network simulator with trust-aware routing."""

from .config import MALICIOUS_KINDS, ScenarioConfig
from .engine import Flow, Simulator, run
from .eventlog import EventLog, LogRecord
from .invariants import (
    check_all,
    check_causality,
    check_conservation,
    check_hidden_never_relay,
)
from .packets import Packet, PacketKind, SimEvent
from .topology import (
    NodeState,
    Role,
    RouteEntry,
    build_topology,
    is_connected,
    mobility_tick,
    recompute_neighbors,
)

__all__ = [
    "EventLog",
    "Flow",
    "LogRecord",
    "MALICIOUS_KINDS",
    "NodeState",
    "Packet",
    "PacketKind",
    "Role",
    "RouteEntry",
    "ScenarioConfig",
    "SimEvent",
    "Simulator",
    "build_topology",
    "check_all",
    "check_causality",
    "check_conservation",
    "check_hidden_never_relay",
    "is_connected",
    "mobility_tick",
    "recompute_neighbors",
    "run",
]
