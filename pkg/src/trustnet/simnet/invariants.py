"""Offline checks over a finished event log.

Used by the test suite to audit conservation, causality and adversary
semantics on real runs instead of trusting the engine's bookkeeping.
"""

from __future__ import annotations

from .eventlog import DELIVER, DROP, GEN, RECV, SEND, EventLog

__all__ = [
    "check_conservation",
    "check_causality",
    "check_hidden_never_relay",
    "check_all",
]


def check_conservation(log: EventLog) -> dict[int, tuple[int, int, int]]:
    """Every generated packet must end delivered or dropped, per flow.

    Returns {flow: (generated, delivered, dropped)} after asserting the
    balance. A drained run holds nothing in flight or queued.
    """
    generated = log.flow_counts(GEN)
    delivered = log.flow_counts(DELIVER)
    dropped = log.flow_counts(DROP)
    out = {}
    for flow in sorted(generated):
        g = generated.get(flow, 0)
        d = delivered.get(flow, 0)
        x = dropped.get(flow, 0)
        if g != d + x:
            raise AssertionError(
                f"flow {flow}: generated {g} != delivered {d} + dropped {x}")
        out[flow] = (g, d, x)
    stray = set(delivered) | {f for f in dropped if f >= 0}
    stray -= set(generated)
    if stray:
        raise AssertionError(f"deliveries/drops for unknown flows: {sorted(stray)}")
    return out


def check_causality(log: EventLog) -> None:
    """Log times never decrease, and every receive follows a send."""
    last = float("-inf")
    open_sends: dict[str, list[float]] = {}
    for record in log.records:
        if record.time < last:
            raise AssertionError(
                f"event at t={record.time} after t={last}: out of order")
        last = record.time
        if record.kind == SEND:
            open_sends.setdefault(record.pkt, []).append(record.time)
        elif record.kind == RECV:
            times = open_sends.get(record.pkt)
            if not times or record.time < times[0]:
                raise AssertionError(
                    f"receive of {record.pkt} at t={record.time} precedes its send")


def check_hidden_never_relay(log: EventLog) -> None:
    """Nodes that hide during discovery must never carry data.

    A hiding node may appear as a generation source or a destination
    only if traffic was configured onto it; it must never send or
    receive a data packet as an intermediate hop.
    """
    hidden = {node for node, role in log.roles.items() if role == "malicious_hide"}
    if not hidden:
        return
    endpoints: dict[int, tuple[int, int]] = {}
    for record in log.records:
        if record.kind == GEN:
            endpoints[record.flow] = (record.node, record.peer)
    for record in log.records:
        if record.flow < 0 or record.flow not in endpoints:
            continue
        src, _ = endpoints[record.flow]
        if record.kind == SEND and record.node in hidden and record.node != src:
            raise AssertionError(
                f"hiding node {record.node} relayed data packet {record.pkt}")
        if record.kind == DELIVER and record.peer in hidden and record.peer != src:
            raise AssertionError(
                f"hiding node {record.peer} relayed data packet {record.pkt}")


def check_all(log: EventLog) -> None:
    check_conservation(log)
    check_causality(log)
    check_hidden_never_relay(log)
