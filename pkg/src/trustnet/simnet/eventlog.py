"""Line-oriented record of everything a simulation run did.

One tab-separated record per event, with a fixed field order:
time, kind, node, peer, packet id, flow, detail, energy delta.
Header lines (prefixed with '#') carry the scenario echo, node roles and
final trust classifications, so every metric can be recomputed from the
persisted file alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = ["LogRecord", "EventLog"]

# record kinds
GEN = "gen"            # CBR source generated a data packet
SEND = "send"          # a node transmitted (unicast or broadcast)
RECV = "recv"          # a node received a transmission
DELIVER = "deliver"    # data packet reached its destination
DROP = "drop"          # data packet left the network unserved
TEVAL = "teval"        # one trust evaluation was charged
ROUTE = "route"        # a route was installed at the origin
PROBE = "probe"        # a neighbor data probe completed (detail: ok/timeout)

NO_NODE = -1
NO_FLOW = -1
NO_PKT = "-"


@dataclass
class LogRecord:
    time: float
    kind: str
    node: int = NO_NODE
    peer: int = NO_NODE
    pkt: str = NO_PKT
    flow: int = NO_FLOW
    detail: str = "-"
    energy: float = 0.0

    def to_line(self) -> str:
        return "\t".join((repr(self.time), self.kind, str(self.node),
                          str(self.peer), self.pkt, str(self.flow),
                          self.detail, repr(self.energy)))

    @classmethod
    def from_line(cls, line: str) -> "LogRecord":
        parts = line.rstrip("\n").split("\t")
        if len(parts) != 8:
            raise ValueError(f"malformed log line: {line!r}")
        return cls(float(parts[0]), parts[1], int(parts[2]), int(parts[3]),
                   parts[4], int(parts[5]), parts[6], float(parts[7]))


class EventLog:
    """Records plus the scenario metadata needed to interpret them."""

    def __init__(self, scenario_text: str = "", duration: float = 0.0):
        self.scenario_text = scenario_text
        self.duration = duration
        self.records: list[LogRecord] = []
        self.roles: dict[int, str] = {}
        self.classifications: dict[int, str] = {}

    def add(self, time: float, kind: str, node: int = NO_NODE, peer: int = NO_NODE,
            pkt: str = NO_PKT, flow: int = NO_FLOW, detail: str = "-",
            energy: float = 0.0) -> None:
        self.records.append(LogRecord(time, kind, node, peer, pkt, flow,
                                      detail, energy))

    # -- accessors used by the metrics layer ---------------------------------

    def count(self, kind: str) -> int:
        return sum(1 for r in self.records if r.kind == kind)

    def flow_counts(self, kind: str) -> dict[int, int]:
        out: dict[int, int] = {}
        for r in self.records:
            if r.kind == kind:
                out[r.flow] = out.get(r.flow, 0) + 1
        return out

    def energy_by_kind(self) -> dict[str, float]:
        out: dict[str, float] = {}
        for r in self.records:
            if r.energy:
                out[r.kind] = out.get(r.kind, 0.0) + r.energy
        return out

    def node_energy(self) -> dict[int, dict[str, float]]:
        """Per node: spent sending, receiving, and evaluating trust."""
        out: dict[int, dict[str, float]] = {}
        for r in self.records:
            if not r.energy or r.node == NO_NODE:
                continue
            bucket = out.setdefault(r.node, {SEND: 0.0, RECV: 0.0, TEVAL: 0.0})
            if r.kind in bucket:
                bucket[r.kind] += r.energy
        return out

    # -- persistence ----------------------------------------------------------

    def to_lines(self) -> list[str]:
        lines = [f"# duration {self.duration!r}"]
        for cfg_line in self.scenario_text.splitlines():
            lines.append(f"# scenario {cfg_line}")
        for node in sorted(self.roles):
            lines.append(f"# node {node} role {self.roles[node]}")
        for node in sorted(self.classifications):
            lines.append(f"# node {node} class {self.classifications[node]}")
        lines.extend(r.to_line() for r in self.records)
        return lines

    def write(self, path) -> None:
        with open(path, "w") as fh:
            for line in self.to_lines():
                fh.write(line + "\n")

    @classmethod
    def from_lines(cls, lines) -> "EventLog":
        log = cls()
        scenario_lines = []
        for line in lines:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("# duration "):
                log.duration = float(line.split(" ", 2)[2])
            elif line.startswith("# scenario "):
                scenario_lines.append(line[len("# scenario "):])
            elif line.startswith("# node "):
                parts = line.split(" ")
                node, what, value = int(parts[2]), parts[3], parts[4]
                if what == "role":
                    log.roles[node] = value
                elif what == "class":
                    log.classifications[node] = value
                else:
                    raise ValueError(f"unknown node header: {line!r}")
            elif line.startswith("#"):
                raise ValueError(f"unknown header line: {line!r}")
            else:
                log.records.append(LogRecord.from_line(line))
        log.scenario_text = "\n".join(scenario_lines) + ("\n" if scenario_lines else "")
        return log

    @classmethod
    def read(cls, path) -> "EventLog":
        with open(path) as fh:
            return cls.from_lines(fh)
