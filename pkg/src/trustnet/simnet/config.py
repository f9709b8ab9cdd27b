"""Scenario parameters for one simulation run.

Defaults follow the standard 50-node setup: random placement, AODV-style
routing, CBR traffic at 512-byte packets, 250 m radio range, 3 m/s node
speed, 12 concurrent connections and a 60 ms route reply delay. Values
the setup leaves open (area size, energy constants, thresholds, traffic
rate, durations) are explicit fields with documented defaults.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

__all__ = ["ScenarioConfig", "MALICIOUS_KINDS", "TRUST_UPDATE_MODES"]

MALICIOUS_KINDS = ("hide", "drop", "mixed")
TRUST_UPDATE_MODES = ("event", "periodic")


@dataclass
class ScenarioConfig:
    # topology / radio
    node_count: int = 50
    area_width: float = 1000.0
    area_height: float = 1000.0
    tx_range: float = 250.0
    speed: float = 3.0                 # m/s, constant
    mobility_dt: float = 1.0           # s between mobility ticks

    # traffic
    packet_size: int = 512             # bytes per data packet
    control_packet_size: int = 64      # bytes for RREQ/RREP/probe traffic
    max_connections: int = 12          # concurrent CBR flows
    cbr_rate: float = 4.0              # packets/s per flow
    reply_delay: float = 0.060         # s the destination waits before replying
    hop_latency: float = 0.002         # s per hop
    link_loss: float = 0.0             # per-hop loss probability
    ttl: int = 32                      # max hops before a packet is discarded
    discovery_timeout: float = 0.5     # s before a route request gives up
    flows_between_legitimate: bool = True

    # adversary
    malicious_fraction: float = 0.0
    malicious_kind: str = "drop"
    drop_probability: float = 1.0

    # trust system
    trust_enabled: bool = False
    trust_threshold: float = 1.0       # on the [0, 2] total-trust scale
    trust_warmup: float = 10.0         # s before the routing filter activates
    trust_update_mode: str = "event"
    trust_update_period: float = 5.0   # s, periodic mode only
    trust_eval_min_interval: float = 0.0  # per-pair evaluation rate limit
    intimacy_mode: str = "normalized"
    decay_horizon: float = 25.0        # s, staleness horizon for reports
    data_horizon: float = 25.0         # s of readings kept per node
    t_max: float = 1.0                 # data-trust cap
    max_guarantors: int = 4
    probe_interval: float = 5.0        # s between neighbor data probes
    probe_timeout: float = 0.1         # s before an unanswered probe fails
    data_sigma: float = 0.05           # reading noise around each node's baseline

    # energy accounting (units per event; send scales with packet size)
    e_send: float = 2.0                # per send of a 512-byte packet
    e_rec: float = 1.0                 # per receive event
    e_te: float = 0.5                  # per trust evaluation

    # run control
    sim_duration: float = 100.0
    seed: int = 1
    repetitions: int = 20

    def validate(self) -> None:
        if self.node_count < 2:
            raise ValueError("node_count must be >= 2")
        if not self.tx_range > 0.0:
            raise ValueError("tx_range must be > 0")
        if not 0.0 <= self.malicious_fraction <= 1.0:
            raise ValueError("malicious_fraction must lie in [0, 1]")
        if self.malicious_kind not in MALICIOUS_KINDS:
            raise ValueError(f"malicious_kind must be one of {MALICIOUS_KINDS}")
        if self.trust_update_mode not in TRUST_UPDATE_MODES:
            raise ValueError(f"trust_update_mode must be one of {TRUST_UPDATE_MODES}")
        if self.sim_duration < 0.0:
            raise ValueError("sim_duration must be >= 0")
        if not 0.0 <= self.drop_probability <= 1.0:
            raise ValueError("drop_probability must lie in [0, 1]")
        if not 0.0 <= self.link_loss < 1.0:
            raise ValueError("link_loss must lie in [0, 1)")
        if self.speed < 0.0:
            raise ValueError("speed must be >= 0")
        if not self.hop_latency > 0.0:
            raise ValueError("hop_latency must be > 0")
        if not 0.0 <= self.trust_threshold <= 2.0:
            raise ValueError("trust_threshold must lie in [0, 2]")
        for name in ("area_width", "area_height", "mobility_dt", "cbr_rate",
                     "probe_interval", "t_max"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be > 0")

    def replace(self, **changes) -> "ScenarioConfig":
        cfg = dataclasses.replace(self, **changes)
        cfg.validate()
        return cfg

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def field_names(cls) -> list[str]:
        return [f.name for f in dataclasses.fields(cls)]

    @classmethod
    def from_dict(cls, values: dict) -> "ScenarioConfig":
        known = set(cls.field_names())
        unknown = set(values) - known
        if unknown:
            raise ValueError(f"unknown scenario keys: {sorted(unknown)}")
        cfg = cls(**values)
        cfg.validate()
        return cfg

    def canonical_text(self) -> str:
        """Stable key=value rendering, used for hashing and config files."""
        lines = []
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if isinstance(value, bool):
                value = "true" if value else "false"
            elif isinstance(value, float):
                value = repr(value)
            lines.append(f"{f.name}={value}")
        return "\n".join(lines) + "\n"
