"""Node state, random placement and waypoint mobility."""

from __future__ import annotations

import enum
import logging
import math
import random
from dataclasses import dataclass, field

from .config import ScenarioConfig

__all__ = [
    "Role",
    "RouteEntry",
    "NodeState",
    "build_topology",
    "recompute_neighbors",
    "is_connected",
    "mobility_tick",
]

logger = logging.getLogger(__name__)


class Role(enum.Enum):
    LEGITIMATE = "legitimate"
    MALICIOUS_HIDE = "malicious_hide"
    MALICIOUS_DROP = "malicious_drop"

    @property
    def is_malicious(self) -> bool:
        return self is not Role.LEGITIMATE


@dataclass
class RouteEntry:
    next_hop: int
    hop_count: int
    seq: int


@dataclass
class NodeState:
    id: int
    x: float
    y: float
    role: Role = Role.LEGITIMATE
    waypoint: tuple[float, float] | None = None
    routes: dict[int, RouteEntry] = field(default_factory=dict)
    neighbors: list[int] = field(default_factory=list)
    energy_send: float = 0.0
    energy_receive: float = 0.0
    energy_trust: float = 0.0
    data_baseline: float = 0.0

    def distance_to(self, other: "NodeState") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


def build_topology(config: ScenarioConfig, rng: random.Random | None = None) -> list[NodeState]:
    """Place nodes uniformly at random and flag the malicious subset.

    Everything is drawn from a generator seeded with the scenario seed,
    so identical configs always produce identical topologies. In mixed
    mode the flagged nodes alternate between hiding and dropping.
    """
    config.validate()
    rng = rng if rng is not None else random.Random(config.seed)
    nodes = []
    for node_id in range(config.node_count):
        x = rng.uniform(0.0, config.area_width)
        y = rng.uniform(0.0, config.area_height)
        nodes.append(NodeState(node_id, x, y))
    malicious_count = math.floor(config.malicious_fraction * config.node_count)
    flagged = rng.sample(range(config.node_count), malicious_count)
    for idx, node_id in enumerate(flagged):
        if config.malicious_kind == "hide":
            role = Role.MALICIOUS_HIDE
        elif config.malicious_kind == "drop":
            role = Role.MALICIOUS_DROP
        else:
            role = Role.MALICIOUS_HIDE if idx % 2 == 0 else Role.MALICIOUS_DROP
        nodes[node_id].role = role
    for node in nodes:
        node.data_baseline = rng.uniform(10.0, 30.0)
        node.waypoint = (rng.uniform(0.0, config.area_width),
                         rng.uniform(0.0, config.area_height))
    recompute_neighbors(nodes, config.tx_range)
    if not is_connected(nodes):
        logger.warning(
            "initial topology is not connected (%d nodes, %.0f m range, "
            "%.0f x %.0f m area); some flows may find no route",
            config.node_count, config.tx_range,
            config.area_width, config.area_height)
    return nodes


def recompute_neighbors(nodes: list[NodeState], tx_range: float) -> None:
    """Rebuild every node's neighbor list from current positions."""
    for node in nodes:
        node.neighbors = []
    for i, a in enumerate(nodes):
        for b in nodes[i + 1:]:
            if a.distance_to(b) <= tx_range:
                a.neighbors.append(b.id)
                b.neighbors.append(a.id)
    for node in nodes:
        node.neighbors.sort()


def is_connected(nodes: list[NodeState]) -> bool:
    if not nodes:
        return True
    by_id = {n.id: n for n in nodes}
    seen = {nodes[0].id}
    stack = [nodes[0].id]
    while stack:
        current = stack.pop()
        for peer in by_id[current].neighbors:
            if peer not in seen:
                seen.add(peer)
                stack.append(peer)
    return len(seen) == len(nodes)


def mobility_tick(node: NodeState, dt: float, config: ScenarioConfig,
                  rng: random.Random) -> None:
    """Advance one node along its waypoint path at constant speed.

    The node travels exactly speed * dt of path length, turning at each
    reached waypoint with zero pause; a fresh waypoint is drawn inside
    the area, so motion reflects back into bounds by construction.
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    budget = config.speed * dt
    while budget > 1e-12:
        if node.waypoint is None:
            node.waypoint = (rng.uniform(0.0, config.area_width),
                             rng.uniform(0.0, config.area_height))
        wx, wy = node.waypoint
        dist = math.hypot(wx - node.x, wy - node.y)
        if dist <= budget:
            node.x, node.y = wx, wy
            budget -= dist
            node.waypoint = (rng.uniform(0.0, config.area_width),
                             rng.uniform(0.0, config.area_height))
        else:
            node.x += (wx - node.x) * budget / dist
            node.y += (wy - node.y) * budget / dist
            budget = 0.0
