"""Discrete-event simulator with trust-aware on-demand routing.

One run owns a single event heap ordered by (time, insertion sequence),
which makes every run fully deterministic for a given configuration and
seed. Routing is on-demand: sources flood a route request over the
neighbor graph, each node relays one copy per request, the destination
answers along the reverse path after the configured reply delay, and
data then travels hop by hop with per-hop latency. Misbehaving nodes
either stay silent during discovery (hide) or accept data and discard
it (drop); both kinds ignore neighbor data probes and run no trust
evaluations of their own.

Every completed handoff is reported to the trust manager by the
upstream observer. When the routing filter is active (trust enabled and
warmup elapsed), nodes classified untrusted are skipped as relays both
during discovery and at forwarding time; a broken or distrusted next
hop triggers a local repair from the node holding the packet.
"""

from __future__ import annotations

import heapq
import random

from ..trust.manager import TrustManager
from .config import ScenarioConfig
from .eventlog import DELIVER, DROP, GEN, PROBE, RECV, ROUTE, SEND, TEVAL, EventLog
from .packets import Packet, PacketKind, SimEvent
from .topology import NodeState, Role, build_topology, mobility_tick, recompute_neighbors

__all__ = ["Flow", "Simulator", "run"]

DATA_REFERENCE_SIZE = 512  # bytes; send energy scales relative to this
FLOW_START = 1.0           # s, first CBR packet of every flow
FLOW_STAGGER = 0.05        # s between consecutive flows' first packets


class Flow:
    def __init__(self, flow_id: int, src: int, dst: int):
        self.id = flow_id
        self.src = src
        self.dst = dst
        self.next_seq = 0
        self.generated = 0
        self.delivered = 0
        self.dropped = 0


class Simulator:
    """One scenario run. Build, then call :meth:`run` once."""

    def __init__(self, config: ScenarioConfig, trust_model=None,
                 nodes: list[NodeState] | None = None,
                 flows: list[tuple[int, int]] | None = None):
        config.validate()
        if config.trust_enabled and trust_model is None:
            raise ValueError("trust_enabled requires a trust model")
        self.config = config
        self.rng = random.Random(config.seed)
        if nodes is None:
            nodes = build_topology(config, self.rng)
        else:
            recompute_neighbors(nodes, config.tx_range)
        self.nodes = nodes
        self.by_id = {n.id: n for n in nodes}
        self.time = 0.0
        self._heap: list[SimEvent] = []
        self._eseq = 0
        self.log = EventLog(config.canonical_text(), config.sim_duration)
        for node in nodes:
            self.log.roles[node.id] = node.role.value

        self.trust: TrustManager | None = None
        if config.trust_enabled:
            self.trust = TrustManager(
                trust_model,
                threshold=config.trust_threshold,
                intimacy_mode=config.intimacy_mode,
                decay_horizon=config.decay_horizon,
                data_horizon=config.data_horizon,
                t_max=config.t_max,
                max_guarantors=config.max_guarantors,
                min_eval_interval=config.trust_eval_min_interval,
                hop_count_fn=self._hop_estimate,
            )
            self.trust.bootstrap(sorted(self.by_id), self.rng)

        self.flows = self._make_flows(flows)
        self._queues: dict[tuple[int, int], list[Packet]] = {}
        self._pending: dict[tuple[int, int], int] = {}
        self._rreq_seen: dict[int, set[tuple[int, int]]] = {n.id: set() for n in nodes}
        self._reverse: dict[tuple[int, int, int], int] = {}
        self._rreq_counter = 0
        self._probe_counter = 0
        self._pending_probes: dict[int, tuple[int, int]] = {}
        self._in_flight = 0

    # -- setup ----------------------------------------------------------------

    def _make_flows(self, flows) -> list[Flow]:
        if flows is not None:
            return [Flow(i, src, dst) for i, (src, dst) in enumerate(flows)]
        if self.config.flows_between_legitimate:
            eligible = [n.id for n in self.nodes if n.role is Role.LEGITIMATE]
        else:
            eligible = [n.id for n in self.nodes]
        out = []
        if len(eligible) >= 2:
            for i in range(self.config.max_connections):
                src, dst = self.rng.sample(eligible, 2)
                out.append(Flow(i, src, dst))
        return out

    def _hop_estimate(self, a: int, b: int) -> int:
        """Guarantor distance for recommendation discounting."""
        return 1 if b in self.by_id[a].neighbors else 2

    def _schedule(self, delay: float, kind: str, payload: tuple = ()) -> None:
        self._eseq += 1
        heapq.heappush(self._heap, SimEvent(self.time + delay, self._eseq, kind, payload))

    @property
    def filter_active(self) -> bool:
        return self.trust is not None and self.time >= self.config.trust_warmup

    def _untrusted_for_routing(self, node_id: int) -> bool:
        return self.filter_active and self.trust.is_untrusted(node_id)

    # -- energy ------------------------------------------------------------------

    def _charge_send(self, node: NodeState, size: int, pkt: str, flow: int,
                     peer: int, detail: str = "-") -> None:
        energy = self.config.e_send * (size / DATA_REFERENCE_SIZE)
        node.energy_send += energy
        self.log.add(self.time, SEND, node.id, peer, pkt, flow, detail, energy)

    def _charge_recv(self, node: NodeState, pkt: str, flow: int, peer: int,
                     detail: str = "-") -> None:
        energy = self.config.e_rec
        node.energy_receive += energy
        self.log.add(self.time, RECV, node.id, peer, pkt, flow, detail, energy)

    # -- trust plumbing -----------------------------------------------------------

    def _interaction(self, assessor_id: int, assessee_id: int, success: bool,
                     duration: float, reading: float | None = None) -> None:
        """Report one completed handoff; malicious observers stay silent."""
        if self.trust is None:
            return
        if self.by_id[assessor_id].role is not Role.LEGITIMATE:
            return
        evaluate = self.config.trust_update_mode == "event"
        state = self.trust.record_interaction(assessor_id, assessee_id, success,
                                              duration, self.time, reading,
                                              evaluate=evaluate)
        if state is not None:
            self._charge_teval(assessor_id, assessee_id,
                               state.classification.value)

    def _charge_teval(self, assessor_id: int, assessee_id: int, detail: str) -> None:
        node = self.by_id[assessor_id]
        node.energy_trust += self.config.e_te
        self.log.add(self.time, TEVAL, assessor_id, assessee_id, "-", -1,
                     detail, self.config.e_te)

    def _reading_of(self, node: NodeState) -> float:
        return node.data_baseline + self.rng.gauss(0.0, self.config.data_sigma)

    # -- run loop -------------------------------------------------------------

    def start(self) -> None:
        """Schedule the recurring event sources."""
        cfg = self.config
        for flow in self.flows:
            start = FLOW_START + flow.id * FLOW_STAGGER
            if start <= cfg.sim_duration:
                self._schedule(start, "cbr", (flow.id,))
        if cfg.mobility_dt <= cfg.sim_duration and cfg.speed > 0.0:
            self._schedule(cfg.mobility_dt, "mobility")
        if self.trust is not None and cfg.probe_interval <= cfg.sim_duration:
            self._schedule(cfg.probe_interval, "probe_round")
        if (self.trust is not None and cfg.trust_update_mode == "periodic"
                and cfg.trust_update_period <= cfg.sim_duration):
            self._schedule(cfg.trust_update_period, "trust_sweep")

    def step_until(self, until: float | None = None) -> None:
        """Process events in order; stop before the first one past ``until``."""
        handlers = self._handlers()
        heap = self._heap
        while heap:
            if until is not None and heap[0].time > until:
                return
            event = heapq.heappop(heap)
            self.time = event.time
            handlers[event.kind](*event.payload)

    def _handlers(self) -> dict:
        return {
            "cbr": self._on_cbr,
            "mobility": self._on_mobility,
            "probe_round": self._on_probe_round,
            "probe_recv": self._on_probe_recv,
            "probe_reply": self._on_probe_reply,
            "probe_fail": self._on_probe_fail,
            "rreq": self._on_rreq,
            "rrep_start": self._on_rrep_start,
            "rrep": self._on_rrep,
            "data": self._on_data,
            "disc_timeout": self._on_discovery_timeout,
            "trust_sweep": self._on_trust_sweep,
        }

    def finish(self) -> EventLog:
        """Drain outstanding events and seal the log."""
        self.step_until(None)
        if self.trust is not None:
            for node_id, classification in sorted(self.trust.classifications().items()):
                self.log.classifications[node_id] = classification.value
        assert self._in_flight == 0, "packets still in flight after drain"
        assert not any(self._queues.values()), "packets still queued after drain"
        return self.log

    def run(self) -> EventLog:
        self.start()
        return self.finish()

    # -- traffic ---------------------------------------------------------------

    def _on_cbr(self, flow_id: int) -> None:
        flow = self.flows[flow_id]
        pkt = Packet(PacketKind.DATA, flow.src, flow.dst, flow.id, flow.next_seq,
                     self.config.packet_size, self.time, trace=[flow.src])
        flow.next_seq += 1
        flow.generated += 1
        self.log.add(self.time, GEN, flow.src, flow.dst, pkt.uid, flow.id)
        self._dispatch_data(self.by_id[flow.src], pkt)
        next_time = self.time + 1.0 / self.config.cbr_rate
        if next_time <= self.config.sim_duration:
            self._schedule(1.0 / self.config.cbr_rate, "cbr", (flow_id,))

    def _drop(self, pkt: Packet, node_id: int, reason: str) -> None:
        self.flows[pkt.flow].dropped += 1
        self.log.add(self.time, DROP, node_id, -1, pkt.uid, pkt.flow, reason)

    def _dispatch_data(self, node: NodeState, pkt: Packet) -> None:
        """Send onward from ``node`` or queue behind a route discovery."""
        if len(pkt.trace) > self.config.ttl:
            self._drop(pkt, node.id, "ttl")
            return
        route = node.routes.get(pkt.dst)
        next_hop = None
        if pkt.dst in node.neighbors:
            next_hop = pkt.dst                     # destination in direct range
        elif route is not None and route.next_hop in node.neighbors:
            candidate = route.next_hop
            if candidate in pkt.trace:
                self._drop(pkt, node.id, "loop")
                return
            if candidate != pkt.dst and self._untrusted_for_routing(candidate):
                node.routes.pop(pkt.dst, None)     # distrusted relay: reroute
            else:
                next_hop = candidate
        if next_hop is None:
            self._enqueue_for_route(node, pkt)
            return
        self._charge_send(node, pkt.size, pkt.uid, pkt.flow, next_hop)
        self._in_flight += 1
        self._schedule(self.config.hop_latency, "data", (pkt, node.id, next_hop))

    def _on_data(self, pkt: Packet, sender_id: int, receiver_id: int) -> None:
        self._in_flight -= 1
        receiver = self.by_id[receiver_id]
        self._charge_recv(receiver, pkt.uid, pkt.flow, sender_id)
        if self.config.link_loss > 0.0 and self.rng.random() < self.config.link_loss:
            self._drop(pkt, receiver_id, "link_loss")
            self._interaction(sender_id, receiver_id, False, self.config.hop_latency)
            return
        pkt.visit(receiver_id)
        if receiver_id == pkt.dst:
            self.flows[pkt.flow].delivered += 1
            self.log.add(self.time, DELIVER, receiver_id, sender_id, pkt.uid, pkt.flow)
            self._interaction(sender_id, receiver_id, True, self.config.hop_latency,
                              reading=self._reading_of(receiver))
            return
        if receiver.role is Role.MALICIOUS_DROP and \
                self.rng.random() < self.config.drop_probability:
            self._drop(pkt, receiver_id, "malicious")
            self._interaction(sender_id, receiver_id, False, self.config.hop_latency)
            return
        if receiver.role is Role.MALICIOUS_HIDE:
            # defensive: hiding nodes never end up on routes
            self._drop(pkt, receiver_id, "malicious")
            self._interaction(sender_id, receiver_id, False, self.config.hop_latency)
            return
        self._interaction(sender_id, receiver_id, True, self.config.hop_latency,
                          reading=self._reading_of(receiver))
        self._dispatch_data(receiver, pkt)

    # -- route discovery --------------------------------------------------------

    def _enqueue_for_route(self, node: NodeState, pkt: Packet) -> None:
        self._queues.setdefault((node.id, pkt.dst), []).append(pkt)
        if (node.id, pkt.dst) not in self._pending:
            self._start_discovery(node.id, pkt.dst)

    def _start_discovery(self, origin: int, dst: int) -> None:
        self._rreq_counter += 1
        rreq_id = self._rreq_counter
        self._pending[(origin, dst)] = rreq_id
        node = self.by_id[origin]
        self._rreq_seen[origin].add((origin, rreq_id))
        uid = f"q{rreq_id}"
        self._charge_send(node, self.config.control_packet_size, uid, -1, -1, "rreq")
        for neighbor in node.neighbors:
            self._schedule(self.config.hop_latency, "rreq",
                           (origin, rreq_id, dst, origin, neighbor, 1))
        self._schedule(self.config.discovery_timeout, "disc_timeout",
                       (origin, dst, rreq_id))

    def _on_rreq(self, origin: int, rreq_id: int, dst: int,
                 sender_id: int, receiver_id: int, hops: int) -> None:
        receiver = self.by_id[receiver_id]
        uid = f"q{rreq_id}"
        self._charge_recv(receiver, uid, -1, sender_id, "rreq")
        if (origin, rreq_id) in self._rreq_seen[receiver_id]:
            return
        if sender_id != origin and self._untrusted_for_routing(sender_id):
            return  # refuse untrusted relays; a trusted copy may still arrive
        self._rreq_seen[receiver_id].add((origin, rreq_id))
        self._reverse[(receiver_id, origin, rreq_id)] = sender_id
        if receiver_id == dst:
            self._schedule(self.config.reply_delay, "rrep_start",
                           (origin, rreq_id, dst))
            return
        if receiver.role is Role.MALICIOUS_HIDE:
            return  # hides during route discovery: no relaying
        if hops >= self.config.ttl:
            return
        self._charge_send(receiver, self.config.control_packet_size, uid, -1, -1, "rreq")
        for neighbor in receiver.neighbors:
            if neighbor != sender_id:
                self._schedule(self.config.hop_latency, "rreq",
                               (origin, rreq_id, dst, receiver_id, neighbor, hops + 1))

    def _on_rrep_start(self, origin: int, rreq_id: int, dst: int) -> None:
        back = self._reverse.get((dst, origin, rreq_id))
        if back is None:
            return
        node = self.by_id[dst]
        uid = f"p{rreq_id}"
        self._charge_send(node, self.config.control_packet_size, uid, -1, back, "rrep")
        self._schedule(self.config.hop_latency, "rrep",
                       (origin, rreq_id, dst, dst, back, 1))

    def _on_rrep(self, origin: int, rreq_id: int, dst: int,
                 sender_id: int, receiver_id: int, hops_from_dst: int) -> None:
        from .topology import RouteEntry

        receiver = self.by_id[receiver_id]
        uid = f"p{rreq_id}"
        self._charge_recv(receiver, uid, -1, sender_id, "rrep")
        receiver.routes[dst] = RouteEntry(sender_id, hops_from_dst, rreq_id)
        self._interaction(receiver_id, sender_id, True, self.config.hop_latency)
        if receiver_id == origin:
            if self._pending.get((origin, dst)) == rreq_id:
                del self._pending[(origin, dst)]
            self.log.add(self.time, ROUTE, origin, dst, uid, -1,
                         f"via={sender_id},hops={hops_from_dst}")
            queued = self._queues.pop((origin, dst), [])
            for pkt in queued:
                self._dispatch_data(receiver, pkt)
            return
        back = self._reverse.get((receiver_id, origin, rreq_id))
        if back is None:
            return
        self._charge_send(receiver, self.config.control_packet_size, uid, -1, back, "rrep")
        self._schedule(self.config.hop_latency, "rrep",
                       (origin, rreq_id, dst, receiver_id, back, hops_from_dst + 1))

    def _on_discovery_timeout(self, origin: int, dst: int, rreq_id: int) -> None:
        if self._pending.get((origin, dst)) != rreq_id:
            return
        del self._pending[(origin, dst)]
        for pkt in self._queues.pop((origin, dst), []):
            self._drop(pkt, origin, "no_route")

    def route_discovery(self, src: int, dst: int) -> list[int] | None:
        """Synchronous discovery used by fixtures: drain until resolved.

        Returns the hop sequence src..dst, or None when no admissible
        route exists. Meant for quiescent simulators (no other traffic).
        """
        if src == dst:
            raise ValueError("source and destination must differ")
        if dst in self.by_id[src].neighbors:
            return [src, dst]
        self._start_discovery(src, dst)
        handlers = self._handlers()
        while self._heap and (src, dst) in self._pending:
            event = heapq.heappop(self._heap)
            self.time = event.time
            handlers[event.kind](*event.payload)
        path = [src]
        current = src
        while current != dst:
            route = self.by_id[current].routes.get(dst)
            if route is None:
                return None
            current = route.next_hop
            if current in path:
                return None
            path.append(current)
        return path

    # -- mobility ---------------------------------------------------------------

    def _on_mobility(self) -> None:
        for node in self.nodes:
            mobility_tick(node, self.config.mobility_dt, self.config, self.rng)
        recompute_neighbors(self.nodes, self.config.tx_range)
        next_time = self.time + self.config.mobility_dt
        if next_time <= self.config.sim_duration:
            self._schedule(self.config.mobility_dt, "mobility")

    # -- neighbor data probes ----------------------------------------------------

    def _on_probe_round(self) -> None:
        for node in self.nodes:
            if node.role is not Role.LEGITIMATE:
                continue  # misbehaving nodes run no trust machinery
            candidates = [n for n in node.neighbors
                          if not (self.trust.states.get(n)
                                  and self.trust.states[n].evaluated
                                  and self.trust.is_untrusted(n))]
            if not candidates:
                continue
            target = self.rng.choice(candidates)
            self._probe_counter += 1
            probe_id = self._probe_counter
            self._pending_probes[probe_id] = (node.id, target)
            uid = f"b{probe_id}"
            self._charge_send(node, self.config.control_packet_size, uid, -1,
                              target, "probe")
            self._schedule(self.config.hop_latency, "probe_recv", (probe_id,))
            self._schedule(self.config.probe_timeout, "probe_fail", (probe_id,))
        next_time = self.time + self.config.probe_interval
        if next_time <= self.config.sim_duration:
            self._schedule(self.config.probe_interval, "probe_round")

    def _on_probe_recv(self, probe_id: int) -> None:
        pending = self._pending_probes.get(probe_id)
        if pending is None:
            return
        prober, target_id = pending
        target = self.by_id[target_id]
        uid = f"b{probe_id}"
        self._charge_recv(target, uid, -1, prober, "probe")
        if target.role is not Role.LEGITIMATE:
            return  # stays silent; the prober's timeout will fire
        self._charge_send(target, self.config.control_packet_size, uid, -1,
                          prober, "probe")
        self._schedule(self.config.hop_latency, "probe_reply", (probe_id,))

    def _on_probe_reply(self, probe_id: int) -> None:
        pending = self._pending_probes.pop(probe_id, None)
        if pending is None:
            return
        prober, target_id = pending
        uid = f"b{probe_id}"
        self._charge_recv(self.by_id[prober], uid, -1, target_id, "probe")
        self.log.add(self.time, PROBE, prober, target_id, uid, -1, "ok")
        reading = self._reading_of(self.by_id[target_id])
        self._interaction(prober, target_id, True, 2 * self.config.hop_latency,
                          reading=reading)

    def _on_probe_fail(self, probe_id: int) -> None:
        pending = self._pending_probes.pop(probe_id, None)
        if pending is None:
            return
        prober, target_id = pending
        self.log.add(self.time, PROBE, prober, target_id, f"b{probe_id}", -1, "timeout")
        self._interaction(prober, target_id, False, self.config.probe_timeout)

    # -- periodic trust sweep ------------------------------------------------------

    def _on_trust_sweep(self) -> None:
        assert self.trust is not None
        for assessor, assessee in self.trust.sweep(self.time):
            state = self.trust.states[assessee]
            self._charge_teval(assessor, assessee, state.classification.value)
        next_time = self.time + self.config.trust_update_period
        if next_time <= self.config.sim_duration:
            self._schedule(self.config.trust_update_period, "trust_sweep")


def run(config: ScenarioConfig, trust_model=None,
        nodes: list[NodeState] | None = None,
        flows: list[tuple[int, int]] | None = None) -> EventLog:
    """Build a simulator and execute one full scenario."""
    return Simulator(config, trust_model, nodes, flows).run()
