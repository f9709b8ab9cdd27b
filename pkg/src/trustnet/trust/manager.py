"""Stateful trust evaluation driven by completed interactions.

The manager owns the interaction ledger, the per-node data histories and
the network-wide trust table. The simulator reports every completed
interaction; the manager updates the evidence and, in event-driven mode,
immediately re-evaluates the assessee. Evaluations combine the caller's
direct view with recommendations from the assessee's other partners
(guarantors), discounted by an estimated hop distance to each guarantor.
"""

from __future__ import annotations

import math
from typing import Callable

from .audit import AuditTrail
from .evaluate import (
    Classification,
    TrustState,
    classify,
    compute_honesty,
    compute_intimacy,
    compute_rfi,
    data_trust,
    direct_data_trust,
    total_trust,
)
from .ledger import DataHistory, InteractionLedger, NoHistoryError

__all__ = ["TrustManager", "NEUTRAL_DATA_TRUST"]

NEUTRAL_DATA_TRUST = 0.5


class TrustManager:
    """Evidence store plus the trust table built from it."""

    def __init__(self, model,
                 threshold: float = 1.0,
                 intimacy_mode: str = "normalized",
                 decay_horizon: float = 25.0,
                 data_horizon: float = 25.0,
                 t_max: float = 1.0,
                 max_guarantors: int = 4,
                 min_eval_interval: float = 0.0,
                 hop_count_fn: Callable[[int, int], int] | None = None,
                 window_len: float = math.inf,
                 audit: AuditTrail | None = None):
        self.model = model
        self.threshold = float(threshold)
        self.intimacy_mode = intimacy_mode
        self.decay_horizon = decay_horizon
        self.t_max = float(t_max)
        self.max_guarantors = int(max_guarantors)
        self.min_eval_interval = float(min_eval_interval)
        self.hop_count_fn = hop_count_fn or (lambda a, b: 1)
        self.ledger = InteractionLedger(window_len=window_len)
        self.audit = audit if audit is not None else AuditTrail()
        self.histories: dict[int, DataHistory] = {}
        self.states: dict[int, TrustState] = {}
        self.evaluations = 0
        self._data_horizon = data_horizon
        # last reading each observer obtained from each node: (time, value)
        self._observed: dict[tuple[int, int], tuple[float, float]] = {}
        # cached direct model estimate per (guarantor, assessee) ledger version
        self._direct_cache: dict[tuple[int, int], tuple[int, float]] = {}
        self._last_eval: dict[tuple[int, int], float] = {}

    # -- bootstrap -----------------------------------------------------------

    def bootstrap(self, node_ids, rng) -> None:
        """Seed every node with a random initial trust in lieu of evidence."""
        for node in node_ids:
            t_nb = rng.uniform(0.4, 0.6)
            t_d = rng.uniform(0.4, 0.6)
            tot = total_trust(t_nb, t_d)
            self.states[node] = TrustState(t_nb, t_d, tot,
                                           classify(tot, self.threshold),
                                           last_update=0.0, evaluated=False)

    # -- evidence ------------------------------------------------------------

    def _history(self, node: int) -> DataHistory:
        hist = self.histories.get(node)
        if hist is None:
            hist = self.histories[node] = DataHistory(self._data_horizon, self.t_max)
        return hist

    def record_interaction(self, assessor: int, assessee: int, success: bool,
                           duration: float, now: float,
                           reading: float | None = None,
                           evaluate: bool = True) -> TrustState | None:
        """Update evidence for one completed interaction, then re-evaluate.

        Returns the fresh state when an evaluation ran, else None (either
        evaluation was suppressed or the per-pair rate limit applies).
        """
        self.ledger.record(assessor, assessee, success, duration, now)
        if reading is not None:
            self._history(assessee).add(now, reading)
            self._observed[(assessor, assessee)] = (now, reading)
        if not evaluate:
            return None
        if self.min_eval_interval > 0.0:
            last = self._last_eval.get((assessor, assessee))
            if last is not None and now - last < self.min_eval_interval:
                return None
        return self.evaluate(assessor, assessee, now)

    # -- evaluation ----------------------------------------------------------

    def _direct_estimate(self, assessor: int, assessee: int) -> float:
        """Model output on this pair's trust properties, cached per version."""
        key = (assessor, assessee)
        version = self.ledger.version(assessor, assessee)
        cached = self._direct_cache.get(key)
        if cached is not None and cached[0] == version:
            return cached[1]
        rfi = compute_rfi(self.ledger, assessor, assessee)
        intimacy = compute_intimacy(self.ledger, assessor, assessee,
                                    self.intimacy_mode, self.audit)
        honesty = compute_honesty(*self.ledger.counters(assessor, assessee))
        value = self.model.evaluate((rfi, intimacy, honesty))
        value = min(1.0, max(0.0, value))
        self._direct_cache[key] = (version, value)
        return value

    def _guarantors(self, assessor: int, assessee: int) -> list[int]:
        out = []
        for peer in self.ledger.assessors_of(assessee):
            if peer in (assessor, assessee):
                continue
            out.append(peer)
            if len(out) >= self.max_guarantors:
                break
        return out

    def evaluate(self, assessor: int, assessee: int, now: float) -> TrustState:
        """Full two-component evaluation of the assessee by the assessor."""
        rfi = compute_rfi(self.ledger, assessor, assessee)
        intimacy = compute_intimacy(self.ledger, assessor, assessee,
                                    self.intimacy_mode, self.audit)
        honesty = compute_honesty(*self.ledger.counters(assessor, assessee))
        direct_nb = min(1.0, max(0.0, self.model.evaluate((rfi, intimacy, honesty))))
        self._direct_cache[(assessor, assessee)] = (
            self.ledger.version(assessor, assessee), direct_nb)

        guarantors = self._guarantors(assessor, assessee)
        nb_indirect = 0.0
        nb_weight = 0.0
        for peer in guarantors:
            hops = self.hop_count_fn(assessor, peer)
            nb_indirect += self._direct_estimate(peer, assessee) / hops
            nb_weight += 1.0 / hops
        t_behavior = min(1.0, max(0.0, (direct_nb + nb_indirect) / (1.0 + nb_weight)))

        # Direct data term: the assessor's own latest reading vs history.
        history = self.histories.get(assessee)
        own = self._observed.get((assessor, assessee))
        if history is None or own is None or len(history) == 0:
            direct_dd = NEUTRAL_DATA_TRUST   # no direct data evidence yet
            direct_known = False
        else:
            try:
                direct_dd = direct_data_trust(own[1], history, now)
                direct_known = True
            except NoHistoryError:
                direct_dd = NEUTRAL_DATA_TRUST
                direct_known = False

        reports: list[tuple[float, int, float]] = []
        if history is not None and len(history) > 0:
            for peer in guarantors:
                obs = self._observed.get((peer, assessee))
                if obs is None:
                    continue
                t_obs, value = obs
                try:
                    peer_dd = direct_data_trust(value, history, now)
                except NoHistoryError:
                    continue
                reports.append((peer_dd, self.hop_count_fn(assessor, peer), t_obs))
        t_data = data_trust(direct_dd, reports, now, self.decay_horizon)

        tot = total_trust(t_behavior, t_data)
        state = TrustState(t_behavior, t_data, tot,
                           classify(tot, self.threshold), now, evaluated=True)
        self.states[assessee] = state
        self.evaluations += 1
        self._last_eval[(assessor, assessee)] = now
        self.audit.record_eval(now, assessor, assessee, rfi, intimacy, honesty,
                               direct_nb, len(guarantors), t_behavior,
                               direct_dd if direct_known else float("nan"),
                               len(reports), t_data, tot,
                               state.classification.value)
        return state

    def sweep(self, now: float) -> list[tuple[int, int]]:
        """Periodic mode: re-evaluate every node with evidence.

        Each node is assessed by its busiest partner; returns the
        (assessor, assessee) pairs that were evaluated.
        """
        evaluated = []
        for assessee in self.ledger.assessees():
            assessors = self.ledger.assessors_of(assessee)
            if not assessors:
                continue
            self.evaluate(assessors[0], assessee, now)
            evaluated.append((assessors[0], assessee))
        return evaluated

    # -- queries -------------------------------------------------------------

    def state_of(self, node: int) -> TrustState | None:
        return self.states.get(node)

    def is_untrusted(self, node: int) -> bool:
        state = self.states.get(node)
        return state is not None and state.classification is Classification.UNTRUSTED

    def classifications(self) -> dict[int, Classification]:
        return {node: state.classification for node, state in self.states.items()}
