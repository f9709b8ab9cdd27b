"""Trust mathematics: behavioral properties, data trust, and aggregation.

Behavioral trust fuses three per-pair properties (relative interaction
frequency, intimacy, honesty) through an inference model and adds
hop-discounted third-party recommendations. Data trust scores how far a
node's reported readings drift from its own history, directly and via
neighbors. Both aggregates are normalized by the total recommendation
weight so the final two-component total stays inside [0, 2]; raw sums
remain available through ``normalize=False``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .ledger import (
    DataHistory,
    InteractionLedger,
    NoHistoryError,
    NoReportsError,
    Recommendation,
)

__all__ = [
    "Classification",
    "TrustState",
    "compute_rfi",
    "compute_intimacy",
    "compute_honesty",
    "behavioral_trust",
    "direct_data_trust",
    "indirect_data_trust",
    "recommendation_decay",
    "data_trust",
    "total_trust",
    "classify",
]

INTIMACY_MODES = ("normalized", "as_written")
_DEGENERATE_EPS = 1e-9


class Classification(enum.Enum):
    TRUSTED = "trusted"
    UNTRUSTED = "untrusted"


@dataclass
class TrustState:
    """Latest evaluated trust of one node."""

    t_behavior: float
    t_data: float
    t_total: float
    classification: Classification
    last_update: float
    evaluated: bool = True   # False while still carrying the bootstrap value


def compute_rfi(ledger: InteractionLedger, assessor: int, assessee: int) -> float:
    """Share of the assessee's windowed interactions owned by this assessor.

    Zero when the assessee has no interactions at all: no evidence means
    no frequency-based trust.
    """
    total = ledger.total_interactions(assessee)
    if total == 0:
        return 0.0
    return ledger.interaction_count(assessor, assessee) / total


def compute_intimacy(ledger: InteractionLedger, assessor: int, assessee: int,
                     mode: str = "normalized", audit=None) -> float:
    """Relationship-duration trust in [0, 1].

    ``normalized`` (default) uses own-time over total time. ``as_written``
    divides by the duration difference instead, which is singular when
    both durations match; that case returns 1.0 and is flagged on the
    audit trail as a degenerate evaluation.
    """
    if mode not in INTIMACY_MODES:
        raise ValueError(f"intimacy mode must be one of {INTIMACY_MODES}")
    own = ledger.duration(assessor, assessee)
    peers = ledger.peer_duration(assessor, assessee)
    if mode == "normalized":
        total = own + peers
        if total == 0.0:
            return 0.0
        return own / total
    if abs(own - peers) < _DEGENERATE_EPS:
        if audit is not None:
            audit.flag("DegenerateIntimacy",
                       f"assessor={assessor} assessee={assessee} t={own!r}")
        return 1.0
    return min(1.0, max(0.0, own / (own - peers)))


def compute_honesty(success: float, failure: float) -> float:
    """Mean of the beta reputation distribution over the two counters."""
    from .ledger import LedgerCorruptError

    if success < 1.0 or failure < 1.0:
        raise LedgerCorruptError(
            f"beta counters must include the +1 prior, got ({success}, {failure})")
    return success / (success + failure)


def _aggregate(direct: float, contributions: list[tuple[float, int]],
               normalize: bool) -> float:
    """direct + sum(value / hops), optionally normalized by total weight."""
    indirect = 0.0
    weight = 0.0
    for value, hops in contributions:
        indirect += value / hops
        weight += 1.0 / hops
    raw = direct + indirect
    if not normalize:
        return raw
    return min(1.0, max(0.0, raw / (1.0 + weight)))


def behavioral_trust(model, ledger: InteractionLedger,
                     recommendations: list[Recommendation],
                     assessor: int, assessee: int,
                     intimacy_mode: str = "normalized",
                     normalize: bool = True,
                     audit=None) -> float:
    """Fuse the direct model estimate with hop-discounted recommendations.

    The direct term is the inference model applied to (RFI, intimacy,
    honesty) for this pair. With ``normalize`` the result is scaled by
    one plus the total recommendation weight and clamped to [0, 1]; the
    un-normalized raw sum is the literal weighted-additive aggregate.
    """
    rfi = compute_rfi(ledger, assessor, assessee)
    intimacy = compute_intimacy(ledger, assessor, assessee, intimacy_mode, audit)
    honesty = compute_honesty(*ledger.counters(assessor, assessee))
    direct = model.evaluate((rfi, intimacy, honesty))
    contributions = [(rec.value, rec.hop_count) for rec in recommendations
                     if rec.assessee == assessee]
    result = _aggregate(direct, contributions, normalize)
    if audit is not None:
        audit.record_behavior(assessor, assessee, rfi, intimacy, honesty,
                              direct, len(contributions), result)
    return result


def direct_data_trust(instantaneous: float, history: DataHistory,
                      now: float | None = None) -> float:
    """Deviation-based trust in one fresh reading against the node's history.

    Equal to the cap when the reading matches the historical mean exactly,
    otherwise the reciprocal deviation, never above the cap (which keeps
    the score continuous as the deviation approaches zero).
    """
    mean = history.historical_mean(now)   # raises NoHistoryError when empty
    deviation = abs(instantaneous - mean)
    if deviation == 0.0:
        return history.t_max
    return min(history.t_max, 1.0 / deviation)


def indirect_data_trust(reports: list[tuple[int, float]], history: DataHistory,
                        now: float | None = None) -> float:
    """Same deviation rule applied to the mean of third-party reports."""
    if not reports:
        raise NoReportsError("indirect data trust needs at least one report")
    mean_report = sum(value for _, value in reports) / len(reports)
    historical = history.historical_mean(now)
    deviation = abs(mean_report - historical)
    if deviation == 0.0:
        return history.t_max
    return min(history.t_max, 1.0 / deviation)


def recommendation_decay(age: float, horizon: float | None) -> float:
    """Linear staleness factor: 1 when fresh, 0 at or past the horizon."""
    if horizon is None or math.isinf(horizon):
        return 1.0
    if horizon <= 0.0:
        raise ValueError("decay horizon must be positive")
    return max(0.0, 1.0 - max(0.0, age) / horizon)


def data_trust(direct: float,
               indirect: list[tuple[float, int, float]],
               now: float = 0.0,
               decay_horizon: float | None = None,
               normalize: bool = True) -> float:
    """Combine direct data trust with decayed third-party contributions.

    ``indirect`` holds (value, hop_count, report_time) triples. Each value
    is scaled by the linear staleness factor before the hop discount;
    entries older than the horizon contribute nothing.
    """
    contributions = [
        (recommendation_decay(now - t_report, decay_horizon) * value, hops)
        for value, hops, t_report in indirect
    ]
    return _aggregate(direct, contributions, normalize)


def total_trust(t_behavior: float, t_data: float) -> float:
    """Sum of the two trust components, in [0, 2] for normalized inputs."""
    return t_behavior + t_data


def classify(t_total: float, threshold: float) -> Classification:
    """Trusted iff the total reaches the threshold; ties count as trusted."""
    return Classification.TRUSTED if t_total >= threshold else Classification.UNTRUSTED
