"""Interaction bookkeeping that feeds the trust properties.

The ledger keeps, per ordered (assessor, assessee) pair, the interaction
count inside the current observation window, the cumulative interaction
time, and beta-reputation counters seeded with the uniform prior
(success = failure = 1). Data histories keep timestamped sensor readings
inside a sliding horizon.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

__all__ = [
    "LedgerCorruptError",
    "NoHistoryError",
    "NoReportsError",
    "PairRecord",
    "InteractionLedger",
    "DataHistory",
    "Recommendation",
]


class LedgerCorruptError(Exception):
    """Beta counters fell below their prior of 1."""


class NoHistoryError(Exception):
    """A data-trust computation was asked for a node with no readings."""


class NoReportsError(Exception):
    """Indirect data trust needs at least one third-party report."""


@dataclass
class PairRecord:
    count: int = 0              # interactions in the current window
    duration: float = 0.0       # cumulative interaction time, seconds
    success: float = 1.0        # beta counter a (includes +1 prior)
    failure: float = 1.0        # beta counter b (includes +1 prior)
    version: int = 0            # bumped on every update, for caches

    def validate(self) -> None:
        if self.success < 1.0 or self.failure < 1.0:
            raise LedgerCorruptError(
                f"beta counters must stay >= 1, got ({self.success}, {self.failure})")
        if self.duration < 0.0 or self.count < 0:
            raise LedgerCorruptError("counts and durations must be nonnegative")


class InteractionLedger:
    """Directional interaction records between node pairs."""

    def __init__(self, window_len: float = math.inf, window_start: float = 0.0):
        if window_len <= 0.0:
            raise ValueError("window_len must be positive")
        self.window_len = float(window_len)
        self.window_start = float(window_start)
        self._pairs: dict[tuple[int, int], PairRecord] = {}
        self._by_assessee: dict[int, list[int]] = {}

    def _roll_window(self, now: float) -> None:
        if now < self.window_start + self.window_len:
            return
        steps = math.floor((now - self.window_start) / self.window_len)
        self.window_start += steps * self.window_len
        for rec in self._pairs.values():
            rec.count = 0

    def record(self, assessor: int, assessee: int, success: bool,
               duration: float, now: float = 0.0) -> PairRecord:
        """Register one completed interaction observed by the assessor."""
        if duration < 0.0:
            raise ValueError("interaction duration must be nonnegative")
        self._roll_window(now)
        key = (assessor, assessee)
        rec = self._pairs.get(key)
        if rec is None:
            rec = self._pairs[key] = PairRecord()
            self._by_assessee.setdefault(assessee, []).append(assessor)
        rec.count += 1
        rec.duration += duration
        if success:
            rec.success += 1.0
        else:
            rec.failure += 1.0
        rec.version += 1
        return rec

    def pair(self, assessor: int, assessee: int) -> PairRecord:
        return self._pairs.get((assessor, assessee), PairRecord())

    def interaction_count(self, assessor: int, assessee: int) -> int:
        return self.pair(assessor, assessee).count

    def total_interactions(self, assessee: int) -> int:
        """All windowed interactions of the assessee across its partners."""
        return sum(self._pairs[(i, assessee)].count
                   for i in self._by_assessee.get(assessee, ()))

    def duration(self, assessor: int, assessee: int) -> float:
        return self.pair(assessor, assessee).duration

    def peer_duration(self, assessor: int, assessee: int) -> float:
        """Cumulative time the assessee spent with everyone but the assessor."""
        return sum(self._pairs[(k, assessee)].duration
                   for k in self._by_assessee.get(assessee, ())
                   if k != assessor)

    def counters(self, assessor: int, assessee: int) -> tuple[float, float]:
        rec = self.pair(assessor, assessee)
        rec.validate()
        return rec.success, rec.failure

    def assessors_of(self, assessee: int) -> list[int]:
        """Partners with recorded evidence, busiest first, id as tie-break."""
        partners = self._by_assessee.get(assessee, ())
        return sorted(partners,
                      key=lambda i: (-self._pairs[(i, assessee)].count, i))

    def assessees(self) -> list[int]:
        """All nodes with any recorded evidence, ascending id."""
        return sorted(self._by_assessee)

    def version(self, assessor: int, assessee: int) -> int:
        return self.pair(assessor, assessee).version


@dataclass
class Recommendation:
    """Third-party trust report, discounted by hop distance to the guarantor."""

    guarantor: int
    assessee: int
    value: float
    hop_count: int
    timestamp: float = 0.0

    def __post_init__(self):
        if self.hop_count < 1:
            raise ValueError("hop count must be >= 1")
        if not math.isfinite(self.value):
            raise ValueError("recommendation value must be finite")


class DataHistory:
    """Sliding-horizon buffer of one node's sensor readings."""

    def __init__(self, horizon: float = math.inf, t_max: float = 1.0):
        if not t_max > 0.0:
            raise ValueError("t_max must be positive")
        if horizon <= 0.0:
            raise ValueError("horizon must be positive")
        self.horizon = float(horizon)
        self.t_max = float(t_max)
        self._samples: deque[tuple[float, float]] = deque()

    def __len__(self) -> int:
        return len(self._samples)

    def add(self, timestamp: float, reading: float) -> None:
        if self._samples and timestamp < self._samples[-1][0]:
            raise ValueError("readings must be appended in time order")
        self._samples.append((float(timestamp), float(reading)))

    def _prune(self, now: float) -> None:
        cutoff = now - self.horizon
        while self._samples and self._samples[0][0] < cutoff:
            self._samples.popleft()

    def historical_mean(self, now: float | None = None) -> float:
        """Mean of the readings inside the horizon ending at ``now``."""
        if now is not None:
            self._prune(now)
        if not self._samples:
            raise NoHistoryError("no readings recorded inside the horizon")
        return sum(v for _, v in self._samples) / len(self._samples)

    def latest(self) -> tuple[float, float] | None:
        return self._samples[-1] if self._samples else None
