"""Append-only trace of trust evaluations, one tab-separated line each.

Every record captures the full set of inputs that produced a trust
value, so an offline pass can replay and re-check any evaluation.
"""

from __future__ import annotations

__all__ = ["AuditTrail"]


class AuditTrail:
    """In-memory append-only log with a line-oriented text form."""

    def __init__(self):
        self._records: list[tuple] = []

    def __len__(self) -> int:
        return len(self._records)

    def __iter__(self):
        return iter(self._records)

    def flag(self, kind: str, detail: str, now: float = 0.0) -> None:
        self._records.append((now, "flag", kind, detail))

    def record_behavior(self, assessor, assessee, rfi, intimacy, honesty,
                        direct, n_recs, result, now: float = 0.0) -> None:
        self._records.append((now, "behavior", assessor, assessee,
                              rfi, intimacy, honesty, direct, n_recs, result))

    def record_eval(self, now, assessor, assessee, rfi, intimacy, honesty,
                    direct_behavior, n_behavior_recs, t_behavior,
                    direct_data, n_data_reports, t_data,
                    t_total, classification) -> None:
        self._records.append((now, "eval", assessor, assessee,
                              rfi, intimacy, honesty,
                              direct_behavior, n_behavior_recs, t_behavior,
                              direct_data, n_data_reports, t_data,
                              t_total, classification))

    def to_lines(self) -> list[str]:
        return ["\t".join(repr(f) if isinstance(f, float) else str(f)
                          for f in record)
                for record in self._records]

    def write(self, path) -> None:
        with open(path, "w") as fh:
            for line in self.to_lines():
                fh.write(line + "\n")
