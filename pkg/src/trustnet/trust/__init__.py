"""Trust mathematics and evidence bookkeeping."""

from .audit import AuditTrail
from .evaluate import (
    Classification,
    TrustState,
    behavioral_trust,
    classify,
    compute_honesty,
    compute_intimacy,
    compute_rfi,
    data_trust,
    direct_data_trust,
    indirect_data_trust,
    recommendation_decay,
    total_trust,
)
from .ledger import (
    DataHistory,
    InteractionLedger,
    LedgerCorruptError,
    NoHistoryError,
    NoReportsError,
    PairRecord,
    Recommendation,
)
from .manager import NEUTRAL_DATA_TRUST, TrustManager

__all__ = [
    "AuditTrail",
    "Classification",
    "DataHistory",
    "InteractionLedger",
    "LedgerCorruptError",
    "NEUTRAL_DATA_TRUST",
    "NoHistoryError",
    "NoReportsError",
    "PairRecord",
    "Recommendation",
    "TrustManager",
    "TrustState",
    "behavioral_trust",
    "classify",
    "compute_honesty",
    "compute_intimacy",
    "compute_rfi",
    "data_trust",
    "direct_data_trust",
    "indirect_data_trust",
    "recommendation_decay",
    "total_trust",
]
