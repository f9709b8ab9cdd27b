"""Service and detection metrics computed from a finished event log.

All functions are pure: recomputing from a persisted log reproduces the
numbers bit-exactly. Ratios whose denominator is empty come back as
None (an absent value) instead of faulting.

The detection metrics use the standard confusion-matrix convention with
malicious nodes as the positive class: recall = TP / (TP + FN). A
compatibility flag swaps in the alternative recall TP / (TP + TN) found
in some of the trust literature; it is off by default.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, fields

from .simnet.eventlog import DELIVER, GEN, RECV, SEND, TEVAL, EventLog

__all__ = [
    "InputMismatchError",
    "ConfusionCounts",
    "MetricReport",
    "pfr",
    "net_throughput",
    "aecr",
    "aecr_per_node",
    "confusion",
    "precision",
    "recall",
    "accuracy",
    "f_measure",
    "report_from_log",
    "write_report_csv",
    "read_report_csv",
]

MALICIOUS_ROLES = ("malicious_hide", "malicious_drop")


class InputMismatchError(Exception):
    """Classification and ground-truth node sets differ."""


@dataclass
class ConfusionCounts:
    tp: int = 0   # malicious flagged untrusted
    fp: int = 0   # legitimate flagged untrusted
    tn: int = 0   # legitimate kept trusted
    fn: int = 0   # malicious kept trusted

    def __post_init__(self):
        if min(self.tp, self.fp, self.tn, self.fn) < 0:
            raise ValueError("confusion counts must be nonnegative")

    @property
    def population(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass
class MetricReport:
    pfr: float | None = None
    net_throughput: float | None = None
    aecr: float | None = None
    accuracy: float | None = None
    f_measure: float | None = None

    @classmethod
    def column_names(cls) -> list[str]:
        return [f.name for f in fields(cls)]


def pfr(log: EventLog) -> float | None:
    """Delivered data packets over packets the sources generated."""
    sent = log.count(GEN)
    if sent == 0:
        return None
    return log.count(DELIVER) / sent


def net_throughput(log: EventLog, interval: float | None = None) -> float:
    """Successful deliveries per second over the transmission interval."""
    if interval is None:
        interval = log.duration
    if not interval > 0.0:
        raise ValueError("interval must be positive")
    return log.count(DELIVER) / interval


def aecr(log: EventLog) -> float | None:
    """Network-wide trust-evaluation energy over transmission energy."""
    by_kind = log.energy_by_kind()
    transmission = by_kind.get(SEND, 0.0) + by_kind.get(RECV, 0.0)
    if transmission == 0.0:
        return None
    return by_kind.get(TEVAL, 0.0) / transmission


def aecr_per_node(log: EventLog) -> dict[int, float | None]:
    """Per-node variant of the energy ratio; None when a node never transmitted."""
    out: dict[int, float | None] = {}
    for node, buckets in sorted(log.node_energy().items()):
        transmission = buckets[SEND] + buckets[RECV]
        out[node] = buckets[TEVAL] / transmission if transmission > 0.0 else None
    return out


def confusion(classifications: dict[int, str], ground_truth: dict[int, str]) -> ConfusionCounts:
    """Count detection outcomes; positives are malicious nodes.

    ``classifications`` maps node to 'trusted'/'untrusted'; the ground
    truth maps node to its role name.
    """
    if set(classifications) != set(ground_truth):
        missing = set(ground_truth) ^ set(classifications)
        raise InputMismatchError(f"node sets differ on {sorted(missing)}")
    counts = ConfusionCounts()
    for node, verdict in classifications.items():
        malicious = ground_truth[node] in MALICIOUS_ROLES
        flagged = verdict == "untrusted"
        if malicious and flagged:
            counts.tp += 1
        elif malicious:
            counts.fn += 1
        elif flagged:
            counts.fp += 1
        else:
            counts.tn += 1
    return counts


def precision(c: ConfusionCounts) -> float | None:
    denom = c.tp + c.fp
    return c.tp / denom if denom else None


def recall(c: ConfusionCounts, paper_formula: bool = False) -> float | None:
    denom = c.tp + (c.tn if paper_formula else c.fn)
    return c.tp / denom if denom else None


def accuracy(c: ConfusionCounts) -> float | None:
    if c.population == 0:
        return None
    return (c.tp + c.tn) / c.population


def f_measure(c: ConfusionCounts, paper_formula: bool = False) -> float | None:
    """Harmonic mean of precision and recall; None when either is undefined."""
    p = precision(c)
    r = recall(c, paper_formula)
    if p is None or r is None or (p == 0.0 and r == 0.0):
        return None
    return 2.0 * p * r / (p + r)


def report_from_log(log: EventLog, paper_formula: bool = False) -> MetricReport:
    """All metrics of one run; detection metrics need trust classifications."""
    acc = fm = None
    if log.classifications:
        counts = confusion(log.classifications, log.roles)
        acc = accuracy(counts)
        fm = f_measure(counts, paper_formula)
    return MetricReport(
        pfr=pfr(log),
        net_throughput=net_throughput(log) if log.duration > 0.0 else None,
        aecr=aecr(log),
        accuracy=acc,
        f_measure=fm,
    )


# -- CSV export ----------------------------------------------------------------

RUN_COLUMNS = ["sweep_value", "comparator", "repetition", "seed"] + MetricReport.column_names()
AGGREGATE_COLUMNS = ["sweep_value", "comparator", "statistic"] + MetricReport.column_names()


def _format(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_report_csv(path, rows: list[dict], columns: list[str],
                     header_lines: list[str] | None = None) -> None:
    """Write metric rows with optional '#' provenance header lines."""
    with open(path, "w", newline="") as fh:
        for line in header_lines or []:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_format(row.get(c)) for c in columns])


def read_report_csv(path) -> tuple[list[str], list[dict], list[str]]:
    """Read back (columns, rows, header_lines); blank cells become None."""
    with open(path, newline="") as fh:
        lines = fh.readlines()
    header_lines = [ln[2:].rstrip("\n") for ln in lines if ln.startswith("# ")]
    reader = csv.reader(ln for ln in lines if not ln.startswith("#"))
    columns = next(reader)
    rows = []
    for raw in reader:
        row = {}
        for key, cell in zip(columns, raw):
            if cell == "":
                row[key] = None
            elif key in ("repetition", "seed"):
                row[key] = int(cell)
            elif key in ("comparator", "statistic"):
                row[key] = cell
            else:
                row[key] = float(cell)
        rows.append(row)
    return columns, rows, header_lines
