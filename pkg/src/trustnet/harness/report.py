"""Summary tables and trend verdicts over a finished experiment directory.

Verdicts condense the comparator curves into named pass/fail checks
(no-trust degradation is monotone, the trust-managed comparator keeps
its service advantage, the adaptive model spends no more evaluation
energy than the fixed one). The same verdict computation accepts
aggregates recomputed from raw event logs, which gives a second path
for consistency checks.
"""

from __future__ import annotations

import re
from pathlib import Path

from .. import metrics as metrics_mod
from ..simnet.eventlog import EventLog

__all__ = [
    "MissingRunsError",
    "TrendReport",
    "compute_verdicts",
    "check_completeness",
    "report_run_dir",
    "aggregates_from_logs",
]

_EPS = 1e-9


class MissingRunsError(Exception):
    def __init__(self, missing):
        self.missing = list(missing)
        preview = ", ".join(str(m) for m in self.missing[:8])
        more = "" if len(self.missing) <= 8 else f" (+{len(self.missing) - 8} more)"
        super().__init__(f"missing runs: {preview}{more}")


class TrendReport:
    def __init__(self, verdicts: dict[str, bool], aggregates: list[dict]):
        self.verdicts = verdicts
        self.aggregates = aggregates

    def render_text(self) -> str:
        lines = ["metric means by sweep value and comparator:"]
        metric_names = metrics_mod.MetricReport.column_names()
        header = f"{'sweep':>8} {'comparator':>12}" + "".join(
            f" {name:>14}" for name in metric_names)
        lines.append(header)
        for row in self.aggregates:
            if row.get("statistic") != "mean":
                continue
            cells = "".join(
                f" {row[name]:14.6f}" if row.get(name) is not None else f" {'-':>14}"
                for name in metric_names)
            lines.append(f"{row['sweep_value']:>8} {row['comparator']:>12}{cells}")
        lines.append("")
        lines.append("trend verdicts:")
        for name, passed in self.verdicts.items():
            lines.append(f"  {name}: {'PASS' if passed else 'FAIL'}")
        return "\n".join(lines)


def _mean_series(aggregates: list[dict], comparator: str, metric: str) -> dict[float, float | None]:
    out = {}
    for row in aggregates:
        if row.get("comparator") == comparator and row.get("statistic") == "mean":
            out[float(row["sweep_value"])] = row.get(metric)
    return dict(sorted(out.items()))


def compute_verdicts(aggregates: list[dict],
                     service_floor: float = 0.2,
                     ordering_floor: float = 0.3,
                     margin_point: float = 0.5,
                     margin: float = 0.05) -> dict[str, bool]:
    """Named ordering/monotonicity checks over aggregate means.

    Verdicts that need a comparator absent from the data are skipped.
    """
    verdicts: dict[str, bool] = {}
    comparators = {row["comparator"] for row in aggregates}

    if "aodv" in comparators:
        series = _mean_series(aggregates, "aodv", "pfr")
        values = [v for v in series.values() if v is not None]
        verdicts["pfr_no_trust_monotone_nonincreasing"] = all(
            later <= earlier + _EPS for earlier, later in zip(values, values[1:]))

    if {"aodv", "anfis_tmm"} <= comparators:
        tmm = _mean_series(aggregates, "anfis_tmm", "pfr")
        aodv = _mean_series(aggregates, "aodv", "pfr")
        points = [p for p in tmm if p >= service_floor - _EPS and p in aodv]
        verdicts["pfr_trust_at_least_no_trust"] = all(
            tmm[p] is not None and aodv[p] is not None and tmm[p] >= aodv[p] - _EPS
            for p in points)
        if any(abs(p - margin_point) <= _EPS for p in points):
            p = next(p for p in points if abs(p - margin_point) <= _EPS)
            verdicts["pfr_margin_at_worst_point"] = (
                tmm[p] is not None and aodv[p] is not None
                and tmm[p] - aodv[p] >= margin - _EPS)

    if {"aodv", "fis_trust", "anfis_tmm"} <= comparators:
        tmm = _mean_series(aggregates, "anfis_tmm", "net_throughput")
        fis = _mean_series(aggregates, "fis_trust", "net_throughput")
        aodv = _mean_series(aggregates, "aodv", "net_throughput")
        points = [p for p in tmm
                  if p >= ordering_floor - _EPS and p in fis and p in aodv]
        verdicts["throughput_order_adaptive_fixed_none"] = all(
            tmm[p] >= fis[p] - _EPS and fis[p] >= aodv[p] - _EPS
            for p in points
            if None not in (tmm[p], fis[p], aodv[p]))

    if {"fis_trust", "anfis_tmm"} <= comparators:
        tmm = _mean_series(aggregates, "anfis_tmm", "aecr")
        fis = _mean_series(aggregates, "fis_trust", "aecr")
        points = [p for p in tmm if p in fis]
        verdicts["aecr_adaptive_at_most_fixed"] = all(
            tmm[p] <= fis[p] + _EPS for p in points
            if None not in (tmm[p], fis[p]))

    return verdicts


def check_completeness(run_dir: Path) -> tuple[list[dict], list[dict], list[str]]:
    """Load both CSVs, verifying every expected run row is present."""
    run_dir = Path(run_dir)
    runs_csv = run_dir / "runs.csv"
    aggregate_csv = run_dir / "aggregate.csv"
    for path in (runs_csv, aggregate_csv):
        if not path.exists():
            raise MissingRunsError([str(path)])
    _, rows, headers = metrics_mod.read_report_csv(runs_csv)
    _, aggregates, _ = metrics_mod.read_report_csv(aggregate_csv)

    meta = {key: value for key, _, value in
            (line.partition(" ") for line in headers)}
    expected = None
    if {"sweep_values", "comparators", "repetitions"} <= set(meta):
        values = [float(v) for v in meta["sweep_values"].split(",")]
        comparators = meta["comparators"].split(",")
        reps = int(meta["repetitions"])
        expected = {(v, c, r) for v in values for c in comparators
                    for r in range(reps)}
    if expected is not None:
        present = {(row["sweep_value"], row["comparator"], row["repetition"])
                   for row in rows}
        missing = sorted(expected - present)
        if missing:
            raise MissingRunsError(missing)
    return rows, aggregates, headers


def report_run_dir(run_dir) -> TrendReport:
    """Summary and verdicts for one completed experiment directory."""
    _, aggregates, _ = check_completeness(Path(run_dir))
    return TrendReport(compute_verdicts(aggregates), aggregates)


_LOG_NAME = re.compile(r"run_(?P<value>[^_]+)_(?P<comp>.+)_(?P<rep>\d+)\.log$")


def aggregates_from_logs(run_dir) -> list[dict]:
    """Recompute aggregate means straight from persisted event logs."""
    logs_dir = Path(run_dir) / "logs"
    rows = []
    for path in sorted(logs_dir.glob("run_*.log")):
        match = _LOG_NAME.match(path.name)
        if match is None:
            raise ValueError(f"unrecognized log name: {path.name}")
        log = EventLog.read(path)
        report = metrics_mod.report_from_log(log)
        row = {"sweep_value": float(match["value"]),
               "comparator": match["comp"],
               "repetition": int(match["rep"])}
        import dataclasses

        row.update(dataclasses.asdict(report))
        rows.append(row)
    values = sorted({row["sweep_value"] for row in rows})
    comparators = sorted({row["comparator"] for row in rows})
    aggregates = []
    for value in values:
        for comparator in comparators:
            cell = [r for r in rows if r["sweep_value"] == value
                    and r["comparator"] == comparator]
            if not cell:
                continue
            mean_row = {"sweep_value": value, "comparator": comparator,
                        "statistic": "mean"}
            for name in metrics_mod.MetricReport.column_names():
                samples = [r[name] for r in cell if r[name] is not None]
                mean_row[name] = sum(samples) / len(samples) if samples else None
            aggregates.append(mean_row)
    return aggregates
