"""Experiment orchestration: sweeps, comparators, repetitions, CSV output.

A sweep runs every (sweep value, comparator, repetition) cell with seed
= base seed + repetition index, computes the per-run metrics and writes
two CSV files with a provenance header: ``runs.csv`` (one row per run)
and ``aggregate.csv`` (mean and sample standard deviation over the
repetitions of each cell). Output rows are keyed and sorted, so results
are byte-stable no matter the execution order; the generation timestamp
line is excluded from the provenance hash.

Workers: set TRUSTNET_WORKERS=N to fan independent runs out to N
processes. Anything that needs a per-run callback runs serially.
"""

from __future__ import annotations

import dataclasses
import hashlib
import math
import os
import time as _time
from dataclasses import dataclass, field
from pathlib import Path

from .. import metrics as metrics_mod
from ..anfis import AnfisModel, TrainingConfig, fis_model, load_model, save_model, train_hybrid
from ..simnet.config import ScenarioConfig
from ..simnet.engine import Simulator
from ..simnet.eventlog import EventLog
from .dataset import TrainingDatasetSpec, dataset_arrays, generate_dataset, write_dataset

__all__ = [
    "COMPARATORS",
    "ExperimentSpec",
    "ExperimentResult",
    "RunFailure",
    "prepare_model",
    "run_single",
    "run_experiment",
]

COMPARATORS = ("aodv", "fis_trust", "anfis_tmm")
WORKERS_ENV = "TRUSTNET_WORKERS"


class RunFailure(Exception):
    """One simulation cell failed; identifies the offending run."""

    def __init__(self, sweep_value, comparator, seed, cause):
        self.sweep_value = sweep_value
        self.comparator = comparator
        self.seed = seed
        super().__init__(
            f"run failed at sweep={sweep_value} comparator={comparator} "
            f"seed={seed}: {cause}")


@dataclass
class ExperimentSpec:
    base_config: ScenarioConfig = field(default_factory=ScenarioConfig)
    sweep_variable: str = "malicious_fraction"
    sweep_values: tuple[float, ...] = (0.1, 0.2, 0.3, 0.4, 0.5)
    comparators: tuple[str, ...] = COMPARATORS
    repetitions: int = 20
    base_seed: int = 1000
    output_dir: str = "experiment_out"
    model_path: str | None = None
    training_seed: int = 101
    training_epochs: int = 40

    def __post_init__(self):
        self.sweep_values = tuple(self.sweep_values)
        self.comparators = tuple(self.comparators)
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if not self.sweep_values:
            raise ValueError("sweep needs at least one value")
        unknown = set(self.comparators) - set(COMPARATORS)
        if unknown:
            raise ValueError(f"unknown comparators: {sorted(unknown)}")
        if self.sweep_variable not in ScenarioConfig.field_names():
            raise ValueError(f"unknown sweep variable: {self.sweep_variable}")

    def config_hash(self) -> str:
        text = self.base_config.canonical_text()
        text += f"sweep_variable={self.sweep_variable}\n"
        text += f"sweep_values={','.join(repr(v) for v in self.sweep_values)}\n"
        text += f"comparators={','.join(self.comparators)}\n"
        text += f"repetitions={self.repetitions}\n"
        text += f"base_seed={self.base_seed}\n"
        return hashlib.sha256(text.encode()).hexdigest()[:16]


@dataclass
class ExperimentResult:
    rows: list[dict]
    aggregates: list[dict]
    runs_csv: Path
    aggregate_csv: Path
    model_path: Path | None


def prepare_model(spec: ExperimentSpec, out_dir: Path) -> tuple[AnfisModel | None, Path | None]:
    """Load or train the adaptive model the anfis_tmm comparator uses."""
    if "anfis_tmm" not in spec.comparators:
        return None, None
    if spec.model_path is not None:
        with open(spec.model_path) as fh:
            return load_model(fh.read()), Path(spec.model_path)
    dataset_spec = TrainingDatasetSpec(
        node_count=spec.base_config.node_count,
        malicious_fractions=(0.2,),
        malicious_kind="drop",
        seed=spec.training_seed,
        base_config=spec.base_config.replace(malicious_fraction=0.0,
                                             trust_enabled=False),
    )
    rows = generate_dataset(dataset_spec)
    write_dataset(rows, out_dir / "training_dataset.tsv")
    X, y = dataset_arrays(rows)
    from ..anfis import grid_model

    result = train_hybrid(grid_model(3), (X, y),
                          TrainingConfig(epochs=spec.training_epochs,
                                         seed=spec.training_seed))
    model_path = out_dir / "anfis_model.txt"
    with open(model_path, "w") as fh:
        fh.write(save_model(result.model))
    return result.model, model_path


def comparator_config(base: ScenarioConfig, comparator: str) -> ScenarioConfig:
    if comparator == "aodv":
        return base.replace(trust_enabled=False)
    return base.replace(trust_enabled=True)


def run_single(config: ScenarioConfig, comparator: str,
               anfis: AnfisModel | None) -> EventLog:
    """Execute one cell and return its event log."""
    if comparator == "aodv":
        model = None
    elif comparator == "fis_trust":
        model = fis_model()
    elif comparator == "anfis_tmm":
        if anfis is None:
            raise ValueError("anfis_tmm comparator needs a trained model")
        model = anfis
    else:
        raise ValueError(f"unknown comparator: {comparator}")
    return Simulator(comparator_config(config, comparator), trust_model=model).run()


def _row_from_log(sweep_value, comparator, rep, seed, log: EventLog) -> dict:
    report = metrics_mod.report_from_log(log)
    row = {"sweep_value": sweep_value, "comparator": comparator,
           "repetition": rep, "seed": seed}
    row.update(dataclasses.asdict(report))
    return row


def _worker(args):
    config_values, comparator, sweep_value, rep, seed, model_text = args
    config = ScenarioConfig.from_dict(config_values)
    model = load_model(model_text) if model_text is not None else None
    log = run_single(config, comparator, model)
    return _row_from_log(sweep_value, comparator, rep, seed, log)


def _aggregate(rows: list[dict], spec: ExperimentSpec) -> list[dict]:
    metric_names = metrics_mod.MetricReport.column_names()
    out = []
    for value in spec.sweep_values:
        for comparator in spec.comparators:
            cell = [r for r in rows
                    if r["sweep_value"] == value and r["comparator"] == comparator]
            for statistic in ("mean", "std"):
                row = {"sweep_value": value, "comparator": comparator,
                       "statistic": statistic}
                for name in metric_names:
                    samples = [r[name] for r in cell if r[name] is not None]
                    if not samples:
                        row[name] = None
                    elif statistic == "mean":
                        row[name] = sum(samples) / len(samples)
                    else:
                        row[name] = _sample_std(samples)
                out.append(row)
    return out


def _sample_std(samples: list[float]) -> float:
    n = len(samples)
    if n < 2:
        return 0.0
    mean = sum(samples) / n
    return math.sqrt(sum((s - mean) ** 2 for s in samples) / (n - 1))


def run_experiment(spec: ExperimentSpec, log_hook=None,
                   keep_logs: bool = False,
                   include_timestamp: bool = True) -> ExperimentResult:
    """Run the full sweep and write runs.csv plus aggregate.csv.

    ``log_hook(sweep_value, comparator, rep, config, log)`` is invoked on
    every finished run (serial execution only). ``keep_logs`` persists
    each run's event log under ``<output_dir>/logs/``.
    """
    out_dir = Path(spec.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    logs_dir = out_dir / "logs"
    if keep_logs:
        logs_dir.mkdir(exist_ok=True)

    anfis, model_path = prepare_model(spec, out_dir)
    workers = int(os.environ.get(WORKERS_ENV, "1") or "1")
    serial = workers <= 1 or log_hook is not None or keep_logs

    cells = []
    for value in spec.sweep_values:
        for comparator in spec.comparators:
            for rep in range(spec.repetitions):
                seed = spec.base_seed + rep
                config = spec.base_config.replace(
                    **{spec.sweep_variable: value, "seed": seed})
                cells.append((value, comparator, rep, seed, config))

    rows: list[dict] = []
    if serial:
        for value, comparator, rep, seed, config in cells:
            try:
                log = run_single(config, comparator, anfis)
            except Exception as exc:
                raise RunFailure(value, comparator, seed, exc) from exc
            if log_hook is not None:
                log_hook(value, comparator, rep, config, log)
            if keep_logs:
                log.write(logs_dir / f"run_{value}_{comparator}_{rep}.log")
            rows.append(_row_from_log(value, comparator, rep, seed, log))
    else:
        from concurrent.futures import ProcessPoolExecutor

        model_text = save_model(anfis) if anfis is not None else None
        tasks = [(config.to_dict(), comparator, value, rep, seed, model_text)
                 for value, comparator, rep, seed, config in cells]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            try:
                rows = list(pool.map(_worker, tasks))
            except Exception as exc:
                raise RunFailure("?", "?", "?", exc) from exc

    rows.sort(key=lambda r: (r["sweep_value"], r["comparator"], r["repetition"]))
    aggregates = _aggregate(rows, spec)

    headers = [
        f"config_hash {spec.config_hash()}",
        f"sweep_variable {spec.sweep_variable}",
        f"sweep_values {','.join(repr(v) for v in spec.sweep_values)}",
        f"comparators {','.join(spec.comparators)}",
        f"repetitions {spec.repetitions}",
        f"seeds {spec.base_seed}..{spec.base_seed + spec.repetitions - 1}",
    ]
    if include_timestamp:
        # informational only; excluded from config_hash by construction
        headers.append(f"generated_at {_time.strftime('%Y-%m-%dT%H:%M:%S')}")

    runs_csv = out_dir / "runs.csv"
    aggregate_csv = out_dir / "aggregate.csv"
    metrics_mod.write_report_csv(runs_csv, rows, metrics_mod.RUN_COLUMNS, headers)
    metrics_mod.write_report_csv(aggregate_csv, aggregates,
                                 metrics_mod.AGGREGATE_COLUMNS, headers)
    return ExperimentResult(rows, aggregates, runs_csv, aggregate_csv, model_path)
