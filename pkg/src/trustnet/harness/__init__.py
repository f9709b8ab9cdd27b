"""Experiment orchestration, dataset generation, reporting, and the CLI."""

from .configio import load_config, save_config
from .dataset import (
    LEGITIMATE_TARGET,
    MALICIOUS_TARGET,
    DatasetRow,
    TrainingDatasetSpec,
    dataset_arrays,
    generate_dataset,
    read_dataset,
    write_dataset,
)
from .experiment import (
    COMPARATORS,
    ExperimentResult,
    ExperimentSpec,
    RunFailure,
    prepare_model,
    run_experiment,
    run_single,
)
from .report import (
    MissingRunsError,
    TrendReport,
    aggregates_from_logs,
    check_completeness,
    compute_verdicts,
    report_run_dir,
)

__all__ = [
    "COMPARATORS",
    "DatasetRow",
    "ExperimentResult",
    "ExperimentSpec",
    "LEGITIMATE_TARGET",
    "MALICIOUS_TARGET",
    "MissingRunsError",
    "RunFailure",
    "TrainingDatasetSpec",
    "TrendReport",
    "aggregates_from_logs",
    "check_completeness",
    "compute_verdicts",
    "dataset_arrays",
    "generate_dataset",
    "load_config",
    "prepare_model",
    "read_dataset",
    "report_run_dir",
    "run_experiment",
    "run_single",
    "save_config",
    "write_dataset",
]
