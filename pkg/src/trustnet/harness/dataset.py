"""Training data generation for the behavioral trust model.

Short scenarios are simulated with the routing filter disabled so the
ledger fills with unbiased evidence. At each snapshot time every node
contributes one row: the trust properties seen by its busiest assessor
(zeros and the prior honesty when nobody interacted with it yet) plus a
supervision target, high for legitimate nodes and low for misbehaving
ones. Soft labels replace the fixed targets with the node's observed
interaction success rate when requested.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..simnet.config import ScenarioConfig
from ..simnet.engine import Simulator
from ..simnet.topology import Role
from ..trust.evaluate import compute_honesty, compute_intimacy, compute_rfi
from ..trust.manager import TrustManager

__all__ = [
    "TrainingDatasetSpec",
    "DatasetRow",
    "generate_dataset",
    "write_dataset",
    "read_dataset",
    "LEGITIMATE_TARGET",
    "MALICIOUS_TARGET",
]

LEGITIMATE_TARGET = 0.9
MALICIOUS_TARGET = 0.1


@dataclass
class TrainingDatasetSpec:
    node_count: int = 50
    malicious_fractions: tuple[float, ...] = (0.2,)
    malicious_kind: str = "drop"
    snapshots_per_run: int = 10
    sim_duration: float = 60.0
    seed: int = 0
    soft_labels: bool = False
    base_config: ScenarioConfig | None = None

    def __post_init__(self):
        self.malicious_fractions = tuple(self.malicious_fractions)
        if self.snapshots_per_run < 1:
            raise ValueError("snapshots_per_run must be >= 1")
        if not self.malicious_fractions:
            raise ValueError("need at least one malicious fraction")


@dataclass
class DatasetRow:
    rfi: float
    intimacy: float
    honesty: float
    target: float
    node: int
    role: str
    snapshot_time: float


class _PassiveModel:
    """Constant model: dataset runs collect evidence without filtering."""

    def evaluate(self, inputs) -> float:
        return 0.5


def _scenario(spec: TrainingDatasetSpec, fraction: float, seed: int) -> ScenarioConfig:
    base = spec.base_config if spec.base_config is not None else ScenarioConfig()
    return base.replace(
        node_count=spec.node_count,
        malicious_fraction=fraction,
        malicious_kind=spec.malicious_kind,
        sim_duration=spec.sim_duration,
        seed=seed,
        trust_enabled=True,
        trust_threshold=0.0,          # the filter never excludes anyone
        trust_eval_min_interval=1e12,  # evidence only, no per-event evaluations
    )


def _snapshot_times(duration: float, count: int) -> list[float]:
    """Evenly spaced times over the second half of the run."""
    if count == 1:
        return [duration]
    start = duration / 2.0
    step = (duration - start) / (count - 1)
    return [start + i * step for i in range(count)]


def generate_dataset(spec: TrainingDatasetSpec) -> list[DatasetRow]:
    """One simulated run per malicious fraction, snapshotted into rows."""
    rows: list[DatasetRow] = []
    for run_index, fraction in enumerate(spec.malicious_fractions):
        config = _scenario(spec, fraction, spec.seed + run_index)
        sim = Simulator(config, trust_model=_PassiveModel())
        sim.start()
        for snap_time in _snapshot_times(config.sim_duration, spec.snapshots_per_run):
            sim.step_until(snap_time)
            rows.extend(_snapshot(sim, snap_time, spec.soft_labels))
    return rows


def _snapshot(sim: Simulator, now: float, soft_labels: bool) -> list[DatasetRow]:
    trust = sim.trust
    assert trust is not None
    rows = []
    for node in sim.nodes:
        assessors = trust.ledger.assessors_of(node.id)
        if assessors:
            assessor = assessors[0]
            rfi = compute_rfi(trust.ledger, assessor, node.id)
            intimacy = compute_intimacy(trust.ledger, assessor, node.id)
            honesty = compute_honesty(*trust.ledger.counters(assessor, node.id))
        else:
            rfi, intimacy, honesty = 0.0, 0.0, 0.5
        if soft_labels:
            target = _soft_target(trust, node.id)
        else:
            target = (LEGITIMATE_TARGET if node.role is Role.LEGITIMATE
                      else MALICIOUS_TARGET)
        rows.append(DatasetRow(rfi, intimacy, honesty, target,
                               node.id, node.role.value, now))
    return rows


def _soft_target(trust: TrustManager, node: int) -> float:
    """Observed success rate pooled over every assessor of the node."""
    total_s = total_f = 0.0
    for assessor in trust.ledger.assessors_of(node):
        s, f = trust.ledger.counters(assessor, node)
        total_s += s - 1.0
        total_f += f - 1.0
    total = total_s + total_f
    if total == 0.0:
        return 0.5
    return total_s / total


# -- persistence (tab-separated, deterministic bytes) ---------------------------

_COLUMNS = ("rfi", "intimacy", "honesty", "target", "node", "role", "snapshot_time")


def write_dataset(rows: list[DatasetRow], path) -> None:
    with open(path, "w") as fh:
        fh.write("\t".join(_COLUMNS) + "\n")
        for row in rows:
            fh.write("\t".join((repr(row.rfi), repr(row.intimacy),
                                repr(row.honesty), repr(row.target),
                                str(row.node), row.role,
                                repr(row.snapshot_time))) + "\n")


def read_dataset(path) -> list[DatasetRow]:
    rows = []
    with open(path) as fh:
        header = fh.readline().rstrip("\n").split("\t")
        if tuple(header) != _COLUMNS:
            raise ValueError(f"unexpected dataset columns: {header}")
        for line in fh:
            parts = line.rstrip("\n").split("\t")
            if len(parts) != len(_COLUMNS):
                raise ValueError(f"malformed dataset line: {line!r}")
            rows.append(DatasetRow(float(parts[0]), float(parts[1]),
                                   float(parts[2]), float(parts[3]),
                                   int(parts[4]), parts[5], float(parts[6])))
    return rows


def dataset_arrays(rows: list[DatasetRow]):
    """Feature matrix and target vector ready for model fitting."""
    import numpy as np

    X = np.array([[r.rfi, r.intimacy, r.honesty] for r in rows])
    y = np.array([r.target for r in rows])
    return X, y
