"""Hybrid training: least squares for consequents, gradient descent for premises.

Each epoch first solves the consequent parameters exactly (ridge-regularized
normal equations with the premise layer frozen), then takes one full-batch
gradient step on the membership function parameters. If the step would
increase the loss beyond the configured tolerance the learning rate is
halved and the step retried, at most ten times per epoch, which keeps the
recorded loss history non-increasing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import AnfisError, AnfisModel, _batch_layers, batch_forward

__all__ = [
    "TrainingConfig",
    "TrainingResult",
    "SingularSystemError",
    "TrainingDivergedError",
    "lse_consequents",
    "premise_gradient",
    "train_hybrid",
    "rmse",
    "prune_rules",
]

MAX_HALVINGS_PER_EPOCH = 10


class SingularSystemError(AnfisError):
    """Normal equations are rank-deficient and no ridge term was given."""


class TrainingDivergedError(AnfisError):
    def __init__(self, epoch: int, detail: str = ""):
        self.epoch = epoch
        super().__init__(f"training diverged at epoch {epoch}: {detail}")


@dataclass
class TrainingConfig:
    epochs: int = 50
    learning_rate: float = 0.05
    lse_regularization: float = 1e-8
    seed: int = 0
    stop_tolerance: float = 0.0

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if not self.learning_rate > 0.0:
            raise ValueError("learning_rate must be > 0")
        if self.lse_regularization < 0.0:
            raise ValueError("lse_regularization must be >= 0")
        if self.stop_tolerance < 0.0:
            raise ValueError("stop_tolerance must be >= 0")


@dataclass
class TrainingResult:
    model: AnfisModel
    loss_history: list[float]
    events: list[str] = field(default_factory=list)
    final_learning_rate: float = 0.0


def _as_dataset(dataset) -> tuple[np.ndarray, np.ndarray]:
    """Accept (X, y) arrays or an iterable of (inputs, target) pairs."""
    if isinstance(dataset, tuple) and len(dataset) == 2:
        X, y = dataset
    else:
        pairs = list(dataset)
        if not pairs:
            raise ValueError("dataset must not be empty")
        X = [p[0] for p in pairs]
        y = [p[1] for p in pairs]
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).reshape(-1)
    if X.ndim != 2 or X.shape[0] != y.shape[0] or X.shape[0] == 0:
        raise ValueError("dataset must be a nonempty (n, inputs) / (n,) pair")
    return X, y


def rmse(model: AnfisModel, dataset) -> float:
    X, y = _as_dataset(dataset)
    pred = batch_forward(model, X)
    return float(np.sqrt(np.mean((pred - y) ** 2)))


def lse_consequents(model: AnfisModel, dataset, regularization: float = 1e-8) -> AnfisModel:
    """Solve all rule consequents at once with the premise layer frozen.

    Updates ``model`` in place and returns it. The design matrix has one
    column block per rule: normalized strength times (inputs, 1).
    """
    X, y = _as_dataset(dataset)
    n, d = X.shape
    _, _, _, normalized = _batch_layers(model, X)
    ones = np.ones((n, 1))
    xb = np.concatenate([X, ones], axis=1)
    blocks = [normalized[:, k:k + 1] * xb for k in range(model.n_rules)]
    design = np.concatenate(blocks, axis=1)

    gram = design.T @ design
    if regularization > 0.0:
        gram = gram + regularization * np.eye(gram.shape[0])
    rhs = design.T @ y
    try:
        theta = np.linalg.solve(gram, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(
            "consequent system is singular; set lse_regularization > 0") from exc
    if regularization == 0.0:
        # np.linalg.solve can return garbage instead of raising on
        # near-singular systems; verify the solution actually solves it.
        if not np.allclose(gram @ theta, rhs, rtol=1e-6, atol=1e-8):
            raise SingularSystemError(
                "consequent system is singular; set lse_regularization > 0")
    theta = theta.reshape(model.n_rules, d + 1)
    for rule, row in zip(model.rules, theta):
        rule.weights = row[:d].copy()
        rule.bias = float(row[d])
    return model


def premise_gradient(model: AnfisModel, dataset) -> list[list[np.ndarray]]:
    """Gradient of the mean squared error wrt every MF parameter.

    Returned structure mirrors ``model.mfs``: one array per membership
    function, aligned with its parameter order. Consequents are treated
    as constants. The clamp stage is ignored here (training targets live
    inside [0, 1], where the clamp is inactive).
    """
    X, y = _as_dataset(dataset)
    n = X.shape[0]
    degrees, firing, total, normalized = _batch_layers(model, X)
    W = np.stack([rule.weights for rule in model.rules])
    b = np.array([rule.bias for rule in model.rules])
    rule_outputs = X @ W.T + b                      # (n, R)
    pred = (normalized * rule_outputs).sum(axis=1)  # (n,)
    dpred = 2.0 * (pred - y) / n                    # dMSE/dpred

    # dpred/dfiring_k = (rule_output_k - pred) / total
    dfiring = dpred[:, None] * (rule_outputs - pred[:, None]) / total[:, None]

    # Exact product of the other inputs' degrees (no division by zero).
    grads = [[np.zeros_like(X[:, 0]) for _ in per_input] for per_input in model.mfs]
    n_inputs = model.n_inputs
    for k, rule in enumerate(model.rules):
        for i in range(n_inputs):
            others = np.ones(n)
            for o in range(n_inputs):
                if o != i:
                    others = others * degrees[o][rule.antecedent[o]]
            grads[i][rule.antecedent[i]] += dfiring[:, k] * others

    out: list[list[np.ndarray]] = []
    for i, per_input in enumerate(model.mfs):
        per_mf = []
        for j, mf in enumerate(per_input):
            dmu = mf.grad_params_batch(X[:, i])     # (n_params, n)
            per_mf.append(dmu @ grads[i][j])
        out.append(per_mf)
    return out


def _premise_params(model: AnfisModel) -> list[float]:
    return [p for per_input in model.mfs for mf in per_input for p in mf.params]


def _set_premise_params(model: AnfisModel, flat: list[float]) -> None:
    it = iter(flat)
    for per_input in model.mfs:
        for mf in per_input:
            mf.set_params([next(it) for _ in mf.param_names])


def _flatten(grads: list[list[np.ndarray]]) -> np.ndarray:
    return np.concatenate([g for per_input in grads for g in per_input])


def train_hybrid(model: AnfisModel, dataset, config: TrainingConfig) -> TrainingResult:
    """Run the two-pass hybrid loop on a private copy of the model."""
    X, y = _as_dataset(dataset)
    work = model.copy()
    lr = config.learning_rate
    history: list[float] = []
    events: list[str] = []

    for epoch in range(config.epochs):
        lse_consequents(work, (X, y), config.lse_regularization)
        base_loss = rmse(work, (X, y))
        if not math.isfinite(base_loss):
            raise TrainingDivergedError(epoch, "non-finite loss after consequent solve")

        grads = _flatten(premise_gradient(work, (X, y)))
        if not np.all(np.isfinite(grads)):
            raise TrainingDivergedError(epoch, "non-finite premise gradient")

        saved = _premise_params(work)
        loss = base_loss
        for _ in range(MAX_HALVINGS_PER_EPOCH + 1):
            try:
                _set_premise_params(work, list(np.asarray(saved) - lr * grads))
                candidate = rmse(work, (X, y))
            except (ValueError, AnfisError):
                candidate = math.inf  # step broke MF validity or rule coverage
            if math.isfinite(candidate) and candidate <= base_loss + config.stop_tolerance:
                loss = candidate
                break
            lr *= 0.5
            events.append(f"epoch {epoch}: loss increase, learning rate halved to {lr:g}")
            _set_premise_params(work, saved)
        else:
            _set_premise_params(work, saved)
            events.append(f"epoch {epoch}: premise step rejected after "
                          f"{MAX_HALVINGS_PER_EPOCH} halvings")
            loss = base_loss

        history.append(loss)
        if config.stop_tolerance > 0.0 and len(history) >= 2:
            if history[-2] - history[-1] < config.stop_tolerance:
                events.append(f"epoch {epoch}: converged (delta below tolerance)")
                break
        if loss == 0.0:
            break

    return TrainingResult(work, history, events, lr)


def prune_rules(model: AnfisModel, dataset, keep: int) -> AnfisModel:
    """Keep the ``keep`` rules with the largest total firing strength.

    Rules are ranked over a warmup pass on the dataset; pruning never
    removes a rule if doing so would leave some sample uncovered.
    """
    if isinstance(dataset, np.ndarray):
        X = np.asarray(dataset, dtype=float)
    else:
        X, _ = _as_dataset(dataset)
    if keep < 1:
        raise ValueError("must keep at least one rule")
    if keep >= model.n_rules:
        return model.copy()
    _, firing, _, _ = _batch_layers(model, X)
    totals = firing.sum(axis=0)
    order = sorted(range(model.n_rules), key=lambda k: (totals[k], -k))
    keep_mask = np.ones(model.n_rules, dtype=bool)
    covering = firing > 0.0
    cover_count = covering.sum(axis=1)
    for k in order:
        if keep_mask.sum() <= keep:
            break
        affected = covering[:, k]
        if np.any(affected & (cover_count == 1)):
            continue  # sole covering rule for some sample
        keep_mask[k] = False
        cover_count = cover_count - affected
    pruned = model.copy()
    pruned.rules = [rule for k, rule in enumerate(pruned.rules) if keep_mask[k]]
    pruned.validate()
    return pruned
