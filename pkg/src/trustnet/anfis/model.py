"""Takagi-Sugeno fuzzy inference network over three trust properties.

The network runs five stages: fuzzification of each input through its
membership functions, product-rule firing strengths, normalization of
the strengths, per-rule first-order linear consequents weighted by the
normalized strengths, and a final sum. Models are plain mutable objects
while being built or trained and are treated as immutable afterwards,
so concurrent readers never need locks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .membership import GaussianMF, MembershipFunction, make_mf

__all__ = [
    "AnfisError",
    "CoverageError",
    "FuzzyRule",
    "AnfisModel",
    "ForwardTrace",
    "grid_model",
    "batch_forward",
    "save_model",
    "load_model",
]

DEFAULT_INPUT_NAMES = ("rfi", "intimacy", "honesty")


class AnfisError(Exception):
    """Base class for inference engine failures."""


class CoverageError(AnfisError):
    """No rule fires with positive strength at the given input point."""

    def __init__(self, inputs):
        self.inputs = tuple(float(v) for v in inputs)
        super().__init__(f"no rule fires at input point {self.inputs}")


@dataclass
class FuzzyRule:
    """One IF-THEN rule: MF index per input plus a linear consequent."""

    antecedent: tuple[int, ...]
    weights: np.ndarray
    bias: float = 0.0

    def __post_init__(self):
        self.antecedent = tuple(int(a) for a in self.antecedent)
        self.weights = np.asarray(self.weights, dtype=float)
        self.bias = float(self.bias)

    def copy(self) -> "FuzzyRule":
        return FuzzyRule(self.antecedent, self.weights.copy(), self.bias)


@dataclass
class ForwardTrace:
    """Per-stage values of one inference pass, for audits and oracles."""

    memberships: list[np.ndarray]      # one array of MF degrees per input
    firing: np.ndarray                 # product strength per rule
    normalized: np.ndarray             # strengths scaled to sum to 1
    rule_outputs: np.ndarray           # linear consequent value per rule
    weighted: np.ndarray               # normalized strength * consequent
    raw_output: float                  # sum before clamping
    output: float


class AnfisModel:
    """Rule base plus membership functions for a fixed set of inputs."""

    def __init__(self, mfs: list[list[MembershipFunction]],
                 rules: list[FuzzyRule],
                 input_names: tuple[str, ...] = DEFAULT_INPUT_NAMES,
                 output_clamp: bool = True):
        self.mfs = mfs
        self.rules = rules
        self.input_names = tuple(input_names)
        self.output_clamp = bool(output_clamp)
        self.validate()

    @property
    def n_inputs(self) -> int:
        return len(self.mfs)

    @property
    def n_rules(self) -> int:
        return len(self.rules)

    def validate(self) -> None:
        if len(self.input_names) != len(self.mfs):
            raise ValueError("one membership function list required per input")
        if not self.rules:
            raise ValueError("rule base must contain at least one rule")
        for r, rule in enumerate(self.rules):
            if len(rule.antecedent) != self.n_inputs:
                raise ValueError(f"rule {r}: antecedent arity != input count")
            for i, j in enumerate(rule.antecedent):
                if not 0 <= j < len(self.mfs[i]):
                    raise ValueError(f"rule {r}: MF index {j} out of range for input {i}")
            if rule.weights.shape != (self.n_inputs,):
                raise ValueError(f"rule {r}: consequent weight arity != input count")

    def copy(self) -> "AnfisModel":
        return AnfisModel(
            [[mf.copy() for mf in per_input] for per_input in self.mfs],
            [rule.copy() for rule in self.rules],
            self.input_names,
            self.output_clamp,
        )

    # -- inference ---------------------------------------------------------

    def evaluate(self, inputs) -> float:
        """Scalar output for one input vector (no trace, fast path)."""
        degrees = [
            [mf.evaluate(x) for mf in per_input]
            for per_input, x in zip(self.mfs, inputs)
        ]
        total = 0.0
        acc = 0.0
        for rule in self.rules:
            strength = 1.0
            for i, j in enumerate(rule.antecedent):
                strength *= degrees[i][j]
            if strength == 0.0:
                continue
            y = rule.bias
            for i, x in enumerate(inputs):
                y += rule.weights[i] * x
            total += strength
            acc += strength * y
        if total == 0.0:
            raise CoverageError(inputs)
        out = acc / total
        if self.output_clamp:
            out = min(1.0, max(0.0, out))
        return out

    def forward(self, inputs) -> tuple[float, ForwardTrace]:
        """Full inference pass returning the output and all stage values."""
        inputs = [float(x) for x in inputs]
        memberships = [
            np.array([mf.evaluate(x) for mf in per_input])
            for per_input, x in zip(self.mfs, inputs)
        ]
        firing = np.array([
            np.prod([memberships[i][j] for i, j in enumerate(rule.antecedent)])
            for rule in self.rules
        ])
        total = firing.sum()
        if total == 0.0:
            raise CoverageError(inputs)
        normalized = firing / total
        rule_outputs = np.array([
            float(rule.weights @ np.asarray(inputs)) + rule.bias for rule in self.rules
        ])
        weighted = normalized * rule_outputs
        raw = float(weighted.sum())
        out = min(1.0, max(0.0, raw)) if self.output_clamp else raw
        return out, ForwardTrace(memberships, firing, normalized, rule_outputs,
                                 weighted, raw, out)

    # -- (de)serialization -------------------------------------------------

    def to_text(self) -> str:
        return save_model(self)

    @classmethod
    def from_text(cls, text: str) -> "AnfisModel":
        return load_model(text)


def grid_model(mf_counts=3, kind: str = "gaussian",
               input_names: tuple[str, ...] = DEFAULT_INPUT_NAMES,
               output_clamp: bool = True) -> AnfisModel:
    """Model over [0, 1] inputs with the full antecedent grid as rule base.

    Membership centers are evenly spaced on [0, 1]; widths are half the
    spacing. Consequents start at zero and are meant to be fitted.
    """
    if isinstance(mf_counts, int):
        mf_counts = [mf_counts] * len(input_names)
    if len(mf_counts) != len(input_names):
        raise ValueError("need one MF count per input")
    mfs: list[list[MembershipFunction]] = []
    for count in mf_counts:
        if count < 2:
            raise ValueError("need at least two membership functions per input")
        spacing = 1.0 / (count - 1)
        per_input: list[MembershipFunction] = []
        for j in range(count):
            center = j * spacing
            if kind == "gaussian":
                per_input.append(GaussianMF(center, spacing / 2.0))
            elif kind == "bell":
                per_input.append(make_mf("bell", [spacing / 2.0, 2.0, center]))
            elif kind == "triangular":
                left = max(0.0, center - spacing)
                right = min(1.0, center + spacing)
                per_input.append(make_mf("triangular", [left, center, right]))
            else:
                raise ValueError(f"unknown membership kind {kind!r}")
        mfs.append(per_input)
    n = len(input_names)
    rules = [
        FuzzyRule(combo, np.zeros(n), 0.0)
        for combo in itertools.product(*[range(c) for c in mf_counts])
    ]
    return AnfisModel(mfs, rules, input_names, output_clamp)


# -- vectorized inference over a dataset ------------------------------------

def _batch_layers(model: AnfisModel, X: np.ndarray):
    """Membership degrees, firing strengths, their sum and normalization."""
    X = np.asarray(X, dtype=float)
    degrees = [
        np.stack([mf.evaluate_batch(X[:, i]) for mf in per_input])
        for i, per_input in enumerate(model.mfs)
    ]
    firing = np.ones((X.shape[0], model.n_rules))
    for k, rule in enumerate(model.rules):
        for i, j in enumerate(rule.antecedent):
            firing[:, k] *= degrees[i][j]
    total = firing.sum(axis=1)
    if np.any(total == 0.0):
        idx = int(np.argmax(total == 0.0))
        raise CoverageError(X[idx])
    normalized = firing / total[:, None]
    return degrees, firing, total, normalized


def batch_forward(model: AnfisModel, X: np.ndarray) -> np.ndarray:
    """Model outputs for a whole dataset, clamped like the scalar path."""
    X = np.asarray(X, dtype=float)
    _, _, _, normalized = _batch_layers(model, X)
    W = np.stack([rule.weights for rule in model.rules])
    b = np.array([rule.bias for rule in model.rules])
    rule_outputs = X @ W.T + b
    out = (normalized * rule_outputs).sum(axis=1)
    if model.output_clamp:
        out = np.clip(out, 0.0, 1.0)
    return out


# -- flat text model format --------------------------------------------------

_FORMAT_LINE = "format trustnet-anfis-1"


def save_model(model: AnfisModel) -> str:
    """Flat key-value text, one parameter per line, full float precision."""
    lines = [_FORMAT_LINE]
    lines.append(f"output_clamp {int(model.output_clamp)}")
    lines.append(f"input.count {model.n_inputs}")
    for i, (name, per_input) in enumerate(zip(model.input_names, model.mfs)):
        lines.append(f"input.{i}.name {name}")
        lines.append(f"input.{i}.mf.count {len(per_input)}")
        for j, mf in enumerate(per_input):
            lines.append(f"input.{i}.mf.{j}.kind {mf.kind}")
            for p, value in enumerate(mf.params):
                lines.append(f"input.{i}.mf.{j}.param.{p} {value!r}")
    lines.append(f"rule.count {model.n_rules}")
    for k, rule in enumerate(model.rules):
        lines.append(f"rule.{k}.antecedent {','.join(str(a) for a in rule.antecedent)}")
        for i, w in enumerate(rule.weights):
            lines.append(f"rule.{k}.weight.{i} {float(w)!r}")
        lines.append(f"rule.{k}.bias {rule.bias!r}")
    return "\n".join(lines) + "\n"


def load_model(text: str) -> AnfisModel:
    """Parse the flat text format; any unknown key is an error."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != _FORMAT_LINE:
        raise ValueError("not a recognized model file (missing format line)")
    entries: dict[str, str] = {}
    for ln in lines[1:]:
        key, _, value = ln.partition(" ")
        if not value:
            raise ValueError(f"malformed model line: {ln!r}")
        if key in entries:
            raise ValueError(f"duplicate model key: {key}")
        entries[key] = value.strip()

    def take(key: str) -> str:
        try:
            return entries.pop(key)
        except KeyError:
            raise ValueError(f"model file missing key: {key}") from None

    output_clamp = bool(int(take("output_clamp")))
    n_inputs = int(take("input.count"))
    names = []
    mfs: list[list[MembershipFunction]] = []
    for i in range(n_inputs):
        names.append(take(f"input.{i}.name"))
        count = int(take(f"input.{i}.mf.count"))
        per_input = []
        for j in range(count):
            kind = take(f"input.{i}.mf.{j}.kind")
            n_params = 2 if kind == "gaussian" else 3
            params = [float(take(f"input.{i}.mf.{j}.param.{p}")) for p in range(n_params)]
            per_input.append(make_mf(kind, params))
        mfs.append(per_input)
    n_rules = int(take("rule.count"))
    rules = []
    for k in range(n_rules):
        antecedent = tuple(int(a) for a in take(f"rule.{k}.antecedent").split(","))
        weights = [float(take(f"rule.{k}.weight.{i}")) for i in range(n_inputs)]
        bias = float(take(f"rule.{k}.bias"))
        rules.append(FuzzyRule(antecedent, weights, bias))
    if entries:
        raise ValueError(f"unknown model keys: {sorted(entries)}")
    return AnfisModel(mfs, rules, tuple(names), output_clamp)
