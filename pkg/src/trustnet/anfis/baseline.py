"""Untrained Sugeno comparator with a fixed expert rule base.

The comparator shares the trained engine's forward pass but its
parameters never change: membership functions stay at their evenly
spaced defaults and every rule's consequent is a constant placed at a
weighted mean of the linguistic-term levels of its antecedent. Honesty
carries half the weight since it is the primary conduct signal; the
interaction-frequency and intimacy properties split the rest.
"""

from __future__ import annotations

import numpy as np

from .membership import MembershipFunction
from .model import DEFAULT_INPUT_NAMES, AnfisModel, FuzzyRule, grid_model

__all__ = ["DEFAULT_TERM_WEIGHTS", "fis_model", "fis_baseline"]

DEFAULT_TERM_WEIGHTS = (0.25, 0.25, 0.5)


def fis_model(mfs: list[list[MembershipFunction]] | None = None,
              mf_count: int = 3,
              term_weights: tuple[float, ...] = DEFAULT_TERM_WEIGHTS) -> AnfisModel:
    """Build the fixed-parameter comparator model.

    ``mfs`` overrides the default membership layout. Each rule's constant
    output is sum_i term_weights[i] * level(term), where the level of the
    j-th linguistic term out of m is j / (m - 1).
    """
    if mfs is None:
        base = grid_model(mf_count)
        mfs = base.mfs
    counts = [len(per_input) for per_input in mfs]
    if len(counts) != len(DEFAULT_INPUT_NAMES):
        raise ValueError("comparator expects one MF list per input")
    if len(term_weights) != len(counts):
        raise ValueError("need one term weight per input")

    import itertools

    rules = []
    for combo in itertools.product(*[range(c) for c in counts]):
        level = sum(w * (j / (c - 1) if c > 1 else 0.5)
                    for w, j, c in zip(term_weights, combo, counts))
        rules.append(FuzzyRule(combo, np.zeros(len(counts)), level))
    return AnfisModel([[mf.copy() for mf in per] for per in mfs], rules)


def fis_baseline(inputs, mfs: list[list[MembershipFunction]] | None = None) -> float:
    """One fixed-rulebase inference; pure and deterministic."""
    return fis_model(mfs).evaluate(inputs)
