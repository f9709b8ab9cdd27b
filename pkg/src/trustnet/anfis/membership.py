"""Fuzzy membership functions with analytic parameter gradients.

Three shapes are supported: gaussian, generalized bell, and triangular.
All of them map any finite input into [0, 1]. Shape parameters are
validated at construction time so evaluation never has to guard against
degenerate values.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "MembershipFunction",
    "GaussianMF",
    "BellMF",
    "TriangularMF",
    "make_mf",
]


class MembershipFunction:
    """Base class. Subclasses expose ``kind``, ``params`` and gradients."""

    kind: str = ""
    param_names: tuple[str, ...] = ()

    @property
    def params(self) -> list[float]:
        return [getattr(self, name) for name in self.param_names]

    def set_params(self, values) -> None:
        if len(values) != len(self.param_names):
            raise ValueError(f"{self.kind} expects {len(self.param_names)} params")
        for name, value in zip(self.param_names, values):
            setattr(self, name, float(value))
        self._validate()

    def _validate(self) -> None:
        raise NotImplementedError

    def evaluate(self, x: float) -> float:
        """Membership degree at scalar ``x`` (fast path, no numpy)."""
        raise NotImplementedError

    def evaluate_batch(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def grad_params_batch(self, x: np.ndarray) -> np.ndarray:
        """d(membership)/d(param) at each x, shape (n_params, len(x))."""
        raise NotImplementedError

    def copy(self) -> "MembershipFunction":
        return make_mf(self.kind, self.params)

    def __repr__(self) -> str:
        args = ", ".join(f"{n}={getattr(self, n):g}" for n in self.param_names)
        return f"{type(self).__name__}({args})"


class GaussianMF(MembershipFunction):
    """exp(-(x - center)^2 / (2 width^2)), width > 0."""

    kind = "gaussian"
    param_names = ("center", "width")

    def __init__(self, center: float, width: float):
        self.center = float(center)
        self.width = float(width)
        self._validate()

    def _validate(self) -> None:
        if not self.width > 0.0:
            raise ValueError(f"gaussian width must be > 0, got {self.width}")

    def evaluate(self, x: float) -> float:
        z = (x - self.center) / self.width
        return math.exp(-0.5 * z * z)

    def evaluate_batch(self, x: np.ndarray) -> np.ndarray:
        z = (np.asarray(x, dtype=float) - self.center) / self.width
        return np.exp(-0.5 * z * z)

    def grad_params_batch(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        mu = self.evaluate_batch(x)
        d = x - self.center
        dc = mu * d / (self.width**2)
        dw = mu * d * d / (self.width**3)
        return np.stack([dc, dw])


class BellMF(MembershipFunction):
    """Generalized bell 1 / (1 + |(x - center)/width|^(2 slope))."""

    kind = "bell"
    param_names = ("width", "slope", "center")

    def __init__(self, width: float, slope: float, center: float):
        self.width = float(width)
        self.slope = float(slope)
        self.center = float(center)
        self._validate()

    def _validate(self) -> None:
        if not self.width > 0.0:
            raise ValueError(f"bell width must be > 0, got {self.width}")
        if not self.slope > 0.0:
            raise ValueError(f"bell slope must be > 0, got {self.slope}")

    def evaluate(self, x: float) -> float:
        t = ((x - self.center) / self.width) ** 2
        return 1.0 / (1.0 + t**self.slope)

    def evaluate_batch(self, x: np.ndarray) -> np.ndarray:
        t = ((np.asarray(x, dtype=float) - self.center) / self.width) ** 2
        return 1.0 / (1.0 + t**self.slope)

    def grad_params_batch(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        d = x - self.center
        t = (d / self.width) ** 2
        mu = 1.0 / (1.0 + t**self.slope)
        tb = t**self.slope
        da = 2.0 * self.slope * tb * mu * mu / self.width
        # d(mu)/d(slope) = -mu^2 t^b ln t; t == 0 contributes nothing
        with np.errstate(divide="ignore", invalid="ignore"):
            db = np.where(t > 0.0, -mu * mu * tb * np.log(np.where(t > 0.0, t, 1.0)), 0.0)
            dc = np.where(d != 0.0, 2.0 * self.slope * tb * mu * mu / np.where(d != 0.0, d, 1.0), 0.0)
        return np.stack([da, db, dc])


class TriangularMF(MembershipFunction):
    """Triangle with feet at left/right and peak in between (left <= peak <= right)."""

    kind = "triangular"
    param_names = ("left", "peak", "right")

    def __init__(self, left: float, peak: float, right: float):
        self.left = float(left)
        self.peak = float(peak)
        self.right = float(right)
        self._validate()

    def _validate(self) -> None:
        if not (self.left <= self.peak <= self.right):
            raise ValueError(f"triangular params must satisfy left <= peak <= right, got "
                             f"({self.left}, {self.peak}, {self.right})")
        if self.left == self.right:
            raise ValueError("triangular support must have positive width")

    def evaluate(self, x: float) -> float:
        if x <= self.left or x >= self.right:
            # the peak itself still counts when it sits on a foot
            if x == self.peak:
                return 1.0
            return 0.0
        if x < self.peak:
            return (x - self.left) / (self.peak - self.left)
        if x > self.peak:
            return (self.right - x) / (self.right - self.peak)
        return 1.0

    def evaluate_batch(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.peak > self.left:
            up = (x - self.left) / (self.peak - self.left)
        else:
            up = np.where(x >= self.peak, np.inf, -np.inf)
        if self.right > self.peak:
            down = (self.right - x) / (self.right - self.peak)
        else:
            down = np.where(x <= self.peak, np.inf, -np.inf)
        out = np.clip(np.minimum(up, down), 0.0, 1.0)
        return np.where(x == self.peak, 1.0, out)

    def grad_params_batch(self, x: np.ndarray) -> np.ndarray:
        # Piecewise-linear: subgradient 0 at the kinks.
        x = np.asarray(x, dtype=float)
        dl = np.zeros_like(x)
        dm = np.zeros_like(x)
        dr = np.zeros_like(x)
        rise = (x > self.left) & (x < self.peak)
        fall = (x > self.peak) & (x < self.right)
        if self.peak > self.left:
            denom = (self.peak - self.left) ** 2
            dl[rise] = (x[rise] - self.peak) / denom
            dm[rise] = -(x[rise] - self.left) / denom
        if self.right > self.peak:
            denom = (self.right - self.peak) ** 2
            dm[fall] = (self.right - x[fall]) / denom
            dr[fall] = (x[fall] - self.peak) / denom
        return np.stack([dl, dm, dr])


_KINDS = {cls.kind: cls for cls in (GaussianMF, BellMF, TriangularMF)}


def make_mf(kind: str, params) -> MembershipFunction:
    """Construct a membership function by kind name, validating params."""
    try:
        cls = _KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown membership function kind {kind!r}") from None
    return cls(*[float(p) for p in params])
