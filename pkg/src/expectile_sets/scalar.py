"""Exact expectiles of finite weighted univariate samples.

The first-order condition

    alpha * E[(X - t)_+] = (1 - alpha) * E[(t - X)_+]

is piecewise linear in ``t`` between consecutive atoms, so the expectile is
found by sorting once and solving a linear equation on the bracketing
interval. The inverse (level as a function of ``t``) is a ratio of the two
partial moments and needs no search at all.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import InputError, ParameterError

PROB_TOL = 1e-12


@dataclass(frozen=True)
class ScalarSample:
    """Finite weighted sample of a real random variable.

    Attributes:
        values: outcomes, shape (N,)
        probabilities: strictly positive atom weights summing to one, shape (N,)
    """

    values: NDArray[np.float64]
    probabilities: NDArray[np.float64]

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float).reshape(-1)
        probs = np.asarray(self.probabilities, dtype=float).reshape(-1)
        if values.size == 0:
            raise InputError("sample is empty")
        if values.shape != probs.shape:
            raise InputError(
                f"{values.size} values but {probs.size} probabilities"
            )
        if not np.all(np.isfinite(values)):
            raise InputError("sample values must be finite")
        if np.any(probs <= 0) or not np.all(np.isfinite(probs)):
            raise InputError("probabilities must be strictly positive")
        if abs(probs.sum() - 1.0) > PROB_TOL:
            raise InputError(f"probabilities sum to {probs.sum()!r}, not 1")
        values.setflags(write=False)
        probs.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "probabilities", probs)

    @classmethod
    def from_values(cls, values: ArrayLike, weights: ArrayLike | None = None) -> ScalarSample:
        """Build a sample, normalizing ``weights`` (uniform if omitted)."""
        values = np.asarray(values, dtype=float).reshape(-1)
        if values.size == 0:
            raise InputError("sample is empty")
        if weights is None:
            probs = np.full(values.size, 1.0 / values.size)
        else:
            w = np.asarray(weights, dtype=float).reshape(-1)
            if np.any(w <= 0):
                raise InputError("weights must be strictly positive")
            probs = w / w.sum()
        return cls(values, probs)

    def __len__(self) -> int:
        return self.values.size

    def __neg__(self) -> ScalarSample:
        return ScalarSample(-self.values, self.probabilities)

    def shift(self, b: float) -> ScalarSample:
        return ScalarSample(self.values + b, self.probabilities)

    def scale(self, c: float) -> ScalarSample:
        return ScalarSample(self.values * c, self.probabilities)

    def mean(self) -> float:
        return float(self.probabilities @ self.values)


@dataclass(frozen=True)
class ExpectileCurvePoint:
    alpha: float
    value: float


def _check_level(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise ParameterError(f"level must lie strictly inside (0, 1), got {alpha!r}")
    return alpha


def _merged_atoms(sample: ScalarSample) -> tuple[NDArray, NDArray]:
    # tied values collapse into a single breakpoint carrying their total mass
    values, inverse = np.unique(sample.values, return_inverse=True)
    probs = np.zeros(values.size)
    np.add.at(probs, inverse, sample.probabilities)
    return values, probs


def expectile(sample: ScalarSample, alpha: float) -> float:
    """Return the ``alpha``-expectile of ``sample``.

    Exact: the bracketing inter-atom interval is located from the sign of the
    first-order condition at the sorted atoms, and the linear equation on that
    interval is solved in closed form.
    """
    alpha = _check_level(alpha)
    x, p = _merged_atoms(sample)
    if x.size == 1:
        return float(x[0])

    cum_p = np.cumsum(p)
    cum_s = np.cumsum(p * x)
    total = cum_s[-1]
    # lower/upper partial moments evaluated at each atom
    lower = cum_p * x - cum_s
    upper = (total - cum_s) - (1.0 - cum_p) * x
    g = alpha * upper - (1.0 - alpha) * lower  # nonincreasing in t

    # g(x_0) > 0 > g(x_{n-1}); pick k with g(x_k) >= 0 > g(x_{k+1})
    k = int(np.searchsorted(-g, 0.0, side="right")) - 1
    k = min(max(k, 0), x.size - 2)
    if g[k] == 0.0:
        return float(x[k])
    num = alpha * (total - cum_s[k]) + (1.0 - alpha) * cum_s[k]
    den = alpha * (1.0 - cum_p[k]) + (1.0 - alpha) * cum_p[k]
    return float(np.clip(num / den, x[k], x[k + 1]))


def expectile_curve(sample: ScalarSample, alphas: ArrayLike) -> list[ExpectileCurvePoint]:
    return [ExpectileCurvePoint(float(a), expectile(sample, a)) for a in np.asarray(alphas, dtype=float)]


def inverse_expectile(
    sample: ScalarSample,
    t: float,
    side: Literal["lower", "upper"] = "lower",
) -> float:
    """Level ``alpha`` with ``expectile(sample, alpha) == t``.

    Returns 0 for ``t`` at or below the minimum and 1 at or above the
    maximum. For a constant sample those two cases overlap at ``t == c``;
    ``side="lower"`` resolves it to 0 (infimum convention of the downward
    rank) and ``side="upper"`` to 1 (supremum convention of the upward rank).
    """
    t = float(t)
    x, p = sample.values, sample.probabilities
    lo, hi = x.min(), x.max()
    if lo == hi:
        if t < lo:
            return 0.0
        if t > hi:
            return 1.0
        return 0.0 if side == "lower" else 1.0
    if t <= lo:
        return 0.0
    if t >= hi:
        return 1.0
    below = float(p @ np.maximum(t - x, 0.0))
    above = float(p @ np.maximum(x - t, 0.0))
    return below / (below + above)


def beta_ratio(alpha: float) -> float:
    """Maximal density ratio ``max(a/(1-a), (1-a)/a)`` of the scenario set."""
    alpha = _check_level(alpha)
    return max(alpha / (1.0 - alpha), (1.0 - alpha) / alpha)


def dual_expectile_oracle(
    sample: ScalarSample,
    alpha: float,
    sense: Literal["min", "max"] = "min",
) -> float:
    """Extremal scenario expectation over the density-ratio polytope.

    Scans the candidate vertices in which the ``k`` smallest (``sense="min"``)
    or largest (``sense="max"``) outcomes carry density ratio ``beta`` and the
    remaining ones ratio 1. The minimum equals ``expectile(sample, alpha)``
    and the maximum equals ``expectile(sample, 1 - alpha)``.
    """
    alpha = float(alpha)
    if not 0.0 < alpha <= 0.5:
        raise ParameterError(f"dual oracle needs level in (0, 1/2], got {alpha!r}")
    if sense not in ("min", "max"):
        raise ParameterError(f"sense must be 'min' or 'max', got {sense!r}")
    beta = (1.0 - alpha) / alpha
    order = np.argsort(sample.values, kind="stable")
    if sense == "max":
        order = order[::-1]
    x = sample.values[order]
    p = sample.probabilities[order]
    if x.size == 1:
        return float(x[0])
    head_p = np.cumsum(p)[:-1]
    head_s = np.cumsum(p * x)[:-1]
    total = float(p @ x)
    candidates = (beta * head_s + (total - head_s)) / (beta * head_p + (1.0 - head_p))
    return float(candidates.min() if sense == "min" else candidates.max())
