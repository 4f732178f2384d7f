"""Bivariate demo data: Gumbel copula with normal and gamma marginals."""

from __future__ import annotations

import numpy as np
from numpy.typing import NDArray
from scipy import stats

from .errors import ParameterError


def gumbel_conditional_cdf(v: NDArray, u: NDArray, theta: float) -> NDArray:
    """h(v | u) = dC(u, v)/du for the Gumbel copula."""
    x = -np.log(u)
    y = -np.log(v)
    s = x**theta + y**theta
    c = np.exp(-(s ** (1.0 / theta)))
    return c * s ** (1.0 / theta - 1.0) * x ** (theta - 1.0) / u


def sample_gumbel_copula(n: int, theta: float, rng: np.random.Generator, iters: int = 80) -> NDArray:
    """Draw ``n`` pairs (u, v) by conditional inversion.

    u and t are independent uniforms; v solves h(v | u) = t, found by
    bisection since h is increasing in v and has no closed-form inverse.
    """
    if theta < 1:
        raise ParameterError(f"Gumbel parameter must be >= 1, got {theta!r}")
    u = rng.uniform(size=n)
    t = rng.uniform(size=n)
    # keep away from the endpoints where the logs blow up
    eps = np.finfo(float).tiny
    u = np.clip(u, eps, 1 - 1e-16)
    lo = np.full(n, eps)
    hi = np.full(n, 1 - 1e-16)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        below = gumbel_conditional_cdf(mid, u, theta) < t
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return np.column_stack([u, 0.5 * (lo + hi)])


def simulate_gumbel_sample(
    n: int,
    seed: int,
    theta: float = 2.0,
    normal_mean: float = 7.0,
    normal_var: float = 4.0,
    gamma_shape: float = 4.0,
    gamma_rate: float = 3.0,
) -> NDArray:
    """Bivariate sample with N(mean, var) and Gamma(shape, rate) marginals.

    Deterministic given ``seed``.
    """
    if n < 1:
        raise ParameterError("sample size must be positive")
    if normal_var <= 0 or gamma_shape <= 0 or gamma_rate <= 0:
        raise ParameterError("marginal parameters must be positive")
    rng = np.random.default_rng(seed)
    uv = sample_gumbel_copula(n, theta, rng)
    x1 = stats.norm.ppf(uv[:, 0], loc=normal_mean, scale=np.sqrt(normal_var))
    x2 = stats.gamma.ppf(uv[:, 1], a=gamma_shape, scale=1.0 / gamma_rate)
    return np.column_stack([x1, x2])
