"""Downward/upward expectile rank functions and what can be read off them:
induced complete preorders on points, indifference, inference of the cone
order, and a rank-based cross-check of the expectile stochastic orders.

A point z lies in the downward set at level alpha iff w_m^T z <= e_alpha(w_m^T X)
for every dual generator; each of these conditions holds exactly for alpha
above the directional inverse expectile of w_m^T z. The downward rank is
therefore the largest directional level and the upward rank the smallest.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike

from .cone_expectile import (
    OrderCertificate,
    WeightedSample,
    _check_compatible,
    downward_expectile,
    lower_expectile_order,
)
from .errors import InputError
from .geometry import ConeSpec
from .scalar import inverse_expectile

INDIFFERENCE_TOL = 1e-9


@dataclass(frozen=True)
class RankResult:
    point: tuple[float, ...]
    downward: float
    upward: float
    per_generator: tuple[tuple[int, float, float], ...]  # (index, downward level, upward level)

    def to_dict(self) -> dict:
        return {
            "point": list(self.point),
            "downward_rank": self.downward,
            "upward_rank": self.upward,
            "per_generator": [
                {"generator": m, "downward_level": lo, "upward_level": hi} for m, lo, hi in self.per_generator
            ],
        }


def _point(z: ArrayLike, X: WeightedSample, cone: ConeSpec) -> np.ndarray:
    _check_compatible(X, cone)
    z = np.asarray(z, dtype=float).reshape(-1)
    if z.size != X.dimension:
        raise InputError(f"point has dimension {z.size}, sample has {X.dimension}")
    return z


def _levels(z, X, cone, side: Literal["lower", "upper"]) -> np.ndarray:
    return np.array([
        inverse_expectile(X.project(w), float(w @ z), side=side) for w in cone.generators_Cplus
    ])


def rank(z: ArrayLike, X: WeightedSample, cone: ConeSpec) -> RankResult:
    """Both rank values of ``z`` with the per-generator breakdown."""
    z = _point(z, X, cone)
    lo = _levels(z, X, cone, "lower")
    hi = _levels(z, X, cone, "upper")
    per = tuple((m, float(a), float(b)) for m, (a, b) in enumerate(zip(lo, hi)))
    return RankResult(tuple(z.tolist()), float(lo.max()), float(hi.min()), per)


def rank_many(points: ArrayLike, X: WeightedSample, cone: ConeSpec, workers: int | None = None) -> list[RankResult]:
    """Rank a batch of points; output order follows input order."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda z: rank(z, X, cone), pts))
    return [rank(z, X, cone) for z in pts]


def downward_rank(z: ArrayLike, X: WeightedSample, cone: ConeSpec) -> float:
    """inf{alpha : z in E^alpha_{-C}(X)}, with 1 for an empty set of levels."""
    z = _point(z, X, cone)
    return float(_levels(z, X, cone, "lower").max())


def upward_rank(z: ArrayLike, X: WeightedSample, cone: ConeSpec) -> float:
    """sup{beta : z in E^beta_C(X)}, with 0 for an empty set of levels."""
    z = _point(z, X, cone)
    return float(_levels(z, X, cone, "upper").min())


def downward_rank_bisect(
    z: ArrayLike, X: WeightedSample, cone: ConeSpec, tol: float = 1e-12, iters: int = 200
) -> float:
    """Debug oracle: bisection on alpha using set membership only."""
    z = _point(z, X, cone)

    def inside(a):
        return downward_expectile(X, cone, a).contains(z, tol=0.0)

    lo, hi = 0.0, 1.0
    if not inside(1.0 - 1e-15):
        return 1.0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if mid <= 0.0 or hi - lo <= tol:
            break
        if inside(mid):
            hi = mid
        else:
            lo = mid
    return hi if hi > 1e-14 else 0.0


@dataclass(frozen=True)
class ComparisonReport:
    y_downward: float
    y_upward: float
    z_downward: float
    z_upward: float
    y_leq_z_downward: bool  # y <=_{X,-C} z
    z_leq_y_downward: bool
    y_leq_z_upward: bool  # y <=_{X,+C} z
    z_leq_y_upward: bool
    lower_indifferent: bool
    upper_indifferent: bool
    indifferent: bool

    def to_dict(self) -> dict:
        return asdict(self)


def compare(
    y: ArrayLike, z: ArrayLike, X: WeightedSample, cone: ConeSpec, tol: float = INDIFFERENCE_TOL
) -> ComparisonReport:
    """Rank-induced relations between two points.

    Relations are decided on the raw ranks with slack ``tol``, so ranks
    within ``tol`` of each other count as indifferent.
    """
    ry, rz = rank(y, X, cone), rank(z, X, cone)
    lower_ind = abs(ry.downward - rz.downward) <= tol
    upper_ind = abs(ry.upward - rz.upward) <= tol
    return ComparisonReport(
        ry.downward, ry.upward, rz.downward, rz.upward,
        ry.downward <= rz.downward + tol,
        rz.downward <= ry.downward + tol,
        ry.upward <= rz.upward + tol,
        rz.upward <= ry.upward + tol,
        lower_ind, upper_ind, lower_ind and upper_ind,
    )


@dataclass(frozen=True)
class ConeOrderInference:
    verdict: Literal["y<=z", "not(y<=z)", "inconclusive"]
    hypothesis_met: bool
    downward_y: float
    upward_z: float

    def to_dict(self) -> dict:
        return asdict(self)


def infer_cone_order(
    y: ArrayLike, z: ArrayLike, X: WeightedSample, cone: ConeSpec, tol: float = INDIFFERENCE_TOL
) -> ConeOrderInference:
    """Decide y <=_C z from ranks alone when D_{-C}(y) <= D_C(z).

    Under that hypothesis y <=_C z holds iff both rank relations
    y <=_{X,-C} z and y <=_{X,+C} z hold; otherwise nothing follows.

    The argument needs a common level strictly inside (0, 1) between the two
    ranks, so the clamped cases D_{-C}(y) = D_C(z) = 1 (both points beyond
    every directional maximum) and D_{-C}(y) = D_C(z) = 0 count as
    hypothesis failures.
    """
    report = compare(y, z, X, cone, tol)
    met = report.y_downward <= report.z_upward + tol and report.y_downward < 1.0 and report.z_upward > 0.0
    if not met:
        return ConeOrderInference("inconclusive", False, report.y_downward, report.z_upward)
    ok = report.y_leq_z_downward and report.y_leq_z_upward
    return ConeOrderInference("y<=z" if ok else "not(y<=z)", True, report.y_downward, report.z_upward)


@dataclass(frozen=True)
class StochasticOrderCheck:
    consistent: bool
    order_holds: bool
    ranks_dominate: bool
    witness: tuple[float, ...] | None
    certificate: OrderCertificate


def stochastic_order_rank_check(
    X: WeightedSample,
    Y: WeightedSample,
    cone: ConeSpec,
    probe_points: ArrayLike,
    alpha_grid: ArrayLike | None = None,
    tol: float = INDIFFERENCE_TOL,
) -> StochasticOrderCheck:
    """Compare the set-inclusion lower order with rank domination on probes.

    ``ranks_dominate`` is D_{-C}(z; X) >= D_{-C}(z; Y) at every probe point;
    ``consistent`` is whether it agrees with the inclusion certificate.
    ``witness`` is the first probe where domination fails.
    """
    cert = lower_expectile_order(X, Y, cone, alpha_grid)
    witness = None
    for z in np.atleast_2d(np.asarray(probe_points, dtype=float)):
        if downward_rank(z, X, cone) < downward_rank(z, Y, cone) - tol:
            witness = tuple(z.tolist())
            break
    dominate = witness is None
    return StochasticOrderCheck(cert.holds == dominate, cert.holds, dominate, witness, cert)
