"""Downward/upward cone expectile sets, the expectile risk measure and the
lower/upper expectile stochastic orders.

Every set is kept in H-representation keyed by the dual generators of the
cone: the normal of the m-th halfspace is ``cone.generators_Cplus[m]`` and
its offset is a scalar expectile of the sample projected onto that normal.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import InputError, ModelError, ParameterError
from .geometry import DEFAULT_TOL, ConeSpec, HalfspaceSet, Polyhedron2D, contains, vertices_2d
from .scalar import PROB_TOL, ScalarSample, _check_level, expectile

Direction = Literal["downward", "upward", "risk"]

EXACT = "exact"
OUTER = "finite-generator outer approximation"

DEFAULT_ALPHA_GRID = tuple(round(0.01 * k, 2) for k in range(1, 100))


@dataclass(frozen=True)
class WeightedSample:
    """Finite distribution on R^d: atoms ``points`` (N x d) with weights."""

    points: NDArray[np.float64]
    probabilities: NDArray[np.float64]

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        probs = np.asarray(self.probabilities, dtype=float).reshape(-1)
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise InputError("sample needs at least one point")
        if pts.shape[0] != probs.size:
            raise InputError(f"{pts.shape[0]} points but {probs.size} probabilities")
        if not np.all(np.isfinite(pts)):
            raise InputError("sample points must be finite")
        if np.any(probs <= 0):
            raise InputError("probabilities must be strictly positive")
        if abs(probs.sum() - 1.0) > PROB_TOL:
            raise InputError(f"probabilities sum to {probs.sum()!r}, not 1")
        pts.setflags(write=False)
        probs.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "probabilities", probs)

    @classmethod
    def from_points(cls, points: ArrayLike, weights: ArrayLike | None = None) -> WeightedSample:
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        n = pts.shape[0]
        if n == 0:
            raise InputError("sample needs at least one point")
        if weights is None:
            probs = np.full(n, 1.0 / n)
        else:
            w = np.asarray(weights, dtype=float).reshape(-1)
            if np.any(w <= 0):
                raise InputError("weights must be strictly positive")
            probs = w / w.sum()
        return cls(pts, probs)

    @property
    def dimension(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]

    def project(self, w: ArrayLike) -> ScalarSample:
        """The scalar sample w^T X."""
        return ScalarSample(self.points @ np.asarray(w, dtype=float), self.probabilities)

    def mean(self) -> NDArray[np.float64]:
        return self.probabilities @ self.points

    def __neg__(self) -> WeightedSample:
        return WeightedSample(-self.points, self.probabilities)

    def __add__(self, other):
        """Atomwise sum with another sample on the same atoms, or a shift by a vector."""
        if isinstance(other, WeightedSample):
            if not np.allclose(self.probabilities, other.probabilities, rtol=0, atol=PROB_TOL):
                raise InputError("atomwise sum needs a shared atom space")
            return WeightedSample(self.points + other.points, self.probabilities)
        return WeightedSample(self.points + np.asarray(other, dtype=float), self.probabilities)

    def scale(self, s: float) -> WeightedSample:
        return WeightedSample(self.points * s, self.probabilities)

    def affine(self, A: ArrayLike, b: ArrayLike | None = None) -> WeightedSample:
        """The sample A X + b."""
        pts = self.points @ np.asarray(A, dtype=float).T
        if b is not None:
            pts = pts + np.asarray(b, dtype=float)
        return WeightedSample(pts, self.probabilities)


@dataclass(frozen=True)
class ConeExpectileSet:
    """A cone expectile set (or risk measure value) in H-representation.

    ``alpha`` is the level of the scalar expectiles used as offsets.
    ``approximation`` is ``"exact"`` where the finite-generator intersection
    is known to coincide with the intersection over the whole dual cone.
    """

    direction: Direction
    alpha: float
    halfspaces: HalfspaceSet
    approximation: str = EXACT

    def contains(self, z: ArrayLike, tol: float = DEFAULT_TOL) -> bool:
        return contains(self.halfspaces, z, tol)

    @property
    def offsets(self) -> NDArray[np.float64]:
        return self.halfspaces.offsets

    @property
    def normals(self) -> NDArray[np.float64]:
        return self.halfspaces.normals

    def vertices_2d(self, tol: float = DEFAULT_TOL) -> Polyhedron2D:
        return vertices_2d(self.halfspaces, tol)

    def to_dict(self) -> dict:
        out = {
            "direction": self.direction,
            "alpha": self.alpha,
            "approximation": self.approximation,
            "normals": self.halfspaces.normals.tolist(),
            "offsets": self.halfspaces.offsets.tolist(),
            "sense": self.halfspaces.sense,
        }
        if self.halfspaces.dimension == 2:
            poly = self.vertices_2d()
            out["vertices"] = poly.vertices.tolist()
            out["rays"] = poly.rays.tolist()
        return out


def _check_compatible(X: WeightedSample, cone: ConeSpec) -> None:
    if X.dimension != cone.dimension:
        raise InputError(f"sample has dimension {X.dimension}, cone has {cone.dimension}")


def directional_expectiles(
    X: WeightedSample,
    cone: ConeSpec,
    alpha: float,
    workers: int | None = None,
) -> NDArray[np.float64]:
    """e_alpha(w_m^T X) for every dual generator w_m, in generator order."""
    _check_compatible(X, cone)
    alpha = _check_level(alpha)
    gens = cone.generators_Cplus
    if workers and workers > 1 and gens.shape[0] > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            vals = list(pool.map(lambda w: expectile(X.project(w), alpha), gens))
    else:
        vals = [expectile(X.project(w), alpha) for w in gens]
    return np.array(vals)


def downward_expectile(
    X: WeightedSample, cone: ConeSpec, alpha: float, workers: int | None = None
) -> ConeExpectileSet:
    """Downward cone expectile: {z : w_m^T z <= e_alpha(w_m^T X) for all m}.

    Exact for alpha <= 1/2; above that the finite intersection is only an
    outer approximation of the intersection over all of C^+.
    """
    offsets = directional_expectiles(X, cone, alpha, workers)
    approx = EXACT if alpha <= 0.5 else OUTER
    return ConeExpectileSet("downward", float(alpha), HalfspaceSet(cone.generators_Cplus, offsets, "<="), approx)


def upward_expectile(
    X: WeightedSample, cone: ConeSpec, alpha_complement: float, workers: int | None = None
) -> ConeExpectileSet:
    """Upward cone expectile at level ``alpha_complement`` (the 1 - alpha of
    the usual notation): {z : w_m^T z >= e_level(w_m^T X) for all m}."""
    offsets = directional_expectiles(X, cone, alpha_complement, workers)
    approx = EXACT if alpha_complement >= 0.5 else OUTER
    return ConeExpectileSet(
        "upward", float(alpha_complement), HalfspaceSet(cone.generators_Cplus, offsets, ">="), approx
    )


def risk_measure(
    X: WeightedSample, cone: ConeSpec, alpha: float, tol: float = DEFAULT_TOL, workers: int | None = None
) -> ConeExpectileSet:
    """Set-valued expectile risk measure -E^alpha_{-C}(X).

    The set of deterministic portfolios z with w_m^T z >= -e_alpha(w_m^T X).
    Requires alpha in (0, 1/2] and C containing the nonnegative orthant.
    """
    alpha = float(alpha)
    if not 0.0 < alpha <= 0.5:
        raise ParameterError(f"risk measure needs level in (0, 1/2], got {alpha!r}")
    _check_compatible(X, cone)
    if not cone.contains_orthant(tol):
        raise ModelError("risk measure requires a cone C that contains R^d_+")
    offsets = -directional_expectiles(X, cone, alpha, workers)
    return ConeExpectileSet("risk", alpha, HalfspaceSet(cone.generators_Cplus, offsets, ">="), EXACT)


@dataclass(frozen=True)
class OrderCertificate:
    """Outcome of an expectile-order check on a finite level grid.

    ``witness`` is the first violation as ``(alpha, generator index)``.
    """

    holds: bool
    witness: tuple[float, int] | None
    grid: tuple[float, ...]

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "witness": None if self.witness is None else {"alpha": self.witness[0], "generator": self.witness[1]},
            "grid": list(self.grid),
        }


def _grid(alpha_grid: ArrayLike | None) -> tuple[float, ...]:
    grid = DEFAULT_ALPHA_GRID if alpha_grid is None else tuple(float(a) for a in np.asarray(alpha_grid).reshape(-1))
    for a in grid:
        _check_level(a)
    return grid


def _order_check(X, Y, cone, levels, grid, tol) -> OrderCertificate:
    _check_compatible(X, cone)
    _check_compatible(Y, cone)
    for alpha, level in zip(grid, levels):
        ex = directional_expectiles(X, cone, level)
        ey = directional_expectiles(Y, cone, level)
        bad = np.flatnonzero(ex > ey + tol)
        if bad.size:
            return OrderCertificate(False, (alpha, int(bad[0])), grid)
    return OrderCertificate(True, None, grid)


def lower_expectile_order(
    X: WeightedSample,
    Y: WeightedSample,
    cone: ConeSpec,
    alpha_grid: ArrayLike | None = None,
    tol: float = DEFAULT_TOL,
) -> OrderCertificate:
    """Certify E^alpha_{-C}(X) ⊆ E^alpha_{-C}(Y) on every grid level.

    Both sets share the same normals, so inclusion is read off the offsets.
    Only the grid is certified, never the continuum.
    """
    grid = _grid(alpha_grid)
    return _order_check(X, Y, cone, grid, grid, tol)


def upper_expectile_order(
    X: WeightedSample,
    Y: WeightedSample,
    cone: ConeSpec,
    alpha_grid: ArrayLike | None = None,
    tol: float = DEFAULT_TOL,
) -> OrderCertificate:
    """Certify E^{1-alpha}_C(X) ⊇ E^{1-alpha}_C(Y) on every grid level."""
    grid = _grid(alpha_grid)
    return _order_check(X, Y, cone, [1.0 - a for a in grid], grid, tol)
