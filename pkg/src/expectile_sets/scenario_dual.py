"""The scenario polytope of density-ratio-bounded probability vectors, its
vertices, and the dual constructions built on it: cone expectiles as
extremal scenario expectations and the expectile region as the set of
scenario-reweighted means.

A probability vector q on N atoms with base weights p is feasible at level
alpha when max_i q_i/p_i <= beta * min_j q_j/p_j, beta = (1 - alpha)/alpha.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .cone_expectile import EXACT, ConeExpectileSet, WeightedSample, _check_compatible
from .errors import InputError, ParameterError, SizeLimitError, UnsupportedDimensionError
from .geometry import DEFAULT_TOL, ConeSpec, HalfspaceSet, RegionPolytope, convex_hull_2d
from .scalar import PROB_TOL, expectile

MAX_ATOMS = 20
MAX_REGION_DIM = 3


@dataclass(frozen=True)
class ScenarioPolytope:
    base_probabilities: NDArray[np.float64]
    alpha: float
    beta: float
    vertices: NDArray[np.float64]
    subsets: tuple[tuple[int, ...], ...]

    def is_feasible(self, q: ArrayLike, tol: float = 1e-10) -> bool:
        q = np.asarray(q, dtype=float)
        r = q / self.base_probabilities
        return bool(
            np.all(q > 0)
            and abs(q.sum() - 1.0) <= tol
            and r.max() <= self.beta * r.min() + tol
        )

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "scenario_vertices": self.vertices.tolist(),
        }


def _check_half_level(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha <= 0.5:
        raise ParameterError(f"level must lie in (0, 1/2], got {alpha!r}")
    return alpha


def _check_probabilities(p: ArrayLike) -> NDArray[np.float64]:
    p = np.asarray(p, dtype=float).reshape(-1)
    if p.size == 0:
        raise InputError("need at least one atom")
    if np.any(p <= 0) or abs(p.sum() - 1.0) > PROB_TOL:
        raise InputError("base probabilities must be positive and sum to 1")
    return p


def ratio_constraints(p: NDArray, beta: float) -> NDArray[np.float64]:
    """Rows a with a.q <= 0 encoding q_i/p_i <= beta q_j/p_j for all i != j.

    Row order is lexicographic in (i, j).
    """
    n = p.size
    rows = []
    for i in range(n):
        for j in range(n):
            if i != j:
                row = np.zeros(n)
                row[i] = 1.0 / p[i]
                row[j] = -beta / p[j]
                rows.append(row)
    return np.array(rows).reshape(-1, n)


def is_vertex(q: NDArray, p: NDArray, beta: float, tol: float = DEFAULT_TOL) -> bool:
    """Vertex test: the active ratio constraints plus the simplex equation
    have rank N."""
    A = ratio_constraints(p, beta)
    scale = np.abs(A).max(axis=1)
    active = A[np.abs(A @ q) <= tol * scale]
    system = np.vstack([active, np.ones(p.size)])
    return int(np.linalg.matrix_rank(system, tol=1e-9)) == p.size


def scenario_vertices(p: ArrayLike, alpha: float, tol: float = DEFAULT_TOL) -> ScenarioPolytope:
    """Vertices of the scenario polytope at level alpha.

    Candidates are the two-valued ratio vectors: atoms in a nonempty proper
    subset S get density ratio beta*c, the others c. Each candidate passes an
    explicit rank check before it is kept. Subsets are visited in
    lexicographic order of their sorted index tuples.
    """
    p = _check_probabilities(p)
    alpha = _check_half_level(alpha)
    n = p.size
    if n > MAX_ATOMS:
        raise SizeLimitError(f"{n} atoms exceeds the enumeration limit of {MAX_ATOMS}")
    beta = (1.0 - alpha) / alpha
    if n == 1 or beta <= 1.0 + tol:
        return ScenarioPolytope(p, alpha, beta, p.reshape(1, -1).copy(), ((),))

    subsets = sorted(
        (s for k in range(1, n) for s in combinations(range(n), k)),
    )
    verts: list[NDArray] = []
    kept: list[tuple[int, ...]] = []
    for s in subsets:
        ratio = np.ones(n)
        ratio[list(s)] = beta
        q = ratio * p
        q /= q.sum()
        if not is_vertex(q, p, beta, tol):
            continue
        if any(np.max(np.abs(q - v)) <= tol for v in verts):
            continue
        verts.append(q)
        kept.append(s)
    return ScenarioPolytope(p, alpha, beta, np.array(verts), tuple(kept))


def brute_force_vertices(p: ArrayLike, alpha: float, tol: float = 1e-9) -> NDArray[np.float64]:
    """Exhaustive active-set vertex enumeration (independent oracle).

    Every choice of N-1 constraints among the pairwise ratio inequalities and
    the nonnegativity bounds, together with sum(q) = 1, is solved; feasible
    unique solutions are the vertices. Exponential; meant for N <= 6.
    """
    p = _check_probabilities(p)
    alpha = _check_half_level(alpha)
    n = p.size
    beta = (1.0 - alpha) / alpha
    if n == 1:
        return np.ones((1, 1))
    ineq = np.vstack([ratio_constraints(p, beta), -np.eye(n)])
    combos = np.array(list(combinations(range(ineq.shape[0]), n - 1)))
    rhs = np.zeros(n)
    rhs[-1] = 1.0
    found = []
    for start in range(0, combos.shape[0], 20000):
        chunk = combos[start:start + 20000]
        systems = np.concatenate(
            [ineq[chunk], np.broadcast_to(np.ones(n), (chunk.shape[0], 1, n))], axis=1
        )
        systems = systems[np.abs(np.linalg.det(systems)) > 1e-12]
        sols = np.linalg.solve(systems, np.broadcast_to(rhs, (systems.shape[0], n))[..., None])[..., 0]
        found.append(sols[np.all(sols @ ineq.T <= tol, axis=1)])
    sols = np.concatenate(found)
    uniq: list[NDArray] = []
    for q in sols:
        if not any(np.max(np.abs(q - u)) <= 1e-9 for u in uniq):
            uniq.append(q)
    return np.array(uniq)


def mapped_scenarios(X: WeightedSample, alpha: float) -> tuple[ScenarioPolytope, NDArray[np.float64]]:
    """Scenario polytope and the scenario means E^Q[X] of its vertices."""
    poly = scenario_vertices(X.probabilities, alpha)
    return poly, poly.vertices @ X.points


def _affine_hull_reduce(points: NDArray, tol: float):
    """Coordinates of ``points`` in their affine hull (origin, basis, coords)."""
    origin = points.mean(axis=0)
    centered = points - origin
    _, s, vt = np.linalg.svd(centered, full_matrices=False)
    scale = max(1.0, float(np.abs(points).max()))
    rank = int(np.sum(s > tol * scale * max(points.shape)))
    basis = vt[:rank]
    return origin, basis, centered @ basis.T


def _extreme_points(points: NDArray, tol: float) -> tuple[NDArray, NDArray | None, tuple[int, ...]]:
    d = points.shape[1]
    origin, basis, coords = _affine_hull_reduce(points, tol)
    k = basis.shape[0]
    if k == 0:
        return points[:1], (points[:1].copy() if d == 2 else None), (0,)
    if k == 1:
        c = coords[:, 0]
        idx = (int(np.argmin(c)), int(np.argmax(c)))
        verts = points[list(idx)]
        return verts, (verts.copy() if d == 2 else None), idx
    if k == 2:
        # in the plane hull the original points to keep counterclockwise order
        hull = convex_hull_2d(points if d == 2 else coords, tol)
        idx = hull.sources
        verts = points[list(idx)]
        return verts, (verts.copy() if d == 2 else None), idx
    from scipy.spatial import ConvexHull

    hull = ConvexHull(coords)
    idx = tuple(int(i) for i in sorted(hull.vertices))
    return points[list(idx)], None, idx


def region_vertices(X: WeightedSample, alpha: float, tol: float = DEFAULT_TOL) -> RegionPolytope:
    """Expectile region as the hull of the scenario means of W(alpha)'s vertices.

    d = 2 gives a counterclockwise polygon; d = 3 uses a Qhull hull; higher
    dimensions are not offered. ``sources`` indexes the scenario vertex that
    produced each region vertex.
    """
    alpha = _check_half_level(alpha)
    if X.dimension > MAX_REGION_DIM:
        raise UnsupportedDimensionError(
            f"exact region computation is offered for d <= {MAX_REGION_DIM}, got d = {X.dimension}"
        )
    _, mapped = mapped_scenarios(X, alpha)
    verts, boundary, idx = _extreme_points(mapped, tol)
    return RegionPolytope(verts, boundary, idx)


def region_primal_2d(X: WeightedSample, alpha: float, n_directions: int = 360) -> HalfspaceSet:
    """Outer approximation of the expectile region from equally spaced
    directions: {z : u_k^T z <= e_{1-alpha}(u_k^T X)}."""
    alpha = _check_half_level(alpha)
    if X.dimension != 2:
        raise UnsupportedDimensionError("region_primal_2d needs d = 2")
    if int(n_directions) < 4:
        raise ParameterError("need at least 4 directions")
    theta = 2 * np.pi * np.arange(int(n_directions)) / int(n_directions)
    dirs = np.column_stack([np.cos(theta), np.sin(theta)])
    # exact axis directions keep the 4-direction box free of rounding noise
    dirs[np.abs(dirs) < 1e-15] = 0.0
    offsets = np.array([expectile(X.project(u), 1.0 - alpha) for u in dirs])
    return HalfspaceSet(dirs, offsets, "<=")


def dual_cone_expectile(
    X: WeightedSample,
    cone: ConeSpec,
    alpha: float,
    direction: str = "downward",
) -> ConeExpectileSet:
    """Cone expectile set from extremal scenario expectations.

    Downward offsets are min over scenario vertices of w_m^T E^Q[X]; upward
    offsets (level 1 - alpha) the corresponding max.
    """
    alpha = _check_half_level(alpha)
    _check_compatible(X, cone)
    _, mapped = mapped_scenarios(X, alpha)
    proj = mapped @ cone.generators_Cplus.T
    if direction == "downward":
        return ConeExpectileSet("downward", alpha, HalfspaceSet(cone.generators_Cplus, proj.min(axis=0), "<="), EXACT)
    if direction == "upward":
        return ConeExpectileSet("upward", 1.0 - alpha, HalfspaceSet(cone.generators_Cplus, proj.max(axis=0), ">="), EXACT)
    raise ParameterError(f"direction must be 'downward' or 'upward', got {direction!r}")
