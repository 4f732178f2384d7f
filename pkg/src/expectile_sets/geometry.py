"""Polyhedral cones, halfspace sets and the small amount of 2D geometry
needed to turn H-representations into vertices and rays.

Cones are given by finite generator lists. In two dimensions the dual cone
is computed here; in higher dimensions generators of the dual cone must be
supplied by the caller.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import InputError, UnsupportedConeError, UnsupportedDimensionError

DEFAULT_TOL = 1e-9
CONSISTENCY_TOL = 1e-10

Sense = Literal["<=", ">="]


def _as_matrix(vectors: ArrayLike | None, d: int | None = None) -> NDArray[np.float64]:
    if vectors is None:
        return np.zeros((0, d or 0))
    arr = np.asarray(vectors, dtype=float)
    if arr.size == 0:
        return np.zeros((0, d or (arr.shape[-1] if arr.ndim == 2 else 0)))
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1) if d == 1 else arr.reshape(1, -1)
    if arr.ndim != 2:
        raise InputError("generators must be a list of vectors")
    return arr


def normalize_rows(vectors: ArrayLike) -> NDArray[np.float64]:
    """Scale every row to unit Euclidean length; zero rows are rejected."""
    arr = np.asarray(vectors, dtype=float)
    norms = np.linalg.norm(arr, axis=1)
    if np.any(norms == 0) or not np.all(np.isfinite(norms)):
        raise InputError("generators must be nonzero and finite")
    return arr / norms[:, None]


def _rotate(v: NDArray, angle: float) -> NDArray:
    if angle == np.pi / 2:
        return np.array([-v[1], v[0]])
    if angle == -np.pi / 2:
        return np.array([v[1], -v[0]])
    c, s = np.cos(angle), np.sin(angle)
    return np.array([c * v[0] - s * v[1], s * v[0] + c * v[1]])


def _angular_span(vectors: NDArray) -> tuple[float, int, int]:
    """Angular width of the cone spanned by 2-vectors.

    Returns ``(width, i_start, i_end)`` where the cone sweeps counterclockwise
    from ``vectors[i_start]`` to ``vectors[i_end]``. Width is ``2*pi`` minus
    the largest circular gap between consecutive directions.
    """
    angles = np.arctan2(vectors[:, 1], vectors[:, 0])
    order = np.argsort(angles, kind="stable")
    a = angles[order]
    gaps = np.diff(np.concatenate([a, [a[0] + 2 * np.pi]]))
    j = int(np.argmax(gaps))
    width = 2 * np.pi - gaps[j]
    i_end = int(order[j])
    i_start = int(order[(j + 1) % a.size])
    return float(width), i_start, i_end


def dual_cone_2d(generators: ArrayLike, tol: float = DEFAULT_TOL) -> NDArray[np.float64]:
    """Generators of the dual cone of a planar cone.

    The two angular-extreme generators of C are rotated inward by a quarter
    turn. A single ray has a halfplane as its dual; it is returned as the two
    boundary normals plus the ray direction itself, which is needed for the
    list to generate the halfplane. A halfplane cone has a single dual ray.
    """
    g = normalize_rows(_as_matrix(generators, 2))
    if g.shape[0] == 0 or g.shape[1] != 2:
        raise InputError("dual_cone_2d needs at least one 2-vector")
    width, i_start, i_end = _angular_span(g)
    if width > np.pi + tol:
        raise UnsupportedConeError(
            f"cone has angular width {width:.6g} > pi; its dual is {{0}}"
        )
    u, v = g[i_start], g[i_end]
    if width <= tol:
        return np.array([_rotate(u, np.pi / 2), _rotate(u, -np.pi / 2), u])
    if width >= np.pi - tol:
        return _rotate(u, np.pi / 2).reshape(1, 2)
    return np.array([_rotate(u, np.pi / 2), _rotate(v, -np.pi / 2)])


@dataclass(frozen=True)
class ConeSpec:
    """Polyhedral cone C with generators of both C and its dual C^+.

    Generators are stored at unit length. ``generators_C`` may be empty when
    only the dual is known (d >= 3, or C = {0}).
    """

    dimension: int
    generators_C: NDArray[np.float64]
    generators_Cplus: NDArray[np.float64]

    def __post_init__(self):
        d = int(self.dimension)
        if d < 1:
            raise InputError("cone dimension must be at least 1")
        gc = _as_matrix(self.generators_C, d)
        gp = _as_matrix(self.generators_Cplus, d)
        for name, arr in (("generators_C", gc), ("generators_C_plus", gp)):
            if arr.shape[0] and arr.shape[1] != d:
                raise InputError(f"{name} must contain {d}-vectors")
        gc = normalize_rows(gc) if gc.shape[0] else np.zeros((0, d))
        if gp.shape[0] == 0:
            raise InputError("dual cone needs at least one generator")
        gp = normalize_rows(gp)
        if gc.shape[0]:
            worst = float((gp @ gc.T).min())
            if worst < -CONSISTENCY_TOL:
                raise InputError(
                    f"dual generators are inconsistent with C (min w.g = {worst:.3g})"
                )
        gc.setflags(write=False)
        gp.setflags(write=False)
        object.__setattr__(self, "dimension", d)
        object.__setattr__(self, "generators_C", gc)
        object.__setattr__(self, "generators_Cplus", gp)

    @classmethod
    def from_generators(
        cls,
        generators_C: ArrayLike | None = None,
        generators_Cplus: ArrayLike | None = None,
        dimension: int | None = None,
    ) -> ConeSpec:
        """Build a cone from whichever generator lists are available.

        With no C^+ generators: in d = 2 the dual is computed, in d = 1 it is
        read off the sign of the generators, and an empty C means C = {0}
        whose dual R^d is generated by the signed unit vectors.
        """
        gc = _as_matrix(generators_C, dimension)
        gp = _as_matrix(generators_Cplus, dimension)
        if dimension is None:
            shapes = [a.shape[1] for a in (gc, gp) if a.shape[0]]
            if not shapes:
                raise InputError("cannot infer the dimension of an empty cone")
            dimension = shapes[0]
        d = int(dimension)
        if gp.shape[0] == 0:
            if gc.shape[0] == 0:
                eye = np.eye(d)
                gp = np.vstack([eye, -eye])
            elif d == 1:
                signs = set(np.sign(gc[:, 0]).tolist()) - {0.0}
                if len(signs) != 1:
                    raise UnsupportedConeError("C = R has trivial dual; not a preorder cone")
                gp = np.array([[signs.pop()]])
            elif d == 2:
                gp = dual_cone_2d(gc)
            else:
                raise UnsupportedDimensionError(
                    "for d >= 3 generators of the dual cone C^+ must be supplied"
                )
        elif gc.shape[0] == 0 and d == 2:
            try:
                gc = dual_cone_2d(gp)
            except UnsupportedConeError:
                gc = np.zeros((0, 2))
        return cls(d, gc, gp)

    @classmethod
    def orthant(cls, d: int) -> ConeSpec:
        """The nonnegative orthant R^d_+ (self-dual)."""
        eye = np.eye(d)
        return cls(d, eye, eye)

    @classmethod
    def from_dict(cls, data: dict) -> ConeSpec:
        if "generators_C" not in data and "generators_C_plus" not in data:
            raise InputError("cone file needs generators_C or generators_C_plus")
        return cls.from_generators(
            data.get("generators_C"), data.get("generators_C_plus"), data.get("dimension")
        )

    @classmethod
    def load(cls, path: str | Path) -> ConeSpec:
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read cone file {path}: {exc}") from exc
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "generators_C": self.generators_C.tolist(),
            "generators_C_plus": self.generators_Cplus.tolist(),
        }

    @property
    def n_dual(self) -> int:
        return self.generators_Cplus.shape[0]

    def contains_orthant(self, tol: float = DEFAULT_TOL) -> bool:
        """True when every standard basis vector lies in C."""
        return bool(np.all(self.generators_Cplus >= -tol))

    def leq(self, y: ArrayLike, z: ArrayLike, tol: float = DEFAULT_TOL) -> bool:
        """Cone order y <=_C z, decided through the dual generators."""
        diff = np.asarray(z, dtype=float) - np.asarray(y, dtype=float)
        return bool(np.all(self.generators_Cplus @ diff >= -tol))


def transform_cone(A: ArrayLike, cone: ConeSpec) -> ConeSpec:
    """Image cone A C, with dual (A^T)^{-1} C^+."""
    A = np.asarray(A, dtype=float)
    d = cone.dimension
    if A.shape != (d, d):
        raise InputError(f"matrix must be {d}x{d}, got {A.shape}")
    if abs(np.linalg.det(A)) < 1e-12:
        raise InputError("matrix is singular")
    gc = cone.generators_C @ A.T if cone.generators_C.shape[0] else np.zeros((0, d))
    gp = np.linalg.solve(A.T, cone.generators_Cplus.T).T  # rows: (A^T)^{-1} w
    return ConeSpec(d, gc, gp)


@dataclass(frozen=True)
class HalfspaceSet:
    """{z : n_m . z <= c_m for all m} (sense "<=") or the ">=" analogue."""

    normals: NDArray[np.float64]
    offsets: NDArray[np.float64]
    sense: Sense = "<="

    def __post_init__(self):
        normals = np.atleast_2d(np.asarray(self.normals, dtype=float))
        offsets = np.asarray(self.offsets, dtype=float).reshape(-1)
        if normals.shape[0] != offsets.size or offsets.size == 0:
            raise InputError("normals and offsets must have equal, nonzero length")
        if self.sense not in ("<=", ">="):
            raise InputError(f"sense must be '<=' or '>=', got {self.sense!r}")
        normals.setflags(write=False)
        offsets.setflags(write=False)
        object.__setattr__(self, "normals", normals)
        object.__setattr__(self, "offsets", offsets)

    @property
    def dimension(self) -> int:
        return self.normals.shape[1]

    def slack(self, z: ArrayLike) -> NDArray[np.float64]:
        """Per-inequality slack; nonnegative entries are satisfied.

        ``z`` may be a single point or an array of points (rows).
        """
        z = np.asarray(z, dtype=float)
        if z.shape[-1] != self.dimension:
            raise InputError(f"point has dimension {z.shape[-1]}, set has {self.dimension}")
        vals = z @ self.normals.T
        return self.offsets - vals if self.sense == "<=" else vals - self.offsets

    def as_upper(self) -> tuple[NDArray, NDArray]:
        """Normals/offsets rewritten in "<=" form."""
        if self.sense == "<=":
            return self.normals, self.offsets
        return -self.normals, -self.offsets

    def negate(self) -> HalfspaceSet:
        """The pointwise negation {-z : z in self}."""
        return HalfspaceSet(self.normals, -self.offsets, ">=" if self.sense == "<=" else "<=")

    def translate(self, b: ArrayLike) -> HalfspaceSet:
        return HalfspaceSet(self.normals, self.offsets + self.normals @ np.asarray(b, dtype=float), self.sense)

    def linear_image(self, A: ArrayLike) -> HalfspaceSet:
        """{A z : z in self} for invertible A, renormalized to unit normals."""
        A = np.asarray(A, dtype=float)
        normals = np.linalg.solve(A.T, self.normals.T).T  # rows: n A^{-1}
        norms = np.linalg.norm(normals, axis=1)
        return HalfspaceSet(normals / norms[:, None], self.offsets / norms, self.sense)


def contains(hs: HalfspaceSet, z: ArrayLike, tol: float = DEFAULT_TOL) -> bool:
    """Membership of a single point with every inequality relaxed by ``tol``."""
    if tol < 0:
        raise InputError("tolerance must be nonnegative")
    z = np.asarray(z, dtype=float).reshape(-1)
    return bool(np.all(hs.slack(z) >= -tol))


@dataclass(frozen=True)
class RegionPolytope:
    """Convex polytope in V-representation.

    ``boundary`` is the counterclockwise polygon for d = 2 and ``None``
    otherwise. ``sources`` optionally maps each vertex back to the index of
    a generating object (e.g. a scenario vertex).
    """

    vertices: NDArray[np.float64]
    boundary: NDArray[np.float64] | None = None
    sources: tuple[int, ...] | None = None

    @property
    def dimension(self) -> int:
        return self.vertices.shape[1]


@dataclass(frozen=True)
class Polyhedron2D:
    """Vertices and recession rays of a planar halfspace intersection."""

    vertices: NDArray[np.float64]
    rays: NDArray[np.float64]
    empty: bool = False
    active: list[tuple[int, ...]] = field(default_factory=list)


def _cross(o: NDArray, a: NDArray, b: NDArray) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull_2d(points: ArrayLike, tol: float = DEFAULT_TOL) -> RegionPolytope:
    """Extreme points in counterclockwise order (Andrew's monotone chain).

    Collinear boundary points and near-duplicates (within ``tol``) are
    dropped. ``sources`` holds the input index of each hull vertex.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if pts.shape[0] == 0:
        raise InputError("convex hull of an empty point set")
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    uniq: list[int] = []
    for i in order:
        if uniq and np.max(np.abs(pts[i] - pts[uniq[-1]])) <= tol:
            continue
        uniq.append(int(i))
    if len(uniq) == 1:
        v = pts[uniq]
        return RegionPolytope(v, v.copy(), tuple(uniq))

    def chain(indices):
        out: list[int] = []
        for i in indices:
            while len(out) >= 2 and _cross(pts[out[-2]], pts[out[-1]], pts[i]) <= tol:
                out.pop()
            out.append(i)
        return out

    lower = chain(uniq)
    upper = chain(uniq[::-1])
    hull = lower[:-1] + upper[:-1]
    # all-collinear input leaves the two endpoints twice
    seen: list[int] = []
    for i in hull:
        if i not in seen:
            seen.append(i)
    v = pts[seen]
    return RegionPolytope(v, v.copy(), tuple(seen))


def recession_rays_2d(hs: HalfspaceSet, tol: float = DEFAULT_TOL) -> NDArray[np.float64]:
    """Extreme rays of the recession cone {d : n . d <= 0 (resp. >= 0)}.

    For a halfplane only the two boundary directions are returned; an empty
    array means the recession cone is {0}.
    """
    normals, _ = hs.as_upper()
    try:
        rays = dual_cone_2d(-normals, tol)
    except UnsupportedConeError:
        return np.zeros((0, 2))
    if rays.shape[0] == 3:
        rays = rays[:2]
    return rays


def _envelope_vertices(normals: NDArray, offsets: NDArray, tol: float):
    """Vertices of {n . z <= c} when all normals lie in an open half-circle.

    The frame is rotated so the mid normal points along +y; every constraint
    then reads y <= a x + b and the region is the hypograph of the lower
    envelope of these lines, whose breakpoints are found with a stack.
    """
    width, i_start, _ = _angular_span(normals)
    mid = _rotate(normals[i_start], width / 2)
    ex = _rotate(mid, -np.pi / 2)
    nx = normals @ ex
    ny = normals @ mid
    slope = -nx / ny
    icpt = offsets / ny

    order = sorted(range(slope.size), key=lambda i: (-slope[i], icpt[i]))
    lines: list[int] = []
    for i in order:
        if lines and abs(slope[lines[-1]] - slope[i]) <= tol:
            continue  # parallel and looser than the one already kept
        while len(lines) >= 2:
            l1, l2 = lines[-2], lines[-1]
            x12 = (icpt[l2] - icpt[l1]) / (slope[l1] - slope[l2])
            x13 = (icpt[i] - icpt[l1]) / (slope[l1] - slope[i])
            if x13 <= x12 + tol:
                lines.pop()
            else:
                break
        lines.append(i)

    verts, active = [], []
    for l1, l2 in zip(lines, lines[1:]):
        x = (icpt[l2] - icpt[l1]) / (slope[l1] - slope[l2])
        y = slope[l1] * x + icpt[l1]
        verts.append(x * ex + y * mid)
        active.append((l1, l2))
    first, last = lines[0], lines[-1]
    left = -(ex + slope[first] * mid)
    right = ex + slope[last] * mid
    rays = np.array([left / np.linalg.norm(left), right / np.linalg.norm(right)])
    return np.array(verts).reshape(-1, 2), rays, active


def _pairwise_vertices(normals: NDArray, offsets: NDArray, tol: float):
    m = normals.shape[0]
    i, j = np.triu_indices(m, k=1)
    det = normals[i, 0] * normals[j, 1] - normals[i, 1] * normals[j, 0]
    ok = np.abs(det) > tol
    i, j, det = i[ok], j[ok], det[ok]
    x = (offsets[i] * normals[j, 1] - offsets[j] * normals[i, 1]) / det
    y = (normals[i, 0] * offsets[j] - normals[j, 0] * offsets[i]) / det
    cand = np.column_stack([x, y])
    scale = 1.0 + np.abs(cand).max(axis=1, initial=0.0)
    feasible = np.all(cand @ normals.T - offsets <= tol * scale[:, None], axis=1)
    cand = cand[feasible]
    if cand.shape[0] == 0:
        return np.zeros((0, 2)), []
    hull = convex_hull_2d(cand, tol)
    verts = hull.vertices
    residual = np.abs(verts @ normals.T - offsets)
    active = [tuple(np.flatnonzero(r <= tol * (1 + np.abs(v).max())).tolist()) for r, v in zip(residual, verts)]
    return verts, active


def _is_feasible(normals: NDArray, offsets: NDArray) -> bool:
    from scipy.optimize import linprog

    res = linprog(np.zeros(2), A_ub=normals, b_ub=offsets, bounds=[(None, None)] * 2, method="highs")
    return res.status == 0


def vertices_2d(hs: HalfspaceSet, tol: float = DEFAULT_TOL) -> Polyhedron2D:
    """Vertices and recession rays of a planar halfspace set.

    Normals within an open half-circle (pointed dual cone) are handled by the
    angular-sort envelope; anything else by pairwise line intersection.
    """
    if hs.dimension != 2:
        raise UnsupportedDimensionError("vertices_2d needs d = 2")
    normals, offsets = hs.as_upper()
    norms = np.linalg.norm(normals, axis=1)
    normals = normals / norms[:, None]
    offsets = offsets / norms
    width, _, _ = _angular_span(normals)
    if width < np.pi - tol:
        verts, rays, active = _envelope_vertices(normals, offsets, tol)
        return Polyhedron2D(verts, rays, False, active)
    rays = recession_rays_2d(HalfspaceSet(normals, offsets, "<="), tol)
    verts, active = _pairwise_vertices(normals, offsets, tol)
    empty = verts.shape[0] == 0 and not _is_feasible(normals, offsets)
    return Polyhedron2D(verts, rays, empty, active)


def halfspace_sum_split(w: ArrayLike, r: float, s: float, z: ArrayLike) -> tuple[NDArray, NDArray]:
    """Split z with w.z <= r + s into x + y, w.x <= r and w.y <= s.

    Uses the supporting point x(r) = r w / |w|^2 and puts the rest into y.
    """
    w = np.asarray(w, dtype=float)
    z = np.asarray(z, dtype=float)
    x = r * w / (w @ w)
    return x, z - x


def _point_segment_distance(p: NDArray, a: NDArray, b: NDArray) -> float:
    ab = b - a
    denom = ab @ ab
    t = 0.0 if denom == 0 else float(np.clip((p - a) @ ab / denom, 0.0, 1.0))
    return float(np.linalg.norm(p - (a + t * ab)))


def point_polygon_distance(p: ArrayLike, polygon: ArrayLike, tol: float = DEFAULT_TOL) -> float:
    """Euclidean distance from a point to a convex ccw polygon (0 inside)."""
    p = np.asarray(p, dtype=float)
    poly = np.asarray(polygon, dtype=float).reshape(-1, 2)
    n = poly.shape[0]
    if n == 1:
        return float(np.linalg.norm(p - poly[0]))
    if n >= 3 and all(_cross(poly[k], poly[(k + 1) % n], p) >= -tol for k in range(n)):
        return 0.0
    return min(_point_segment_distance(p, poly[k], poly[(k + 1) % n]) for k in range(n if n > 2 else 1))


def hausdorff_2d(P: ArrayLike, Q: ArrayLike) -> float:
    """Hausdorff distance between two convex polygons given as ccw vertex lists.

    For convex sets the maximal distance is attained at a vertex.
    """
    P = np.asarray(P, dtype=float).reshape(-1, 2)
    Q = np.asarray(Q, dtype=float).reshape(-1, 2)
    d_pq = max(point_polygon_distance(p, Q) for p in P)
    d_qp = max(point_polygon_distance(q, P) for q in Q)
    return max(d_pq, d_qp)
