import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from expectile_sets.cone_expectile import (
    DEFAULT_ALPHA_GRID,
    EXACT,
    OUTER,
    WeightedSample,
    directional_expectiles,
    downward_expectile,
    lower_expectile_order,
    risk_measure,
    upper_expectile_order,
    upward_expectile,
)
from expectile_sets.errors import InputError, ModelError, ParameterError
from expectile_sets.geometry import ConeSpec, contains, transform_cone
from expectile_sets.scalar import expectile
from expectile_sets.scenario_dual import dual_cone_expectile, region_vertices

from .helpers import random_cone_2d, random_sample


def d1(values):
    return WeightedSample.from_points(np.asarray(values, dtype=float)[:, None])


R_PLUS = ConeSpec.orthant(1)


# -- examples -------------------------------------------------------------


def test_downward_worked(worked, orthant2):
    E = downward_expectile(worked, orthant2, 0.25)
    assert np.allclose(E.normals, np.eye(2))
    assert np.allclose(E.offsets, [3.6, 0.0], atol=1e-12)
    assert E.halfspaces.sense == "<=" and E.approximation == EXACT


def test_downward_half_is_mean_minus_cone(worked, orthant2):
    E = downward_expectile(worked, orthant2, 0.5)
    assert np.allclose(E.offsets, [4.0, 2 / 3], atol=1e-12)
    assert np.allclose(worked.mean(), [4.0, 2 / 3])


def test_downward_shifted(worked, orthant2):
    E = downward_expectile(worked + np.array([1.0, 1.0]), orthant2, 0.25)
    assert np.allclose(E.offsets, [4.6, 1.0], atol=1e-12)


def test_upward_worked(worked, orthant2):
    U = upward_expectile(worked, orthant2, 0.75)
    assert np.allclose(U.offsets, [4.4, 1.2], atol=1e-12)
    assert U.halfspaces.sense == ">="
    U = upward_expectile(worked, orthant2, 0.5)
    assert np.allclose(U.offsets, [4.0, 2 / 3], atol=1e-12)


def test_outer_approximation_label(worked, orthant2):
    assert downward_expectile(worked, orthant2, 0.7).approximation == OUTER
    assert upward_expectile(worked, orthant2, 0.3).approximation == OUTER


def test_wedge_vertices(worked, orthant2):
    poly = downward_expectile(worked, orthant2, 0.25).vertices_2d()
    assert np.allclose(poly.vertices, [[3.6, 0.0]])
    out = upward_expectile(worked, orthant2, 0.75).to_dict()
    assert np.allclose(out["vertices"], [[4.4, 1.2]])
    assert set(out) == {"direction", "alpha", "approximation", "normals", "offsets", "sense", "vertices", "rays"}


def test_errors(worked, orthant2):
    with pytest.raises(ParameterError):
        downward_expectile(worked, orthant2, 1.0)
    with pytest.raises(InputError):
        downward_expectile(worked, ConeSpec.orthant(1), 0.3)
    with pytest.raises(InputError):
        WeightedSample.from_points([[1.0, 2.0]], [0.0])


def test_recession_property(rng):
    for _ in range(20):
        X = random_sample(rng, 6, 2)
        cone = random_cone_2d(rng)
        D = downward_expectile(X, cone, 0.3)
        U = upward_expectile(X, cone, 0.7)
        z = D.vertices_2d().vertices
        z = z[0] if len(z) else np.zeros(2)
        u = U.vertices_2d().vertices
        u = u[0] if len(u) else np.zeros(2)
        for g in cone.generators_C:
            for t in (0.5, 3.0):
                assert D.contains(z - t * g)
                assert U.contains(u + t * g)


# -- primal/dual agreement ------------------------------------------------


def test_primal_dual_agreement(rng):
    for _ in range(15):
        X = random_sample(rng, rng.integers(1, 7), 2)
        cone = random_cone_2d(rng)
        for alpha in (0.05, 0.25, 0.5):
            a = downward_expectile(X, cone, alpha).offsets
            b = dual_cone_expectile(X, cone, alpha).offsets
            assert np.allclose(a, b, atol=1e-10)
            a = upward_expectile(X, cone, 1 - alpha).offsets
            b = dual_cone_expectile(X, cone, alpha, direction="upward").offsets
            assert np.allclose(a, b, atol=1e-10)


# -- set-valued properties ------------------------------------------------


def test_nesting_in_alpha(rng):
    for _ in range(20):
        X = random_sample(rng, 8, 2)
        cone = random_cone_2d(rng)
        grid = np.sort(rng.uniform(0.01, 0.99, size=6))
        offs = [downward_expectile(X, cone, a).offsets for a in grid]
        for lo, hi in zip(offs, offs[1:]):
            assert np.all(lo <= hi + 1e-12)


def test_monotone_in_sample(rng):
    for _ in range(20):
        X = random_sample(rng, 7, 2)
        cone = random_cone_2d(rng)
        coef = rng.uniform(0, 2, size=(7, cone.generators_C.shape[0]))
        Y = WeightedSample(X.points + coef @ cone.generators_C, X.probabilities)
        for a in (0.1, 0.4, 0.8):
            assert np.all(downward_expectile(X, cone, a).offsets <= downward_expectile(Y, cone, a).offsets + 1e-12)


@given(st.floats(0.05, 20.0), st.floats(0.02, 0.98))
@settings(max_examples=40, deadline=None)
def test_positive_homogeneity(s, alpha):
    X = random_sample(np.random.default_rng(3), 9, 2)
    cone = ConeSpec.from_generators([[1, 0], [1, 2]])
    a = downward_expectile(X.scale(s), cone, alpha).offsets
    b = s * downward_expectile(X, cone, alpha).offsets
    assert np.allclose(a, b, rtol=1e-12, atol=1e-12 * s)


def test_superadditivity_inclusion(rng):
    for _ in range(25):
        X = random_sample(rng, 6, 2)
        Y = WeightedSample(rng.normal(size=(6, 2)), X.probabilities)
        cone = random_cone_2d(rng)
        for alpha in (0.1, 0.3, 0.5):
            EX = downward_expectile(X, cone, alpha)
            EY = downward_expectile(Y, cone, alpha)
            ES = downward_expectile(X + Y, cone, alpha)
            vx, vy = EX.vertices_2d().vertices, EY.vertices_2d().vertices
            for x in vx:
                for y in vy:
                    assert ES.contains(x + y, tol=1e-9)


def test_affine_equivariance(rng):
    for _ in range(20):
        X = random_sample(rng, 6, 2)
        cone = random_cone_2d(rng)
        A = rng.normal(size=(2, 2))
        if abs(np.linalg.det(A)) < 0.2:
            A += 2 * np.eye(2)
        b = rng.normal(size=2)
        alpha = rng.uniform(0.05, 0.5)
        lhs = downward_expectile(X.affine(A, b), transform_cone(A, cone), alpha)
        base = downward_expectile(X, cone, alpha)
        for z in rng.normal(scale=3, size=(100, 2)):
            if np.min(np.abs(base.halfspaces.slack(z))) < 1e-6:
                continue
            assert lhs.contains(A @ z + b) == base.contains(z)


def test_duality_transfer(rng):
    for _ in range(30):
        X = random_sample(rng, 7, 2)
        cone = random_cone_2d(rng)
        alpha = rng.uniform(0.02, 0.98)
        up = upward_expectile(X, cone, 1 - alpha)
        neg = downward_expectile(-X, cone, alpha).halfspaces.negate()
        assert np.allclose(up.offsets, neg.offsets, atol=1e-12)
        assert up.halfspaces.sense == neg.sense


def test_intersection_stability(rng):
    for _ in range(10):
        X = random_sample(rng, 8, 2)
        cone = random_cone_2d(rng)
        alpha = rng.uniform(0.05, 0.9)
        base = downward_expectile(X, cone, alpha).offsets
        for h in (1e-2, 1e-4, 1e-7):
            above = downward_expectile(X, cone, alpha + h).offsets
            assert np.all(above >= base - 1e-12)
        assert np.allclose(downward_expectile(X, cone, alpha + 1e-9).offsets, base, atol=1e-6)


def test_separation_from_region(rng):
    for _ in range(15):
        X = random_sample(rng, 5, 2)
        cone = random_cone_2d(rng)
        alpha = rng.uniform(0.05, 0.5)
        V = region_vertices(X, alpha).vertices
        lo = downward_expectile(X, cone, alpha).offsets
        hi = upward_expectile(X, cone, 1 - alpha).offsets
        proj = V @ cone.generators_Cplus.T
        assert np.all(lo <= proj.min(axis=0) + 1e-9)
        assert np.all(hi >= proj.max(axis=0) - 1e-9)


def test_workers_deterministic(rng):
    X = random_sample(rng, 30, 2)
    W = np.column_stack([np.cos(np.linspace(0, 1.2, 12)), np.sin(np.linspace(0, 1.2, 12))])
    cone = ConeSpec(2, None, W)
    a = directional_expectiles(X, cone, 0.2)
    b = directional_expectiles(X, cone, 0.2, workers=4)
    assert np.array_equal(a, b)


# -- risk measure ---------------------------------------------------------


def test_risk_of_zero_is_cone():
    X = WeightedSample.from_points([[0.0, 0.0]])
    R = risk_measure(X, ConeSpec.orthant(2), 0.25)
    assert np.allclose(R.offsets, 0)
    assert R.contains([0, 0]) and R.contains([1, 3])
    assert not R.contains([-1e-6, 1], tol=0)


def test_risk_worked(worked, orthant2):
    R = risk_measure(worked, orthant2, 0.25)
    assert np.allclose(R.offsets, [-3.6, 0.0], atol=1e-12)
    assert R.halfspaces.sense == ">="


def test_risk_translativity(worked, orthant2):
    z = np.array([1.0, 2.0])
    a = risk_measure(worked + z, orthant2, 0.25).halfspaces
    b = risk_measure(worked, orthant2, 0.25).halfspaces.translate(-z)
    assert np.allclose(a.offsets, b.offsets, atol=1e-12)


def test_risk_requires_orthant(worked):
    with pytest.raises(ModelError):
        risk_measure(worked, ConeSpec.from_generators([[1, 0], [1, -1]]), 0.25)
    with pytest.raises(ParameterError):
        risk_measure(worked, ConeSpec.orthant(2), 0.6)


# -- stochastic orders ----------------------------------------------------


def test_lower_order_examples(worked, orthant2):
    assert lower_expectile_order(worked, worked + np.array([1.0, 1.0]), orthant2).holds
    cert = lower_expectile_order(worked, worked, orthant2)
    assert cert.holds and cert.witness is None
    assert cert.grid == DEFAULT_ALPHA_GRID and len(cert.grid) == 99


def test_lower_order_witness():
    # e_a({0,1}) = a and e_a({0.4,0.5}) = 0.4 + a/10, crossing at a = 4/9
    cert = lower_expectile_order(d1([0, 1]), d1([0.4, 0.5]), R_PLUS)
    assert not cert.holds
    assert cert.witness == (0.45, 0)
    assert lower_expectile_order(d1([0, 1]), d1([0.4, 0.5]), R_PLUS, [0.1, 0.2, 0.44]).holds


def test_upper_order_examples(worked, orthant2):
    assert upper_expectile_order(worked, worked + np.array([1.0, 1.0]), orthant2).holds
    assert upper_expectile_order(worked, worked, orthant2).holds


def test_lower_and_upper_orders_diverge():
    # e_a({0,10}) = 10a and e_a({4,5}) = 4 + a, so the two orders test different levels
    X, Y = d1([0, 10]), d1([4, 5])
    assert lower_expectile_order(X, Y, R_PLUS, [0.2]).holds
    up = upper_expectile_order(X, Y, R_PLUS, [0.2])
    assert not up.holds and up.witness == (0.2, 0)


def test_order_grid_validation(worked, orthant2):
    with pytest.raises(ParameterError):
        lower_expectile_order(worked, worked, orthant2, [0.0, 0.5])


def test_order_matches_offset_inclusion(rng):
    for _ in range(20):
        X = random_sample(rng, 5, 2)
        Y = random_sample(rng, 5, 2)
        cone = random_cone_2d(rng)
        grid = [0.1, 0.3, 0.5]
        cert = lower_expectile_order(X, Y, cone, grid)
        incl = all(
            np.all(downward_expectile(X, cone, a).offsets <= downward_expectile(Y, cone, a).offsets + 1e-9)
            for a in grid
        )
        assert cert.holds == incl


def test_projection_consistent_with_scalar(worked):
    w = np.array([0.6, 0.8])
    assert directional_expectiles(worked, ConeSpec(2, None, [w]), 0.3)[0] == pytest.approx(
        expectile(worked.project(w), 0.3), abs=1e-14
    )
    assert contains(downward_expectile(worked, ConeSpec.orthant(2), 0.25).halfspaces, [3, -1])
