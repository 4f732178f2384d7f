"""Cone expectiles, expectile regions, expectile risk measures and expectile
rank functions for finite weighted samples in R^d."""

from .cone_expectile import (
    ConeExpectileSet,
    OrderCertificate,
    WeightedSample,
    downward_expectile,
    lower_expectile_order,
    risk_measure,
    upper_expectile_order,
    upward_expectile,
)
from .errors import (
    ExpectileError,
    InputError,
    ModelError,
    ParameterError,
    SizeLimitError,
    UnsupportedConeError,
    UnsupportedDimensionError,
)
from .geometry import (
    ConeSpec,
    HalfspaceSet,
    RegionPolytope,
    contains,
    convex_hull_2d,
    dual_cone_2d,
    transform_cone,
    vertices_2d,
)
from .rank_order import compare, downward_rank, infer_cone_order, rank, stochastic_order_rank_check, upward_rank
from .scalar import ScalarSample, dual_expectile_oracle, expectile, inverse_expectile
from .scenario_dual import (
    ScenarioPolytope,
    dual_cone_expectile,
    region_primal_2d,
    region_vertices,
    scenario_vertices,
)

__version__ = "0.1.0"

__all__ = [
    "ConeExpectileSet",
    "ConeSpec",
    "ExpectileError",
    "HalfspaceSet",
    "InputError",
    "ModelError",
    "OrderCertificate",
    "ParameterError",
    "RegionPolytope",
    "ScalarSample",
    "ScenarioPolytope",
    "SizeLimitError",
    "UnsupportedConeError",
    "UnsupportedDimensionError",
    "WeightedSample",
    "compare",
    "contains",
    "convex_hull_2d",
    "downward_expectile",
    "downward_rank",
    "dual_cone_2d",
    "dual_cone_expectile",
    "dual_expectile_oracle",
    "expectile",
    "infer_cone_order",
    "inverse_expectile",
    "lower_expectile_order",
    "rank",
    "region_primal_2d",
    "region_vertices",
    "risk_measure",
    "scenario_vertices",
    "stochastic_order_rank_check",
    "transform_cone",
    "upper_expectile_order",
    "upward_expectile",
    "upward_rank",
    "vertices_2d",
]
