import numpy as np

from expectile_sets import ConeSpec, WeightedSample

WORKED_POINTS = [[5.0, 2.0], [4.0, -1.0], [3.0, 1.0]]


def random_sample(rng, n, d, weighted=True, scale=1.0):
    pts = rng.normal(size=(n, d)) * scale
    w = rng.uniform(0.2, 1.0, size=n) if weighted else None
    return WeightedSample.from_points(pts, w)


def random_cone_2d(rng):
    """A random pointed planar cone given by two generators of C."""
    a = rng.uniform(0, 2 * np.pi)
    width = rng.uniform(0.1, np.pi - 0.1)
    g = [[np.cos(a), np.sin(a)], [np.cos(a + width), np.sin(a + width)]]
    return ConeSpec.from_generators(g)
