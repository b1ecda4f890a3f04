"""Shared helpers: unit-sphere embeddings as independent oracles, and a
doubled-quadrilateral fixture whose front diagonal can be probed directly
against embedded geometry."""

import numpy as np
import pytest

from conesphere import SphericalConeMetric, build, gauss_bonnet


def arc(p, q) -> float:
    """Geodesic distance between unit vectors (atan2 form, stable near 0/pi)."""
    p, q = np.asarray(p, float), np.asarray(q, float)
    return float(np.arctan2(np.linalg.norm(np.cross(p, q)), np.dot(p, q)))


def tangent_angle(center, q, r) -> float:
    """Angle at ``center`` between the geodesics toward ``q`` and ``r``."""
    center = np.asarray(center, float)

    def tang(x):
        t = np.asarray(x, float) - np.dot(x, center) * center
        return t / np.linalg.norm(t)

    return float(np.arccos(np.clip(np.dot(tang(q), tang(r)), -1.0, 1.0)))


def cap_strictly_contains(a, b, c, x, tol=1e-12) -> bool:
    """Does the circumscribed spherical cap of triangle (a, b, c) strictly
    contain the point ``x``?  All inputs are unit vectors."""
    a, b, c, x = (np.asarray(v, float) for v in (a, b, c, x))
    n = np.cross(b - a, c - a)
    n = n / np.linalg.norm(n)
    h = float(np.dot(n, a))
    g = (a + b + c) / 3.0
    g = g / np.linalg.norm(g)
    if np.dot(n, g) < h:          # orient the cap toward the triangle
        n, h = -n, -h
    return bool(np.dot(n, x) > h + tol)


def doubled_quad(points) -> tuple[SphericalConeMetric, int]:
    """Double of the spherical quadrilateral through four unit vectors
    (cyclic order), both sides triangulated by the (q0, q2) diagonal.

    Returns the metric and the edge id of the front diagonal.  Edge ids:
    0..3 are the boundary sides q0q1, q1q2, q2q3, q3q0; 4 and 5 are the
    front and back diagonals.
    """
    p = [np.asarray(v, float) for v in points]
    tris = [
        ((0, 1, 2), (1, 4, 0)),
        ((0, 2, 3), (2, 3, 4)),
        ((2, 1, 0), (0, 5, 1)),
        ((3, 2, 0), (5, 3, 2)),
    ]
    surf = build(4, tris)
    lengths = np.array([arc(p[0], p[1]), arc(p[1], p[2]), arc(p[2], p[3]),
                        arc(p[3], p[0]), arc(p[0], p[2]), arc(p[0], p[2])])
    return SphericalConeMetric(surf, lengths), 4


def random_cap_points(rng, n, min_z=0.35) -> list[np.ndarray]:
    """Random unit vectors in the cap z >= min_z (keeps quads hemisphere-sized)."""
    out = []
    while len(out) < n:
        v = rng.normal(size=3)
        v = v / np.linalg.norm(v)
        if v[2] >= min_z:
            out.append(v)
    return out


def random_convex_quad(rng):
    """Four cap points in cyclic position whose doubled quad is a valid
    spherical metric and whose embedded picture is the intrinsic development
    (the two apexes sit on opposite sides of the diagonal's great circle)."""
    while True:
        pts = random_cap_points(rng, 4)
        center = sum(pts) / 4.0
        center = center / np.linalg.norm(center)
        east = np.cross([0.0, 0.0, 1.0], center)
        east = east / np.linalg.norm(east)
        north = np.cross(center, east)
        ang = [np.arctan2(np.dot(p, north), np.dot(p, east)) for p in pts]
        pts = [pts[i] for i in np.argsort(ang)]
        m = np.cross(pts[0], pts[2])
        if np.dot(m, pts[1]) * np.dot(m, pts[3]) >= -1e-10:
            continue
        try:
            metric, diag = doubled_quad(pts)
        except Exception:
            continue
        return pts, metric, diag


def assert_gauss_bonnet(metric, factor=1e-10):
    total, area, resid = gauss_bonnet(metric)
    assert abs(resid) < factor * metric.surface.vertex_count, (total, area, resid)


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)
