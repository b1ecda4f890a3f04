"""Bundled Platonic fixtures: combinatorics plus round spherical lengths.

The round metrics place the vertices on the unit sphere, so every vertex is
a smooth point (curvature zero); they are the natural base points for
conformal charts and for perturbation studies.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial import ConvexHull

from .metric import SphericalConeMetric
from .surface import TriangulatedSurface, surface_from_faces

_PHI = (1.0 + np.sqrt(5.0)) / 2.0

TETRAHEDRON_ARC = float(np.arccos(-1.0 / 3.0))
OCTAHEDRON_ARC = float(np.pi / 2.0)
ICOSAHEDRON_ARC = float(np.arccos(1.0 / np.sqrt(5.0)))


def _hull_faces(points: np.ndarray):
    """Outward-oriented faces of a convex polytope around the origin,
    canonically sorted for reproducibility."""
    hull = ConvexHull(points)
    faces = []
    for a, b, c in hull.simplices:
        if np.linalg.det(points[[a, b, c]]) < 0:
            a, b, c = a, c, b
        i = int(np.argmin([a, b, c]))
        f = (a, b, c)
        faces.append(tuple(int(v) for v in (f[i:] + f[:i])))
    return sorted(faces)


def tetrahedron_vertices() -> np.ndarray:
    p = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], float)
    return p / np.sqrt(3.0)


def octahedron_vertices() -> np.ndarray:
    return np.array([[1, 0, 0], [-1, 0, 0], [0, 1, 0],
                     [0, -1, 0], [0, 0, 1], [0, 0, -1]], float)


def icosahedron_vertices() -> np.ndarray:
    p = []
    for s1 in (1, -1):
        for s2 in (1, -1):
            p += [(0, s1, s2 * _PHI), (s1, s2 * _PHI, 0), (s2 * _PHI, 0, s1)]
    return np.asarray(p, float) / np.sqrt(1.0 + _PHI ** 2)


def _surface_from_points(points) -> tuple[TriangulatedSurface, list]:
    return surface_from_faces(len(points), _hull_faces(points))


def tetrahedron_surface() -> TriangulatedSurface:
    return _surface_from_points(tetrahedron_vertices())[0]


def octahedron_surface() -> TriangulatedSurface:
    return _surface_from_points(octahedron_vertices())[0]


def icosahedron_surface() -> TriangulatedSurface:
    return _surface_from_points(icosahedron_vertices())[0]


def _equilateral(surface, arc) -> SphericalConeMetric:
    return SphericalConeMetric(surface, np.full(surface.edge_count, arc))


def tetrahedron() -> SphericalConeMetric:
    return _equilateral(tetrahedron_surface(), TETRAHEDRON_ARC)


def octahedron() -> SphericalConeMetric:
    return _equilateral(octahedron_surface(), OCTAHEDRON_ARC)


def icosahedron() -> SphericalConeMetric:
    return _equilateral(icosahedron_surface(), ICOSAHEDRON_ARC)


def equilateral_arc_for_angle(beta: float) -> float:
    """Edge arc of the equilateral spherical triangle with interior angle
    ``beta``: cos l = cos(beta) / (1 - cos(beta)).

    Valid for beta in (pi/3, pi); the arc stays below 2*pi/3, which keeps the
    triangle perimeter below 2*pi and the chord circumradius below 1.
    """
    if not np.pi / 3.0 < beta < np.pi:
        raise ValueError("equilateral corner angle must lie in (pi/3, pi)")
    cb = np.cos(beta)
    return float(np.arccos(cb / (1.0 - cb)))


def icosahedron_equilateral(beta: float) -> SphericalConeMetric:
    """Icosahedral combinatorics with all edges at the equilateral arc for
    interior angle ``beta``."""
    return _equilateral(icosahedron_surface(), equilateral_arc_for_angle(beta))
