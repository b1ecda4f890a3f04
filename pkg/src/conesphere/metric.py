"""Edge-length cone-metrics on a triangulated surface.

A spherical metric assigns each edge an arc in (0, pi) such that every
triangle is a convex spherical triangle (strict triangle inequalities,
perimeter < 2*pi); a Euclidean metric only needs strict triangle
inequalities.  The chord map replaces each arc l by the straight chord
2 sin(l/2) subtended on the unit sphere; it identifies the spherical
picture with a Euclidean one whose triangles all have circumradius < 1.
"""

from __future__ import annotations

import numpy as np

from . import trig
from .errors import DegenerateTriangle, NotInImage
from .surface import TriangulatedSurface


def triangle_slacks(surface: TriangulatedSurface, lengths: np.ndarray,
                    spherical: bool) -> tuple[np.ndarray, np.ndarray]:
    """Per-triangle minimal triangle-inequality slack and perimeter."""
    le = np.asarray(lengths, float)[surface.triangle_edges()]
    perim = le.sum(axis=1)
    slack = perim - 2.0 * le.max(axis=1)
    return slack, perim


def _validate_lengths(surface, lengths, spherical, margin):
    lengths = np.asarray(lengths, float)
    if lengths.shape != (surface.edge_count,):
        raise ValueError("lengths must have one entry per edge")
    if spherical:
        if (lengths <= 0).any() or (lengths >= np.pi).any():
            e = int(np.nonzero((lengths <= 0) | (lengths >= np.pi))[0][0])
            raise DegenerateTriangle(f"edge {e}: spherical arc outside (0, pi)")
    elif (lengths <= 0).any():
        e = int(np.nonzero(lengths <= 0)[0][0])
        raise DegenerateTriangle(f"edge {e}: non-positive length")
    slack, perim = triangle_slacks(surface, lengths, spherical)
    if (slack <= margin).any():
        t = int(np.argmin(slack))
        raise DegenerateTriangle(
            f"triangle {t}: triangle inequality slack {slack[t]:.3e} <= {margin:.0e}"
        )
    if spherical and (perim >= 2 * np.pi - margin).any():
        t = int(np.argmax(perim))
        raise DegenerateTriangle(
            f"triangle {t}: perimeter {perim[t]:.12f} reaches 2*pi"
        )
    return lengths


class _ConeMetric:
    spherical: bool

    def __init__(self, surface: TriangulatedSurface, lengths, *,
                 margin: float = 1e-12, validate: bool = True):
        self.surface = surface
        if validate:
            self.lengths = _validate_lengths(surface, lengths, self.spherical, margin)
        else:
            self.lengths = np.asarray(lengths, float)

    def copy(self):
        return type(self)(self.surface.copy(), self.lengths.copy(), validate=False)


class SphericalConeMetric(_ConeMetric):
    spherical = True


class EuclideanConeMetric(_ConeMetric):
    spherical = False


def corner_angles(metric: _ConeMetric) -> np.ndarray:
    """Interior angle at every corner, from its triangle's three lengths."""
    surf = metric.surface
    nxt, nxt2 = surf._index_arrays()
    l = metric.lengths
    a = l[surf.corner_edge]
    b = l[surf.corner_edge[nxt]]
    c = l[surf.corner_edge[nxt2]]
    try:
        return trig._angles_opposite(a, b, c, spherical=metric.spherical)
    except DegenerateTriangle:
        slack, _ = triangle_slacks(surf, l, metric.spherical)
        t = int(np.argmin(slack))
        raise DegenerateTriangle(f"triangle {t} is degenerate (slack {slack[t]:.3e})")


def vertex_curvature(metric: _ConeMetric) -> np.ndarray:
    """2*pi minus the total angle at each vertex."""
    ang = corner_angles(metric)
    omega = np.bincount(metric.surface.corner_vertex, weights=ang,
                        minlength=metric.surface.vertex_count)
    return 2.0 * np.pi - omega


def chord_map(metric: SphericalConeMetric) -> EuclideanConeMetric:
    """Replace each arc l by the chord 2 sin(l/2) (same surface)."""
    return EuclideanConeMetric(metric.surface, 2.0 * np.sin(metric.lengths / 2.0),
                               validate=False)


def circumradius_check(metric: EuclideanConeMetric):
    """Per-triangle circumradius R = abc/(4*area); flags triangles with R >= 1.

    Returns ``(radii, flagged)``.
    """
    l = metric.lengths[metric.surface.triangle_edges()]
    a, b, c = l[:, 0], l[:, 1], l[:, 2]
    # Kahan's numerically stable Heron form (sides sorted descending).
    s = np.sort(l, axis=1)[:, ::-1]
    x, y, z = s[:, 0], s[:, 1], s[:, 2]
    area2 = (x + (y + z)) * (z - (x - y)) * (z + (x - y)) * (x + (y - z))
    area = 0.25 * np.sqrt(np.maximum(area2, 0.0))
    with np.errstate(divide="ignore"):
        radii = a * b * c / (4.0 * area)
    return radii, radii >= 1.0


def inverse_chord_map(metric: EuclideanConeMetric) -> SphericalConeMetric:
    """Invert the chord map: l = 2 arcsin(length/2).

    Only Euclidean metrics whose chords are < 2 and whose triangles all have
    circumradius < 1 subtend a spherical metric.
    """
    if (metric.lengths >= 2.0).any():
        e = int(np.nonzero(metric.lengths >= 2.0)[0][0])
        raise NotInImage(f"edge {e}: chord {metric.lengths[e]:.6f} >= 2")
    radii, flagged = circumradius_check(metric)
    if flagged.any():
        t = int(np.nonzero(flagged)[0][0])
        raise NotInImage(f"triangle {t}: circumradius {radii[t]:.6f} >= 1")
    return SphericalConeMetric(metric.surface, 2.0 * np.arcsin(metric.lengths / 2.0))


def gauss_bonnet(metric: SphericalConeMetric):
    """Total curvature, total area, and the residual of their sum against
    4*pi.  The area of a convex spherical triangle is its angle excess."""
    ang = corner_angles(metric)
    kappa = 2.0 * np.pi - np.bincount(metric.surface.corner_vertex, weights=ang,
                                      minlength=metric.surface.vertex_count)
    area = float(ang.sum() - np.pi * metric.surface.triangle_count)
    total = float(kappa.sum())
    return total, area, total + area - 4.0 * np.pi
