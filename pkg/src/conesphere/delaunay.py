"""Intrinsic Delaunay predicate, spherical flips, and flip-to-Delaunay.

An edge is Delaunay when the two angles opposite it, measured in the chord
metric (straight chords 2 sin(l/2) for spherical arcs, the lengths
themselves for Euclidean metrics), sum to at most pi.  This single Euclidean
criterion covers both geometries: chords of a spherical cone-metric form a
Euclidean cone-metric with the same Delaunay edges.

Flipping a spherical edge is intrinsic: the two triangles are developed on
the unit sphere and the new diagonal is read off with the spherical law of
cosines.  Computing the new diagonal through the chord metric would be
wrong -- chords of a developed quadrilateral are not a planar development.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import trig
from .errors import (
    DegenerateTriangle,
    DiagonalOutOfRange,
    IterationCap,
    NonConvexQuad,
)
from .metric import (
    EuclideanConeMetric,
    SphericalConeMetric,
    _ConeMetric,
    corner_angles,
)
from .surface import TriangulatedSurface
from .trig import ideal_h_length

FLAT_TOL = 1e-10
CAP_FACTOR = 10  # flip budget: CAP_FACTOR * edge_count**2


@dataclass
class FlipReport:
    flips_performed: int = 0
    flipped_edge_ids: list = field(default_factory=list)
    iterations_capped: bool = False


def _chord_lengths(metric: _ConeMetric) -> np.ndarray:
    if metric.spherical:
        return 2.0 * np.sin(metric.lengths / 2.0)
    return metric.lengths


def _opposite_chord_angle(surface, chords, slot, nxt, nxt2) -> float:
    a = chords[surface.corner_edge[slot]]
    b = chords[surface.corner_edge[nxt[slot]]]
    c = chords[surface.corner_edge[nxt2[slot]]]
    return float(trig._angles_opposite(a, b, c, spherical=False)[0])


def _angle_sums(surface, chords) -> np.ndarray:
    """Per edge, the sum of the two chord-metric angles opposite it; edges
    with both sides in one triangle report 0 (always Delaunay)."""
    nxt, nxt2 = surface._index_arrays()
    a = chords[surface.corner_edge]
    b = chords[surface.corner_edge[nxt]]
    c = chords[surface.corner_edge[nxt2]]
    ang = trig._angles_opposite(a, b, c, spherical=False)
    ec = surface.edge_corners
    sums = ang[ec[:, 0]] + ang[ec[:, 1]]
    sums[ec[:, 0] // 3 == ec[:, 1] // 3] = 0.0
    return sums


def opposite_angle_sums(metric: _ConeMetric) -> np.ndarray:
    """Per edge, the sum of the two chord-metric angles opposite it."""
    return _angle_sums(metric.surface, _chord_lengths(metric))


def is_delaunay_edge(metric: _ConeMetric, edge: int, tol: float = FLAT_TOL) -> bool:
    """True when the opposite chord angles sum to at most pi + tol.

    An edge whose two sides lie in the same triangle is always Delaunay.
    """
    surf = metric.surface
    s1, s2 = (int(s) for s in surf.edge_corners[edge])
    if s1 // 3 == s2 // 3:
        return True
    nxt, nxt2 = surf._index_arrays()
    chords = _chord_lengths(metric)
    total = (_opposite_chord_angle(surf, chords, s1, nxt, nxt2)
             + _opposite_chord_angle(surf, chords, s2, nxt, nxt2))
    return total <= np.pi + tol


def _corner_angle(lengths, surface, slot, nxt, nxt2, spherical) -> float:
    a = lengths[surface.corner_edge[slot]]
    b = lengths[surface.corner_edge[nxt[slot]]]
    c = lengths[surface.corner_edge[nxt2[slot]]]
    return float(trig._angles_opposite(a, b, c, spherical=spherical)[0])


def _flip_length(surface, lengths, edge, spherical,
                 require_convex: bool = False) -> float:
    """Length of the new diagonal when ``edge`` is flipped, by developing
    the two adjacent triangles side by side.

    The development distance is read off along a flank (an endpoint of the
    flipped edge) with the law of cosines; it does not depend on the flank
    chosen, but a flank whose total angle stays convex is preferred for
    conditioning.  With ``require_convex`` (the flip-to-Delaunay engine), a
    reflex flank is an error: such a flip would not re-tile the surface.
    """
    q = surface.flip_quad(edge)
    nxt, nxt2 = surface._index_arrays()
    theta_p = (_corner_angle(lengths, surface, q.c1, nxt, nxt2, spherical)
               + _corner_angle(lengths, surface, q.c2p, nxt, nxt2, spherical))
    theta_q = (_corner_angle(lengths, surface, q.c2, nxt, nxt2, spherical)
               + _corner_angle(lengths, surface, q.c1p, nxt, nxt2, spherical))
    convex_p = theta_p <= np.pi + 1e-12
    convex_q = theta_q <= np.pi + 1e-12
    if (require_convex and not (convex_p and convex_q)) or \
            not (convex_p or convex_q):
        raise NonConvexQuad(
            f"edge {edge}: flank angles {theta_p:.6f}, {theta_q:.6f} exceed pi"
        )
    if convex_p:
        b1, b2, theta = lengths[q.e2], lengths[q.e1p], theta_p
    else:
        b1, b2, theta = lengths[q.e1], lengths[q.e2p], theta_q
    if spherical:
        cos_d = (np.cos(b1) * np.cos(b2)
                 + np.sin(b1) * np.sin(b2) * np.cos(theta))
        if not -1.0 + 1e-12 < cos_d < 1.0 - 1e-12:
            raise DiagonalOutOfRange(
                f"edge {edge}: flipped diagonal leaves (0, pi) (cos = {cos_d:.6f})"
            )
        return float(np.arccos(cos_d))
    d2 = b1 * b1 + b2 * b2 - 2.0 * b1 * b2 * np.cos(theta)
    if d2 <= 0.0:
        raise DiagonalOutOfRange(f"edge {edge}: flipped diagonal collapses")
    return float(np.sqrt(d2))


def spherical_flip_length(metric: SphericalConeMetric, edge: int) -> float:
    """New arc of ``edge``'s diagonal after a flip, in (0, pi)."""
    return _flip_length(metric.surface, metric.lengths, edge, spherical=True)


def flip_to_delaunay(surface: TriangulatedSurface, lengths: np.ndarray,
                     spherical: bool, tol: float = FLAT_TOL,
                     max_flips: int | None = None, on_flip=None) -> FlipReport:
    """Flip non-Delaunay edges (FIFO) until none remain.  Mutates ``surface``
    and ``lengths``; ``on_flip(edge, quad, new_length)`` runs after each flip
    so callers can maintain per-edge side data."""
    if max_flips is None:
        max_flips = CAP_FACTOR * surface.edge_count ** 2
    nxt, nxt2 = surface._index_arrays()
    report = FlipReport()
    chords = 2.0 * np.sin(lengths / 2.0) if spherical else lengths
    bad = np.nonzero(_angle_sums(surface, chords) > np.pi + tol)[0]
    if bad.size == 0:
        return report
    queue = deque(int(e) for e in bad)
    queued = np.zeros(surface.edge_count, dtype=bool)
    queued[bad] = True
    while queue:
        e = queue.popleft()
        queued[e] = False
        s1, s2 = (int(s) for s in surface.edge_corners[e])
        if s1 // 3 == s2 // 3:
            continue
        chords = 2.0 * np.sin(lengths / 2.0) if spherical else lengths
        total = (_opposite_chord_angle(surface, chords, s1, nxt, nxt2)
                 + _opposite_chord_angle(surface, chords, s2, nxt, nxt2))
        if total <= np.pi + tol:
            continue
        if report.flips_performed >= max_flips:
            report.iterations_capped = True
            raise IterationCap(
                f"flip budget {max_flips} exhausted; mesh data is likely corrupt",
                report=report,
            )
        new_len = _flip_length(surface, lengths, e, spherical, require_convex=True)
        quad = surface._flip_inplace(e)
        lengths[e] = new_len
        report.flips_performed += 1
        report.flipped_edge_ids.append(e)
        if on_flip is not None:
            on_flip(e, quad, new_len)
        for nb in (quad.e1, quad.e2, quad.e1p, quad.e2p, e):
            if not queued[nb]:
                queue.append(nb)
                queued[nb] = True
    return report


def make_delaunay(metric: _ConeMetric, tol: float = FLAT_TOL,
                  max_flips: int | None = None):
    """Flip the metric to an intrinsic Delaunay triangulation.

    Returns ``(metric', FlipReport)``; the result is isometric to the input
    (flips re-triangulate, they never change the metric).
    """
    surf = metric.surface.copy()
    lengths = metric.lengths.copy()
    report = flip_to_delaunay(surf, lengths, metric.spherical, tol=tol,
                              max_flips=max_flips)
    out = type(metric)(surf, lengths)
    return out, report


@dataclass
class LinkGeometry:
    """Per-corner horospherical link data (arrays of length 3F).

    For the corner at vertex ``x`` with opposite edge ``e`` joining ``a`` and
    ``b`` (directed as seen from this triangle), the tetrahedron over the
    triangle cuts a Euclidean triangle from the canonical horosphere at
    ``a`` with sides ``lam`` (along the ideal face), ``rho_ab`` (in the face
    over edge ``e``) and ``rho_ax`` (in the face over edge ``a``-``x``).
    ``alpha`` is the angle opposite ``rho_ax``: the dihedral angle along the
    ideal edge over ``e`` contributed by this triangle.
    """

    alpha: np.ndarray
    lam: np.ndarray
    rho_ab: np.ndarray
    rho_ax: np.ndarray
    tail: np.ndarray   # a, per corner
    head: np.ndarray   # b, per corner


def link_geometry(surface: TriangulatedSurface, lengths: np.ndarray,
                  penner: np.ndarray, u: np.ndarray) -> LinkGeometry:
    """Horospherical link triangles of the decorated polyhedron, per corner."""
    nxt, nxt2 = surface._index_arrays()
    ce = surface.corner_edge
    cv = surface.corner_vertex
    e_ab = ce
    e_ax = ce[nxt2]
    a_vert = cv[nxt]
    b_vert = cv[nxt2]
    x_vert = cv
    lam = ideal_h_length(penner[ce[nxt]], penner[e_ab], penner[e_ax])
    rho_ab = 0.5 * np.sin(lengths[e_ab]) * np.exp(u[b_vert] - penner[e_ab])
    rho_ax = 0.5 * np.sin(lengths[e_ax]) * np.exp(u[x_vert] - penner[e_ax])
    trig._check_euclidean_sides(rho_ax, lam, rho_ab)
    alpha = trig._angles_opposite(rho_ax, lam, rho_ab, spherical=False)
    return LinkGeometry(alpha=alpha, lam=lam, rho_ab=rho_ab, rho_ax=rho_ax,
                        tail=a_vert, head=b_vert)


def delaunay_dihedral_angles(chart, u) -> np.ndarray:
    """(E, 2) boundary dihedral angles (alpha+, alpha-) of the decorated
    polyhedron over the chart at ``u``, one per side of each edge.

    Requires the chart's triangulation to be Delaunay at ``u`` (sums stay
    below pi up to tolerance); evaluate the chart first if flips are needed.
    """
    u = np.asarray(u, float)
    lengths = chart.lengths_at(u)
    geo = link_geometry(chart.surface, lengths, chart.penner, u)
    ec = chart.surface.edge_corners
    return np.column_stack((geo.alpha[ec[:, 0]], geo.alpha[ec[:, 1]]))
