"""Conformal charts: decorated edge coordinates plus per-vertex factors.

A chart fixes a Delaunay base metric through its decorated hyperbolic edge
coordinates ``a_e = 2 log sin(l_e/2)``.  A factor vector ``u`` then induces
arcs through

    sin(l_e(u)/2) = exp((a_e - u_v - u_w) / 2),

so ``u = 0`` reproduces the base metric and raising ``u`` uniformly shrinks
it toward its Euclidean chord shadow.  Evaluating the curvature at ``u``
restores the Delaunay property by intrinsic flips first; a flipped diagonal
gets a fresh coordinate from the same relation read backwards at the
current ``u``, which keeps the decorated structure coherent across
re-triangulations.

The curvature map u -> kappa(u) has a closed-form Jacobian assembled from
the horospherical link triangles of the decorated polyhedron over the chart;
``jacobian_fd`` provides the finite-difference oracle for it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import delaunay as _delaunay
from . import metric as _metric
from .errors import (
    DegenerateTriangle,
    LengthOutOfRange,
    NearFlatEdge,
    OutsideChart,
)
from .metric import SphericalConeMetric
from .surface import TriangulatedSurface

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


@dataclass
class ConformalClassChart:
    """Immutable chart for one discrete conformal class.

    ``surface`` must be Delaunay for the base metric; ``penner`` holds the
    per-edge decorated coordinates at the base point ``u = 0``.
    """

    surface: TriangulatedSurface
    penner: np.ndarray

    @property
    def vertex_count(self) -> int:
        return self.surface.vertex_count

    def base_lengths(self) -> np.ndarray:
        return 2.0 * np.arcsin(np.exp(self.penner / 2.0))

    def lengths_at(self, u) -> np.ndarray:
        u = np.asarray(u, float)
        ev = self.surface.edge_vertices()
        return _lengths_from_penner(self.penner, u, ev)

    def base_metric(self) -> SphericalConeMetric:
        return SphericalConeMetric(self.surface, self.base_lengths())


@dataclass
class CurvatureEvaluation:
    """Curvature at one chart point, after Delaunay maintenance.

    ``triangulation``/``lengths``/``penner`` describe the (possibly flipped)
    state at ``u``; ``kappa`` is its per-vertex curvature.  When no flips
    were needed, ``triangulation`` and ``penner`` are shared with the chart;
    treat them as read-only.
    """

    u: np.ndarray
    triangulation: TriangulatedSurface
    lengths: np.ndarray
    kappa: np.ndarray
    flip_report: _delaunay.FlipReport
    penner: np.ndarray

    def metric(self) -> SphericalConeMetric:
        return SphericalConeMetric(self.triangulation, self.lengths, validate=False)


def _lengths_from_penner(penner, u, edge_vertices) -> np.ndarray:
    expo = penner - u[edge_vertices[:, 0]] - u[edge_vertices[:, 1]]
    bad = np.nonzero(expo >= 0.0)[0]
    if bad.size:
        e = int(bad[0])
        raise LengthOutOfRange(
            f"edge {e}: exp(a - u_v - u_w) = {np.exp(expo[e]):.6f} >= 1, "
            "the induced arc leaves (0, pi)",
            edge=e,
        )
    return 2.0 * np.arcsin(np.exp(expo / 2.0))


def chart_from_metric(metric: SphericalConeMetric) -> ConformalClassChart:
    """Chart with the given Delaunay metric as base point:
    ``a_e = 2 log sin(l_e / 2)``."""
    sums = _delaunay.opposite_angle_sums(metric)
    worst = float(sums.max())
    if worst > np.pi + _delaunay.FLAT_TOL:
        raise ValueError(
            f"base metric is not Delaunay (opposite angle sum {worst:.9f} > pi); "
            "run make_delaunay first"
        )
    penner = 2.0 * np.log(np.sin(metric.lengths / 2.0))
    return ConformalClassChart(surface=metric.surface.copy(), penner=penner)


def lengths_at(chart: ConformalClassChart, u) -> np.ndarray:
    """Arcs induced on the chart's triangulation by the factor vector ``u``.

    Triangle validity is not checked here; callers that need a metric go
    through ``kappa_of_u``.
    """
    return chart.lengths_at(u)


def kappa_of_u(chart: ConformalClassChart, u, *, margin: float = 1e-12,
               tol: float = _delaunay.FLAT_TOL) -> CurvatureEvaluation:
    """Curvature of the metric at chart point ``u``.

    Induces the arcs, restores the Delaunay property by intrinsic flips
    (rewriting the flipped edge's decorated coordinate at the current ``u``),
    and reads off vertex curvatures.  Raises ``OutsideChart`` when the
    induced lengths do not form a valid metric.
    """
    u = np.asarray(u, float)
    surf = chart.surface
    penner = chart.penner
    try:
        lengths = _lengths_from_penner(penner, u, surf.edge_vertices())
    except LengthOutOfRange as exc:
        raise OutsideChart(f"no valid metric at this chart point: {exc}") from exc

    def check_valid():
        slack, perim = _metric.triangle_slacks(surf, lengths, spherical=True)
        t = int(np.argmin(slack))
        if slack[t] <= margin:
            raise OutsideChart(
                f"triangle {t} degenerates at this chart point "
                f"(slack {slack[t]:.3e})"
            )
        t = int(np.argmax(perim))
        if perim[t] >= 2.0 * np.pi - margin:
            raise OutsideChart(
                f"triangle {t} perimeter reaches 2*pi at this chart point"
            )

    check_valid()

    chords = 2.0 * np.sin(lengths / 2.0)
    needs_flips = (_delaunay._angle_sums(surf, chords) > np.pi + tol).any()
    if needs_flips:
        surf = surf.copy()
        penner = penner.copy()

        def rewrite_penner(edge, quad, new_len):
            penner[edge] = (u[quad.x] + u[quad.y]
                            + 2.0 * np.log(np.sin(new_len / 2.0)))
            check_valid()

        report = _delaunay.flip_to_delaunay(surf, lengths, spherical=True,
                                            tol=tol, on_flip=rewrite_penner)
    else:
        report = _delaunay.FlipReport()
    kappa = _metric.vertex_curvature(
        SphericalConeMetric(surf, lengths, validate=False))
    return CurvatureEvaluation(u=u.copy(), triangulation=surf, lengths=lengths,
                               kappa=kappa, flip_report=report, penner=penner)


def jacobian(chart: ConformalClassChart, u, *, near_flat_tol: float = 1e-8,
             _ev: CurvatureEvaluation | None = None) -> np.ndarray:
    """Closed-form curvature Jacobian J[v, w] = d kappa_v / d u_w.

    Each edge contributes (cot a+ + cot a-) / (rho * exp(u_tail) * sin l)
    through its two boundary dihedral angles; diagonal entries collect the
    -cos(l)-weighted star of the vertex, with loops feeding both roles.
    Symmetric up to roundoff.  Raises ``NearFlatEdge`` when a dihedral pair
    is within ``near_flat_tol`` of flat, where the cotangents degenerate.
    """
    u = np.asarray(u, float)
    ev = _ev if _ev is not None else kappa_of_u(chart, u)
    surf = ev.triangulation
    lengths, penner = ev.lengths, ev.penner
    geo = _delaunay.link_geometry(surf, lengths, penner, u)
    alpha, rho, tail, head = geo.alpha, geo.rho_ab, geo.tail, geo.head
    ec = surf.edge_corners
    s1, s2 = ec[:, 0], ec[:, 1]

    pair_sum = alpha[s1] + alpha[s2]
    flat = np.nonzero(pair_sum >= np.pi - near_flat_tol)[0]
    if flat.size:
        e = int(flat[0])
        raise NearFlatEdge(
            f"edge {e}: dihedral angles sum to {pair_sum[e]:.12f} (flat within "
            f"{near_flat_tol:.0e}); the Jacobian degenerates at cell interfaces",
            edge=e,
        )

    cot_sum = 1.0 / np.tan(alpha[s1]) + 1.0 / np.tan(alpha[s2])
    sin_l, cos_l = np.sin(lengths), np.cos(lengths)
    n = chart.vertex_count
    J = np.zeros((n, n))
    for s in (s1, s2):
        t_dir = cot_sum / (rho[s] * np.exp(u[tail[s]]) * sin_l)
        np.add.at(J, (tail[s], head[s]), t_dir)
        np.add.at(J, (tail[s], tail[s]), -t_dir * cos_l)
    return J


def jacobian_fd(chart: ConformalClassChart, u, step: float = 1e-5) -> np.ndarray:
    """Central finite differences of ``kappa_of_u``; the oracle for
    ``jacobian``."""
    u = np.asarray(u, float)
    n = chart.vertex_count
    J = np.empty((n, n))
    for w in range(n):
        uw = u.copy()
        uw[w] += step
        hi = kappa_of_u(chart, uw).kappa
        uw[w] -= 2.0 * step
        lo = kappa_of_u(chart, uw).kappa
        J[:, w] = (hi - lo) / (2.0 * step)
    return J


def _segment_flip_signature(chart, u):
    ev = kappa_of_u(chart, u)
    return tuple(ev.flip_report.flipped_edge_ids)


def functional_H_delta(chart: ConformalClassChart, u_from, u_to,
                       steps: int = 8) -> float:
    """Line integral of kappa . du from ``u_from`` to ``u_to``.

    This is the increment of the total-curvature functional whose gradient
    is kappa; it is well defined up to quadrature error because the
    curvature one-form is exact.  Uses 16-point Gauss-Legendre per panel and
    bisects panels whose endpoints disagree on the flips performed, so no
    panel integrates across a cell interface.
    """
    u_from = np.asarray(u_from, float)
    u_to = np.asarray(u_to, float)
    direction = u_to - u_from

    def point(t):
        return u_from + t * direction

    def integrand(t):
        ev = kappa_of_u(chart, point(t))
        return float(ev.kappa @ direction)

    def gauss_panel(t0, t1):
        mid, half = (t0 + t1) / 2.0, (t1 - t0) / 2.0
        return half * sum(w * integrand(mid + half * x)
                          for x, w in zip(_GL_NODES, _GL_WEIGHTS))

    def integrate(t0, t1, sig0, sig1, depth):
        if sig0 == sig1 or depth >= 40 or (t1 - t0) < 1e-13:
            return gauss_panel(t0, t1)
        tm = (t0 + t1) / 2.0
        sigm = _segment_flip_signature(chart, point(tm))
        return (integrate(t0, tm, sig0, sigm, depth + 1)
                + integrate(tm, t1, sigm, sig1, depth + 1))

    total = 0.0
    ts = np.linspace(0.0, 1.0, steps + 1)
    sigs = [_segment_flip_signature(chart, point(t)) for t in ts]
    for i in range(steps):
        total += integrate(ts[i], ts[i + 1], sigs[i], sigs[i + 1], 0)
    return total
