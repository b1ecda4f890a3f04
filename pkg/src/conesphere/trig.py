"""Closed-form triangle kernels: spherical, Euclidean, and decorated
semi-ideal hyperbolic trigonometry.

All spherical formulas live on the unit sphere (curvature +1), all
hyperbolic ones at curvature -1.  Distances involving ideal points are
signed distances to their canonical horocycles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateTriangle

# Above this |cos|, arccos loses digits; switch to the half-angle form.
_COS_CUTOFF = 0.999
# arccos arguments may exceed [-1, 1] by at most this much before we treat
# the triangle as corrupt rather than rounding.
_CLAMP_TOL = 1e-9


def _check_spherical_sides(a, b, c, margin=1e-12):
    sides = np.stack(np.broadcast_arrays(
        np.asarray(a, float), np.asarray(b, float), np.asarray(c, float)))
    if (sides <= 0).any() or (sides >= np.pi).any():
        raise DegenerateTriangle("spherical side outside (0, pi)")
    slack = min(
        float(np.min(sides[1] + sides[2] - sides[0])),
        float(np.min(sides[2] + sides[0] - sides[1])),
        float(np.min(sides[0] + sides[1] - sides[2])),
    )
    if slack <= margin:
        raise DegenerateTriangle(f"triangle inequality slack {slack:.3e} <= {margin:.0e}")
    if float(np.max(sides.sum(axis=0))) >= 2 * np.pi - margin:
        raise DegenerateTriangle("perimeter reaches 2*pi")


def _check_euclidean_sides(a, b, c, margin=0.0):
    sides = np.stack(np.broadcast_arrays(
        np.asarray(a, float), np.asarray(b, float), np.asarray(c, float)))
    if (sides <= 0).any():
        raise DegenerateTriangle("non-positive side length")
    slack = min(
        float(np.min(sides[1] + sides[2] - sides[0])),
        float(np.min(sides[2] + sides[0] - sides[1])),
        float(np.min(sides[0] + sides[1] - sides[2])),
    )
    if slack <= margin:
        raise DegenerateTriangle(f"triangle inequality slack {slack:.3e} <= {margin:.0e}")


def _angles_opposite(a, b, c, spherical: bool) -> np.ndarray:
    """Angle opposite side ``a``; half-angle/atan2 path near 0 and pi.

    Assumes the sides were validated.  Vectorized.
    """
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    c = np.asarray(c, float)
    if spherical:
        cos_a = (np.cos(a) - np.cos(b) * np.cos(c)) / (np.sin(b) * np.sin(c))
    else:
        cos_a = (b * b + c * c - a * a) / (2.0 * b * c)
    cos_a = np.atleast_1d(cos_a)
    out = np.empty_like(cos_a)
    near = np.abs(cos_a) > _COS_CUTOFF
    safe = ~near
    if safe.any():
        arg = cos_a[safe]
        if (np.abs(arg) > 1.0 + _CLAMP_TOL).any():
            raise DegenerateTriangle("law-of-cosines argument far outside [-1, 1]")
        out[safe] = np.arccos(np.clip(arg, -1.0, 1.0))
    if near.any():
        s = (a + b + c) / 2.0
        if spherical:
            num = np.sin(s - b) * np.sin(s - c)
            den = np.sin(s) * np.sin(s - a)
        else:
            num = (s - b) * (s - c)
            den = s * (s - a)
        num = np.maximum(np.broadcast_to(num, cos_a.shape), 0.0)
        den = np.maximum(np.broadcast_to(den, cos_a.shape), 0.0)
        out[near] = 2.0 * np.arctan2(np.sqrt(num[near]), np.sqrt(den[near]))
    return out


def spherical_angle(a: float, b: float, c: float) -> float:
    """Angle of a convex spherical triangle opposite side ``a``.

    Sides must lie strictly inside the admissible polytope: each in (0, pi),
    strict triangle inequalities, perimeter below 2*pi.
    """
    _check_spherical_sides(a, b, c)
    return float(_angles_opposite(a, b, c, spherical=True)[0])


def euclidean_angle(a: float, b: float, c: float) -> float:
    """Angle of a Euclidean triangle opposite side ``a``."""
    _check_euclidean_sides(a, b, c)
    return float(_angles_opposite(a, b, c, spherical=False)[0])


@dataclass
class SemiIdealTriangleData:
    """A hyperbolic triangle with one finite vertex and two decorated ideal
    vertices, solved in every quantity we need.

    ``u1``, ``u2``: signed distances from the finite vertex to the canonical
    horocycles; ``a12``: signed decorated length of the ideal edge; ``l12``:
    angle at the finite vertex; ``rho12``/``rho21``: horocyclic arcs cut out
    by the triangle at each ideal vertex; ``b12``/``b21``: signed foot
    distances of the perpendicular dropped onto the ideal edge;
    ``u12``: distance from the finite vertex to the ideal edge.
    """

    u1: float
    u2: float
    a12: float
    l12: float
    rho12: float
    rho21: float
    b12: float
    b21: float
    u12: float


def semi_ideal_from_link(l12: float, u1: float, u2: float) -> SemiIdealTriangleData:
    """Solve the semi-ideal triangle from its link angle and vertex distances.

    Always solvable for ``l12`` in (0, pi):
    ``a12 = u1 + u2 + 2 log sin(l12/2)`` and the horocyclic arcs reduce to
    ``rho = exp(-u) * cot(l12/2)``.
    """
    if not 0.0 < l12 < np.pi:
        raise DegenerateTriangle("link angle must lie in (0, pi)")
    half = l12 / 2.0
    a12 = u1 + u2 + 2.0 * np.log(np.sin(half))
    cot_half = np.cos(half) / np.sin(half)
    rho12 = np.exp(-u1) * cot_half
    rho21 = np.exp(-u2) * cot_half
    b12 = u1 + np.log(np.sin(half))
    b21 = u2 + np.log(np.sin(half))
    u12 = float(np.arccosh(1.0 / np.sin(half)))
    return SemiIdealTriangleData(u1=float(u1), u2=float(u2), a12=float(a12),
                                 l12=float(l12), rho12=float(rho12),
                                 rho21=float(rho21), b12=float(b12),
                                 b21=float(b21), u12=u12)


def sine_law_check(data: SemiIdealTriangleData) -> float:
    """Max relative residual of the two sine-law identities
    ``sin(l12) exp(-a12) / 2 = rho12 exp(-u2) = rho21 exp(-u1)``."""
    lhs = 0.5 * np.sin(data.l12) * np.exp(-data.a12)
    r1 = data.rho12 * np.exp(-data.u2)
    r2 = data.rho21 * np.exp(-data.u1)
    scale = max(abs(lhs), abs(r1), abs(r2), 1e-300)
    return float(max(abs(lhs - r1), abs(lhs - r2)) / scale)


def ideal_h_length(a_opp: float, a_1: float, a_2: float):
    """Horocyclic arc of a decorated ideal triangle at the vertex opposite
    the side of decorated length ``a_opp``: exp((a_opp - a_1 - a_2)/2)."""
    return np.exp((np.asarray(a_opp, float) - a_1 - a_2) / 2.0)
