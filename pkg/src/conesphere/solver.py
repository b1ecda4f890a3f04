"""Curvature prescription: target validation and the damped Newton solver.

A target assignment of positive curvatures is realizable in a conformal
class exactly when it sums below 4*pi and no single entry reaches the sum
of all the others; within the convex regime the realizing metric is unique,
which is what makes the Newton round trip a meaningful test.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import conformal as _conformal
from . import metric as _metric
from .errors import (
    DegenerateTriangle,
    DiagonalOutOfRange,
    GaussBonnetExcess,
    IterationCap,
    LineSearchStall,
    MaxIterations,
    NearFlatEdge,
    NonConvexQuad,
    OutOfRange,
    OutsideChart,
    SingularJacobian,
    TriangleLikeViolation,
)

_EVAL_ERRORS = (OutsideChart, NonConvexQuad, DiagonalOutOfRange,
                DegenerateTriangle, IterationCap)


@dataclass
class CurvatureTarget:
    kappa_star: np.ndarray


@dataclass
class IterationRecord:
    residual: float     # max-norm of kappa - kappa_star after the step
    merit: float        # squared 2-norm of the residual after the step
    step_length: float
    damping: float
    descent: float      # directional derivative of the merit along the step


@dataclass
class SolveReport:
    u_solution: np.ndarray
    iterations: int
    final_residual: float
    flips_total: int
    converged: bool
    trace: list[IterationRecord] = field(default_factory=list)
    convex_solution: bool = False


def validate_target(kappa_star, margin: float = 1e-12) -> CurvatureTarget:
    """Accept a curvature target iff every entry lies in (0, 2*pi), the sum
    stays below 4*pi, and each entry stays below the sum of the others.

    All three conditions are enforced strictly with the given margin.
    """
    kappa = np.asarray(kappa_star, float)
    if kappa.ndim != 1 or kappa.size < 3:
        raise ValueError("target must assign curvature to at least 3 vertices")
    low = kappa <= margin
    high = kappa >= 2.0 * np.pi - margin
    if low.any() or high.any():
        v = int(np.nonzero(low | high)[0][0])
        raise OutOfRange(f"kappa[{v}] = {kappa[v]:.12f} outside (0, 2*pi)")
    total = float(kappa.sum())
    if total >= 4.0 * np.pi - margin:
        raise GaussBonnetExcess(f"sum of curvatures {total:.12f} must stay below 4*pi")
    others = total - kappa
    bad = kappa >= others - margin
    if bad.any():
        v = int(np.nonzero(bad)[0][0])
        raise TriangleLikeViolation(
            f"kappa[{v}] = {kappa[v]:.12f} is not below the sum of the others "
            f"({others[v]:.12f})",
            vertex=v,
        )
    return CurvatureTarget(kappa_star=kappa.copy())


def _newton_direction(J: np.ndarray, r: np.ndarray, res_inf: float):
    """Regularized Newton direction for J s = -r, J symmetric.

    Eigencomponents below ``min(1e-2, res) * |eig|_max`` are dropped: the
    curvature map degenerates along rigid-motion directions at fully smooth
    metrics, and amplifying those components throws iterates into spurious
    basins.  The cutoff shrinks with the residual, so the endgame is the
    plain Newton step with its quadratic convergence.  Returns the direction
    and the reciprocal condition number.
    """
    sym = 0.5 * (J + J.T)
    lam, vecs = np.linalg.eigh(sym)
    amax = float(np.max(np.abs(lam)))
    if amax == 0.0:
        return np.zeros_like(r), 0.0
    cutoff = min(1e-2, res_inf) * amax
    safe = np.abs(lam) > cutoff
    inv = np.zeros_like(lam)
    inv[safe] = 1.0 / lam[safe]
    s = -(vecs * inv) @ (vecs.T @ r)
    return s, float(np.min(np.abs(lam)) / amax)


def solve(chart, target: CurvatureTarget, *, tol: float = 1e-10,
          max_iter: int = 100, initial_u=None,
          singular_rcond: float = 1e-12) -> SolveReport:
    """Damped Newton for kappa(u) = kappa_star.

    Each step solves the symmetric system J s = -r (small eigencomponents
    regularized away far from convergence); backtracking halves the step
    until the trial point evaluates (valid lengths, successful Delaunay
    maintenance), keeps every curvature below 2*pi, and achieves sufficient
    decrease of the squared-residual merit.  Convergence is declared on the
    max-norm residual.  Convexity of the iterates is not required -- only
    the solution is checked against the convex regime.
    """
    kappa_star = target.kappa_star
    n = chart.vertex_count
    if kappa_star.size != n:
        raise ValueError("target size does not match the chart's vertex count")
    u = np.zeros(n) if initial_u is None else np.asarray(initial_u, float).copy()

    def report(converged, iterations, res, flips, trace):
        final = _conformal.kappa_of_u(chart, u)
        convex = bool((final.kappa > 0).all() and (final.kappa < 2 * np.pi).all())
        return SolveReport(u_solution=u.copy(), iterations=iterations,
                           final_residual=res, flips_total=flips,
                           converged=converged, trace=trace,
                           convex_solution=convex)

    ev = _conformal.kappa_of_u(chart, u)
    r = ev.kappa - kappa_star
    res = float(np.max(np.abs(r)))
    merit = float(r @ r)
    flips = ev.flip_report.flips_performed
    trace: list[IterationRecord] = []

    for it in range(max_iter):
        if res <= tol:
            return report(True, it, res, flips, trace)
        J = _conformal.jacobian(chart, u, _ev=ev)
        s, rcond = _newton_direction(J, r, res)
        slope = float(2.0 * s @ (0.5 * (J + J.T) @ r))
        if not np.max(np.abs(s)) > 0.0 or slope >= 0.0:
            raise SingularJacobian(
                f"residual {res:.3e} lies in the numerical kernel of the "
                f"Jacobian (rcond {rcond:.1e})",
                report=report(False, it, res, flips, trace),
            )
        step = 1.0
        while True:
            u_try = u + step * s
            try:
                ev_try = _conformal.kappa_of_u(chart, u_try)
            except _EVAL_ERRORS:
                ev_try = None
            if ev_try is not None and (ev_try.kappa < 2.0 * np.pi).all():
                r_try = ev_try.kappa - kappa_star
                merit_try = float(r_try @ r_try)
                if merit_try <= merit + 1e-4 * step * slope:
                    break
            step *= 0.5
            if step < 2.0 ** -30:
                msg = f"line search stalled at residual {res:.3e}"
                exc = SingularJacobian if rcond < singular_rcond else LineSearchStall
                raise exc(msg, report=report(False, it + 1, res, flips, trace))
        u, ev, r, merit = u_try, ev_try, r_try, merit_try
        res = float(np.max(np.abs(r)))
        flips += ev.flip_report.flips_performed
        trace.append(IterationRecord(residual=res, merit=merit,
                                     step_length=float(np.max(np.abs(step * s))),
                                     damping=step, descent=slope))

    if res <= tol:
        return report(True, max_iter, res, flips, trace)
    raise MaxIterations(
        f"no convergence within {max_iter} iterations (residual {res:.3e})",
        report=report(False, max_iter, res, flips, trace),
    )


def euclidean_limit_curvature(chart) -> np.ndarray:
    """Curvature of the chord shadow of the chart's base metric.

    This is the limit of kappa(u + t * ones) as t grows; the values sum to
    exactly 4*pi by the Euclidean Gauss-Bonnet count.
    """
    delta = _metric.vertex_curvature(_metric.chord_map(chart.base_metric()))
    total = float(delta.sum())
    if abs(total - 4.0 * np.pi) > 1e-9:
        raise GaussBonnetExcess(
            f"chord curvatures sum to {total:.12f}, expected 4*pi"
        )
    return delta
