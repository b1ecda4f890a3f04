"""Euclidean cone-polygons and the radial deformation form.

A cone-polygon is a disk with one interior cone point, piecewise geodesic
boundary, and the fan triangulation by the radial geodesics: triangle ``i``
has sides ``(rho_i, rho_{i+1}, lam_i)``.  Fixing the boundary lengths and
varying the radii defines, at each kink ``w_i``, the boundary angle
``alpha_i`` as a smooth function of ``rho``; the bilinear form

    I(x, y) = sum_i rho_i x_i d(alpha_i)(y)

has signature (+, -, ..., -) whenever the apex angle is below 2*pi, and is
negative on every radial direction that freezes the apex angle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import trig
from .errors import DegenerateTriangle


@dataclass
class ConePolygon:
    """Radial lengths ``rho`` and boundary lengths ``lam`` (cyclic);
    triangle ``i`` is (rho_i, rho_{i+1}, lam_i)."""

    rho: np.ndarray
    lam: np.ndarray

    def __post_init__(self):
        self.rho = np.asarray(self.rho, float)
        self.lam = np.asarray(self.lam, float)
        if self.rho.ndim != 1 or self.rho.shape != self.lam.shape:
            raise ValueError("rho and lam must be 1-d arrays of equal length")
        if self.rho.size < 3:
            raise ValueError("a cone-polygon needs at least 3 boundary kinks")
        if (self.rho <= 0).any() or (self.lam <= 0).any():
            raise DegenerateTriangle("all radial and boundary lengths must be positive")
        trig._check_euclidean_sides(self.lam, self.rho, np.roll(self.rho, -1))

    @property
    def n(self) -> int:
        return self.rho.size


def _triangle_angles(p: ConePolygon):
    """Per radial triangle i: (apex angle, angle at w_i, angle at w_{i+1})."""
    rho_i = p.rho
    rho_n = np.roll(p.rho, -1)
    omega = trig._angles_opposite(p.lam, rho_i, rho_n, spherical=False)
    beta_fwd = trig._angles_opposite(rho_n, p.lam, rho_i, spherical=False)
    beta_bwd = trig._angles_opposite(rho_i, p.lam, rho_n, spherical=False)
    return omega, beta_fwd, beta_bwd


def polygon_angles(p: ConePolygon):
    """Total apex angle and the boundary angles ``alpha_i`` at the kinks.

    ``alpha_i`` is the sum of the two triangle angles meeting at ``w_i``,
    never computed by subtraction from 2*pi.
    """
    omega, beta_fwd, beta_bwd = _triangle_angles(p)
    alpha = beta_fwd + np.roll(beta_bwd, 1)
    return float(omega.sum()), alpha


def form_I(p: ConePolygon) -> np.ndarray:
    """Matrix of the radial deformation form, I[i, j] = rho_i d(alpha_i)/d(rho_j).

    Cyclically tridiagonal; entries follow from differentiating the two
    planar law-of-cosines angles that compose each ``alpha_i``:

        I[i, i]   = -(cot omega_i + cot omega_{i-1})
        I[i, i+1] = rho_{i+1} / (lam_i sin beta_i^+)
        I[i, i-1] = rho_{i-1} / (lam_{i-1} sin beta_i^-)
    """
    omega, beta_fwd, beta_bwd = _triangle_angles(p)
    n = p.n
    rho, lam = p.rho, p.lam
    I = np.zeros((n, n))
    idx = np.arange(n)
    fwd = (idx + 1) % n
    bwd = (idx - 1) % n
    I[idx, idx] = -(1.0 / np.tan(omega) + 1.0 / np.tan(omega[bwd]))
    I[idx, fwd] = rho[fwd] / (lam * np.sin(beta_fwd))
    I[idx, bwd] = rho[bwd] / (lam[bwd] * np.sin(np.roll(beta_bwd, 1)))
    return I


def omega_gradient(p: ConePolygon) -> np.ndarray:
    """d(omega)/d(rho_i) = -(cot beta_i^+ + cot beta_i^-) / rho_i."""
    _, beta_fwd, beta_bwd = _triangle_angles(p)
    return -(1.0 / np.tan(beta_fwd) + 1.0 / np.tan(np.roll(beta_bwd, 1))) / p.rho


def signature_of(matrix: np.ndarray, tol: float):
    """Eigenvalue sign counts (n_plus, n_minus, n_zero) of the symmetric part."""
    sym = 0.5 * (matrix + matrix.T)
    eig = np.linalg.eigvalsh(sym)
    return (int((eig > tol).sum()), int((eig < -tol).sum()),
            int((np.abs(eig) <= tol).sum()))


def link_direction_check(p: ConePolygon, x) -> tuple[float, float]:
    """Directional apex-angle derivative and form value for direction ``x``.

    Returns ``(omega_dot(x), I(x, x))``.  For nonzero ``x`` with vanishing
    apex derivative (and all boundary angles convex), the form value is
    strictly negative.
    """
    x = np.asarray(x, float)
    omega_dot = float(omega_gradient(p) @ x)
    I = form_I(p)
    quad = float(x @ (0.5 * (I + I.T)) @ x)
    return omega_dot, quad
