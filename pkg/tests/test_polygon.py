import numpy as np
import pytest

from conesphere import (
    ConePolygon,
    form_I,
    link_direction_check,
    polygon_angles,
    signature_of,
)
from conesphere.errors import DegenerateTriangle
from conesphere.polygon import omega_gradient


def regular_polygon(n, omega, rho=1.0):
    lam = 2 * rho * np.sin(omega / (2 * n))
    return ConePolygon(rho=np.full(n, rho), lam=np.full(n, lam))


def random_polygon(rng, n=None, omega_max=2 * np.pi - 0.2, min_apex=0.0):
    """Random polygon built apex-first so all radial triangles close up.
    ``min_apex`` keeps the sector angles away from degeneracy (needed when
    finite differences serve as the oracle)."""
    n = n or int(rng.integers(3, 9))
    total = rng.uniform(max(0.8, 1.2 * n * min_apex), omega_max)
    omega_i = rng.dirichlet(np.ones(n)) * (total - n * min_apex) + min_apex
    rho = rng.uniform(0.5, 2.0, n)
    rho_next = np.roll(rho, -1)
    lam = np.sqrt(rho ** 2 + rho_next ** 2 - 2 * rho * rho_next * np.cos(omega_i))
    return ConePolygon(rho=rho, lam=lam)


def regular_closed_form(n, omega, rho):
    """Circulant matrix and spectrum of the radial form for regular
    polygons; independent of rho."""
    theta = omega / n
    M = np.zeros((n, n))
    idx = np.arange(n)
    M[idx, idx] = -2 * np.cos(theta)
    M[idx, (idx + 1) % n] = 1.0
    M[idx, (idx - 1) % n] = 1.0
    M /= np.sin(theta)
    spec = 2 * (np.cos(2 * np.pi * np.arange(n) / n) - np.cos(theta)) / np.sin(theta)
    return M, np.sort(spec)


def test_flat_square():
    p = regular_polygon(4, 2 * np.pi)
    omega, alpha = polygon_angles(p)
    assert omega == pytest.approx(2 * np.pi, abs=1e-12)
    assert alpha == pytest.approx(np.full(4, np.pi / 2), abs=1e-12)
    assert p.lam == pytest.approx(np.full(4, np.sqrt(2)), abs=1e-14)


def test_three_equilateral_triangles():
    p = ConePolygon(rho=np.ones(3), lam=np.ones(3))
    omega, alpha = polygon_angles(p)
    assert omega == pytest.approx(np.pi, abs=1e-12)
    assert alpha == pytest.approx(np.full(3, 2 * np.pi / 3), abs=1e-12)


def test_gauss_bonnet_boundary_identity(rng):
    """(2pi - omega) + sum(pi - alpha_i) = 2pi for every cone-polygon."""
    for _ in range(100):
        p = random_polygon(rng)
        omega, alpha = polygon_angles(p)
        assert (2 * np.pi - omega) + np.sum(np.pi - alpha) == pytest.approx(
            2 * np.pi, abs=1e-10)


def test_invalid_polygon_rejected():
    with pytest.raises(DegenerateTriangle):
        ConePolygon(rho=np.array([1.0, 1.0, 1.0]), lam=np.array([2.5, 1.0, 1.0]))
    with pytest.raises(ValueError):
        ConePolygon(rho=np.ones(2), lam=np.ones(2))


def form_fd(p, h=1e-7):
    n = p.n
    out = np.zeros((n, n))
    for j in range(n):
        hi = ConePolygon(rho=p.rho.copy(), lam=p.lam)
        hi.rho[j] += h
        lo = ConePolygon(rho=p.rho.copy(), lam=p.lam)
        lo.rho[j] -= h
        out[:, j] = (polygon_angles(hi)[1] - polygon_angles(lo)[1]) / (2 * h)
    return p.rho[:, None] * out


def test_form_matches_finite_differences(rng):
    for _ in range(25):
        p = random_polygon(rng, min_apex=0.05)
        I = form_I(p)
        I_fd = form_fd(p)
        denom = np.maximum(np.maximum(np.abs(I), np.abs(I_fd)), 1e-2)
        assert np.max(np.abs(I - I_fd) / denom) < 1e-6


def test_form_symmetry(rng):
    for _ in range(50):
        I = form_I(random_polygon(rng))
        assert np.max(np.abs(I - I.T)) < 1e-9 * (1 + np.max(np.abs(I)))


def test_regular_closed_form_any_radius():
    for n, omega in ((3, 1.5), (5, np.pi), (6, 5.0), (8, 2 * np.pi - 0.1)):
        for rho in (1.0, 2.0):
            p = regular_polygon(n, omega, rho)
            M, spec = regular_closed_form(n, omega, rho)
            assert form_I(p) == pytest.approx(M, abs=1e-10)
            eig = np.sort(np.linalg.eigvalsh(0.5 * (form_I(p) + form_I(p).T)))
            assert eig == pytest.approx(spec, abs=1e-10)


def test_signature_examples():
    p5 = regular_polygon(5, np.pi)
    I5 = form_I(p5)
    assert signature_of(I5, 1e-9 * np.max(np.abs(I5))) == (1, 4, 0)
    p3 = regular_polygon(3, 2 * np.pi - 0.1)
    I3 = form_I(p3)
    assert signature_of(I3, 1e-9 * np.max(np.abs(I3))) == (1, 2, 0)
    assert signature_of(np.zeros((4, 4)), 1e-12) == (0, 0, 4)


def test_signature_random(rng):
    for _ in range(60):
        p = random_polygon(rng)
        I = form_I(p)
        assert signature_of(I, 1e-9 * np.max(np.abs(I))) == (1, p.n - 1, 0)


def test_omega_gradient_matches_fd(rng):
    for _ in range(20):
        p = random_polygon(rng, min_apex=0.05)
        x = rng.normal(size=p.n)
        h = 1e-7
        hi = ConePolygon(rho=p.rho + h * x, lam=p.lam)
        lo = ConePolygon(rho=p.rho - h * x, lam=p.lam)
        fd = (polygon_angles(hi)[0] - polygon_angles(lo)[0]) / (2 * h)
        omega_dot, _ = link_direction_check(p, x)
        assert omega_dot == pytest.approx(fd, abs=1e-6 * (1 + abs(fd)))


def test_radial_unit_direction_is_positive(rng):
    """x0 = 1/rho spans the positive cone of the form, with the value
    sum(cot(a+) + cot(a-))/rho^2."""
    for _ in range(50):
        p = random_polygon(rng)
        _, alpha = polygon_angles(p)
        if (alpha >= np.pi - 1e-9).any():
            continue
        x0 = 1.0 / p.rho
        omega_dot, quad = link_direction_check(p, x0)
        from conesphere.polygon import _triangle_angles
        _, beta_fwd, beta_bwd = _triangle_angles(p)
        expected = np.sum((1 / np.tan(beta_fwd)
                           + 1 / np.tan(np.roll(beta_bwd, 1))) / p.rho ** 2)
        assert quad == pytest.approx(expected, rel=1e-10)
        assert quad > 0
        assert omega_dot == pytest.approx(-quad, rel=1e-10)


def test_frozen_apex_directions_are_negative(rng):
    count = 0
    while count < 50:
        p = random_polygon(rng)
        _, alpha = polygon_angles(p)
        if (alpha >= np.pi - 1e-6).any():
            continue
        grad = omega_gradient(p)
        y = rng.normal(size=p.n)
        x = y - (grad @ y) / (grad @ grad) * grad
        if np.linalg.norm(x) < 1e-8:
            continue
        omega_dot, quad = link_direction_check(p, x)
        assert abs(omega_dot) < 1e-9 * np.linalg.norm(x) / np.min(p.rho)
        assert quad < 0
        count += 1


def test_zero_direction():
    p = regular_polygon(5, 3.0)
    assert link_direction_check(p, np.zeros(5)) == (0.0, 0.0)
