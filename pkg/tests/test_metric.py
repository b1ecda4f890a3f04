import numpy as np
import pytest

from conesphere import (
    EuclideanConeMetric,
    SphericalConeMetric,
    chord_map,
    circumradius_check,
    corner_angles,
    gauss_bonnet,
    inverse_chord_map,
    vertex_curvature,
)
from conesphere.errors import DegenerateTriangle, NotInImage
from conesphere.platonic import (
    icosahedron,
    icosahedron_equilateral,
    octahedron,
    octahedron_surface,
    tetrahedron,
)

from conftest import assert_gauss_bonnet


def test_octahedron_angles_and_curvature():
    m = octahedron()
    assert corner_angles(m) == pytest.approx(np.full(24, np.pi / 2), abs=1e-12)
    assert vertex_curvature(m) == pytest.approx(np.zeros(6), abs=1e-12)


def test_icosahedron_angles():
    m = icosahedron()
    assert corner_angles(m) == pytest.approx(np.full(60, 2 * np.pi / 5), abs=1e-12)
    assert vertex_curvature(m) == pytest.approx(np.zeros(12), abs=1e-12)


def test_equilateral_euclidean_angles():
    surf = octahedron_surface()
    m = EuclideanConeMetric(surf, np.ones(12))
    assert corner_angles(m) == pytest.approx(np.full(24, np.pi / 3), abs=1e-12)


def test_wide_icosahedron_curvature():
    beta = 3.2 * np.pi / 5
    m = icosahedron_equilateral(beta)
    # corner angle of an equilateral triangle with arc l: cos(b) = cos l/(1+cos l)
    cl = np.cos(m.lengths[0])
    assert np.arccos(cl / (1 + cl)) == pytest.approx(beta, abs=1e-12)
    assert vertex_curvature(m) == pytest.approx(np.full(12, -1.2 * np.pi), abs=1e-10)


def test_chord_map_values():
    m = octahedron()
    chords = chord_map(m)
    assert chords.lengths == pytest.approx(np.full(12, np.sqrt(2)), abs=1e-14)
    radii, flagged = circumradius_check(chords)
    assert radii == pytest.approx(np.full(8, np.sqrt(2.0 / 3.0)), abs=1e-12)
    assert not flagged.any()


def test_chord_near_pi_approaches_two():
    surf = tetrahedron().surface
    m = SphericalConeMetric(surf, np.full(6, np.pi - 1e-9), margin=0.0,
                            validate=False)
    assert chord_map(m).lengths == pytest.approx(np.full(6, 2.0), abs=1e-12)


def test_circumradius_scaling():
    surf = octahedron_surface()
    for side, expect in ((np.sqrt(3), 1.0), (0.1, 0.1 / np.sqrt(3))):
        m = EuclideanConeMetric(surf, np.full(12, side))
        radii, flagged = circumradius_check(m)
        assert radii == pytest.approx(np.full(8, expect), abs=1e-12)
        assert flagged.all() == (expect >= 1.0)


def test_inverse_chord_map_roundtrip(rng):
    m = octahedron()
    for _ in range(20):
        lengths = m.lengths + rng.uniform(-0.1, 0.1, 12)
        pert = SphericalConeMetric(m.surface, lengths)
        back = inverse_chord_map(chord_map(pert))
        assert back.lengths == pytest.approx(pert.lengths, abs=1e-12)


def test_inverse_chord_map_rejects_large_triangles():
    surf = octahedron_surface()
    with pytest.raises(NotInImage):
        inverse_chord_map(EuclideanConeMetric(surf, np.full(12, 1.9)))
    with pytest.raises(NotInImage):
        inverse_chord_map(EuclideanConeMetric(surf, np.full(12, 2.5)))


def test_single_chord_value():
    m = SphericalConeMetric(octahedron_surface(), np.full(12, np.pi / 2))
    assert inverse_chord_map(chord_map(m)).lengths == pytest.approx(m.lengths)


def test_gauss_bonnet_platonic():
    for m in (tetrahedron(), octahedron(), icosahedron()):
        total, area, resid = gauss_bonnet(m)
        assert total == pytest.approx(0.0, abs=1e-10)
        assert area == pytest.approx(4 * np.pi, abs=1e-10)
        assert abs(resid) < 1e-12


def test_gauss_bonnet_random_metrics(rng):
    base = icosahedron()
    for _ in range(50):
        lengths = base.lengths + rng.uniform(-0.12, 0.12, base.surface.edge_count)
        assert_gauss_bonnet(SphericalConeMetric(base.surface, lengths))


def test_validation_names_offending_triangle():
    surf = octahedron_surface()
    bad = np.full(12, np.pi / 2)
    bad[surf.triangle_edges()[3]] = (2.0944, 2.0944, 2.0945)  # perimeter > 2*pi
    with pytest.raises(DegenerateTriangle, match="triangle 3"):
        SphericalConeMetric(surf, bad)
    worse = np.full(12, 1.0)
    worse[surf.triangle_edges()[0][0]] = 2.5  # breaks the triangle inequality
    with pytest.raises(DegenerateTriangle):
        SphericalConeMetric(surf, worse)
