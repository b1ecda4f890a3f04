"""conesphere: discrete conformal deformation of spherical cone-metrics.

The pipeline: a combinatorial sphere (``surface``) carries per-edge arc
lengths (``metric``); flipping to an intrinsic Delaunay triangulation
(``delaunay``) admits a conformal chart in which per-vertex factors deform
the metric within its discrete conformal class (``conformal``); a damped
Newton solver prescribes the vertex curvatures (``solver``).  ``polygon``
holds the flat cone-polygon deformation form underlying the solver's
nondegeneracy, ``platonic`` the bundled fixtures, and ``cli``/``meshio``
the command-line and file surfaces.
"""

from .conformal import (
    ConformalClassChart,
    CurvatureEvaluation,
    chart_from_metric,
    functional_H_delta,
    jacobian,
    jacobian_fd,
    kappa_of_u,
    lengths_at,
)
from .delaunay import (
    FlipReport,
    delaunay_dihedral_angles,
    is_delaunay_edge,
    make_delaunay,
    spherical_flip_length,
)
from .metric import (
    EuclideanConeMetric,
    SphericalConeMetric,
    chord_map,
    circumradius_check,
    corner_angles,
    gauss_bonnet,
    inverse_chord_map,
    vertex_curvature,
)
from .polygon import (
    ConePolygon,
    form_I,
    link_direction_check,
    polygon_angles,
    signature_of,
)
from .solver import (
    CurvatureTarget,
    SolveReport,
    euclidean_limit_curvature,
    solve,
    validate_target,
)
from .surface import TriangulatedSurface, build, flip, star, surface_from_faces
from .trig import (
    SemiIdealTriangleData,
    euclidean_angle,
    ideal_h_length,
    semi_ideal_from_link,
    sine_law_check,
    spherical_angle,
)

__all__ = [
    "ConformalClassChart", "CurvatureEvaluation", "chart_from_metric",
    "functional_H_delta", "jacobian", "jacobian_fd", "kappa_of_u", "lengths_at",
    "FlipReport", "delaunay_dihedral_angles", "is_delaunay_edge",
    "make_delaunay", "spherical_flip_length",
    "EuclideanConeMetric", "SphericalConeMetric", "chord_map",
    "circumradius_check", "corner_angles", "gauss_bonnet", "inverse_chord_map",
    "vertex_curvature",
    "ConePolygon", "form_I", "link_direction_check", "polygon_angles",
    "signature_of",
    "CurvatureTarget", "SolveReport", "euclidean_limit_curvature", "solve",
    "validate_target",
    "TriangulatedSurface", "build", "flip", "star", "surface_from_faces",
    "SemiIdealTriangleData", "euclidean_angle", "ideal_h_length",
    "semi_ideal_from_link", "sine_law_check", "spherical_angle",
]

__version__ = "0.1.0"
