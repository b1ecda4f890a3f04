import csv
import json
from importlib import resources

import numpy as np
import pytest

from conesphere import SphericalConeMetric, kappa_of_u, chart_from_metric
from conesphere.cli import main
from conesphere.errors import MeshFormatError
from conesphere.meshio import mesh_from_dict, mesh_to_dict, read_mesh, write_mesh
from conesphere.platonic import icosahedron_equilateral, octahedron

from test_conformal import _skewed_octahedron


def bundled(name):
    return resources.files("conesphere") / "data" / f"{name}.json"


def test_mesh_roundtrip(tmp_path):
    m = octahedron()
    path = tmp_path / "octa.json"
    write_mesh(m, path)
    back = read_mesh(path)
    assert back.spherical
    assert back.lengths == pytest.approx(m.lengths)
    assert back.surface.canonical_triangles() == m.surface.canonical_triangles()


def test_bad_files_report_location():
    doc = mesh_to_dict(octahedron())
    doc["lengths"][3] = 3.5
    with pytest.raises(MeshFormatError, match=r"lengths\[3\]"):
        mesh_from_dict(doc)
    doc = mesh_to_dict(octahedron())
    doc["triangles"][2]["edges"] = [0, 1]
    with pytest.raises(MeshFormatError, match=r"triangles\[2\]"):
        mesh_from_dict(doc)
    doc = mesh_to_dict(octahedron())
    del doc["geometry"]
    with pytest.raises(MeshFormatError, match="geometry"):
        mesh_from_dict(doc)


def test_validate_bundled_fixtures(capsys):
    for name in ("tetrahedron", "octahedron", "icosahedron"):
        assert main(["validate", str(bundled(name))]) == 0
        out = capsys.readouterr().out
        assert "OK" in out and "delaunay" in out


def test_validate_rejects_bad_perimeter(tmp_path, capsys):
    doc = mesh_to_dict(octahedron())
    tri = doc["triangles"][5]["edges"]
    for e in tri:
        doc["lengths"][e] = 2.1   # perimeter 6.3 > 2*pi
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    assert main(["validate", str(path)]) == 1
    err = capsys.readouterr().err
    assert "triangle 5" in err


def test_curvature_command(tmp_path, capsys):
    path = tmp_path / "icosa32.json"
    write_mesh(icosahedron_equilateral(3.2 * np.pi / 5), path)
    assert main(["curvature", str(path)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["kappa"] == pytest.approx(np.full(12, -1.2 * np.pi), abs=1e-9)
    assert payload["total"] + payload["area"] == pytest.approx(4 * np.pi, abs=1e-9)
    assert payload["kappa"][0] == pytest.approx(-3.76991, abs=1e-5)


def test_delaunay_command(tmp_path, capsys):
    src = tmp_path / "skew.json"
    out = tmp_path / "flipped.json"
    write_mesh(_skewed_octahedron(), src)
    assert main(["delaunay", str(src), "-o", str(out)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["flips_performed"] >= 1
    flipped = read_mesh(out)
    from conesphere import is_delaunay_edge
    assert all(is_delaunay_edge(flipped, e) for e in range(12))


def test_jacobian_command(tmp_path, capsys):
    path = tmp_path / "octa.json"
    write_mesh(octahedron(), path)
    assert main(["jacobian", str(path), "--eigen", "--fd-check"]) == 0
    payload = json.loads(capsys.readouterr().out)
    eig = payload["eigenvalues"]
    assert eig == pytest.approx([-4, -4, 0, 0, 0, 8], abs=1e-9)
    assert payload["kernel_dimension"] == 3
    assert payload["symmetrization_residual"] < 1e-12
    assert payload["fd_max_relative_error"] < 1e-5


def test_solve_command(tmp_path, capsys):
    mesh_path = tmp_path / "octa.json"
    target_path = tmp_path / "target.json"
    out_path = tmp_path / "solved.json"
    write_mesh(octahedron(), mesh_path)
    target = np.full(6, 1.8)
    target_path.write_text(json.dumps(list(target)))
    code = main(["solve", str(mesh_path), str(target_path), "-o", str(out_path)])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["converged"] is True
    assert payload["final_residual"] <= 1e-10
    solved = read_mesh(out_path)
    from conesphere import vertex_curvature
    assert vertex_curvature(solved) == pytest.approx(target, abs=1e-9)


def test_solve_rejects_bad_target(tmp_path, capsys):
    mesh_path = tmp_path / "octa.json"
    target_path = tmp_path / "target.json"
    write_mesh(octahedron(), mesh_path)
    target_path.write_text(json.dumps([np.pi] * 6))  # sums to 6*pi > 4*pi
    assert main(["solve", str(mesh_path), str(target_path)]) == 1
    assert "4*pi" in capsys.readouterr().err


def test_solve_numerical_failure_exit_code(tmp_path, capsys):
    mesh_path = tmp_path / "octa.json"
    target_path = tmp_path / "target.json"
    write_mesh(octahedron(), mesh_path)
    target_path.write_text(json.dumps([1.8] * 6))
    assert main(["solve", str(mesh_path), str(target_path),
                 "--max-iter", "1"]) == 2
    assert "numerical failure" in capsys.readouterr().err


def test_icosa_table_csv(tmp_path):
    out = tmp_path / "table.csv"
    assert main(["icosa-table", "-o", str(out)]) == 0
    with open(out) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["beta_over_pi5", "edge_arc"] + [f"ev{k}" for k in range(1, 13)]
    assert len(rows) == 8
    fractions = [float(r[0]) for r in rows[1:]]
    assert fractions == [2.0, 2.4, 2.8, 3.2, 3.6, 4.0, 4.4]
    # spot check the round column
    first = [float(x) for x in rows[1][2:]]
    assert first == pytest.approx([-2.7751] + [0.0] * 3 + [3.2492] * 5
                                  + [4.4903] * 3, abs=1e-3)
    arc = float(rows[1][1])
    assert arc == pytest.approx(np.arccos(1 / np.sqrt(5)), abs=1e-9)


def test_icosa_table_custom_angles(capsys):
    assert main(["icosa-table", "--angles", "2.4"]) == 0
    rows = capsys.readouterr().out.strip().splitlines()
    assert len(rows) == 2
    vals = [float(x) for x in rows[1].split(",")[2:]]
    assert vals[0] == pytest.approx(-8.2113, abs=1e-3)


def test_bundled_fixture_charts_are_usable():
    m = read_mesh(bundled("icosahedron"))
    chart = chart_from_metric(m)
    ev = kappa_of_u(chart, np.zeros(12))
    assert ev.kappa == pytest.approx(np.zeros(12), abs=1e-9)
