"""JSON mesh files.

Schema::

    {
      "geometry": "spherical" | "euclidean",
      "vertex_count": <int>,
      "edges": [{"id": <int>, "endpoints": [v, w]}, ...],   # endpoints optional
      "triangles": [{"vertices": [a, b, c], "edges": [e0, e1, e2]}, ...],
      "lengths": [<float per edge id>]
    }

Corner ``k`` of a triangle is opposite edge ``k``.  Lengths are radians for
spherical meshes and unitless for Euclidean ones.  Parse errors point at the
offending field.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import MeshFormatError
from .metric import EuclideanConeMetric, SphericalConeMetric
from .surface import build


def _require(cond, where, msg):
    if not cond:
        raise MeshFormatError(f"{where}: {msg}")


def _int_list(value, n, where):
    _require(isinstance(value, list) and len(value) == n, where,
             f"expected a list of {n} integers")
    for k, x in enumerate(value):
        _require(isinstance(x, int) and not isinstance(x, bool),
                 f"{where}[{k}]", "expected an integer")
    return value


def read_mesh(path):
    """Parse and validate a mesh file; returns a metric of the tagged kind."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise MeshFormatError(f"{path}: not valid JSON ({exc})") from exc
    return mesh_from_dict(doc)


def mesh_from_dict(doc):
    _require(isinstance(doc, dict), "$", "top level must be an object")
    geometry = doc.get("geometry")
    _require(geometry in ("spherical", "euclidean"), "geometry",
             "must be 'spherical' or 'euclidean'")
    vc = doc.get("vertex_count")
    _require(isinstance(vc, int) and vc >= 3, "vertex_count",
             "must be an integer >= 3")

    edges = doc.get("edges")
    _require(isinstance(edges, list) and edges, "edges", "must be a non-empty list")
    ids = set()
    for k, rec in enumerate(edges):
        _require(isinstance(rec, dict), f"edges[{k}]", "expected an object")
        eid = rec.get("id")
        _require(isinstance(eid, int) and eid >= 0, f"edges[{k}].id",
                 "must be a non-negative integer")
        _require(eid not in ids, f"edges[{k}].id", f"duplicate edge id {eid}")
        ids.add(eid)
        if "endpoints" in rec:
            _int_list(rec["endpoints"], 2, f"edges[{k}].endpoints")
    n_edges = len(edges)
    _require(ids == set(range(n_edges)), "edges",
             f"edge ids must cover 0..{n_edges - 1} without gaps")

    triangles = doc.get("triangles")
    _require(isinstance(triangles, list) and triangles, "triangles",
             "must be a non-empty list")
    tris = []
    for k, rec in enumerate(triangles):
        _require(isinstance(rec, dict), f"triangles[{k}]", "expected an object")
        verts = _int_list(rec.get("vertices"), 3, f"triangles[{k}].vertices")
        eds = _int_list(rec.get("edges"), 3, f"triangles[{k}].edges")
        for j, v in enumerate(verts):
            _require(0 <= v < vc, f"triangles[{k}].vertices[{j}]",
                     f"vertex id {v} out of range")
        for j, e in enumerate(eds):
            _require(0 <= e < n_edges, f"triangles[{k}].edges[{j}]",
                     f"edge id {e} out of range")
        tris.append((tuple(verts), tuple(eds)))

    lengths = doc.get("lengths")
    _require(isinstance(lengths, list) and len(lengths) == n_edges, "lengths",
             f"must list one length per edge ({n_edges})")
    for k, x in enumerate(lengths):
        _require(isinstance(x, (int, float)) and not isinstance(x, bool),
                 f"lengths[{k}]", "expected a number")
        _require(x > 0, f"lengths[{k}]", f"length {x} must be positive")
        if geometry == "spherical":
            _require(x < np.pi, f"lengths[{k}]",
                     f"spherical arc {x} must stay below pi")

    surf = build(vc, tris)
    cls = SphericalConeMetric if geometry == "spherical" else EuclideanConeMetric
    return cls(surf, np.asarray(lengths, float))


def mesh_to_dict(metric) -> dict:
    surf = metric.surface
    ev = surf.edge_vertices()
    return {
        "geometry": "spherical" if metric.spherical else "euclidean",
        "vertex_count": surf.vertex_count,
        "edges": [{"id": e, "endpoints": [int(ev[e, 0]), int(ev[e, 1])]}
                  for e in range(surf.edge_count)],
        "triangles": [
            {"vertices": [int(v) for v in surf.triangle_vertices()[t]],
             "edges": [int(e) for e in surf.triangle_edges()[t]]}
            for t in range(surf.triangle_count)
        ],
        "lengths": [float(x) for x in metric.lengths],
    }


def write_mesh(metric, path) -> None:
    with open(path, "w") as fh:
        json.dump(mesh_to_dict(metric), fh, indent=1)
        fh.write("\n")


def read_target(path) -> np.ndarray:
    """Target curvature file: a JSON array of reals (radians)."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise MeshFormatError(f"{path}: not valid JSON ({exc})") from exc
    _require(isinstance(doc, list) and doc, "$", "expected a non-empty JSON array")
    for k, x in enumerate(doc):
        _require(isinstance(x, (int, float)) and not isinstance(x, bool),
                 f"$[{k}]", "expected a number")
    return np.asarray(doc, float)
