"""Command-line surface.

Subcommands: validate | curvature | delaunay | jacobian | solve | icosa-table.
Exit codes: 0 success, 1 validation failure, 2 numerical failure.

The ``icosa-table`` harness sweeps equilateral icosahedral metrics,
parametrized by the triangle's interior angle as a multiple of pi/5, and
tabulates the eigenvalues of the curvature response at the base point.  The
tabulated spectra use the vertex-scaling sign convention (the response to
growing the metric, i.e. the negated chart Jacobian), sorted ascending.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import conformal, delaunay, metric as metric_mod, platonic, solver
from .errors import NumericalError, ValidationError
from .meshio import read_mesh, read_target, write_mesh

DEFAULT_TABLE_ANGLES = (2.0, 2.4, 2.8, 3.2, 3.6, 4.0, 4.4)
KERNEL_EIGENVALUE_RTOL = 1e-6


@dataclass
class IcosaRow:
    angle_fraction: float     # interior angle as a multiple of pi/5
    edge_arc: float
    eigenvalues: np.ndarray   # 12 sorted ascending
    kernel_dimension: int


def _emit(payload, out_path):
    text = json.dumps(payload, indent=1)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _delaunay_chart(metric):
    flipped, report = delaunay.make_delaunay(metric)
    return conformal.chart_from_metric(flipped), flipped, report


def cmd_validate(args) -> int:
    metric = read_mesh(args.path)  # structural + polytope validation
    surf = metric.surface
    slack, _ = metric_mod.triangle_slacks(surf, metric.lengths, metric.spherical)
    sums = delaunay.opposite_angle_sums(metric)
    n_delaunay = int((sums <= np.pi + delaunay.FLAT_TOL).sum())
    print(f"vertices {surf.vertex_count}, edges {surf.edge_count}, "
          f"triangles {surf.triangle_count}")
    print("manifold closed surface: OK")
    print("euler characteristic 2: OK")
    print(f"triangle polytope: OK (min slack {slack.min():.3e})")
    if metric.spherical:
        total, area, resid = metric_mod.gauss_bonnet(metric)
        print(f"gauss-bonnet: total curvature {total:.12f}, area {area:.12f}, "
              f"residual {resid:.3e}")
    print(f"delaunay edges: {n_delaunay} of {surf.edge_count}")
    return 0


def cmd_curvature(args) -> int:
    metric = read_mesh(args.path)
    kappa = metric_mod.vertex_curvature(metric)
    if metric.spherical:
        total, area, _ = metric_mod.gauss_bonnet(metric)
    else:
        total = float(kappa.sum())
        l = metric.lengths[metric.surface.triangle_edges()]
        s = l.sum(axis=1) / 2
        area = float(np.sqrt(np.maximum(
            s * (s - l[:, 0]) * (s - l[:, 1]) * (s - l[:, 2]), 0.0)).sum())
    _emit({"kappa": [float(k) for k in kappa], "total": total, "area": area},
          args.output)
    return 0


def cmd_delaunay(args) -> int:
    metric = read_mesh(args.path)
    flipped, report = delaunay.make_delaunay(metric)
    write_mesh(flipped, args.output)
    _emit({"flips_performed": report.flips_performed,
           "flipped_edge_ids": report.flipped_edge_ids,
           "iterations_capped": report.iterations_capped}, None)
    return 0


def cmd_jacobian(args) -> int:
    metric = read_mesh(args.path)
    if not metric.spherical:
        raise ValidationError("the curvature Jacobian is defined for spherical meshes")
    chart, _, _ = _delaunay_chart(metric)
    u = np.zeros(chart.vertex_count)
    J = conformal.jacobian(chart, u)
    sym_resid = float(np.max(np.abs(J - J.T)))
    payload = {"matrix": [[float(x) for x in row] for row in J],
               "symmetrization_residual": sym_resid}
    if args.eigen:
        eig = np.linalg.eigvalsh(0.5 * (J + J.T))
        thresh = KERNEL_EIGENVALUE_RTOL * float(np.max(np.abs(eig)))
        payload["eigenvalues"] = [float(x) for x in eig]
        payload["kernel_dimension"] = int((np.abs(eig) <= thresh).sum())
    if args.fd_check:
        J_fd = conformal.jacobian_fd(chart, u)
        denom = np.maximum(np.maximum(np.abs(J), np.abs(J_fd)), 1e-2)
        payload["fd_max_relative_error"] = float(np.max(np.abs(J - J_fd) / denom))
    _emit(payload, args.output)
    return 0


def cmd_solve(args) -> int:
    metric = read_mesh(args.path)
    if not metric.spherical:
        raise ValidationError("curvature prescription runs on spherical meshes")
    target = solver.validate_target(read_target(args.target))
    chart, _, _ = _delaunay_chart(metric)
    report = solver.solve(chart, target, tol=args.tol, max_iter=args.max_iter)
    final = conformal.kappa_of_u(chart, report.u_solution)
    if args.output:
        write_mesh(final.metric(), args.output)
    _emit({
        "u_solution": [float(x) for x in report.u_solution],
        "iterations": report.iterations,
        "final_residual": report.final_residual,
        "flips_total": report.flips_total,
        "converged": report.converged,
        "convex_solution": report.convex_solution,
        "trace": [[rec.residual, rec.step_length, rec.damping]
                  for rec in report.trace],
    }, None)
    return 0


def icosa_row(angle_fraction: float) -> IcosaRow:
    beta = angle_fraction * np.pi / 5.0
    arc = platonic.equilateral_arc_for_angle(beta)
    chart = conformal.chart_from_metric(platonic.icosahedron_equilateral(beta))
    J = conformal.jacobian(chart, np.zeros(12))
    eig = np.sort(np.linalg.eigvalsh(-0.5 * (J + J.T)))
    thresh = KERNEL_EIGENVALUE_RTOL * float(np.max(np.abs(eig)))
    return IcosaRow(angle_fraction=angle_fraction, edge_arc=arc,
                    eigenvalues=eig,
                    kernel_dimension=int((np.abs(eig) <= thresh).sum()))


def cmd_icosa_table(args) -> int:
    fractions = [float(x) for x in args.angles.split(",")]
    rows = [icosa_row(f) for f in fractions]
    out = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        writer = csv.writer(out)
        writer.writerow(["beta_over_pi5", "edge_arc"]
                        + [f"ev{k}" for k in range(1, 13)])
        for row in rows:
            writer.writerow([f"{row.angle_fraction:g}", f"{row.edge_arc:.10f}"]
                            + [f"{x:.6f}" for x in row.eigenvalues])
    finally:
        if args.output:
            out.close()
    return 0


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="conesphere",
                                description="Spherical cone-metric toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("validate", help="check a mesh file and report invariants")
    q.add_argument("path")
    q.set_defaults(func=cmd_validate)

    q = sub.add_parser("curvature", help="per-vertex curvature, total, area")
    q.add_argument("path")
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_curvature)

    q = sub.add_parser("delaunay", help="flip to an intrinsic Delaunay mesh")
    q.add_argument("path")
    q.add_argument("-o", "--output", required=True)
    q.set_defaults(func=cmd_delaunay)

    q = sub.add_parser("jacobian", help="curvature Jacobian at the base point")
    q.add_argument("path")
    q.add_argument("--eigen", action="store_true",
                   help="include eigenvalues and kernel dimension")
    q.add_argument("--fd-check", action="store_true",
                   help="compare against central finite differences")
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_jacobian)

    q = sub.add_parser("solve", help="prescribe curvature in the conformal class")
    q.add_argument("path")
    q.add_argument("target", help="JSON array with one curvature per vertex")
    q.add_argument("--tol", type=float, default=1e-10)
    q.add_argument("--max-iter", type=int, default=100)
    q.add_argument("-o", "--output", help="write the solved mesh here")
    q.set_defaults(func=cmd_solve)

    q = sub.add_parser("icosa-table",
                       help="eigenvalue table for equilateral icosahedral metrics")
    q.add_argument("--angles", default=",".join(f"{a:g}" for a in DEFAULT_TABLE_ANGLES),
                   help="interior angles as multiples of pi/5, comma separated")
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_icosa_table)
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
