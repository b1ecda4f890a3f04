"""Combinatorial kernel: oriented triangulated closed surfaces of genus 0.

The mesh is stored as a corner table.  Triangle ``t`` owns the three corners
``3t``, ``3t+1``, ``3t+2`` in counterclockwise order.  A corner records the
vertex it sits at and the id of the *opposite* edge of its triangle; corners
on the two sides of an edge are paired by an involution.  Loops and multiple
edges are first-class citizens, which is why edges are identified by id and
never by a vertex pair: after a diagonal flip a perfectly good sphere can
contain an edge with both endpoints at the same vertex.

Edge ids are stable across flips -- the flipped diagonal keeps its id while
its endpoints change -- so per-edge data (lengths, decorated coordinates)
keyed by edge id stays meaningful through re-triangulation.

Conventions used throughout:

* ``next_corner(c) = 3*(c//3) + (c+1) % 3``.
* the edge opposite corner ``c`` is directed, as seen from its triangle,
  from ``vertex[next(c)]`` to ``vertex[next(next(c))]``; the paired corner
  must see the opposite direction (consistent global orientation).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    NonManifold,
    OrientationMismatch,
    UnflippableEdge,
    ValidationError,
    WrongEuler,
)


@lru_cache(maxsize=None)
def _corner_index_arrays(n_corners: int):
    """(next, next-next) index arrays for a mesh with ``n_corners`` corners."""
    c = np.arange(n_corners)
    base = c - c % 3
    return base + (c + 1) % 3, base + (c + 2) % 3


def next_corner(c: int) -> int:
    return c - c % 3 + (c + 1) % 3


@dataclass
class QuadInfo:
    """The two triangles around a flippable edge, unpacked.

    Slots ``(c, c1, c2)`` belong to one triangle and ``(cp, c1p, c2p)`` to the
    other; ``x``/``y`` are the apex vertices (the endpoints of the diagonal
    after a flip), ``p``/``q`` the current endpoints of the edge.  ``e1, e2,
    e1p, e2p`` are the four boundary edges of the quadrilateral: ``e2 = x-p``,
    ``e1p = p-y``, ``e2p = y-q``, ``e1 = q-x``.
    """

    edge: int
    c: int
    c1: int
    c2: int
    cp: int
    c1p: int
    c2p: int
    x: int
    p: int
    q: int
    y: int
    e1: int
    e2: int
    e1p: int
    e2p: int


class TriangulatedSurface:
    def __init__(self, vertex_count, corner_vertex, corner_edge, corner_pair,
                 edge_count, validate=True):
        self.vertex_count = int(vertex_count)
        self.corner_vertex = np.asarray(corner_vertex, dtype=np.int64)
        self.corner_edge = np.asarray(corner_edge, dtype=np.int64)
        self.corner_pair = np.asarray(corner_pair, dtype=np.int64)
        self.edge_count = int(edge_count)
        self._edge_corners = None
        self._edge_vertices = None
        if validate:
            self.validate()

    # -- basic queries ----------------------------------------------------

    @property
    def triangle_count(self) -> int:
        return self.corner_vertex.size // 3

    @property
    def n_corners(self) -> int:
        return self.corner_vertex.size

    def copy(self) -> "TriangulatedSurface":
        return TriangulatedSurface(
            self.vertex_count,
            self.corner_vertex.copy(),
            self.corner_edge.copy(),
            self.corner_pair.copy(),
            self.edge_count,
            validate=False,
        )

    def _index_arrays(self):
        return _corner_index_arrays(self.n_corners)

    @property
    def edge_corners(self) -> np.ndarray:
        """(E, 2) array: the two corner slots opposite each edge."""
        if self._edge_corners is None:
            order = np.argsort(self.corner_edge, kind="stable")
            self._edge_corners = order.reshape(self.edge_count, 2)
        return self._edge_corners

    def edge_vertices(self) -> np.ndarray:
        """(E, 2) array of edge endpoints (first listed side's direction)."""
        if self._edge_vertices is None:
            nxt, nxt2 = self._index_arrays()
            lo = self.edge_corners[:, 0]
            self._edge_vertices = np.column_stack(
                (self.corner_vertex[nxt[lo]], self.corner_vertex[nxt2[lo]])
            )
        return self._edge_vertices

    def triangle_vertices(self) -> np.ndarray:
        return self.corner_vertex.reshape(-1, 3)

    def triangle_edges(self) -> np.ndarray:
        return self.corner_edge.reshape(-1, 3)

    # -- validation -------------------------------------------------------

    def validate(self) -> None:
        cv, ce, cp = self.corner_vertex, self.corner_edge, self.corner_pair
        n = cv.size
        if n % 3 != 0 or ce.size != n or cp.size != n:
            raise ValidationError("corner arrays must share a length divisible by 3")
        if self.vertex_count < 3:
            raise ValidationError("a triangulated sphere needs at least 3 vertices")
        if n == 0:
            raise ValidationError("surface has no triangles")
        if cv.min() < 0 or cv.max() >= self.vertex_count:
            raise ValidationError("corner vertex id out of range")
        if ce.min() < 0 or ce.max() >= self.edge_count:
            raise ValidationError("corner edge id out of range")

        counts = np.bincount(ce, minlength=self.edge_count)
        bad = np.nonzero(counts != 2)[0]
        if bad.size:
            raise NonManifold(
                f"edge {bad[0]} is referenced by {counts[bad[0]]} corners (expected 2)"
            )

        if (cp[cp] != np.arange(n)).any() or (cp == np.arange(n)).any():
            raise ValidationError("corner pairing is not a fixed-point-free involution")
        if (ce[cp] != ce).any():
            raise ValidationError("paired corners disagree on their edge id")

        nxt, nxt2 = self._index_arrays()
        a, b = cv[nxt], cv[nxt2]
        if (a[cp] != b).any() or (b[cp] != a).any():
            e = int(ce[np.nonzero((a[cp] != b) | (b[cp] != a))[0][0]])
            raise OrientationMismatch(
                f"the two triangles at edge {e} induce incompatible directions"
            )

        chi = self.vertex_count - self.edge_count + self.triangle_count
        if chi != 2:
            raise WrongEuler(f"Euler characteristic is {chi}, expected 2 (sphere)")

    # -- traversal --------------------------------------------------------

    def corners_at_vertex(self, v: int) -> np.ndarray:
        return np.nonzero(self.corner_vertex == v)[0]

    def star(self, v: int) -> list[tuple[int, int]]:
        """Outgoing (corner, edge) incidences around ``v``, in cyclic order.

        Each corner at ``v`` contributes the edge leaving ``v`` within its
        wedge; a loop at ``v`` therefore shows up twice.
        """
        at_v = self.corners_at_vertex(v)
        if at_v.size == 0:
            raise ValidationError(f"vertex {v} has no incident triangle")
        nxt, nxt2 = self._index_arrays()
        start = int(at_v.min())
        out = []
        c = start
        for _ in range(self.n_corners + 1):
            out.append((c, int(self.corner_edge[nxt2[c]])))
            c = int(nxt2[self.corner_pair[nxt2[c]]])
            if c == start:
                return out
        raise ValidationError(f"link of vertex {v} does not close up")

    # -- flips ------------------------------------------------------------

    def flip_quad(self, e: int) -> QuadInfo:
        s1, s2 = (int(s) for s in self.edge_corners[e])
        if s1 // 3 == s2 // 3:
            raise UnflippableEdge(f"edge {e} has the same triangle on both sides")
        nxt, nxt2 = self._index_arrays()
        cv = self.corner_vertex
        return QuadInfo(
            edge=e,
            c=s1, c1=int(nxt[s1]), c2=int(nxt2[s1]),
            cp=s2, c1p=int(nxt[s2]), c2p=int(nxt2[s2]),
            x=int(cv[s1]), p=int(cv[nxt[s1]]), q=int(cv[nxt2[s1]]),
            y=int(cv[s2]),
            e1=int(self.corner_edge[nxt[s1]]), e2=int(self.corner_edge[nxt2[s1]]),
            e1p=int(self.corner_edge[nxt[s2]]), e2p=int(self.corner_edge[nxt2[s2]]),
        )

    def _flip_inplace(self, e: int) -> QuadInfo:
        """Diagonal flip of ``e``; the edge keeps its id, endpoints become
        the two apexes.  Returns the pre-flip quad description."""
        q = self.flip_quad(e)
        cv, ce, cp = self.corner_vertex, self.corner_edge, self.corner_pair
        outer = {int(cp[q.c1]), int(cp[q.c2]), int(cp[q.c1p]), int(cp[q.c2p])}

        cv[q.c], ce[q.c] = q.x, q.e1p
        cv[q.c1], ce[q.c1] = q.p, e
        cv[q.c2], ce[q.c2] = q.y, q.e2
        cv[q.cp], ce[q.cp] = q.y, q.e1
        cv[q.c1p], ce[q.c1p] = q.q, e
        cv[q.c2p], ce[q.c2p] = q.x, q.e2p

        slots = sorted({q.c, q.c1, q.c2, q.cp, q.c1p, q.c2p} | outer)
        for eid in {e, q.e1, q.e2, q.e1p, q.e2p}:
            pair = [s for s in slots if ce[s] == eid]
            if len(pair) != 2:
                raise ValidationError(f"flip bookkeeping failed at edge {eid}")
            cp[pair[0]], cp[pair[1]] = pair[1], pair[0]

        self._edge_corners = None
        self._edge_vertices = None
        return q

    def canonical_triangles(self):
        """Hashable normal form: per triangle the lexicographically smallest
        rotation of its (vertex, edge) corner cycle, sorted."""
        tris = []
        for t in range(self.triangle_count):
            cyc = [(int(self.corner_vertex[3 * t + k]),
                    int(self.corner_edge[3 * t + k])) for k in range(3)]
            rots = [tuple(cyc[k:] + cyc[:k]) for k in range(3)]
            tris.append(min(rots))
        return tuple(sorted(tris))


def build(vertex_count: int, triangles) -> TriangulatedSurface:
    """Assemble and validate a surface from per-triangle data.

    ``triangles`` is a sequence of ``(vertex_triple, edge_triple)`` with
    corner ``k`` opposite edge ``k``.  Corner pairing is derived from shared
    edge ids; the two sides of every edge must induce opposite directions.
    """
    tris = list(triangles)
    F = len(tris)
    cv = np.empty(3 * F, dtype=np.int64)
    ce = np.empty(3 * F, dtype=np.int64)
    for t, (verts, edges) in enumerate(tris):
        if len(verts) != 3 or len(edges) != 3:
            raise ValidationError(f"triangle {t} must list 3 vertices and 3 edges")
        cv[3 * t: 3 * t + 3] = verts
        ce[3 * t: 3 * t + 3] = edges

    if F == 0:
        raise ValidationError("no triangles given")
    if ce.min() < 0:
        raise ValidationError("negative edge id")
    E = int(ce.max()) + 1
    counts = np.bincount(ce, minlength=E)
    bad = np.nonzero(counts != 2)[0]
    if bad.size:
        raise NonManifold(
            f"edge {bad[0]} is referenced by {counts[bad[0]]} corners (expected 2)"
        )

    nxt, nxt2 = _corner_index_arrays(3 * F)
    order = np.argsort(ce, kind="stable").reshape(E, 2)
    cp = np.empty(3 * F, dtype=np.int64)
    for e in range(E):
        s1, s2 = int(order[e, 0]), int(order[e, 1])
        a1, b1 = int(cv[nxt[s1]]), int(cv[nxt2[s1]])
        a2, b2 = int(cv[nxt[s2]]), int(cv[nxt2[s2]])
        if {a1, b1} != {a2, b2}:
            raise OrientationMismatch(
                f"edge {e} connects {a1}-{b1} in one triangle and {a2}-{b2} in the other"
            )
        if (a1, b1) == (a2, b2) and a1 != b1:
            raise OrientationMismatch(
                f"the two triangles at edge {e} induce the same direction {a1}->{b1}"
            )
        cp[s1], cp[s2] = s2, s1

    chi = vertex_count - E + F
    if chi != 2:
        raise WrongEuler(f"Euler characteristic is {chi}, expected 2 (sphere)")

    return TriangulatedSurface(vertex_count, cv, ce, cp, E)


def flip(surface: TriangulatedSurface, edge: int) -> TriangulatedSurface:
    """Pure diagonal flip: returns a new surface, the input is untouched."""
    out = surface.copy()
    out._flip_inplace(edge)
    out.validate()
    return out


def star(surface: TriangulatedSurface, vertex: int) -> list[tuple[int, int]]:
    return surface.star(vertex)


def surface_from_faces(vertex_count: int, faces):
    """Build a surface from oriented vertex triples (simplicial input only).

    Edge ids are assigned to sorted endpoint pairs in lexicographic order,
    which makes them reproducible.  Returns ``(surface, edge_keys)`` where
    ``edge_keys[e]`` is the endpoint pair of edge ``e``.
    """
    keys = sorted({tuple(sorted(p)) for f in faces
                   for p in ((f[1], f[2]), (f[2], f[0]), (f[0], f[1]))})
    index = {k: i for i, k in enumerate(keys)}
    tris = []
    for a, b, c in faces:
        tris.append(((a, b, c),
                     (index[tuple(sorted((b, c)))],
                      index[tuple(sorted((c, a)))],
                      index[tuple(sorted((a, b)))])))
    return build(vertex_count, tris), keys
