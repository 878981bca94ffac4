"""Precomputed incidence tables for PG(4,2).

Everything here is derived once from the canonical line enumeration and
shared read-only by the search and census code.  Line IDs are indices into
``enumerate_subspaces(5, 2)``; a plane is indexed by the ID of its dual
line, and a solid by the ID of its dual point (point value minus one).
"""

from __future__ import annotations

import threading

import numpy as np

from .gf2geom import Subspace, dot, dual, enumerate_subspaces, rref, span_mask

__all__ = ["Tables", "tables"]

N_POINTS = 31
N_LINES = 155


class Tables:
    """Incidence tables for the lines/planes/solids of PG(4,2)."""

    def __init__(self):
        lines = enumerate_subspaces(5, 2)
        assert len(lines) == N_LINES
        self.lines = lines
        self.line_id = {l.basis: i for i, l in enumerate(lines)}
        self.line_mask = np.array([l.mask for l in lines], dtype=np.uint32)

        # dual planes: plane i is the orthogonal complement of line i
        self.planes = tuple(dual(l) for l in lines)
        self.plane_mask = np.array([p.mask for p in self.planes], dtype=np.uint32)
        self.plane_mask_sorted = np.sort(
            np.array([p.mask for p in enumerate_subspaces(5, 3)], dtype=np.uint32)
        )

        # disjointness graph as 155-bit candidate masks (python ints)
        adj = []
        lm = [l.mask for l in lines]
        for i in range(N_LINES):
            m = 0
            for j in range(N_LINES):
                if i != j and (lm[i] & lm[j]) == 1:
                    m |= 1 << j
            adj.append(m)
        self.adjacency = tuple(adj)
        self.degree = adj[0].bit_count()

        # solids, indexed by dual point p-1
        solid_mask = []
        line_in_solid = np.zeros((N_POINTS, N_LINES), dtype=bool)
        for p in range(1, 32):
            sm = 0
            for v in range(32):
                if dot(v, p) == 0:
                    sm |= 1 << v
            solid_mask.append(sm)
            for k in range(N_LINES):
                line_in_solid[p - 1, k] = (lm[k] & ~sm) == 0
        self.solid_mask = tuple(solid_mask)
        self.line_in_solid = line_in_solid

        # join_solid[i,j]: for disjoint lines i,j the solid they span,
        # as the index of its dual point; -1 when the lines meet
        join_solid = np.full((N_LINES, N_LINES), -1, dtype=np.int16)
        for i in range(N_LINES):
            ai = adj[i]
            for j in range(N_LINES):
                if ai >> j & 1:
                    jb = rref(lines[i].basis + lines[j].basis)
                    for p in range(1, 32):
                        if all(dot(v, p) == 0 for v in jb):
                            join_solid[i, j] = p - 1
                            break
        self.join_solid = join_solid

        # line-vs-dual-plane and line-vs-line orthogonality incidences
        pm = self.plane_mask.astype(np.int64)
        lmask64 = self.line_mask.astype(np.int64)
        self.line_meets_plane = (pm[:, None] & lmask64[None, :] & ~1) != 0
        perp = np.zeros((N_LINES, N_LINES), dtype=bool)
        for i in range(N_LINES):
            bi = lines[i].basis
            for j in range(N_LINES):
                bj = lines[j].basis
                perp[i, j] = all(dot(x, y) == 0 for x in bi for y in bj)
        self.perp = perp

        point_in_plane = np.zeros((N_LINES, N_POINTS), dtype=bool)
        for i in range(N_LINES):
            m = self.planes[i].mask
            for v in range(1, 32):
                point_in_plane[i, v - 1] = bool(m >> v & 1)
        self.point_in_plane = point_in_plane

        # plane spanned by line i and off-line point v, as a point mask
        span_with_point = np.zeros((N_LINES, 32), dtype=np.uint32)
        for i in range(N_LINES):
            for v in range(1, 32):
                if not lm[i] >> v & 1:
                    span_with_point[i, v] = span_mask(rref(lines[i].basis + (v,)))
        self.plane_span_with_point = span_with_point

    def line(self, i: int) -> Subspace:
        return self.lines[i]

    def id_of(self, line: Subspace) -> int:
        return self.line_id[line.basis]


_lock = threading.Lock()
_tables = None


def tables() -> Tables:
    """The shared table singleton, built on first use (~2 s)."""
    global _tables
    if _tables is None:
        with _lock:
            if _tables is None:
                _tables = Tables()
    return _tables
