"""Maximal partial line spreads of PG(4,2).

A spread here is an ordered list of 9 pairwise-disjoint lines (the maximum
possible), leaving 4 uncovered points (holes).  The 9 lines always group
into exactly 4 reguli, and the way the lines distribute over those reguli
separates spreads into three types:

* ``X``       -- one line lies on all 4 reguli (the *common line*),
* ``E``       -- three lines lie on 2 reguli each and themselves form one
                 of the reguli (the *distinguished regulus*),
* ``IDelta``  -- three lines lie on 2 reguli each but do not form a
                 regulus; the distinguished regulus is then the unique one
                 all of whose lines lie on just that regulus.

The module provides both object-level operations on single spreads and a
vectorized bulk pipeline (numpy) over the full exhaustive enumeration.
"""

from __future__ import annotations

import hashlib
import itertools
import random
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from .gf2geom import Subspace, dual, join, rref
from .pg42 import N_LINES, tables

__all__ = [
    "Spread",
    "SpreadError",
    "SpreadAnomaly",
    "SpreadType",
    "is_regulus",
    "reguli",
    "classify",
    "holes",
    "opposite_regulus",
    "dual_spread",
    "disjointness_graph",
    "find_maximal_spreads",
    "verify_regulus_free_extension",
    "all_spread_line_ids",
    "classify_all",
    "BulkClassification",
]

_TRIPLES = tuple(itertools.combinations(range(9), 3))
_TRIPLE_ID = {t: i for i, t in enumerate(_TRIPLES)}


class SpreadError(ValueError):
    """Input does not satisfy the spread axioms."""


class SpreadAnomaly(RuntimeError):
    """A structural fact that should hold for every spread failed.

    Raised instead of guessing, so that any violation of the classification
    this code relies on is loud.
    """


class Spread:
    """An ordered list of 9 pairwise-disjoint lines of PG(4,2).

    The stored order is preserved (examples are referenced by position);
    identity is order-independent via the sorted canonical line IDs.
    """

    __slots__ = ("lines", "_ids")

    def __init__(self, lines: Sequence[Subspace]):
        lines = tuple(lines)
        if len(lines) != 9:
            raise SpreadError(f"expected 9 lines, got {len(lines)}")
        for l in lines:
            if l.n != 5 or l.dim != 2:
                raise SpreadError(f"not a line of PG(4,2): {l!r}")
        for i in range(9):
            for j in range(i + 1, 9):
                if (lines[i].mask & lines[j].mask) != 1:
                    raise SpreadError(
                        f"lines {i + 1} and {j + 1} intersect: "
                        f"{lines[i]!r}, {lines[j]!r}"
                    )
        object.__setattr__(self, "lines", lines)
        object.__setattr__(self, "_ids", None)

    def __setattr__(self, *a):
        raise AttributeError("Spread is immutable")

    @classmethod
    def from_line_ids(cls, ids: Sequence[int]) -> "Spread":
        t = tables()
        return cls([t.lines[int(i)] for i in ids])

    @property
    def line_ids(self) -> tuple:
        ids = self._ids
        if ids is None:
            t = tables()
            ids = tuple(t.id_of(l) for l in self.lines)
            object.__setattr__(self, "_ids", ids)
        return ids

    @property
    def key(self) -> tuple:
        """Order-independent identity: sorted canonical line IDs."""
        return tuple(sorted(self.line_ids))

    @property
    def id(self) -> str:
        h = hashlib.sha256(",".join(map(str, self.key)).encode()).hexdigest()
        return h[:12]

    @property
    def cover_mask(self) -> int:
        m = 0
        for l in self.lines:
            m |= l.mask
        return m & ~1

    def __eq__(self, other):
        return isinstance(other, Spread) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"Spread(id={self.id})"


def holes(s: Spread) -> tuple:
    """The 4 points covered by no line of the spread, ascending."""
    m = ~s.cover_mask
    out = [v for v in range(1, 32) if m >> v & 1]
    if len(out) != 4:
        raise SpreadAnomaly(f"expected 4 holes, found {len(out)}")
    return tuple(out)


def is_regulus(l1: Subspace, l2: Subspace, l3: Subspace) -> bool:
    """True iff the three lines are pairwise disjoint and span a solid."""
    for l in (l1, l2, l3):
        if l.n != 5 or l.dim != 2:
            raise ValueError(f"not a line of PG(4,2): {l!r}")
    if (l1.mask & l2.mask) != 1 or (l1.mask & l3.mask) != 1 or (l2.mask & l3.mask) != 1:
        return False
    return len(rref(l1.basis + l2.basis + l3.basis)) == 4


def reguli(s: Spread) -> tuple:
    """All regulus triples of the spread, as sorted index triples.

    Every size-9 spread has exactly 4; anything else raises SpreadAnomaly.
    """
    out = tuple(
        t
        for t in _TRIPLES
        if len(rref(sum((s.lines[i].basis for i in t), ()))) == 4
    )
    if len(out) != 4:
        raise SpreadAnomaly(f"spread has {len(out)} reguli, expected 4")
    return out


@dataclass(frozen=True)
class SpreadType:
    """Classification of a spread.

    ``distinguished`` is the common-line index for type X, or the index
    triple of the distinguished regulus for types E and IDelta.
    """

    tag: str  # "X" | "E" | "IDelta"
    distinguished: object
    reguli: tuple
    counts: tuple  # per-line regulus-membership counts

    @property
    def common_index(self) -> Optional[int]:
        return self.distinguished if self.tag == "X" else None


def classify(s: Spread) -> SpreadType:
    """Type a spread by its per-line regulus-membership counts."""
    regs = reguli(s)
    counts = [0] * 9
    for t in regs:
        for i in t:
            counts[i] += 1
    multiset = tuple(sorted(counts, reverse=True))
    if multiset == (4, 1, 1, 1, 1, 1, 1, 1, 1):
        return SpreadType("X", counts.index(4), regs, tuple(counts))
    if multiset == (2, 2, 2, 1, 1, 1, 1, 1, 1):
        two = tuple(i for i in range(9) if counts[i] == 2)
        if two in regs:
            return SpreadType("E", two, regs, tuple(counts))
        ones = [t for t in regs if all(counts[i] == 1 for i in t)]
        if len(ones) != 1:
            raise SpreadAnomaly(
                f"IDelta spread without unique count-1 regulus: {ones}"
            )
        return SpreadType("IDelta", ones[0], regs, tuple(counts))
    raise SpreadAnomaly(f"regulus-membership counts {multiset} match no type")


def opposite_regulus(lines3: Sequence[Subspace]) -> tuple:
    """The 3 transversals of a regulus (lines meeting all three of it)."""
    l1, l2, l3 = lines3
    if not is_regulus(l1, l2, l3):
        raise ValueError("not a regulus")
    p3 = l3.mask
    out = set()
    for p1 in l1.points():
        for p2 in l2.points():
            if p3 >> (p1 ^ p2) & 1:
                out.add(rref((p1, p2)))
    if len(out) != 3:
        raise SpreadAnomaly(f"regulus with {len(out)} transversals")
    return tuple(Subspace(b, 5) for b in sorted(out))


def dual_spread(s: Spread) -> tuple:
    """Element-wise dual planes of the spread's lines (same order)."""
    return tuple(dual(l) for l in s.lines)


def spread_from_planes(planes: Sequence[Subspace]) -> Spread:
    """The spread whose lines are the duals of the given 9 planes."""
    return Spread([dual(p) for p in planes])


def disjointness_graph() -> tuple:
    """Adjacency of the 155-node line-disjointness graph.

    Returned as a tuple of 155 bitmasks over line IDs; bit j of entry i is
    set iff lines i and j are disjoint.
    """
    return tables().adjacency


def _clique_extend(adj, cur, cand, out_size=9):
    """Lexicographic enumeration of all cliques of size ``out_size``."""
    need = out_size - len(cur)
    if need == 0:
        yield tuple(cur)
        return
    c = cand
    while c:
        if c.bit_count() < need:
            return
        j = (c & -c).bit_length() - 1
        c ^= 1 << j
        cur.append(j)
        yield from _clique_extend(adj, cur, c & adj[j], out_size)
        cur.pop()


def find_maximal_spreads(
    mode: str = "exhaustive",
    seed: Optional[Spread] = None,
    count: Optional[int] = None,
    rng_seed: Optional[int] = None,
) -> Iterator[Spread]:
    """Stream size-9 spreads found by clique search on the disjointness graph.

    * ``exhaustive``: every size-9 spread exactly once, lexicographic in
      line IDs.
    * ``seeded``: all spreads sharing at least one line with ``seed``
      (deduplicated); the seed itself is always among the results.
    * ``sample``: ``count`` distinct spreads from randomized greedy clique
      completions, deterministic for a fixed ``rng_seed``.
    """
    t = tables()
    adj = t.adjacency
    full = (1 << N_LINES) - 1
    if mode == "exhaustive":
        for ids in _clique_extend(adj, [], full):
            yield Spread.from_line_ids(ids)
    elif mode == "seeded":
        if seed is None:
            raise ValueError("seeded mode requires a seed spread")
        emitted = set()
        for anchor in sorted(seed.line_ids):
            # cliques containing `anchor`: search its neighborhood
            for rest in _clique_extend(adj, [], adj[anchor], out_size=8):
                ids = tuple(sorted((anchor,) + rest))
                if ids not in emitted:
                    emitted.add(ids)
                    yield Spread.from_line_ids(ids)
    elif mode == "sample":
        if count is None:
            raise ValueError("sample mode requires a count")
        rng = random.Random(rng_seed)
        emitted = set()
        attempts = 0
        while len(emitted) < count:
            attempts += 1
            if attempts > 1000 * (count + 10):
                raise RuntimeError("sampling failed to reach requested count")
            cur, cand = [], full
            while cand and len(cur) < 9:
                choices = []
                c = cand
                while c:
                    j = (c & -c).bit_length() - 1
                    c ^= 1 << j
                    choices.append(j)
                j = rng.choice(choices)
                cur.append(j)
                cand &= adj[j]
            if len(cur) == 9:
                key = tuple(sorted(cur))
                if key not in emitted:
                    emitted.add(key)
                    yield Spread.from_line_ids(cur)
    else:
        raise ValueError(f"unknown mode {mode!r}")


def verify_regulus_free_extension(lines8: Sequence[Subspace], plane: Subspace) -> bool:
    """Check the two halves of the partition-extension property.

    Preconditions: 8 pairwise-disjoint lines whose union, together with the
    plane, partitions the 31 points.  Returns True iff the 8 lines contain
    no regulus and *every* line of the plane extends them to a type-X
    spread.
    """
    lines8 = tuple(lines8)
    if len(lines8) != 8:
        raise ValueError("need exactly 8 lines")
    if plane.n != 5 or plane.dim != 3:
        raise ValueError("need a plane of PG(4,2)")
    cover = 1
    for i, l in enumerate(lines8):
        if l.dim != 2:
            raise ValueError("inputs must be lines")
        for m in lines8[i + 1 :]:
            if (l.mask & m.mask) != 1:
                raise SpreadError("the 8 lines are not pairwise disjoint")
        if (l.mask & plane.mask) != 1:
            raise SpreadError("a line meets the plane; not a partition")
        cover |= l.mask
    if (cover | plane.mask) != (1 << 32) - 1:
        raise SpreadError("lines and plane do not partition the point set")

    for t in itertools.combinations(lines8, 3):
        if is_regulus(*t):
            return False
    plane_lines = [
        Subspace((p1, p2), 5)
        for p1, p2 in itertools.combinations(plane.points(), 2)
    ]
    seen = set()
    for pl in plane_lines:
        if pl.basis in seen:
            continue
        seen.add(pl.basis)
        st = classify(Spread(lines8 + (pl,)))
        if st.tag != "X":
            return False
    return True


# ---------------------------------------------------------------------------
# bulk pipeline over the exhaustive enumeration

_BULK_CACHE = {}


def all_spread_line_ids(progress: bool = False) -> np.ndarray:
    """Line-ID array of every size-9 spread, shape (M, 9), lexicographic.

    Cached in memory after the first call (the enumeration takes about a
    minute).
    """
    arr = _BULK_CACHE.get("arr")
    if arr is None:
        adj = tables().adjacency
        rows = list(_clique_extend(adj, [], (1 << N_LINES) - 1))
        arr = np.array(rows, dtype=np.int16)
        _BULK_CACHE["arr"] = arr
    return arr


@dataclass
class BulkClassification:
    """Vectorized classification of a batch of spreads."""

    line_ids: np.ndarray  # (M, 9) int16
    n_reguli: np.ndarray  # (M,) int8
    counts: np.ndarray  # (M, 9) int8 regulus-membership counts per position
    types: np.ndarray  # (M,) uint8: 0 = X, 1 = E, 2 = IDelta
    common_pos: np.ndarray  # (M,) int8, position of the common line, -1 if not X

    TAGS = ("X", "E", "IDelta")

    def type_counts(self) -> dict:
        out = {}
        for code, tag in enumerate(self.TAGS):
            out[tag] = int((self.types == code).sum())
        return out


def classify_all(arr: Optional[np.ndarray] = None) -> BulkClassification:
    """Classify a (M, 9) array of spreads at once.

    Mirrors :func:`classify` but vectorized: a triple (i,j,k) is a regulus
    iff line k lies in the solid spanned by lines i and j, which is a pair
    of table lookups.
    """
    t = tables()
    if arr is None:
        arr = all_spread_line_ids()
    m = len(arr)
    counts = np.zeros((m, 9), dtype=np.int8)
    n_reguli = np.zeros(m, dtype=np.int8)
    # remember per-spread which count-2 triple to re-test for type E
    for i, j, k in _TRIPLES:
        r = t.line_in_solid[t.join_solid[arr[:, i], arr[:, j]], arr[:, k]]
        n_reguli += r
        counts[:, i] += r
        counts[:, j] += r
        counts[:, k] += r
    if not (n_reguli == 4).all():
        raise SpreadAnomaly("bulk classification found a spread without 4 reguli")

    mx = counts.max(axis=1)
    types = np.full(m, 2, dtype=np.uint8)
    is_x = mx == 4
    types[is_x] = 0
    common_pos = np.full(m, -1, dtype=np.int8)
    common_pos[is_x] = counts[is_x].argmax(axis=1)

    rest = np.flatnonzero(~is_x)
    if rest.size:
        if not (mx[rest] == 2).all():
            raise SpreadAnomaly("bulk classification: unexpected count multiset")
        pos3 = np.nonzero(counts[rest] == 2)[1].reshape(-1, 3)
        tids = np.fromiter(
            (_TRIPLE_ID[tuple(row)] for row in pos3), dtype=np.int16, count=len(pos3)
        )
        # re-evaluate exactly the candidate triple per remaining spread
        is_e = np.zeros(rest.size, dtype=bool)
        for tid in np.unique(tids):
            i, j, k = _TRIPLES[tid]
            sel = rest[tids == tid]
            is_e[tids == tid] = t.line_in_solid[
                t.join_solid[arr[sel, i], arr[sel, j]], arr[sel, k]
            ]
        types[rest[is_e]] = 1
    return BulkClassification(arr, n_reguli, counts, types, common_pos)


def regulus_line_ids(arr: np.ndarray) -> np.ndarray:
    """Per spread, the 4 regulus triples as line IDs: shape (M, 4, 3)."""
    t = tables()
    m = len(arr)
    is_reg = np.zeros((m, len(_TRIPLES)), dtype=bool)
    for ti, (i, j, k) in enumerate(_TRIPLES):
        is_reg[:, ti] = t.line_in_solid[t.join_solid[arr[:, i], arr[:, j]], arr[:, k]]
    if not (is_reg.sum(axis=1) == 4).all():
        raise SpreadAnomaly("a spread without exactly 4 reguli")
    tri_ids = np.nonzero(is_reg)[1].reshape(m, 4)
    pos = np.array(_TRIPLES, dtype=np.int8)[tri_ids]  # (M, 4, 3) positions
    return np.take_along_axis(
        arr[:, None, :].repeat(4, axis=1), pos.astype(np.int64), axis=2
    )


def hole_points(arr: np.ndarray) -> np.ndarray:
    """Per spread, the 4 hole points (values 1..31), shape (M, 4)."""
    t = tables()
    cover = np.zeros(len(arr), dtype=np.uint32)
    for c in range(9):
        cover |= t.line_mask[arr[:, c]]
    free = (~cover[:, None] >> np.arange(1, 32, dtype=np.uint32)) & 1
    rows, cols = np.nonzero(free)
    if not (np.bincount(rows, minlength=len(arr)) == 4).all():
        raise SpreadAnomaly("a spread without exactly 4 holes")
    return (cols.reshape(-1, 4) + 1).astype(np.int8)
