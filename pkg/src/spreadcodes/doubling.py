"""Doubling codes S1 ∪ (S2)^⊥ and their intersection-pattern census.

A doubling code takes the 9 lines of one spread together with the 9 dual
planes of another; it is optimal (minimum subspace distance 3) iff no line
of the first spread is contained in a dual plane of the second.  For a
type-X first spread, each codeword plane B is profiled by its
*intersection pattern*: per regulus of S1, how many of the regulus' 3
lines meet B, sorted descending, plus whether B meets the common line and
how many holes of S1 it contains.

The exhaustive census enumerates every ordered pair of type-X spreads
forming an optimal code and histograms the patterns of all 9 planes of
every pair.  The pair enumeration uses an inverted index: line l is
*forbidden* for partners of S1 iff l is fully orthogonal to some line of
S1 (equivalently, some line of S1 lies inside l's dual plane), so the
partners of S1 are exactly the type-X spreads avoiding S1's 63 forbidden
lines -- a bitset union and complement.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence, Tuple

import numpy as np

from .gf2geom import Subspace, subspace_distance
from .pg42 import N_LINES, tables
from .spreads import (
    Spread,
    SpreadAnomaly,
    classify,
    classify_all,
    dual_spread,
    holes,
    all_spread_line_ids,
    hole_points,
    regulus_line_ids,
)

__all__ = [
    "DoublingCode",
    "Verdict",
    "IntersectionPattern",
    "PatternCensus",
    "validate_doubling",
    "min_distance",
    "hole_count",
    "intersection_pattern",
    "pattern_census",
    "doubling_search",
    "exhaustive_xx_census",
    "ALLOWED_PATTERNS",
    "NINTH_PLANE_PATTERNS",
    "ELIMINATED_PATTERN",
    "OPEN_PATTERN",
]

# the six patterns a codeword plane of an optimal type-X pair may show
ALLOWED_PATTERNS = (
    (2, 2, 2, 0),
    (2, 2, 1, 1),
    (3, 3, 1, 1),
    (2, 2, 2, 2),
    (3, 3, 2, 2),
    (3, 3, 3, 1),
)
# patterns available to the distinguished ninth plane (dual of S2's common line)
NINTH_PLANE_PATTERNS = ALLOWED_PATTERNS[:5]
ELIMINATED_PATTERN = (3, 2, 2, 1)
OPEN_PATTERN = (3, 3, 3, 1)

# expected (meets_common, hole_count) combination per pattern
PATTERN_HOLES = {
    (2, 2, 2, 0): (False, 1),
    (2, 2, 1, 1): (False, 1),
    (3, 3, 1, 1): (True, 2),
    (2, 2, 2, 2): (True, 2),
    (3, 3, 2, 2): (True, 0),
    (3, 3, 3, 1): (True, 0),
}


@dataclass(frozen=True)
class Verdict:
    """Outcome of validating a doubling pair.

    ``witness`` is a (line_index, plane_index) pair with the line of s1
    contained in the dual plane of s2, present iff not optimal.
    """

    optimal: bool
    witness: Optional[Tuple[int, int]] = None


class DoublingCode:
    """The 18 codewords of S1 ∪ (S2)^⊥."""

    __slots__ = ("s1", "s2", "planes")

    def __init__(self, s1: Spread, s2: Spread):
        object.__setattr__(self, "s1", s1)
        object.__setattr__(self, "s2", s2)
        object.__setattr__(self, "planes", dual_spread(s2))

    def __setattr__(self, *a):
        raise AttributeError("DoublingCode is immutable")

    @property
    def codewords(self) -> tuple:
        return self.s1.lines + self.planes

    def verdict(self) -> Verdict:
        return validate_doubling(self.s1, self.s2)

    @property
    def is_optimal(self) -> bool:
        return self.verdict().optimal

    def min_distance(self) -> int:
        return min_distance(self)

    def __repr__(self):
        return f"DoublingCode({self.s1.id}, {self.s2.id})"


def validate_doubling(s1: Spread, s2: Spread) -> Verdict:
    """Optimal iff no line of s1 is contained in a dual plane of s2.

    Containment is the only way a codeword pair of S1 ∪ (S2)^⊥ can fall
    below distance 3, so this check is equivalent to the full pairwise
    distance sweep (which `min_distance` performs independently).
    """
    planes = dual_spread(s2)
    for i, l in enumerate(s1.lines):
        lm = l.mask
        for j, p in enumerate(planes):
            if (lm & ~p.mask) == 0:
                return Verdict(False, (i, j))
    return Verdict(True)


def min_distance(code: DoublingCode) -> int:
    """Minimum pairwise subspace distance over all 18 codewords."""
    cw = code.codewords
    return min(
        subspace_distance(a, b) for a, b in itertools.combinations(cw, 2)
    )


def _pattern_parts(plane: Subspace, s1: Spread, stype=None):
    if stype is None:
        stype = classify(s1)
    if stype.tag != "X":
        raise ValueError("intersection patterns are defined for type-X spreads")
    pm = plane.mask
    common = s1.lines[stype.distinguished]
    meets = (pm & common.mask) > 1
    hole_ct = sum(1 for h in holes(s1) if pm >> h & 1)
    raw = tuple(
        sum(1 for i in t if (pm & s1.lines[i].mask) > 1) for t in stype.reguli
    )
    return raw, meets, hole_ct


@dataclass(frozen=True)
class IntersectionPattern:
    """Per-regulus meet counts of a plane against a type-X spread."""

    counts: tuple  # descending 4-tuple
    raw: tuple  # in the spread's regulus order, for debugging
    meets_common: bool
    hole_count: int


def intersection_pattern(
    plane: Subspace, s1: Spread, stype=None
) -> IntersectionPattern:
    """Pattern of a codeword plane against the reguli of a type-X spread."""
    raw, meets, hole_ct = _pattern_parts(plane, s1, stype)
    return IntersectionPattern(
        tuple(sorted(raw, reverse=True)), raw, meets, hole_ct
    )


def hole_count(plane: Subspace, s1: Spread, stype=None) -> Tuple[bool, int]:
    """(meets_common, holes_in_plane), constrained to the three legal cases.

    For a codeword plane of a valid optimal partner the combination must be
    (False, 1), (True, 0) or (True, 2); anything else raises SpreadAnomaly.
    """
    _, meets, hole_ct = _pattern_parts(plane, s1, stype)
    if (meets, hole_ct) not in ((False, 1), (True, 0), (True, 2)):
        raise SpreadAnomaly(
            f"hole trichotomy violated: meets_common={meets}, holes={hole_ct}"
        )
    return meets, hole_ct


@dataclass
class PatternCensus:
    """Histogram of intersection patterns over a set of doubling pairs.

    Keys of ``histogram`` are (counts, meets_common, holes, is_ninth)
    tuples where ``is_ninth`` marks the plane dual to the second spread's
    common line.
    """

    histogram: dict
    pair_count: int = 0
    violations: list = field(default_factory=list)
    s1_count: int = 0
    diagonal_pairs: int = 0

    @property
    def plane_count(self) -> int:
        return sum(self.histogram.values())

    def by_pattern(self) -> dict:
        out = {}
        for (counts, _m, _h, _n), c in self.histogram.items():
            out[counts] = out.get(counts, 0) + c
        return out

    def ninth_by_pattern(self) -> dict:
        out = {}
        for (counts, _m, _h, ninth), c in self.histogram.items():
            if ninth:
                out[counts] = out.get(counts, 0) + c
        return out

    @property
    def open_pattern_count(self) -> int:
        return self.by_pattern().get(OPEN_PATTERN, 0)

    @property
    def eliminated_pattern_count(self) -> int:
        return self.by_pattern().get(ELIMINATED_PATTERN, 0)

    def check(self) -> list:
        """Recompute the violation list from the histogram."""
        out = []
        for (counts, meets, holes, ninth), c in self.histogram.items():
            if counts not in ALLOWED_PATTERNS:
                out.append(("pattern outside allowed set", counts, c))
                continue
            if PATTERN_HOLES[counts] != (meets, holes):
                out.append(
                    ("hole/pattern pairing violated", counts, meets, holes, c)
                )
            if ninth and counts not in NINTH_PLANE_PATTERNS:
                out.append(("ninth-plane pattern outside its set", counts, c))
        return out


def pattern_census(
    pairs: Iterable[Tuple[Spread, Spread]], type_filter: Tuple[str, str] = ("X", "X")
) -> PatternCensus:
    """Pattern census over an explicit stream of validated optimal pairs."""
    hist = {}
    census = PatternCensus(hist)
    for s1, s2 in pairs:
        t1, t2 = classify(s1), classify(s2)
        if (t1.tag, t2.tag) != type_filter:
            raise ValueError(
                f"pair of types ({t1.tag},{t2.tag}) does not match {type_filter}"
            )
        v = validate_doubling(s1, s2)
        if not v.optimal:
            raise ValueError(f"pair is not optimal (witness {v.witness})")
        planes = dual_spread(s2)
        for j, plane in enumerate(planes):
            pat = intersection_pattern(plane, s1, t1)
            ninth = j == t2.distinguished
            key = (pat.counts, pat.meets_common, pat.hole_count, ninth)
            hist[key] = hist.get(key, 0) + 1
        census.pair_count += 1
    census.violations = census.check()
    return census


def doubling_search(
    spread_db: Sequence[Spread],
    type_filter: Tuple[str, str] = ("X", "X"),
    limit: Optional[int] = None,
) -> Iterator[DoublingCode]:
    """Stream optimal doubling codes over ordered pairs from a spread list.

    Pairs are tried in database order; a pair is rejected at the first
    containment witness.  Diagonal pairs (s, s) are included when they
    validate.
    """
    tags = {}
    for i, s in enumerate(spread_db):
        tags[i] = classify(s).tag
    emitted = 0
    for i, s1 in enumerate(spread_db):
        if tags[i] != type_filter[0]:
            continue
        for j, s2 in enumerate(spread_db):
            if tags[j] != type_filter[1]:
                continue
            if validate_doubling(s1, s2).optimal:
                yield DoublingCode(s1, s2)
                emitted += 1
                if limit is not None and emitted >= limit:
                    return


# ---------------------------------------------------------------------------
# exhaustive (X,X) census


class _XXContext:
    """Shared read-only arrays for the exhaustive (X,X) pair census."""

    def __init__(self, progress: bool = False):
        t = tables()
        arr = all_spread_line_ids()
        bulk = classify_all(arr)
        xi = np.flatnonzero(bulk.types == 0)
        self.x_lines = arr[xi]  # (NX, 9) int16
        self.nx = len(xi)
        self.common = np.take_along_axis(
            self.x_lines, bulk.common_pos[xi].astype(np.int64)[:, None], axis=1
        )[:, 0]
        self.reg_lines = regulus_line_ids(self.x_lines)  # (NX, 4, 3)
        self.holes = hole_points(self.x_lines)  # (NX, 4), values 1..31
        self.words = (self.nx + 63) // 64

        # inverted index: bit s of inv[l] set iff type-X spread s contains line l
        member = np.zeros((N_LINES, self.words * 64), dtype=np.uint8)
        idx = np.arange(self.nx)
        for c in range(9):
            member[self.x_lines[:, c], idx] = 1
        self.inv = np.packbits(member, axis=1, bitorder="little").view(np.uint64)
        self.tail = np.zeros(self.words, dtype=np.uint64)
        self.tail[: self.nx // 64] = np.uint64(0xFFFFFFFFFFFFFFFF)
        if self.nx % 64:
            self.tail[self.nx // 64] = np.uint64((1 << (self.nx % 64)) - 1)

        self.perp = t.perp
        self.meets = t.line_meets_plane  # [plane(=dual line id), line]
        self.pt_in_plane = t.point_in_plane  # [plane, point-1]

    def partners(self, i: int) -> np.ndarray:
        """Indices (into the X array) of optimal partners of X spread i."""
        forbidden = np.flatnonzero(self.perp[self.x_lines[i]].any(axis=0))
        bad = np.bitwise_or.reduce(self.inv[forbidden], axis=0)
        good = ~bad & self.tail
        bits = np.unpackbits(good.view(np.uint8), bitorder="little")[: self.nx]
        return np.flatnonzero(bits)

    def pattern_codes(self, i: int) -> np.ndarray:
        """Encoded pattern of every plane (by dual-line ID) against X spread i.

        Encoding: ((((c0*4+c1)*4+c2)*4+c3)*2 + meets_common)*5 + holes,
        with c0 >= c1 >= c2 >= c3 the per-regulus meet counts.
        """
        cnt = (
            self.meets[:, self.reg_lines[i].reshape(-1)]
            .reshape(N_LINES, 4, 3)
            .sum(axis=2)
        )
        cnt = np.sort(cnt, axis=1)[:, ::-1].astype(np.int64)
        packed = ((cnt[:, 0] * 4 + cnt[:, 1]) * 4 + cnt[:, 2]) * 4 + cnt[:, 3]
        meets = self.meets[:, self.common[i]].astype(np.int64)
        hole_ct = self.pt_in_plane[:, self.holes[i] - 1].sum(axis=1).astype(np.int64)
        return (packed * 2 + meets) * 5 + hole_ct


_CODE_BASE = 4**4 * 2 * 5  # pattern * meets * holes


def _decode(code: int):
    ninth = bool(code & 1)
    code >>= 1
    holes = code % 5
    code //= 5
    meets = bool(code & 1)
    code >>= 1
    counts = (code >> 6 & 3, code >> 4 & 3, code >> 2 & 3, code & 3)
    return counts, meets, holes, ninth


_CTX = None


def _get_ctx() -> _XXContext:
    global _CTX
    if _CTX is None:
        _CTX = _XXContext()
    return _CTX


def _census_range(lo: int, hi: int):
    ctx = _get_ctx()
    hist = np.zeros(_CODE_BASE * 2, dtype=np.int64)
    pairs = 0
    diagonal = 0
    for i in range(lo, hi):
        partners = ctx.partners(i)
        if partners.size == 0:
            continue
        pairs += partners.size
        if partners.searchsorted(i) < partners.size and partners[
            partners.searchsorted(i)
        ] == i:
            diagonal += 1
        codes = ctx.pattern_codes(i)
        plane_codes = codes[ctx.x_lines[partners]]  # (k, 9)
        is_ninth = ctx.x_lines[partners] == ctx.common[partners][:, None]
        full = plane_codes * 2 + is_ninth
        hist += np.bincount(full.reshape(-1), minlength=_CODE_BASE * 2)
    return hist, pairs, diagonal


def exhaustive_xx_census(
    jobs: int = 1, limit: Optional[int] = None, progress: bool = False
) -> PatternCensus:
    """Census over every ordered optimal (X,X) pair.

    ``limit`` restricts the first spreads considered as S1 (for smoke
    tests); the full run visits every type-X spread.  With ``jobs > 1``
    the S1 range is split across forked workers and the histograms summed.
    """
    ctx = _get_ctx()
    n = ctx.nx if limit is None else min(limit, ctx.nx)
    if jobs <= 1:
        hist, pairs, diagonal = _census_range(0, n)
    else:
        import multiprocessing as mp

        step = (n + jobs - 1) // jobs
        ranges = [(k, min(k + step, n)) for k in range(0, n, step)]
        with mp.get_context("fork").Pool(jobs) as pool:
            parts = pool.starmap(_census_range, ranges)
        hist = sum(p[0] for p in parts)
        pairs = sum(p[1] for p in parts)
        diagonal = sum(p[2] for p in parts)

    histogram = {}
    for code in np.flatnonzero(hist):
        histogram[_decode(int(code))] = int(hist[code])
    census = PatternCensus(histogram, pair_count=pairs)
    census.violations = census.check()
    census.diagonal_pairs = diagonal
    census.s1_count = n
    return census
