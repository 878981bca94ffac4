"""Two construction pipelines for optimal (5,3) doubling codes over GF(2).

HKK pipeline: lift a rank-distance-2 Gabidulin code of 3x3 matrices to 64
planes of PG(5,2), pick a shortening point P and hyperplane H together
with two extra planes E (through P) and E' (inside H), shorten everything
to PG(4,2), and read the result as 9 lines plus 9 planes.

CPS pipeline: a fixed order-6 matrix group G acting on PG(4,2); a good
line orbit (6 pairwise-disjoint lines) completed by a regulus gives the
line codewords, a good plane orbit plus 3 planes spanned by the opposite
regulus' lines and a point N gives the plane codewords.  Two variants
rearrange which regulus contributes lines vs planes, or replace one of
the 3 non-orbit planes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np

from .doubling import DoublingCode, intersection_pattern, validate_doubling
from .gf2geom import (
    Subspace,
    dual,
    enumerate_subspaces,
    join,
    rref,
    span_mask,
    subspace_distance,
)
from .spreads import (
    Spread,
    SpreadError,
    classify,
    is_regulus,
    holes,
    opposite_regulus,
    spread_from_planes,
    verify_regulus_free_extension,
)

__all__ = [
    "LiftedGabidulinCode",
    "build_lifted_gabidulin",
    "shorten",
    "HKKConfig",
    "hkk_configs",
    "hkk_build",
    "hkk_pattern_check",
    "HKK_NINTH_PATTERNS",
    "HKK_OTHER_PATTERNS",
    "cps_group",
    "cps_orbits",
    "CPSOrbits",
    "CPSConfig",
    "cps_build",
    "cps_regulus_check",
]


# ---------------------------------------------------------------------------
# GF(8) arithmetic (modulus x^3 + x + 1) and the lifted Gabidulin code

_GF8_MOD = 0b1011


def _gf8_mul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        if a & 8:
            a ^= _GF8_MOD
        b >>= 1
    return r


@dataclass(frozen=True)
class LiftedGabidulinCode:
    """64 planes of PG(5,2): row spaces of [I3 | M] over a rank-metric code."""

    codewords: tuple  # 64 Subspace, ambient 6
    matrices: tuple  # 64 matrices as 3-tuples of 3-bit row ints
    special_plane: Subspace  # coordinates 4..6, disjoint from every codeword


def _gab_matrix(a0: int, a1: int) -> tuple:
    """3x3 GF(2) matrix of z -> a0*z + a1*z^2 on the basis (1, x, x^2)."""
    cols = [_gf8_mul(a0, b) ^ _gf8_mul(a1, _gf8_mul(b, b)) for b in (1, 2, 4)]
    return tuple(
        sum(((cols[j] >> i) & 1) << j for j in range(3)) for i in range(3)
    )


def build_lifted_gabidulin() -> LiftedGabidulinCode:
    """Construct the lifted (6,3,2) Gabidulin code, deterministic order.

    Message coefficients (a0, a1) run lexicographically over GF(8)^2; the
    rank-distance >= 2 property is asserted exhaustively.
    """
    matrices = []
    codewords = []
    for a0 in range(8):
        for a1 in range(8):
            rows = _gab_matrix(a0, a1)
            matrices.append(rows)
            basis = [(1 << i) | (rows[i] << 3) for i in range(3)]
            codewords.append(Subspace(basis, 6))
    for i in range(64):
        for j in range(i + 1, 64):
            diff = [matrices[i][k] ^ matrices[j][k] for k in range(3)]
            if len(rref(diff)) < 2:
                raise AssertionError("rank distance below 2 in Gabidulin code")
    special = Subspace((8, 16, 32), 6)
    return LiftedGabidulinCode(tuple(codewords), tuple(matrices), special)


# ---------------------------------------------------------------------------
# point-hyperplane shortening


def _h_coordinates(h: Subspace) -> dict:
    """Vector-in-H -> 5-bit coordinate tuple w.r.t. H's RREF basis."""
    coord = {}
    hb = h.basis
    for bits in range(1 << len(hb)):
        v = 0
        for i, b in enumerate(hb):
            if bits >> i & 1:
                v ^= b
        coord[v] = bits
    return coord


def shorten(code: Sequence[Subspace], p: int, h: Subspace) -> list:
    """Point-hyperplane shortening, re-coordinatized into ambient 5.

    Keeps codewords inside ``h`` whole and replaces codewords through
    ``p`` by their intersection with ``h``; anything else is dropped.
    Coordinates of the result are taken w.r.t. the RREF basis of ``h``.
    """
    if h.dim != h.n - 1:
        raise ValueError("shortening needs a hyperplane")
    if p in h:
        raise ValueError("shortening point must lie outside the hyperplane")
    coord = _h_coordinates(h)
    hm = h.mask
    out = []
    for x in code:
        xm = x.mask
        if (xm & ~hm) == 0:
            pts = x.points()
        elif p in x:
            pts = [v for v in x.points() if hm >> v & 1]
        else:
            continue
        out.append(Subspace([coord[v] for v in pts], h.n - 1))
    return out


# ---------------------------------------------------------------------------
# HKK configuration search and assembly

HKK_NINTH_PATTERNS = ((3, 3, 1, 1), (2, 2, 2, 2))
HKK_OTHER_PATTERNS = ((2, 2, 2, 0), (2, 2, 1, 1), (3, 3, 2, 2), (3, 3, 3, 1))


@dataclass(frozen=True)
class HKKConfig:
    """A valid shortening configuration.

    Invariants: p outside the special plane and outside h; h does not
    contain the special plane; e_prime contains special ∩ h and lies in h;
    e contains p; e and e_prime are at distance >= 4 from every Gabidulin
    codeword and from each other.
    """

    p: int
    h: Subspace
    e: Subspace
    e_prime: Subspace

    @property
    def h_basis(self) -> tuple:
        return self.h.basis


def _far_from(plane: Subspace, others, lower: int = 4) -> bool:
    return all(subspace_distance(plane, c) >= lower for c in others)


def _planes_through_line(line_pts, ambient_mask, n=6):
    """Canonical, sorted planes spanned by the given line and a point of
    the masked region."""
    out = set()
    base = rref(line_pts)
    lm = span_mask(base)
    m = ambient_mask & ~lm & ~1
    while m:
        low = m & -m
        w = low.bit_length() - 1
        m ^= low
        out.add(rref(base + (w,)))
    return [Subspace(b, n) for b in sorted(out)]


def hkk_configs(
    gab: Optional[LiftedGabidulinCode] = None,
    mode: str = "first",
    limit: Optional[int] = None,
) -> Iterator[HKKConfig]:
    """Enumerate valid HKK configurations.

    Deterministic order: p ascending, h ascending (canonical hyperplane
    order), then e_prime ascending, e ascending.  Mode ``first`` emits the
    first-fit (e_prime, e) per (p, h); ``all`` emits every valid pair.
    """
    if mode not in ("first", "all"):
        raise ValueError(f"unknown mode {mode!r}")
    if gab is None:
        gab = build_lifted_gabidulin()
    cw = gab.codewords
    sm = gab.special_plane.mask
    emitted = 0
    for p in range(1, 64):
        if sm >> p & 1:
            continue
        for h in enumerate_subspaces(6, 5):
            hm = h.mask
            if (sm & ~hm) == 0 or hm >> p & 1:
                continue
            l2 = [v for v in gab.special_plane.points() if hm >> v & 1]
            e_primes = [
                ep
                for ep in _planes_through_line(tuple(l2), hm)
                if _far_from(ep, cw)
            ]
            if not e_primes:
                continue
            es_all = None
            for ep in e_primes:
                if es_all is None:
                    # planes through p (spanned by p and two other points)
                    es_all = [
                        e
                        for e in _planes_through_pairs(p)
                        if _far_from(e, cw)
                    ]
                found_any = False
                for e in es_all:
                    if subspace_distance(e, ep) >= 4:
                        yield HKKConfig(p, h, e, ep)
                        emitted += 1
                        found_any = True
                        if limit is not None and emitted >= limit:
                            return
                        if mode == "first":
                            break
                if mode == "first" and found_any:
                    break


def _planes_through_pairs(p: int):
    out = set()
    for w1 in range(1, 64):
        if w1 == p:
            continue
        for w2 in range(w1 + 1, 64):
            b = rref((p, w1, w2))
            if len(b) == 3:
                out.add(b)
    return [Subspace(b, 6) for b in sorted(out)]


@dataclass(frozen=True)
class HKKResult:
    code: DoublingCode
    config: HKKConfig
    l2_image: Subspace  # the line (special ∩ h) after re-coordinatization


def hkk_build(
    mode: str = "first",
    limit: Optional[int] = None,
    config: Optional[HKKConfig] = None,
    gab: Optional[LiftedGabidulinCode] = None,
    stats: Optional[dict] = None,
) -> Iterator[HKKResult]:
    """Assemble doubling codes from HKK configurations.

    The nine lines are the 8 shortened Gabidulin codewords through P plus
    the image of E ∩ H (stored last); the nine planes are the 8 kept
    Gabidulin codewords plus the image of E' (stored last).  Only codes
    that validate optimal are emitted; ``stats['discarded']`` counts the
    rest when a dict is supplied.
    """
    if gab is None:
        gab = build_lifted_gabidulin()
    if config is not None:
        configs = [config]
        _check_hkk_config(config, gab)
    else:
        configs = hkk_configs(gab, mode=mode)
    emitted = 0
    for cfg in configs:
        shortened = shorten(list(gab.codewords) + [cfg.e, cfg.e_prime], cfg.p, cfg.h)
        # E goes through P, so its image is a line; E' sits inside H
        e_img, ep_img = shortened[-2], shortened[-1]
        if e_img.dim != 2 or ep_img.dim != 3:
            raise AssertionError("shortening produced unexpected dimensions")
        lines = [s for s in shortened if s.dim == 2 and s is not e_img] + [e_img]
        planes = [s for s in shortened if s.dim == 3 and s is not ep_img] + [ep_img]
        if len(lines) != 9 or len(planes) != 9:
            if stats is not None:
                stats["discarded"] = stats.get("discarded", 0) + 1
            continue
        coord = _h_coordinates(cfg.h)
        l2_pts = [
            coord[v] for v in gab.special_plane.points() if cfg.h.mask >> v & 1
        ]
        try:
            s1 = Spread(lines)
            s2 = spread_from_planes(planes)
        except SpreadError:
            if stats is not None:
                stats["discarded"] = stats.get("discarded", 0) + 1
            continue
        code = DoublingCode(s1, s2)
        if not validate_doubling(s1, s2).optimal:
            if stats is not None:
                stats["discarded"] = stats.get("discarded", 0) + 1
            continue
        yield HKKResult(code, cfg, Subspace(l2_pts, 5))
        emitted += 1
        if limit is not None and emitted >= limit:
            return


def _check_hkk_config(cfg: HKKConfig, gab: LiftedGabidulinCode):
    sm = gab.special_plane.mask
    if sm >> cfg.p & 1:
        raise ValueError("config: p lies in the special plane")
    if cfg.p in cfg.h:
        raise ValueError("config: p lies in h")
    if (sm & ~cfg.h.mask) == 0:
        raise ValueError("config: h contains the special plane")
    if cfg.p not in cfg.e:
        raise ValueError("config: e does not contain p")
    l2 = [v for v in gab.special_plane.points() if cfg.h.mask >> v & 1]
    if any(v not in cfg.e_prime for v in l2) or (cfg.e_prime.mask & ~cfg.h.mask):
        raise ValueError("config: e_prime must lie in h and contain special ∩ h")
    if not _far_from(cfg.e, gab.codewords) or not _far_from(cfg.e_prime, gab.codewords):
        raise ValueError("config: augmenting plane too close to the Gabidulin code")
    if subspace_distance(cfg.e, cfg.e_prime) < 4:
        raise ValueError("config: e and e_prime too close")


@dataclass(frozen=True)
class HKKPatternReport:
    ninth_pattern: tuple
    other_patterns: tuple  # 8 tuples
    ninth_meets_common: bool
    s1_tag: str
    s2_tag: str
    common_is_ninth_line: bool
    regulus_free: bool
    planes_disjoint_from_l2: bool

    @property
    def ok(self) -> bool:
        return (
            self.ninth_pattern in HKK_NINTH_PATTERNS
            and all(p in HKK_OTHER_PATTERNS for p in self.other_patterns)
            and self.ninth_meets_common
            and self.s1_tag == "X"
            and self.s2_tag == "X"
            and self.regulus_free
            and self.planes_disjoint_from_l2
        )


def hkk_pattern_check(result: HKKResult) -> HKKPatternReport:
    """Profile an HKK code: ninth-plane pattern, other patterns, structure."""
    code = result.code
    s1 = code.s1
    t1 = classify(s1)
    t2 = classify(code.s2)
    pats = [intersection_pattern(pl, s1, t1) for pl in code.planes]
    ninth = pats[8]
    alpha9 = join(
        s1.lines[t1.distinguished], Subspace(holes(s1), 5)
    )
    regfree = verify_regulus_free_extension(s1.lines[:8], alpha9)
    l2m = result.l2_image.mask
    disj = all((pl.mask & l2m) == 1 for pl in code.planes[:8])
    return HKKPatternReport(
        ninth_pattern=ninth.counts,
        other_patterns=tuple(p.counts for p in pats[:8]),
        ninth_meets_common=ninth.meets_common,
        s1_tag=t1.tag,
        s2_tag=t2.tag,
        common_is_ninth_line=(t1.distinguished == 8),
        regulus_free=regfree,
        planes_disjoint_from_l2=disj,
    )


# ---------------------------------------------------------------------------
# CPS pipeline


def _cps_matrix(b: int, c: int, d: int) -> np.ndarray:
    """The group matrix at a=1, alpha=1 (block [[C, bC], [0, C]] shape).

    The scalar block C = [[c, d], [d, c+d]] with det = c^2 + cd + d^2 = 1.
    """
    return (
        np.array(
            [
                [1, 0, 0, 0, 0],
                [0, c, d, b * c, b * d],
                [0, d, (c + d), b * d, b * (c + d)],
                [0, 0, 0, c, d],
                [0, 0, 0, d, (c + d)],
            ],
            dtype=np.uint8,
        )
        % 2
    )


def cps_group() -> list:
    """The order-6 CPS group over GF(2), with its axioms verified."""
    group = [
        _cps_matrix(b, c, d)
        for b in (0, 1)
        for (c, d) in ((1, 0), (0, 1), (1, 1))
    ]
    if len(group) != 6:
        raise AssertionError("CPS group must have 6 elements")
    ident = np.eye(5, dtype=np.uint8)
    keys = {m.tobytes() for m in group}
    if not (group[0] == ident).all():
        raise AssertionError("M_{1,0,1,0} must be the identity")
    for x in group:
        for y in group:
            if ((x @ y) % 2).tobytes() not in keys:
                raise AssertionError("CPS group not closed under product")
    for x in group:
        if not any(((x @ y) % 2 == ident).all() for y in group):
            raise AssertionError("CPS group element without inverse")
    return group


def _act_vector(v: int, m: np.ndarray) -> int:
    row = np.array([(v >> i) & 1 for i in range(5)], dtype=np.uint8)
    out = row @ m % 2
    return int(sum(int(out[i]) << i for i in range(5)))


def _act_subspace(s: Subspace, m: np.ndarray) -> Subspace:
    return Subspace([_act_vector(v, m) for v in s.basis], 5)


@dataclass(frozen=True)
class CPSOrbits:
    line_orbits: tuple  # tuples of Subspace
    plane_orbits: tuple
    good_line_orbits: tuple  # indices into line_orbits
    good_plane_orbits: tuple


def cps_orbits(group: Optional[list] = None) -> CPSOrbits:
    """Orbits of the CPS group on lines and planes, with goodness tags.

    A size-6 line orbit is good iff its lines are pairwise disjoint; a
    size-6 plane orbit is good iff its planes pairwise meet in exactly a
    point.
    """
    if group is None:
        group = cps_group()
    lines = enumerate_subspaces(5, 2)
    planes = enumerate_subspaces(5, 3)

    def orbits_of(items):
        seen = set()
        out = []
        for s in items:
            if s.basis in seen:
                continue
            orb = sorted({_act_subspace(s, m) for m in group})
            seen.update(o.basis for o in orb)
            out.append(tuple(orb))
        return tuple(out)

    lorbs = orbits_of(lines)
    porbs = orbits_of(planes)
    good_l = tuple(
        i
        for i, o in enumerate(lorbs)
        if len(o) == 6
        and all(
            (a.mask & b.mask) == 1 for a, b in itertools.combinations(o, 2)
        )
    )
    good_p = tuple(
        i
        for i, o in enumerate(porbs)
        if len(o) == 6
        and all(
            (a.mask & b.mask).bit_count() == 2
            for a, b in itertools.combinations(o, 2)
        )
    )
    return CPSOrbits(lorbs, porbs, good_l, good_p)


@dataclass(frozen=True)
class CPSConfig:
    variant: str
    line_orbit: tuple  # the 6 good-orbit lines (L1)
    plane_orbit: tuple  # the 6 good-orbit planes (P1)
    regulus_r1: tuple  # the regulus whose lines span the non-orbit planes
    opposite_r2: tuple  # its opposite; completes L1 to the line spread
    point_n: int
    plane_set: tuple  # the 3 non-orbit planes actually used
    replaced_index: Optional[int] = None


def _completing_reguli(l1_lines, all_lines):
    """Regulus triples of lines disjoint from the 6 orbit lines."""
    cand = [
        l
        for l in all_lines
        if all((l.mask & x.mask) == 1 for x in l1_lines)
    ]
    for t in itertools.combinations(cand, 3):
        if (
            (t[0].mask & t[1].mask) == 1
            and (t[0].mask & t[2].mask) == 1
            and (t[1].mask & t[2].mask) == 1
            and is_regulus(*t)
        ):
            yield t


def cps_build(
    variant: str = "basic",
    limit: Optional[int] = None,
    orbits: Optional[CPSOrbits] = None,
) -> Iterator[Tuple[DoublingCode, CPSConfig]]:
    """Enumerate validated CPS doubling codes for one variant.

    ``basic``: lines L1 ∪ R2, planes P1 ∪ {<l,N> : l ∈ R1}.
    ``swap_reguli``: lines L1 ∪ R1, planes P1 ∪ {<l,N> : l ∈ R2}.
    ``replace_plane``: basic, with one non-orbit plane replaced by another
    plane through the same regulus line that is not inside the regulus'
    carrier solid.

    Codes are emitted in deterministic order (line orbit, regulus, N,
    plane orbit, then replacement choices); only configurations whose
    assembled code validates optimal are emitted.
    """
    if variant not in ("basic", "swap_reguli", "replace_plane"):
        raise ValueError(f"unknown variant {variant!r}")
    if orbits is None:
        orbits = cps_orbits()
    all_lines = enumerate_subspaces(5, 2)
    all_planes = enumerate_subspaces(5, 3)
    emitted = 0
    for li in orbits.good_line_orbits:
        l1 = orbits.line_orbits[li]
        for r2 in _completing_reguli(l1, all_lines):
            r1 = opposite_regulus(r2)
            if variant == "swap_reguli":
                spread_part, plane_part = r1, r2
            else:
                spread_part, plane_part = r2, r1
            try:
                s1 = Spread(tuple(l1) + tuple(spread_part))
            except SpreadError:
                continue
            covered = 0
            for l in plane_part:
                covered |= l.mask
            for n in range(1, 32):
                if covered >> n & 1:
                    continue
                base_planes = tuple(
                    Subspace(l.basis + (n,), 5) for l in plane_part
                )
                for pi in orbits.good_plane_orbits:
                    p1 = orbits.plane_orbits[pi]
                    if variant in ("basic", "swap_reguli"):
                        choices = [(None, base_planes)]
                    else:
                        carrier = join(join(r1[0], r1[1]), r1[2])
                        choices = []
                        for k in range(3):
                            for alt in all_planes:
                                if (
                                    (r1[k].mask & ~alt.mask) == 0
                                    and alt != base_planes[k]
                                    and (alt.mask & ~carrier.mask) != 0
                                ):
                                    ps = list(base_planes)
                                    ps[k] = alt
                                    choices.append((k, tuple(ps)))
                    for replaced, pset in choices:
                        planes = tuple(p1) + pset
                        try:
                            s2 = spread_from_planes(planes)
                        except SpreadError:
                            continue
                        if not validate_doubling(s1, s2).optimal:
                            continue
                        cfg = CPSConfig(
                            variant,
                            tuple(l1),
                            tuple(p1),
                            tuple(r1),
                            tuple(r2),
                            n,
                            pset,
                            replaced,
                        )
                        yield DoublingCode(s1, s2), cfg
                        emitted += 1
                        if limit is not None and emitted >= limit:
                            return


def cps_regulus_check(code: DoublingCode) -> bool:
    """Do the duals of the 3 non-orbit planes (stored last) form a regulus?"""
    duals = [dual(p) for p in code.planes[6:]]
    return is_regulus(*duals)
