import itertools

import pytest

from spreadcodes.doubling import (
    ALLOWED_PATTERNS,
    ELIMINATED_PATTERN,
    NINTH_PLANE_PATTERNS,
    PATTERN_HOLES,
    DoublingCode,
    doubling_search,
    exhaustive_xx_census,
    hole_count,
    intersection_pattern,
    min_distance,
    pattern_census,
    validate_doubling,
)
from spreadcodes.gf2geom import subspace_distance
from spreadcodes.spreads import SpreadAnomaly, classify, dual_spread, holes


class TestValidation:
    def test_reference_pairs_optimal(self, reference_pairs):
        for s1, s2 in reference_pairs:
            code = DoublingCode(s1, s2)
            assert code.is_optimal
            assert len(code.codewords) == 18
            assert code.min_distance() == 3

    def test_witness_on_violation(self, reference_pairs):
        # a spread paired with itself is never far from its own dual planes
        s1, _ = reference_pairs[0]
        verdict = validate_doubling(s1, s1)
        assert not verdict.optimal
        i, j = verdict.witness
        line = s1.lines[i]
        plane = dual_spread(s1)[j]
        assert line <= plane

    def test_min_distance_matches_pairwise_sweep(self, reference_pairs):
        s1, s2 = reference_pairs[0]
        code = DoublingCode(s1, s2)
        dists = [
            subspace_distance(a, b)
            for a, b in itertools.combinations(code.codewords, 2)
        ]
        assert min(dists) == min_distance(code) == 3

    def test_code_immutable(self, reference_pairs):
        s1, s2 = reference_pairs[0]
        code = DoublingCode(s1, s2)
        with pytest.raises(AttributeError):
            code.s1 = s2


class TestPatterns:
    def test_reference_ninth_patterns(self, reference_pairs):
        expected = [
            (2, 2, 2, 0),
            (2, 2, 1, 1),
            (3, 3, 1, 1),
            (2, 2, 2, 2),
            (3, 3, 2, 2),
        ]
        for (s1, s2), want in zip(reference_pairs, expected):
            st1, st2 = classify(s1), classify(s2)
            ninth = dual_spread(s2)[st2.distinguished]
            pat = intersection_pattern(ninth, s1, st1)
            assert pat.counts == want
            assert pat.counts in NINTH_PLANE_PATTERNS

    def test_all_reference_patterns_allowed(self, reference_pairs):
        for s1, s2 in reference_pairs:
            st = classify(s1)
            for plane in dual_spread(s2):
                pat = intersection_pattern(plane, s1, st)
                assert pat.counts in ALLOWED_PATTERNS
                assert pat.counts != ELIMINATED_PATTERN
                assert PATTERN_HOLES[pat.counts] == (
                    pat.meets_common,
                    pat.hole_count,
                )

    def test_reference_hole_trichotomy(self, reference_pairs):
        expected = [(False, 1), (False, 1), (True, 2), (True, 2), (True, 0)]
        for (s1, s2), want in zip(reference_pairs, expected):
            st1, st2 = classify(s1), classify(s2)
            ninth = dual_spread(s2)[st2.distinguished]
            assert hole_count(ninth, s1, st1) == want

    def test_raw_counts_account_for_all_plane_points(self, reference_pairs):
        # each plane has 7 points: regulus-line hits + common-line hits +
        # holes of the first spread
        s1, s2 = reference_pairs[0]
        st = classify(s1)
        common = s1.lines[st.distinguished]
        hs = holes(s1)
        for plane in dual_spread(s2):
            pat = intersection_pattern(plane, s1, st)
            on_common = sum(1 for p in plane.points() if p in common)
            in_holes = sum(1 for p in plane.points() if p in hs)
            reg_pts = sum(
                (plane.mask & s1.lines[i].mask).bit_count() >> 1
                for t in st.reguli
                for i in t
                if i != st.distinguished
            )
            assert reg_pts + on_common + in_holes == 7
            # raw counts one hit per regulus line, and the common line sits
            # on all four reguli
            assert sum(pat.raw) == reg_pts + 4 * pat.meets_common

    def test_pattern_requires_type_x(self, reference_pairs):
        s1, _ = reference_pairs[0]
        st = classify(s1)
        from spreadcodes.spreads import Spread, opposite_regulus

        t = st.reguli[0]
        opp = opposite_regulus([s1.lines[i] for i in t])
        s_e = Spread([s1.lines[i] for i in range(9) if i not in t] + list(opp))
        with pytest.raises(ValueError):
            intersection_pattern(dual_spread(s1)[0], s_e)

    def test_hole_count_rejects_illegal_combo(self, reference_pairs):
        # scanning every plane of PG(4,2): most show a legal
        # (meets_common, holes) combination, but at least one does not and
        # must raise instead of returning a wrong answer
        from spreadcodes.pg42 import tables

        s1, _ = reference_pairs[0]
        st = classify(s1)
        legal, illegal = 0, 0
        for plane in tables().planes:
            try:
                meets, nholes = hole_count(plane, s1, st)
            except SpreadAnomaly:
                illegal += 1
            else:
                legal += 1
                assert (meets, nholes) in ((False, 1), (True, 0), (True, 2))
        assert legal + illegal == 155
        assert illegal >= 1


class TestCensusStreaming:
    def test_reference_pairs_census(self, reference_pairs):
        census = pattern_census(reference_pairs)
        assert census.pair_count == 5
        assert census.plane_count == 45
        assert census.violations == []
        assert census.check() == []
        assert census.eliminated_pattern_count == 0
        assert set(census.by_pattern()) <= set(ALLOWED_PATTERNS)
        assert set(census.ninth_by_pattern()) == {
            (2, 2, 2, 0),
            (2, 2, 1, 1),
            (3, 3, 1, 1),
            (2, 2, 2, 2),
            (3, 3, 2, 2),
        }

    def test_census_rejects_non_optimal_pair(self, reference_pairs):
        s1, _ = reference_pairs[0]
        with pytest.raises(ValueError):
            pattern_census([(s1, s1)])

    def test_search_on_small_db(self, reference_pairs):
        db = [s for pair in reference_pairs for s in pair]
        found = list(doubling_search(db, limit=3))
        assert len(found) == 3
        for code in found:
            assert code.is_optimal
            assert classify(code.s1).tag == "X"
            assert classify(code.s2).tag == "X"


@pytest.mark.slow
class TestExhaustiveCensus:
    def test_limited_run_is_clean(self):
        census = exhaustive_xx_census(limit=2)
        assert census.s1_count == 2
        assert census.pair_count > 0
        assert census.violations == []
        assert census.plane_count == 9 * census.pair_count

    def test_vectorized_codes_match_object_level(self):
        # cross-check the encoded per-plane patterns against the
        # object-level intersection_pattern on sampled partners
        import numpy as np

        from spreadcodes.doubling import _decode, _get_ctx
        from spreadcodes.spreads import Spread

        ctx = _get_ctx()
        codes = ctx.pattern_codes(0)
        js = ctx.partners(0)[:15]
        assert js.size > 0
        s1 = Spread.from_line_ids(ctx.x_lines[0])
        t1 = classify(s1)
        for j in js:
            s2 = Spread.from_line_ids(ctx.x_lines[j])
            t2 = classify(s2)
            assert validate_doubling(s1, s2).optimal
            for pos, plane in enumerate(dual_spread(s2)):
                lid = int(ctx.x_lines[j][pos])
                ninth_bit = int(lid == ctx.common[j])
                counts, meets, nholes, ninth = _decode(
                    int(codes[lid]) * 2 + ninth_bit
                )
                pat = intersection_pattern(plane, s1, t1)
                assert counts == pat.counts
                assert meets == pat.meets_common
                assert nholes == pat.hole_count
                assert ninth == (pos == t2.distinguished)
