"""Bitrades: recognition, search, enumeration, Boolean-function analysis."""

import pytest

from freqcube.bitrades import (BitradeCensus, affine_support_bitrade, anf,
                               bitrade_from_json_dict, bitrade_to_json_dict,
                               classify_small_bitrades, degree,
                               enumerate_bitrades, enumerate_bitrades_brute,
                               essential_variables, find_bitrade_avoiding,
                               from_anf, is_affine_leq2, is_k_bitrade,
                               support_indicator, support_points)
from freqcube._engine import STATUS_COMPLETE, STATUS_FOUND, STATUS_NODE_CAP
from freqcube.core import (CubeArray, GridSig, PointSet, ResourceCapError,
                           ValidationError, weight)


class TestRecognition:
    def test_known_bitrade(self):
        g = CubeArray(GridSig(2, 2), [1, -1, -1, 1])
        assert is_k_bitrade(g, 1)
        assert is_k_bitrade(g, 2)

    def test_known_non_bitrade(self):
        g = CubeArray(GridSig(2, 2), [1, -1, -1, -1])
        assert not is_k_bitrade(g, 1)

    def test_zero_is_bitrade(self):
        g = CubeArray.constant(GridSig(3, 2), 0)
        assert is_k_bitrade(g, 1)

    def test_value_range_checked(self):
        g = CubeArray(GridSig(2, 2), [2, -1, -1, 0])
        with pytest.raises(ValidationError):
            is_k_bitrade(g, 1)

    def test_parity_sign_cube(self):
        # (-1)^weight sums to zero on every k-face of [2]^n
        for n in (2, 3, 4):
            g = CubeArray.from_function(GridSig(2, n),
                                        lambda p: 1 - 2 * (weight(p) % 2))
            for k in range(1, n + 1):
                assert is_k_bitrade(g, k)


class TestSupport:
    def test_support_points_and_indicator(self):
        g = CubeArray(GridSig(2, 2), [1, 0, 0, -1])
        assert support_points(g).points == ((0, 0), (1, 1))
        assert support_indicator(g).values == (1, 0, 0, 1)


class TestSearch:
    def test_found_with_witness(self):
        out = find_bitrade_avoiding(2, 2, 1)
        assert out.status == STATUS_FOUND
        assert out.witness is not None
        assert is_k_bitrade(out.witness, 1)
        assert out.nodes == 16

    def test_witness_avoids_the_set(self):
        T = PointSet(GridSig(3, 2), [(0, 0)])
        out = find_bitrade_avoiding(3, 2, 1, T)
        assert out.status == STATUS_FOUND
        assert out.witness.value_at((0, 0)) == 0

    def test_exhausted_on_supertesting_set(self):
        sig = GridSig(3, 2)
        T = PointSet(sig, [p for p in sig.points() if weight(p) == 2])
        out = find_bitrade_avoiding(3, 2, 1, T)
        assert out.status == STATUS_COMPLETE
        assert out.exhausted
        assert out.witness is None

    def test_node_cap_outcome(self):
        out = find_bitrade_avoiding(3, 2, 1, node_cap=3)
        assert out.status == STATUS_NODE_CAP
        assert not out.exhausted

    def test_accepts_raw_points(self):
        out = find_bitrade_avoiding(2, 2, 1, [(0, 0), (0, 1), (1, 0), (1, 1)])
        assert out.status == STATUS_COMPLETE


class TestEnumeration:
    def test_csp_equals_brute(self):
        for (q, n, k) in [(2, 2, 1), (2, 3, 2), (3, 2, 1)]:
            brute = enumerate_bitrades_brute(q, n, k)
            csp, out = enumerate_bitrades(q, n, k)
            assert out.exhausted
            assert {g.values for g in brute} == {g.values for g in csp}

    def test_counts(self):
        csp, _ = enumerate_bitrades(2, 3, 2)
        assert len(csp) == 33
        csp, _ = enumerate_bitrades(2, 4, 2)
        assert len(csp) == 51
        csp, _ = enumerate_bitrades(2, 3, 1)
        assert len(csp) == 3

    def test_node_cap_raises(self):
        with pytest.raises(ResourceCapError):
            enumerate_bitrades(3, 2, 1, node_cap=10)

    def test_brute_cell_cap(self):
        with pytest.raises(ResourceCapError):
            enumerate_bitrades_brute(3, 3, 1)  # 27 cells > default cap 10


class TestAnf:
    def test_roundtrip(self, rng):
        for n in (1, 2, 3, 4):
            sig = GridSig(2, n)
            for _ in range(10):
                f = CubeArray(sig, [rng.randrange(2) for _ in range(2 ** n)])
                assert from_anf(n, anf(f)).values == f.values

    def test_known_coefficients(self):
        sig = GridSig(2, 2)
        f = CubeArray.from_function(sig, lambda p: p[0] * p[1])  # x0 x1
        # coefficient order: 1, x1, x0, x0x1
        assert anf(f) == (0, 0, 0, 1)
        g = CubeArray.from_function(sig, lambda p: (p[0] + p[1]) % 2)
        assert anf(g) == (0, 1, 1, 0)

    def test_degree(self):
        sig = GridSig(2, 3)
        assert degree(CubeArray.constant(sig, 0)) == 0
        assert degree(CubeArray.constant(sig, 1)) == 0
        assert degree(CubeArray.from_function(sig, lambda p: p[2])) == 1
        assert degree(CubeArray.from_function(
            sig, lambda p: p[0] * p[1] * p[2])) == 3

    def test_essential_variables(self):
        sig = GridSig(2, 3)
        f = CubeArray.from_function(sig, lambda p: (p[0] + p[2]) % 2)
        assert essential_variables(f) == (0, 2)
        assert essential_variables(CubeArray.constant(sig, 1)) == ()

    def test_is_affine_leq2(self):
        sig = GridSig(2, 3)
        yes = [lambda p: 0, lambda p: 1, lambda p: p[1],
               lambda p: (p[0] + p[2]) % 2, lambda p: (1 + p[0] + p[1]) % 2]
        no = [lambda p: p[0] * p[1],
              lambda p: (p[0] + p[1] + p[2]) % 2]  # 3 essential variables
        for fn in yes:
            assert is_affine_leq2(CubeArray.from_function(sig, fn))
        for fn in no:
            assert not is_affine_leq2(CubeArray.from_function(sig, fn))

    def test_non_boolean_rejected(self):
        with pytest.raises(ValidationError):
            anf(CubeArray(GridSig(2, 2), [0, 1, 2, 0]))
        with pytest.raises(ValidationError):
            anf(CubeArray(GridSig(3, 2), [0] * 9))


class TestAffineSupportBitrades:
    def test_constructions_are_bitrades(self):
        for n in (2, 3, 4):
            for ess in ([], [0], [n - 1], [0, 1], [0, n - 1]):
                for const in (0, 1):
                    g = affine_support_bitrade(n, ess, const)
                    assert is_k_bitrade(g, 2), (n, ess, const)
                    ind = support_indicator(g)
                    assert essential_variables(ind) == tuple(sorted(ess))
                    assert degree(ind) <= 1

    def test_support_matches_affine_form(self):
        g = affine_support_bitrade(3, [0, 2], 1)
        ind = support_indicator(g)
        sig = GridSig(2, 3)
        for p in sig.points():
            want = 1 if (p[0] + p[2]) % 2 == (1 + 1) % 2 else 0
            assert ind.value_at(p) == want

    def test_too_many_essential(self):
        with pytest.raises(ValidationError):
            affine_support_bitrade(3, [0, 1, 2])


class TestCensus:
    def test_brute_census(self):
        c = classify_small_bitrades(2, 3, 2)
        assert isinstance(c, BitradeCensus)
        assert c.method == "brute"
        assert (c.total, c.nonzero) == (33, 32)
        assert len(c.supports) == 13

    def test_engine_census_matches_brute(self):
        brute = classify_small_bitrades(2, 3, 2, method="brute")
        eng = classify_small_bitrades(2, 3, 2, method="engine")
        assert {g.values for g in brute.bitrades} == \
               {g.values for g in eng.bitrades}
        assert set(brute.supports) == set(eng.supports)

    def test_auto_picks_engine_for_larger_grids(self):
        c = classify_small_bitrades(2, 4, 2)  # 16 cells > brute cap
        assert c.method == "engine"
        assert c.nonzero == 50
        assert len(c.supports) == 21


class TestJson:
    def test_roundtrip(self):
        g = CubeArray(GridSig(2, 2), [1, -1, -1, 1])
        doc = bitrade_to_json_dict(g, 1)
        assert doc == {"q": 2, "n": 2, "k": 1, "values": [1, -1, -1, 1]}
        g2, k = bitrade_from_json_dict(doc)
        assert g2.values == g.values and k == 1

    def test_validation_on_load(self):
        doc = {"q": 2, "n": 2, "k": 1, "values": [1, 0, 0, 1]}
        with pytest.raises(ValidationError):
            bitrade_from_json_dict(doc)
        g, _ = bitrade_from_json_dict(doc, validate=False)
        assert g.values == (1, 0, 0, 1)
