"""Grid primitives: signatures, faces, symmetries, point sets, arrays."""

import json
from itertools import product
from math import comb, factorial

import pytest

from freqcube.core import (CubeArray, Face, GridSig, PointSet,
                           ResourceCapError, Symmetry, ValidationError,
                           all_symmetries, apply_symmetry, apply_symmetry_set,
                           ball_count, canonical_form, enumerate_faces,
                           group_order, render_cube, render_point_set,
                           retract, sigma, weight)


class TestGridSig:
    def test_size_and_roundtrip(self, rng):
        for q, n in [(2, 1), (2, 5), (3, 3), (5, 2), (7, 1)]:
            sig = GridSig(q, n)
            assert sig.size == q ** n
            for _ in range(30):
                p = tuple(rng.randrange(q) for _ in range(n))
                assert sig.point(sig.index(p)) == p

    def test_row_major_order(self):
        sig = GridSig(3, 2)
        assert sig.index((0, 0)) == 0
        assert sig.index((0, 2)) == 2
        assert sig.index((1, 2)) == 5
        assert sig.index((2, 2)) == 8
        assert list(sig.points()) == [(a, b) for a in range(3) for b in range(3)]

    def test_validation(self):
        with pytest.raises(ValidationError):
            GridSig(1, 3)
        with pytest.raises(ValidationError):
            GridSig(2, 0)
        with pytest.raises(ValidationError):
            GridSig(256, 1)
        with pytest.raises(ValidationError):
            GridSig(2, 63)  # 2^63 exceeds the index limit
        sig = GridSig(3, 2)
        with pytest.raises(ValidationError):
            sig.check_point((0, 3))
        with pytest.raises(ValidationError):
            sig.check_point((0,))


class TestWeightAndBalls:
    def test_weight(self):
        assert weight((0, 0, 0)) == 0
        assert weight((0, 2, 1)) == 2

    def test_ball_count_values(self):
        assert ball_count(2, 4, 1) == 5
        assert ball_count(3, 2, 1) == 5
        assert ball_count(3, 3, 2) == 19
        for q, n in [(2, 3), (3, 2), (4, 2)]:
            assert ball_count(q, n, -1) == 0
            assert ball_count(q, n, n) == q ** n

    def test_ball_count_is_weight_census(self):
        for q, n in [(2, 4), (3, 3)]:
            sig = GridSig(q, n)
            for r in range(-1, n + 1):
                direct = sum(1 for p in sig.points() if weight(p) <= r)
                assert ball_count(q, n, r) == direct

    def test_sigma(self):
        assert sigma(3, 3, 2) == 8
        assert sigma(2, 7, 5) == 8
        assert sigma(3, 2, 1) == 4
        for q, n in [(2, 4), (3, 3)]:
            for r in range(-1, n + 1):
                assert sigma(q, n, r) == q ** n - ball_count(q, n, r)

    def test_range_errors(self):
        with pytest.raises(ValidationError):
            ball_count(3, 2, 3)
        with pytest.raises(ValidationError):
            ball_count(3, 2, -2)


class TestFaces:
    def test_counts_and_sizes(self):
        for q, n in [(2, 3), (3, 2), (3, 3)]:
            for k in range(1, n + 1):
                faces = list(enumerate_faces(GridSig(q, n), k))
                assert len(faces) == comb(n, k) * q ** (n - k)
                for f in faces:
                    pts = list(f.points())
                    assert len(pts) == q ** k
                    assert len(set(pts)) == q ** k
                    assert all(f.contains(p) for p in pts)

    def test_face_fields(self):
        sig = GridSig(3, 3)
        f = Face(sig, ((0, 2), (2, 1)))
        assert f.dimension == 1
        assert f.free == (1,)
        assert f.contains((2, 0, 1))
        assert not f.contains((2, 0, 2))

    def test_every_point_in_right_number_of_faces(self):
        sig = GridSig(3, 2)
        faces = list(enumerate_faces(sig, 1))
        for p in sig.points():
            assert sum(1 for f in faces if f.contains(p)) == 2


class TestSymmetry:
    def test_identity_and_apply(self):
        sig = GridSig(3, 2)
        e = Symmetry.identity(3, 2)
        for p in sig.points():
            assert e.apply(p) == p

    def test_compose_inverse(self, rng):
        syms = list(all_symmetries(2, 3))
        for _ in range(40):
            a, b = rng.choice(syms), rng.choice(syms)
            p = tuple(rng.randrange(2) for _ in range(3))
            assert a.compose(b).apply(p) == a.apply(b.apply(p))
            assert a.inverse().apply(a.apply(p)) == p

    def test_group_order(self):
        assert group_order(2, 2) == 2 * 2 * 2
        assert group_order(3, 2) == 2 * 36
        assert group_order(3, 3) == factorial(3) * 6 ** 3
        assert len(list(all_symmetries(3, 2))) == 72
        syms = list(all_symmetries(2, 2))
        assert len(set(syms)) == len(syms) == 8

    def test_action_is_bijective(self, rng):
        sig = GridSig(3, 2)
        for sym in list(all_symmetries(3, 2))[:20]:
            images = {sym.apply(p) for p in sig.points()}
            assert len(images) == sig.size

    def test_apply_symmetry_module_fn(self):
        sym = Symmetry((1, 0), ((1, 0), (0, 1)))
        assert apply_symmetry(sym, (0, 1)) == (0, 0)


class TestPointSet:
    def test_dedup_and_sort(self):
        sig = GridSig(3, 2)
        T = PointSet(sig, [(2, 2), (0, 1), (2, 2), (1, 0)])
        assert T.points == ((0, 1), (1, 0), (2, 2))
        assert len(T) == 3
        assert (1, 0) in T
        assert (1, 1) not in T

    def test_indices_mask_union(self):
        sig = GridSig(2, 2)
        A = PointSet(sig, [(0, 0), (1, 1)])
        B = PointSet(sig, [(1, 0)])
        assert A.indices() == (0, 3)
        assert A.mask() == 0b1001
        assert A.union(B).indices() == (0, 2, 3)

    def test_json_roundtrip(self):
        sig = GridSig(3, 3)
        T = PointSet(sig, [(0, 1, 2), (2, 2, 2)])
        doc = json.loads(T.to_json())
        assert doc == {"q": 3, "n": 3, "points": [[0, 1, 2], [2, 2, 2]]}
        assert PointSet.from_json(T.to_json()) == T
        assert PointSet.from_json_dict(T.to_json_dict()) == T

    def test_grid_mismatch(self):
        sig = GridSig(2, 2)
        with pytest.raises(ValidationError):
            PointSet(sig, [(0, 2)])

    def test_canonical_form_invariance(self, rng):
        sig = GridSig(2, 3)
        syms = list(all_symmetries(2, 3))
        for _ in range(15):
            pts = [tuple(rng.randrange(2) for _ in range(3))
                   for _ in range(rng.randrange(1, 6))]
            T = PointSet(sig, pts)
            base = canonical_form(T)
            for _ in range(5):
                sym = rng.choice(syms)
                assert canonical_form(apply_symmetry_set(sym, T)) == base

    def test_canonical_form_group_cap(self):
        T = PointSet(GridSig(3, 3), [(0, 0, 0)])
        with pytest.raises(ResourceCapError):
            canonical_form(T, group_cap=10)


class TestCubeArray:
    def test_from_function_and_lookup(self):
        sig = GridSig(3, 2)
        f = CubeArray.from_function(sig, lambda p: (p[0] + p[1]) % 3)
        assert f.value_at((1, 2)) == 0
        assert f[(2, 2)] == 1
        assert f.values[sig.index((0, 2))] == 2

    def test_constant(self):
        f = CubeArray.constant(GridSig(2, 2), 1)
        assert set(f.values) == {1}

    def test_retract(self):
        sig = GridSig(3, 2)
        f = CubeArray.from_function(sig, lambda p: (p[0] + 2 * p[1]) % 3)
        g = retract(f, 0, 1)
        assert g.sig == GridSig(3, 1)
        assert g.values == tuple((1 + 2 * y) % 3 for y in range(3))
        h = f.retract(1, 2)
        assert h.values == tuple((x + 4) % 3 for x in range(3))

    def test_retract_needs_two_dims(self):
        f = CubeArray.constant(GridSig(3, 1), 0)
        with pytest.raises(ValidationError):
            f.retract(0, 0)

    def test_json_roundtrip(self):
        sig = GridSig(2, 2)
        f = CubeArray(sig, [0, 1, 1, 0])
        doc = f.to_json_dict(m=2)
        assert doc == {"q": 2, "n": 2, "m": 2, "values": [0, 1, 1, 0]}
        assert CubeArray.from_json_dict(doc).values == f.values

    def test_length_validation(self):
        with pytest.raises(ValidationError):
            CubeArray(GridSig(2, 2), [0, 1])


class TestRendering:
    def test_render_cube_2d(self):
        f = CubeArray(GridSig(2, 2), [0, 1, 1, 0])
        assert render_cube(f) == "0 1\n1 0"

    def test_render_cube_3d_blocks(self):
        f = CubeArray.from_function(GridSig(2, 3), lambda p: p[0])
        out = render_cube(f)
        assert "[0]" in out and "[1]" in out
        assert "1 1\n1 1" in out

    def test_render_point_set(self):
        T = PointSet(GridSig(2, 2), [(0, 0), (1, 1)])
        assert render_point_set(T) == "* .\n. *"
