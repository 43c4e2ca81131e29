"""Parity between the pure-Python and compiled search engines.

Every test parametrizes over the engines available in this build (see
conftest); fixture numbers — solution lists AND node counts — were frozen
from the pure engine and must match bit-for-bit on both.
"""

import os
import subprocess
import sys

import pytest

from freqcube import available_engines
from freqcube._engine import (STATUS_COMPLETE, STATUS_FOUND, STATUS_LIMIT,
                              STATUS_NODE_CAP, get_engine)
from freqcube._engine._common import shuffled_value_orders

# (q, n, k) -> (solution count incl. zero, node count)
BITRADE_FIXTURES = {
    (2, 2, 1): (3, 30),
    (2, 3, 2): (33, 456),
    (3, 2, 1): (31, 489),
    (2, 3, 1): (3, 66),
}

# (q, n, k, lambdas) -> (member count, node count)
CUBE_FIXTURES = {
    (2, 2, 1, (1, 1)): (2, 14),
    (2, 2, 2, (1, 3)): (4, 20),
    (3, 2, 1, (1, 1, 1)): (12, 246),
    (2, 3, 2, (2, 2)): (8, 86),
    (2, 3, 1, (1, 1)): (2, 30),
}


class TestBitradeSearcher:
    def test_enumerate_fixtures(self, engine):
        eng = get_engine(engine)
        for (q, n, k), (count, nodes) in BITRADE_FIXTURES.items():
            status, sols, got_nodes = eng.BitradeSearcher(q, n, k) \
                .enumerate_all(10 ** 8, 0)
            assert status == STATUS_COMPLETE
            assert len(sols) == count, (q, n, k)
            assert got_nodes == nodes, (q, n, k)

    def test_enumeration_identical_across_engines(self):
        engines = available_engines()
        if len(engines) < 2:
            pytest.skip("single engine build")
        for (q, n, k) in BITRADE_FIXTURES:
            runs = [get_engine(e).BitradeSearcher(q, n, k)
                    .enumerate_all(10 ** 8, 0) for e in engines]
            first = runs[0]
            for other in runs[1:]:
                assert other == first, (q, n, k)

    def test_search_avoiding_witness(self, engine):
        eng = get_engine(engine)
        status, values, nodes = eng.BitradeSearcher(2, 2, 1) \
            .search_avoiding((), 10 ** 8)
        assert status == STATUS_FOUND
        assert list(values) == [1, -1, -1, 1]
        assert nodes == 16

    def test_search_avoiding_exhausted(self, engine):
        eng = get_engine(engine)
        # avoiding all four cells leaves nothing nonzero
        status, values, _ = eng.BitradeSearcher(2, 2, 1) \
            .search_avoiding((0, 1, 2, 3), 10 ** 8)
        assert status == STATUS_COMPLETE
        assert values is None

    def test_node_cap(self, engine):
        eng = get_engine(engine)
        status, _, nodes = eng.BitradeSearcher(3, 2, 1).search_avoiding((), 5)
        assert status == STATUS_NODE_CAP
        assert nodes == 6  # the attempt that crossed the cap is counted

    def test_limit(self, engine):
        eng = get_engine(engine)
        status, sols, _ = eng.BitradeSearcher(2, 3, 2) \
            .enumerate_all(10 ** 8, 7)
        assert status == STATUS_LIMIT
        assert len(sols) == 7


class TestCubeSearcher:
    def test_enumerate_fixtures(self, engine):
        eng = get_engine(engine)
        for (q, n, k, lam), (count, nodes) in CUBE_FIXTURES.items():
            status, got, sols, got_nodes = eng.CubeSearcher(q, n, k, lam) \
                .enumerate((), 10 ** 8, 0, True)
            assert status == STATUS_COMPLETE
            assert got == count == len(sols), (q, n, k, lam)
            assert got_nodes == nodes, (q, n, k, lam)

    def test_count_matches_enumerate(self, engine):
        eng = get_engine(engine)
        for (q, n, k, lam), (count, nodes) in CUBE_FIXTURES.items():
            status, got, got_nodes = eng.CubeSearcher(q, n, k, lam) \
                .count((), 10 ** 8)
            assert (status, got, got_nodes) == (STATUS_COMPLETE, count, nodes)

    def test_enumeration_identical_across_engines(self):
        engines = available_engines()
        if len(engines) < 2:
            pytest.skip("single engine build")
        for (q, n, k, lam) in CUBE_FIXTURES:
            runs = [get_engine(e).CubeSearcher(q, n, k, lam)
                    .enumerate((), 10 ** 8, 0, True) for e in engines]
            first = runs[0]
            for other in runs[1:]:
                assert other == first, (q, n, k, lam)

    def test_fixed_cells(self, engine):
        eng = get_engine(engine)
        s = eng.CubeSearcher(3, 2, 1, (1, 1, 1))
        status, count, sols, _ = s.enumerate(((0, 0), (1, 1)), 10 ** 8, 0, True)
        assert status == STATUS_COMPLETE
        assert count == 2
        assert all(v[0] == 0 and v[1] == 1 for v in sols)

    def test_fixed_cell_conflict(self, engine):
        eng = get_engine(engine)
        s = eng.CubeSearcher(2, 2, 1, (1, 1))
        # two equal symbols on one line can never complete
        status, count, sols, nodes = s.enumerate(((0, 1), (1, 1)),
                                                 10 ** 8, 0, True)
        assert (status, count, sols, nodes) == (STATUS_COMPLETE, 0, [], 0)

    def test_sample_parity_and_validity(self, engine):
        eng = get_engine(engine)
        baseline = get_engine(available_engines()[0])
        for seed in (0, 1, 7, 99):
            a = eng.CubeSearcher(3, 2, 1, (1, 1, 1)).sample(seed, 10 ** 8)
            b = baseline.CubeSearcher(3, 2, 1, (1, 1, 1)).sample(seed, 10 ** 8)
            assert a == b
            status, values, _ = a
            assert status == STATUS_FOUND

    def test_param_validation(self, engine):
        eng = get_engine(engine)
        with pytest.raises(ValueError):
            eng.CubeSearcher(2, 2, 1, (2, 2))  # sums to 4, not q^k = 2
        with pytest.raises(ValueError):
            eng.CubeSearcher(2, 2, 1, (2,))  # single symbol


class TestMaskCanonizer:
    def test_parity_and_invariance(self, rng):
        perms = []
        base = list(range(9))
        for _ in range(24):
            p = base[:]
            rng.shuffle(p)
            perms.append(tuple(p))
        perms[0] = tuple(base)  # keep the identity so canon(m) <= m
        canons = [get_engine(e).MaskCanonizer(perms)
                  for e in available_engines()]
        for _ in range(50):
            mask = rng.randrange(1 << 9)
            got = [c.canon(mask) for c in canons]
            assert len(set(got)) == 1
            assert got[0] <= mask


class TestSharedPrng:
    def test_shuffled_value_orders_deterministic(self):
        a = shuffled_value_orders(4, 6, 123)
        b = shuffled_value_orders(4, 6, 123)
        assert a == b
        c = shuffled_value_orders(4, 6, 124)
        assert a != c
        for row in a:
            assert sorted(row) == [0, 1, 2, 3]


class TestEngineSelection:
    def test_env_override_pure(self):
        code = ("import freqcube._engine as E; "
                "print(E.engine_name())")
        env = dict(os.environ, FREQCUBE_ENGINE="pure")
        out = subprocess.run([sys.executable, "-c", code], env=env,
                             capture_output=True, text=True)
        assert out.stdout.strip() == "pure"

    def test_active_engine_listed(self):
        from freqcube import engine_name
        assert engine_name() in available_engines()
