"""Pure-Python search engine.

Reference implementation of the three hot kernels:

* ``BitradeSearcher``   - backtracking search for nonzero k-bitrades that
  vanish on a forbidden cell set, and full bitrade enumeration;
* ``CubeSearcher``      - enumeration / counting / seeded sampling of
  frequency cubes extending a partial assignment;
* ``MaskCanonizer``     - minimum of a cell bitmask over a precomputed
  permutation group.

The compiled engine mirrors this module exactly, including the order of
constraint checks and the node accounting, so that results and node counts
are interchangeable.  A node is one attempted (cell, value) assignment.
"""

from freqcube._engine._common import (
    STATUS_COMPLETE,
    STATUS_FOUND,
    STATUS_LIMIT,
    STATUS_NODE_CAP,
    face_incidence,
    shuffled_value_orders,
)

ENGINE_NAME = "pure"

_BITRADE_VALUES = (0, 1, -1)


class BitradeSearcher:
    """Backtracking over {-1, 0, +1} assignments with per-face balance counts.

    Cells are assigned in row-major order; the value order is (0, +1, -1).
    A face is infeasible when |pos - neg| exceeds its unassigned cell count.
    """

    def __init__(self, q: int, n: int, k: int):
        self.q = q
        self.n = n
        self.k = k
        self.n_cells = q ** n
        self.n_faces, self.cell_faces, self.face_size = face_incidence(q, n, k)

    def search_avoiding(self, forbidden, node_cap: int):
        """First nonzero bitrade vanishing on ``forbidden``, sign-normalized.

        The first nonzero cell of the witness is +1 (mirror witnesses are
        skipped; negation preserves bitrades, so existence is unaffected).
        Returns (status, witness values or None, nodes).
        """
        return self._run(forbidden, node_cap, limit=1, collect=True,
                         break_sign=True, existence=True)

    def enumerate_all(self, node_cap: int, limit: int):
        """All k-bitrades, the zero array included, in search order.

        Returns (status, list of value tuples, nodes).
        """
        status, sols, nodes = self._run((), node_cap, limit=limit,
                                        collect=True, break_sign=False,
                                        existence=False)
        return status, sols, nodes

    def _run(self, forbidden, node_cap, limit, collect, break_sign, existence):
        n_cells = self.n_cells
        cell_faces = self.cell_faces
        pos = [0] * self.n_faces
        neg = [0] * self.n_faces
        fre = [self.face_size] * self.n_faces
        val = [0] * n_cells
        forb = bytearray(n_cells)
        for c in forbidden:
            c = int(c)
            if not 0 <= c < n_cells:
                raise ValueError(f"cell index {c} out of range")
            if not forb[c]:
                forb[c] = 1
                for f in cell_faces[c]:
                    fre[f] -= 1
        order = [c for c in range(n_cells) if not forb[c]]
        m_depth = len(order)

        nodes = 0
        nonzero = 0
        sols = []
        vi = [0] * (m_depth + 1)
        dval = [0] * (m_depth + 1)
        d = 0
        while d >= 0:
            if d == m_depth:
                if existence:
                    if nonzero > 0:
                        return STATUS_FOUND, list(val), nodes
                else:
                    sols.append(tuple(val))
                    if limit > 0 and len(sols) >= limit:
                        return STATUS_LIMIT, sols, nodes
                d -= 1
                if d >= 0:
                    self._undo(order[d], dval[d], pos, neg, fre, val)
                    if dval[d] != 0:
                        nonzero -= 1
                continue
            if vi[d] < 3:
                v = _BITRADE_VALUES[vi[d]]
                vi[d] += 1
                if break_sign and v == -1 and nonzero == 0:
                    continue
                nodes += 1
                if node_cap > 0 and nodes > node_cap:
                    return STATUS_NODE_CAP, (None if existence else sols), nodes
                if self._try(order[d], v, pos, neg, fre, val):
                    dval[d] = v
                    if v != 0:
                        nonzero += 1
                    d += 1
                    vi[d] = 0
            else:
                d -= 1
                if d >= 0:
                    self._undo(order[d], dval[d], pos, neg, fre, val)
                    if dval[d] != 0:
                        nonzero -= 1
        if existence:
            return STATUS_COMPLETE, None, nodes
        return STATUS_COMPLETE, sols, nodes

    def _try(self, cell, v, pos, neg, fre, val):
        faces = self.cell_faces[cell]
        for f in faces:
            fre[f] -= 1
            if v > 0:
                pos[f] += 1
            elif v < 0:
                neg[f] += 1
        for f in faces:
            d = pos[f] - neg[f]
            if d < 0:
                d = -d
            if d > fre[f]:
                self._undo(cell, v, pos, neg, fre, val)
                return False
        val[cell] = v
        return True

    def _undo(self, cell, v, pos, neg, fre, val):
        for f in self.cell_faces[cell]:
            fre[f] += 1
            if v > 0:
                pos[f] -= 1
            elif v < 0:
                neg[f] -= 1
        val[cell] = 0


class CubeSearcher:
    """Backtracking over symbol assignments with per-face symbol counts.

    A face may hold at most lambdas[s] cells of symbol s; since the lambdas
    sum to the face size, completed faces automatically match them exactly.
    """

    def __init__(self, q: int, n: int, k: int, lambdas):
        self.q = q
        self.n = n
        self.k = k
        self.lam = tuple(int(x) for x in lambdas)
        self.m = len(self.lam)
        if self.m < 2 or any(x < 0 for x in self.lam):
            raise ValueError(f"bad symbol frequencies {lambdas}")
        if sum(self.lam) != q ** k:
            raise ValueError(f"frequencies {lambdas} do not sum to q^k")
        self.n_cells = q ** n
        self.n_faces, self.cell_faces, self.face_size = face_incidence(q, n, k)

    def enumerate(self, fixed, node_cap: int, limit: int, collect: bool):
        """Solutions extending ``fixed`` (pairs (cell, symbol)).

        Returns (status, count, solutions, nodes); ``solutions`` is empty
        when ``collect`` is false.  ``limit <= 0`` means unlimited.
        """
        return self._run(fixed, node_cap, limit, collect, value_orders=None)

    def count(self, fixed, node_cap: int):
        status, found, _, nodes = self._run(fixed, node_cap, 0, False, None)
        return status, found, nodes

    def sample(self, seed: int, node_cap: int, fixed=()):
        """First solution under a seeded per-depth shuffle of value order."""
        prep = self._prepare(fixed)
        if prep is None:
            return STATUS_COMPLETE, None, 0
        cnt, val, order = prep
        vo = shuffled_value_orders(self.m, len(order), seed)
        status, _, sols, nodes = self._dfs(cnt, val, order, node_cap, 1, True, vo)
        if sols:
            return STATUS_FOUND, sols[0], nodes
        return status, None, nodes

    def _prepare(self, fixed):
        cnt = [0] * (self.n_faces * self.m)
        val = [-1] * self.n_cells
        m = self.m
        pairs = sorted((int(c), int(s)) for c, s in fixed)
        for c, s in pairs:
            if not 0 <= c < self.n_cells:
                raise ValueError(f"cell index {c} out of range")
            if not 0 <= s < m:
                raise ValueError(f"symbol {s} out of range")
            if val[c] == s:
                continue
            if val[c] != -1:
                return None  # conflicting duplicate assignment
            val[c] = s
            for f in self.cell_faces[c]:
                idx = f * m + s
                cnt[idx] += 1
                if cnt[idx] > self.lam[s]:
                    return None
        order = [c for c in range(self.n_cells) if val[c] == -1]
        return cnt, val, order

    def _run(self, fixed, node_cap, limit, collect, value_orders):
        prep = self._prepare(fixed)
        if prep is None:
            return STATUS_COMPLETE, 0, [], 0
        cnt, val, order = prep
        return self._dfs(cnt, val, order, node_cap, limit, collect, value_orders)

    def _dfs(self, cnt, val, order, node_cap, limit, collect, value_orders):
        m = self.m
        m_depth = len(order)
        nodes = 0
        found = 0
        sols = []
        vi = [0] * (m_depth + 1)
        d = 0
        while d >= 0:
            if d == m_depth:
                found += 1
                if collect:
                    sols.append(tuple(val))
                if limit > 0 and found >= limit:
                    return STATUS_LIMIT, found, sols, nodes
                d -= 1
                if d >= 0:
                    self._undo(order[d], val, cnt)
                continue
            if vi[d] < m:
                v = value_orders[d][vi[d]] if value_orders is not None else vi[d]
                vi[d] += 1
                nodes += 1
                if node_cap > 0 and nodes > node_cap:
                    return STATUS_NODE_CAP, found, sols, nodes
                if self._try(order[d], v, cnt, val):
                    d += 1
                    vi[d] = 0
            else:
                d -= 1
                if d >= 0:
                    self._undo(order[d], val, cnt)
        return STATUS_COMPLETE, found, sols, nodes

    def _try(self, cell, v, cnt, val):
        m = self.m
        lam_v = self.lam[v]
        faces = self.cell_faces[cell]
        for i, f in enumerate(faces):
            idx = f * m + v
            cnt[idx] += 1
            if cnt[idx] > lam_v:
                for g in faces[: i + 1]:
                    cnt[g * m + v] -= 1
                return False
        val[cell] = v
        return True

    def _undo(self, cell, val, cnt):
        v = val[cell]
        m = self.m
        for f in self.cell_faces[cell]:
            cnt[f * m + v] -= 1
        val[cell] = -1


class MaskCanonizer:
    """Minimum of a cell bitmask over a fixed list of cell permutations."""

    def __init__(self, perms):
        perms = [tuple(p) for p in perms]
        if not perms:
            raise ValueError("empty permutation list")
        self.n_cells = len(perms[0])
        if any(len(p) != self.n_cells for p in perms):
            raise ValueError("ragged permutation table")
        self.perms = perms

    def canon(self, mask: int) -> int:
        best = mask
        for p in self.perms:
            mm = 0
            m = mask
            c = 0
            while m:
                if m & 1:
                    mm |= 1 << p[c]
                m >>= 1
                c += 1
            if mm < best:
                best = mm
        return best
