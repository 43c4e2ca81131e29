# cython: language_level=3
# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled search engine.

C translation of the pure-Python engine in ``_pure``: same constraint-check
order, same value orders, same node accounting (one node per attempted
(cell, value) assignment), same xorshift64* stream for sampled value orders.
The two engines are interchangeable; tests assert identical outputs and
node counts.
"""

from libc.stdlib cimport free, malloc
from libc.string cimport memset

from freqcube._engine._common import (
    STATUS_COMPLETE,
    STATUS_FOUND,
    STATUS_LIMIT,
    STATUS_NODE_CAP,
    face_incidence,
)

ENGINE_NAME = "compiled"

cdef int C_FOUND = STATUS_FOUND
cdef int C_COMPLETE = STATUS_COMPLETE
cdef int C_NODE_CAP = STATUS_NODE_CAP
cdef int C_LIMIT = STATUS_LIMIT

# xorshift64* constants, assembled from 32-bit halves for portability
cdef unsigned long long XS_MIX = ((<unsigned long long>0x9E3779B9) << 32) | <unsigned long long>0x7F4A7C15
cdef unsigned long long XS_MUL = ((<unsigned long long>0x2545F491) << 32) | <unsigned long long>0x4F6CDD1D
cdef unsigned long long M64 = ((<unsigned long long>0xFFFFFFFF) << 32) | <unsigned long long>0xFFFFFFFF


cdef void *xmalloc(size_t nbytes) except NULL:
    cdef void *p = malloc(nbytes if nbytes > 0 else 1)
    if p == NULL:
        raise MemoryError()
    return p


cdef inline unsigned long long xs_next(unsigned long long *s) nogil:
    s[0] ^= s[0] >> 12
    s[0] ^= s[0] << 25
    s[0] ^= s[0] >> 27
    return s[0] * XS_MUL


cdef class BitradeSearcher:
    """Compiled counterpart of ``_pure.BitradeSearcher``."""

    cdef public int q, n, k
    cdef int n_cells, n_faces, face_size, deg
    cdef int *cf          # cell -> face ids, flattened n_cells x deg
    cdef int *pos
    cdef int *neg
    cdef int *fre
    cdef signed char *val
    cdef unsigned char *forb
    cdef int *order
    cdef int *vi
    cdef signed char *dval

    def __cinit__(self, int q, int n, int k):
        cdef int c, i
        self.q = q
        self.n = n
        self.k = k
        n_faces, cell_faces, face_size = face_incidence(q, n, k)
        self.n_cells = len(cell_faces)
        self.n_faces = n_faces
        self.face_size = face_size
        self.deg = len(cell_faces[0])
        self.cf = <int *>xmalloc(self.n_cells * self.deg * sizeof(int))
        for c in range(self.n_cells):
            row = cell_faces[c]
            for i in range(self.deg):
                self.cf[c * self.deg + i] = row[i]
        self.pos = <int *>xmalloc(self.n_faces * sizeof(int))
        self.neg = <int *>xmalloc(self.n_faces * sizeof(int))
        self.fre = <int *>xmalloc(self.n_faces * sizeof(int))
        self.val = <signed char *>xmalloc(self.n_cells)
        self.forb = <unsigned char *>xmalloc(self.n_cells)
        self.order = <int *>xmalloc(self.n_cells * sizeof(int))
        self.vi = <int *>xmalloc((self.n_cells + 1) * sizeof(int))
        self.dval = <signed char *>xmalloc(self.n_cells + 1)

    def __dealloc__(self):
        free(self.cf); free(self.pos); free(self.neg); free(self.fre)
        free(self.val); free(self.forb); free(self.order)
        free(self.vi); free(self.dval)

    cdef inline bint _try(self, int cell, int v) nogil:
        cdef int i, f, d
        cdef int base = cell * self.deg
        for i in range(self.deg):
            f = self.cf[base + i]
            self.fre[f] -= 1
            if v > 0:
                self.pos[f] += 1
            elif v < 0:
                self.neg[f] += 1
        for i in range(self.deg):
            f = self.cf[base + i]
            d = self.pos[f] - self.neg[f]
            if d < 0:
                d = -d
            if d > self.fre[f]:
                self._undo(cell, v)
                return 0
        self.val[cell] = <signed char>v
        return 1

    cdef inline void _undo(self, int cell, int v) nogil:
        cdef int i, f
        cdef int base = cell * self.deg
        for i in range(self.deg):
            f = self.cf[base + i]
            self.fre[f] += 1
            if v > 0:
                self.pos[f] -= 1
            elif v < 0:
                self.neg[f] -= 1
        self.val[cell] = 0

    cdef int _reset(self, forbidden) except -1:
        cdef int c, i, m_depth
        memset(self.pos, 0, self.n_faces * sizeof(int))
        memset(self.neg, 0, self.n_faces * sizeof(int))
        for i in range(self.n_faces):
            self.fre[i] = self.face_size
        memset(self.val, 0, self.n_cells)
        memset(self.forb, 0, self.n_cells)
        for obj in forbidden:
            c = obj
            if c < 0 or c >= self.n_cells:
                raise ValueError(f"cell index {c} out of range")
            if not self.forb[c]:
                self.forb[c] = 1
                for i in range(self.deg):
                    self.fre[self.cf[c * self.deg + i]] -= 1
        m_depth = 0
        for c in range(self.n_cells):
            if not self.forb[c]:
                self.order[m_depth] = c
                m_depth += 1
        return m_depth

    def search_avoiding(self, forbidden, long long node_cap):
        """See ``_pure.BitradeSearcher.search_avoiding``."""
        cdef int m_depth = self._reset(forbidden)
        cdef long long nodes = 0
        cdef int nonzero = 0, d = 0, v, cell
        cdef signed char pv
        self.vi[0] = 0
        while d >= 0:
            if d == m_depth:
                if nonzero > 0:
                    witness = [self.val[cell] for cell in range(self.n_cells)]
                    return C_FOUND, witness, nodes
                d -= 1
                if d >= 0:
                    pv = self.dval[d]
                    self._undo(self.order[d], pv)
                    if pv != 0:
                        nonzero -= 1
                continue
            if self.vi[d] < 3:
                v = 0 if self.vi[d] == 0 else (1 if self.vi[d] == 1 else -1)
                self.vi[d] += 1
                if v == -1 and nonzero == 0:
                    continue
                nodes += 1
                if node_cap > 0 and nodes > node_cap:
                    return C_NODE_CAP, None, nodes
                if self._try(self.order[d], v):
                    self.dval[d] = <signed char>v
                    if v != 0:
                        nonzero += 1
                    d += 1
                    self.vi[d] = 0
            else:
                d -= 1
                if d >= 0:
                    pv = self.dval[d]
                    self._undo(self.order[d], pv)
                    if pv != 0:
                        nonzero -= 1
        return C_COMPLETE, None, nodes

    def enumerate_all(self, long long node_cap, long long limit):
        """See ``_pure.BitradeSearcher.enumerate_all``."""
        cdef int m_depth = self._reset(())
        cdef long long nodes = 0
        cdef int d = 0, v, cell
        sols = []
        self.vi[0] = 0
        while d >= 0:
            if d == m_depth:
                sols.append(tuple([self.val[cell] for cell in range(self.n_cells)]))
                if limit > 0 and <long long>len(sols) >= limit:
                    return C_LIMIT, sols, nodes
                d -= 1
                if d >= 0:
                    self._undo(self.order[d], self.dval[d])
                continue
            if self.vi[d] < 3:
                v = 0 if self.vi[d] == 0 else (1 if self.vi[d] == 1 else -1)
                self.vi[d] += 1
                nodes += 1
                if node_cap > 0 and nodes > node_cap:
                    return C_NODE_CAP, sols, nodes
                if self._try(self.order[d], v):
                    self.dval[d] = <signed char>v
                    d += 1
                    self.vi[d] = 0
            else:
                d -= 1
                if d >= 0:
                    self._undo(self.order[d], self.dval[d])
        return C_COMPLETE, sols, nodes


cdef class CubeSearcher:
    """Compiled counterpart of ``_pure.CubeSearcher``."""

    cdef public int q, n, k, m
    cdef int n_cells, n_faces, face_size, deg
    cdef int *cf
    cdef int *lam
    cdef int *cnt
    cdef signed char *val
    cdef int *order
    cdef int *vi
    cdef int *vo          # per-depth value order (sampling); NULL semantics via use_vo
    cdef bint use_vo

    def __cinit__(self, int q, int n, int k, lambdas):
        cdef int c, i
        lam = tuple(int(x) for x in lambdas)
        if len(lam) < 2 or any(x < 0 for x in lam):
            raise ValueError(f"bad symbol frequencies {lambdas}")
        if sum(lam) != q ** k:
            raise ValueError(f"frequencies {lambdas} do not sum to q^k")
        self.q = q
        self.n = n
        self.k = k
        self.m = len(lam)
        n_faces, cell_faces, face_size = face_incidence(q, n, k)
        self.n_cells = len(cell_faces)
        self.n_faces = n_faces
        self.face_size = face_size
        self.deg = len(cell_faces[0])
        self.cf = <int *>xmalloc(self.n_cells * self.deg * sizeof(int))
        for c in range(self.n_cells):
            row = cell_faces[c]
            for i in range(self.deg):
                self.cf[c * self.deg + i] = row[i]
        self.lam = <int *>xmalloc(self.m * sizeof(int))
        for i in range(self.m):
            self.lam[i] = lam[i]
        self.cnt = <int *>xmalloc(self.n_faces * self.m * sizeof(int))
        self.val = <signed char *>xmalloc(self.n_cells)
        self.order = <int *>xmalloc(self.n_cells * sizeof(int))
        self.vi = <int *>xmalloc((self.n_cells + 1) * sizeof(int))
        self.vo = <int *>xmalloc(self.n_cells * self.m * sizeof(int))
        self.use_vo = 0

    def __dealloc__(self):
        free(self.cf); free(self.lam); free(self.cnt); free(self.val)
        free(self.order); free(self.vi); free(self.vo)

    cdef inline bint _try(self, int cell, int v) nogil:
        cdef int i, j, f, idx
        cdef int base = cell * self.deg
        cdef int lam_v = self.lam[v]
        for i in range(self.deg):
            f = self.cf[base + i]
            idx = f * self.m + v
            self.cnt[idx] += 1
            if self.cnt[idx] > lam_v:
                for j in range(i + 1):
                    self.cnt[self.cf[base + j] * self.m + v] -= 1
                return 0
        self.val[cell] = <signed char>v
        return 1

    cdef inline void _undo(self, int cell) nogil:
        cdef int i, v = self.val[cell]
        cdef int base = cell * self.deg
        for i in range(self.deg):
            self.cnt[self.cf[base + i] * self.m + v] -= 1
        self.val[cell] = -1

    cdef int _prepare(self, fixed) except -2:
        """Pre-assign fixed cells; -1 means infeasible, else depth count."""
        cdef int c, s, i, idx, m_depth
        memset(self.cnt, 0, self.n_faces * self.m * sizeof(int))
        for c in range(self.n_cells):
            self.val[c] = -1
        pairs = sorted((int(a), int(b)) for a, b in fixed)
        for a, b in pairs:
            c = a
            s = b
            if c < 0 or c >= self.n_cells:
                raise ValueError(f"cell index {c} out of range")
            if s < 0 or s >= self.m:
                raise ValueError(f"symbol {s} out of range")
            if self.val[c] == s:
                continue
            if self.val[c] != -1:
                return -1
            self.val[c] = <signed char>s
            for i in range(self.deg):
                idx = self.cf[c * self.deg + i] * self.m + s
                self.cnt[idx] += 1
                if self.cnt[idx] > self.lam[s]:
                    return -1
        m_depth = 0
        for c in range(self.n_cells):
            if self.val[c] == -1:
                self.order[m_depth] = c
                m_depth += 1
        return m_depth

    cdef _dfs(self, int m_depth, long long node_cap, long long limit,
              bint collect):
        cdef long long nodes = 0, found = 0
        cdef int d = 0, v, cell
        sols = []
        self.vi[0] = 0
        while d >= 0:
            if d == m_depth:
                found += 1
                if collect:
                    sols.append(tuple([self.val[cell] for cell in range(self.n_cells)]))
                if limit > 0 and found >= limit:
                    return C_LIMIT, found, sols, nodes
                d -= 1
                if d >= 0:
                    self._undo(self.order[d])
                continue
            if self.vi[d] < self.m:
                if self.use_vo:
                    v = self.vo[d * self.m + self.vi[d]]
                else:
                    v = self.vi[d]
                self.vi[d] += 1
                nodes += 1
                if node_cap > 0 and nodes > node_cap:
                    return C_NODE_CAP, found, sols, nodes
                if self._try(self.order[d], v):
                    d += 1
                    self.vi[d] = 0
            else:
                d -= 1
                if d >= 0:
                    self._undo(self.order[d])
        return C_COMPLETE, found, sols, nodes

    def enumerate(self, fixed, long long node_cap, long long limit,
                  bint collect):
        """See ``_pure.CubeSearcher.enumerate``."""
        cdef int m_depth = self._prepare(fixed)
        if m_depth < 0:
            return C_COMPLETE, 0, [], 0
        self.use_vo = 0
        return self._dfs(m_depth, node_cap, limit, collect)

    def count(self, fixed, long long node_cap):
        cdef int m_depth = self._prepare(fixed)
        if m_depth < 0:
            return C_COMPLETE, 0, 0
        self.use_vo = 0
        status, found, _, nodes = self._dfs(m_depth, node_cap, 0, 0)
        return status, found, nodes

    def sample(self, seed, long long node_cap, fixed=()):
        """See ``_pure.CubeSearcher.sample``."""
        cdef int m_depth = self._prepare(fixed)
        if m_depth < 0:
            return C_COMPLETE, None, 0
        cdef unsigned long long s = (<unsigned long long>(int(seed) & 0xFFFFFFFFFFFFFFFF)) ^ XS_MIX
        if s == 0:
            s = XS_MIX
        cdef int d, i, j, tmp
        cdef unsigned long long r
        for d in range(m_depth):
            for i in range(self.m):
                self.vo[d * self.m + i] = i
            for i in range(self.m - 1, 0, -1):
                r = xs_next(&s)
                j = <int>(r % <unsigned long long>(i + 1))
                tmp = self.vo[d * self.m + i]
                self.vo[d * self.m + i] = self.vo[d * self.m + j]
                self.vo[d * self.m + j] = tmp
        self.use_vo = 1
        status, found, sols, nodes = self._dfs(m_depth, node_cap, 1, 1)
        self.use_vo = 0
        if sols:
            return C_FOUND, tuple(sols[0]), nodes
        return status, None, nodes


cdef class MaskCanonizer:
    """Compiled counterpart of ``_pure.MaskCanonizer`` (up to 64 cells)."""

    cdef int n_cells, n_perms
    cdef int *perms

    def __cinit__(self, perms):
        cdef int i, c
        rows = [tuple(p) for p in perms]
        if not rows:
            raise ValueError("empty permutation list")
        self.n_cells = len(rows[0])
        if self.n_cells > 64:
            raise ValueError("compiled canonizer limited to 64 cells")
        self.n_perms = len(rows)
        self.perms = <int *>xmalloc(self.n_perms * self.n_cells * sizeof(int))
        for i in range(self.n_perms):
            row = rows[i]
            if len(row) != self.n_cells:
                raise ValueError("ragged permutation table")
            for c in range(self.n_cells):
                self.perms[i * self.n_cells + c] = row[c]

    def __dealloc__(self):
        free(self.perms)

    def canon(self, mask):
        cdef unsigned long long best, mm, mbits
        cdef unsigned long long start = <unsigned long long>(int(mask) & 0xFFFFFFFFFFFFFFFF)
        cdef int p, c, base
        best = start
        for p in range(self.n_perms):
            base = p * self.n_cells
            mm = 0
            mbits = start
            c = 0
            while mbits:
                if mbits & 1:
                    mm |= (<unsigned long long>1) << self.perms[base + c]
                mbits >>= 1
                c += 1
            if mm < best:
                best = mm
        return best
