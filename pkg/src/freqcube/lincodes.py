"""Testing sets for linear and affine Boolean functions of few variables.

A point set X in [2]^n is testing for the class of linear functions with at
most k essential variables iff no nonzero linear form in at most 2k
variables vanishes on all of X; equivalently, the kernel of the matrix H_X
whose rows are the points of X contains no vector of weight 1..2k, i.e. the
kernel is a code of minimum distance at least 2k+1.  The affine class adds
a constant term, which one extra point (the all-zero vector) pins down.

Constructions: the binary-counting matrix whose columns are 1..n in r-bit
binary (its kernel is distance-3 of maximal size), and a column-greedy
parity-check builder realizing the counting upper bound for every k.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

from .core import CubeArray, GridSig, PointSet, ResourceCapError, ValidationError


def ceil_log2(x: int) -> int:
    """Smallest r with 2^r >= x, for x >= 1."""
    if x < 1:
        raise ValidationError(f"ceil_log2 needs a positive argument, got {x}")
    return (x - 1).bit_length()


# ---------------------------------------------------------------------------
# binary matrices, bit-packed

class BinMatrix:
    """Matrix over the two-element field; rows are points of [2]^n.

    Rows are stored packed, coordinate 0 in the most significant bit, which
    matches the row-major point indexing of the grid.
    """

    __slots__ = ("n", "rows")

    def __init__(self, n: int, rows):
        if n < 1 or n > 62:
            raise ValidationError(f"column count n={n} outside 1..62")
        packed = []
        for row in rows:
            if isinstance(row, int):
                if not 0 <= row < (1 << n):
                    raise ValidationError(f"packed row {row} out of range")
                packed.append(row)
                continue
            if len(row) != n:
                raise ValidationError(f"row {row} does not have {n} entries")
            v = 0
            for x in row:
                if x not in (0, 1):
                    raise ValidationError("matrix entries must be 0/1")
                v = (v << 1) | x
            packed.append(v)
        self.n = n
        self.rows = tuple(packed)

    @staticmethod
    def from_point_set(X: PointSet) -> "BinMatrix":
        if X.sig.q != 2:
            raise ValidationError("matrix rows must come from a binary grid")
        return BinMatrix(X.sig.n, [X.sig.index(p) for p in X])

    def row_tuples(self) -> tuple:
        n = self.n
        return tuple(tuple((r >> (n - 1 - i)) & 1 for i in range(n))
                     for r in self.rows)

    @property
    def rank(self) -> int:
        basis = []
        for r in self.rows:
            for b in basis:
                r = min(r, r ^ b)
            if r:
                basis.append(r)
        return len(basis)

    def independent_rows(self) -> tuple:
        """(submatrix of a maximal independent row subset, dropped count)."""
        basis = []
        keep = []
        for i, r in enumerate(self.rows):
            v = r
            for b in basis:
                v = min(v, v ^ b)
            if v:
                basis.append(v)
                keep.append(i)
        sub = BinMatrix(self.n, [self.rows[i] for i in keep])
        return sub, len(self.rows) - len(keep)

    def kernel_basis(self) -> list:
        """Basis of {a : H a = 0}, each vector packed like a row.

        Column-reduction over the transpose: track, for every column, the
        combination of original columns it carries; free columns yield the
        basis.
        """
        n = self.n
        # work on columns: col j carries bit i = entry (row i, col j)
        cols = []
        for j in range(n):
            c = 0
            for i, r in enumerate(self.rows):
                c |= ((r >> (n - 1 - j)) & 1) << i
            cols.append(c)
        combo = [1 << (n - 1 - j) for j in range(n)]  # which inputs feed col j
        basis = []
        pivots = []  # (pivot bit, col value, combo) of processed pivot cols
        for j in range(n):
            c, cb = cols[j], combo[j]
            for pb, pc, pcb in pivots:
                if (c >> pb) & 1:
                    c ^= pc
                    cb ^= pcb
            if c:
                pivots.append((c.bit_length() - 1, c, cb))
            else:
                basis.append(cb)
        return basis

    def kernel_min_distance(self, enum_cap: int = 1 << 20):
        """Minimum weight of a nonzero kernel vector, or None if trivial."""
        basis = self.kernel_basis()
        dim = len(basis)
        if dim == 0:
            return None
        if 1 << dim > enum_cap:
            raise ResourceCapError(
                f"kernel has 2^{dim} vectors, above the enumeration cap")
        best = None
        for m in range(1, 1 << dim):
            v = 0
            mm = m
            idx = 0
            while mm:
                if mm & 1:
                    v ^= basis[idx]
                idx += 1
                mm >>= 1
            w = bin(v).count("1")
            if best is None or w < best:
                best = w
        return best

    def to_json_dict(self) -> dict:
        n = self.n
        return {"n": n,
                "rows": [format(r, f"0{n}b") for r in self.rows]}

    @staticmethod
    def from_json_dict(doc: dict) -> "BinMatrix":
        try:
            n = int(doc["n"])
            rows = [int(s, 2) for s in doc["rows"]]
            widths = [len(s) for s in doc["rows"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed matrix document: {exc}") from exc
        if any(w != n for w in widths):
            raise ValidationError("bit string width differs from n")
        return BinMatrix(n, rows)


# ---------------------------------------------------------------------------
# affine functions

@dataclass(frozen=True)
class AffineFn:
    """x -> a.x + a0 over the two-element field; a packed like a matrix row."""

    n: int
    a: int
    a0: int

    def __post_init__(self):
        if not 0 <= self.a < (1 << self.n):
            raise ValidationError("coefficient vector out of range")
        if self.a0 not in (0, 1):
            raise ValidationError("constant term must be 0/1")

    @property
    def weight(self) -> int:
        """Number of essential variables."""
        return bin(self.a).count("1")

    @property
    def is_zero(self) -> bool:
        return self.a == 0 and self.a0 == 0

    def coefficients(self) -> tuple:
        return tuple((self.a >> (self.n - 1 - i)) & 1 for i in range(self.n))

    def evaluate(self, point) -> int:
        if len(point) != self.n:
            raise ValidationError("point dimension mismatch")
        packed = 0
        for x in point:
            packed = (packed << 1) | x
        return (bin(self.a & packed).count("1") + self.a0) & 1

    def evaluate_packed(self, packed: int) -> int:
        return (bin(self.a & packed).count("1") + self.a0) & 1

    def as_array(self) -> CubeArray:
        sig = GridSig(2, self.n)
        return CubeArray(sig, [self.evaluate_packed(i) for i in range(sig.size)])


def affine_candidates(n: int, max_weight: int, with_constant: bool = True):
    """Nonzero affine functions in at most ``max_weight`` variables.

    ``with_constant`` False restricts to linear forms (a0 = 0, a != 0).
    """
    consts = (0, 1) if with_constant else (0,)
    for w in range(0, max_weight + 1):
        for pos in combinations(range(n), w):
            a = 0
            for i in pos:
                a |= 1 << (n - 1 - i)
            for a0 in consts:
                if a == 0 and a0 == 0:
                    continue
                yield AffineFn(n, a, a0)


# ---------------------------------------------------------------------------
# testing predicates

def _packed_points(X: PointSet) -> list:
    if X.sig.q != 2:
        raise ValidationError("testing predicates are defined on binary grids")
    return list(X.indices())  # row-major index equals the packed bit vector


def is_testing_for_linear(X: PointSet, k: int) -> bool:
    """No nonzero linear form in at most 2k variables vanishes on X.

    Restriction to X then distinguishes any two linear functions with at
    most k essential variables each.
    """
    n = X.sig.n
    if not 1 <= k:
        raise ValidationError("k must be positive")
    pts = _packed_points(X)
    for fn in affine_candidates(n, min(2 * k, n), with_constant=False):
        if all(fn.evaluate_packed(p) == 0 for p in pts):
            return False
    return True


def is_testing_for_affine(X: PointSet, k: int) -> bool:
    """No nonzero affine function in at most 2k variables vanishes on X."""
    n = X.sig.n
    if not 1 <= k:
        raise ValidationError("k must be positive")
    pts = _packed_points(X)
    for fn in affine_candidates(n, min(2 * k, n), with_constant=True):
        if all(fn.evaluate_packed(p) == 0 for p in pts):
            return False
    return True


# ---------------------------------------------------------------------------
# sizes and bounds

def b_n_3(n: int) -> int:
    """Largest size of a binary linear distance-3 code of length n.

    Equals 2^(n - ceil(log2(n+1))); realized by the kernel of the
    binary-counting matrix, and no linear code does better because a
    parity-check matrix with r rows has at most 2^r - 1 usable columns.
    """
    if n < 1:
        raise ValidationError("n must be positive")
    return 1 << (n - ceil_log2(n + 1))


def bounds_min_testing(n: int, k: int, affine: bool = False) -> tuple:
    """(lower, upper) on the least testing-set size for the k-variable class.

    Lower: packing side, ceil(log2(sum_{i<=k} C(n,i))).  Upper: counting
    side, ceil(log2(sum_{i<=2k-1} C(n-1,i) + 1)), met by the column-greedy
    construction.  The affine class costs one more point on both sides.
    Pure arithmetic, so n may exceed the grid-size limits.
    """
    if k < 1 or 2 * k >= n:
        raise ValidationError(f"need 1 <= k and 2k < n, got n={n}, k={k}")
    lower = ceil_log2(sum(comb(n, i) for i in range(k + 1)))
    upper = ceil_log2(sum(comb(n - 1, i) for i in range(2 * k)) + 1)
    extra = 1 if affine else 0
    return lower + extra, upper + extra


def min_linear_testing_size(n: int) -> int:
    """Exact least testing-set size for the 1-variable linear class.

    A set X of s points is testing iff the columns of H_X are nonzero and
    pairwise distinct (no weight-1 or weight-2 kernel vector), which needs
    2^s - 1 >= n; the binary-counting matrix achieves s = ceil(log2(n+1)).
    """
    if n < 1:
        raise ValidationError("n must be positive")
    return ceil_log2(n + 1)


def brute_min_testing_size(n: int, k: int = 1, affine: bool = False,
                           point_cap: int = 64) -> int:
    """Least testing-set size by literal search over subsets, tiny n only."""
    sig = GridSig(2, n)
    if sig.size > point_cap:
        raise ResourceCapError(
            f"subset search over [2]^{n} refused (more than {point_cap} points)")
    check = is_testing_for_affine if affine else is_testing_for_linear
    cells = list(sig.points())
    for s in range(0, sig.size + 1):
        for subset in combinations(cells, s):
            if check(PointSet(sig, subset), k):
                return s
    raise RuntimeError("the full grid must be testing")  # unreachable


# ---------------------------------------------------------------------------
# constructions

def hamming_testing_set(n: int, affine: bool = False) -> PointSet:
    """Rows of the r x n matrix whose column j is j in r-bit binary, j=1..n.

    r = ceil(log2(n+1)); columns are nonzero and pairwise distinct, so the
    kernel has minimum distance at least 3 and the rows form a testing set
    for linear functions of one variable class (k=1).  With ``affine`` the
    all-zero point is appended, pinning the constant term.
    """
    if n < 1:
        raise ValidationError("n must be positive")
    sig = GridSig(2, n)
    r = ceil_log2(n + 1)
    rows = []
    for i in range(r):
        rows.append(tuple((j >> (r - 1 - i)) & 1 for j in range(1, n + 1)))
    if affine:
        rows.append((0,) * n)
    return PointSet(sig, rows)


def greedy_code_testing_set(n: int, k: int, affine: bool = False) -> PointSet:
    """Column-greedy parity-check construction meeting the counting bound.

    Builds r = upper-bound rows; column j is the least r-bit value that is
    not an XOR of fewer than 2k of the previous columns (nor zero), which
    always exists by the same count that proves the bound.  For k=1 this
    reproduces the binary-counting matrix.  The result is certified before
    being returned.
    """
    lower, upper = bounds_min_testing(n, k, affine=False)
    r = upper
    # sums_by_terms[t] = XORs of exactly t chosen columns, t < 2k
    sums_by_terms = [set() for _ in range(2 * k)]
    sums_by_terms[0].add(0)
    cols = []
    for _ in range(n):
        forbidden = set().union(*sums_by_terms)
        c = 0
        while c in forbidden:
            c += 1
        if c >= 1 << r:
            raise RuntimeError("greedy column choice exhausted the space")
        for t in range(2 * k - 1, 0, -1):
            sums_by_terms[t] |= {s ^ c for s in sums_by_terms[t - 1]}
        cols.append(c)
    rows = []
    for i in range(r):
        row = tuple((cols[j] >> (r - 1 - i)) & 1 for j in range(n))
        if any(row):  # zero rows carry no linear information
            rows.append(row)
    if affine:
        rows.append((0,) * n)
    X = PointSet(GridSig(2, n), rows)  # duplicate rows collapse here
    target = r + (1 if affine else 0)
    check = is_testing_for_affine if affine else is_testing_for_linear
    if len(X) > target or not check(X, k):
        raise RuntimeError("greedy construction failed its own certificate")
    return X
