"""Frequency hypercubes: arrays over [q]^n with prescribed face histograms.

A frequency cube for parameters (q, n, k, lambdas) is an array with symbols
0..m-1 in which every k-face contains exactly lambdas[i] cells of symbol i;
the lambdas must sum to q^k.  This module recognizes, enumerates, counts and
samples such arrays, splits them into symbol indicators, reconstructs them
from their values on a testing set (both the closed-form weight-descent for
the weight-threshold baseline and a general backtracking completion), and
computes the dimension of the space of arrays that sum to zero on every
k-face, with an exact-arithmetic rank cross-check.

The size bookkeeping (triangle recursion with prescribed boundaries and its
closed-form expansion, plus the comparison reports between the baseline and
the constructed testing sets) lives here as well.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import comb

from ._engine import STATUS_COMPLETE, STATUS_LIMIT, STATUS_NODE_CAP
from ._engine._common import face_incidence, xs_next, xs_seed
from .bitrades import default_node_cap, resolve_engine
from .core import (CubeArray, GridSig, PointSet, ReconstructionError,
                   ResourceCapError, Symmetry, ValidationError, ball_count,
                   sigma, weight)
from .lincodes import ceil_log2


# ---------------------------------------------------------------------------
# parameters

@dataclass(frozen=True)
class FreqParams:
    """(q, n, k, lambdas): symbol i must fill lambdas[i] cells of every k-face."""

    q: int
    n: int
    k: int
    lambdas: tuple

    def __post_init__(self):
        GridSig(self.q, self.n)  # validates q, n
        if not 1 <= self.k <= self.n:
            raise ValidationError(f"face dimension k={self.k} outside 1..{self.n}")
        lam = tuple(int(x) for x in self.lambdas)
        if len(lam) < 2:
            raise ValidationError("at least two symbols required")
        if any(x < 0 for x in lam):
            raise ValidationError("symbol frequencies must be nonnegative")
        if sum(lam) != self.q ** self.k:
            raise ValidationError(
                f"frequencies {lam} do not sum to q^k = {self.q ** self.k}")
        object.__setattr__(self, "lambdas", lam)

    @property
    def m(self) -> int:
        return len(self.lambdas)

    @property
    def sig(self) -> GridSig:
        return GridSig(self.q, self.n)

    def to_json_dict(self) -> dict:
        return {"q": self.q, "n": self.n, "k": self.k,
                "lambdas": list(self.lambdas)}

    @staticmethod
    def from_json_dict(doc: dict) -> "FreqParams":
        try:
            return FreqParams(int(doc["q"]), int(doc["n"]), int(doc["k"]),
                              tuple(int(x) for x in doc["lambdas"]))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed parameter document: {exc}") from exc


def is_frequency_cube(f: CubeArray, p: FreqParams) -> bool:
    """Every k-face carries the exact symbol histogram."""
    if f.sig != p.sig:
        raise ValidationError("array shape does not match the parameters")
    m = p.m
    vals = f.values
    if any(not 0 <= v < m for v in vals):
        raise ValidationError(f"array values must lie in 0..{m - 1}")
    n_faces, cell_faces, _ = face_incidence(p.q, p.n, p.k)
    counts = [0] * (n_faces * m)
    for c, v in enumerate(vals):
        for fc in cell_faces[c]:
            counts[fc * m + v] += 1
    lam = p.lambdas
    for fc in range(n_faces):
        base = fc * m
        for i in range(m):
            if counts[base + i] != lam[i]:
                return False
    return True


def indicator_decomposition(f: CubeArray, p: FreqParams) -> list:
    """Per-symbol 0/1 indicators g_i; f = sum of i * g_i.

    Each g_i is itself a frequency cube with frequencies
    (q^k - lambdas[i], lambdas[i]).
    """
    if not is_frequency_cube(f, p):
        raise ValidationError("array is not a frequency cube for the parameters")
    out = []
    for i in range(p.m):
        out.append(CubeArray(f.sig, [1 if v == i else 0 for v in f.values]))
    return out


def cayley_cube(q: int, n: int) -> CubeArray:
    """f(x) = sum of coordinates mod q; a frequency cube with all lambdas 1."""
    sig = GridSig(q, n)
    return CubeArray.from_function(sig, lambda p: sum(p) % q)


# ---------------------------------------------------------------------------
# partial arrays

class PartialCube:
    """Symbols assigned on a subset of the grid; the rest unknown."""

    __slots__ = ("sig", "m", "_pairs")

    def __init__(self, sig: GridSig, m: int, assignments):
        if m < 2:
            raise ValidationError("at least two symbols required")
        pairs = {}
        for point, symbol in assignments:
            point = tuple(point)
            sig.check_point(point)
            symbol = int(symbol)
            if not 0 <= symbol < m:
                raise ValidationError(f"symbol {symbol} outside 0..{m - 1}")
            idx = sig.index(point)
            if pairs.get(idx, symbol) != symbol:
                raise ValidationError(f"conflicting symbols at {point}")
            pairs[idx] = symbol
        self.sig = sig
        self.m = m
        self._pairs = tuple(sorted(pairs.items()))

    def __len__(self):
        return len(self._pairs)

    def fixed_pairs(self) -> tuple:
        """(cell index, symbol) pairs, sorted by index."""
        return self._pairs

    def domain(self) -> PointSet:
        return PointSet(self.sig, (self.sig.point(i) for i, _ in self._pairs))

    def items(self) -> tuple:
        return tuple((self.sig.point(i), s) for i, s in self._pairs)

    def __eq__(self, other):
        return (isinstance(other, PartialCube) and self.sig == other.sig
                and self.m == other.m and self._pairs == other._pairs)

    def to_json_dict(self) -> dict:
        return {"q": self.sig.q, "n": self.sig.n, "m": self.m,
                "points": [list(self.sig.point(i)) for i, _ in self._pairs],
                "values": [s for _, s in self._pairs]}

    @staticmethod
    def from_json_dict(doc: dict) -> "PartialCube":
        try:
            sig = GridSig(int(doc["q"]), int(doc["n"]))
            m = int(doc["m"])
            pts = [tuple(int(x) for x in p) for p in doc["points"]]
            vals = [int(v) for v in doc["values"]]
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed partial document: {exc}") from exc
        if len(pts) != len(vals):
            raise ValidationError("points and values differ in length")
        return PartialCube(sig, m, zip(pts, vals))


def restrict(f: CubeArray, T: PointSet, m: int) -> PartialCube:
    """The values of f on T, as a partial array."""
    if f.sig != T.sig:
        raise ValidationError("set and array live on different grids")
    return PartialCube(f.sig, m, ((p, f.value_at(p)) for p in T))


# ---------------------------------------------------------------------------
# reconstruction

def baseline_domain(sig: GridSig, k: int):
    """Points of weight above n-k, the domain the closed-form rebuild expects."""
    return (p for p in sig.points() if weight(p) > sig.n - k)


def reconstruct_baseline(partial: PartialCube, p: FreqParams) -> CubeArray:
    """Complete an array known on all points of weight above n-k.

    Unknown points are filled in decreasing weight order: for x, take the
    k-face that frees the first k zero coordinates of x; all its other
    points have larger weight, hence are already known, and the histogram
    constraint leaves exactly one symbol for x.  Raises ReconstructionError
    when no symbol (or more than one) fits, or when the completed array
    fails the face-histogram check; either way the given values are not the
    restriction of any member of the family.
    """
    sig = p.sig
    if partial.sig != sig or partial.m != p.m:
        raise ValidationError("partial data does not match the parameters")
    expected = {sig.index(pt) for pt in baseline_domain(sig, p.k)}
    got = {i for i, _ in partial.fixed_pairs()}
    if got != expected:
        raise ValidationError(
            "the partial assignment must cover exactly the points of weight "
            f"above n-k = {p.n - p.k}")
    values = [-1] * sig.size
    for i, s in partial.fixed_pairs():
        values[i] = s
    lam = p.lambdas
    by_weight = {}
    for pt in sig.points():
        w = weight(pt)
        if w <= p.n - p.k:
            by_weight.setdefault(w, []).append(pt)
    for w in range(p.n - p.k, -1, -1):
        for x in by_weight.get(w, ()):
            free = [i for i in range(p.n) if x[i] == 0][:p.k]
            counts = [0] * p.m
            for combo in product(range(p.q), repeat=p.k):
                y = list(x)
                for pos, v in zip(free, combo):
                    y[pos] = v
                y = tuple(y)
                if y == x:
                    continue
                s = values[sig.index(y)]
                if s < 0:
                    raise RuntimeError("weight order violated")  # unreachable
                counts[s] += 1
            symbol = -1
            for i in range(p.m):
                gi = lam[i] - counts[i]
                if gi not in (0, 1):
                    raise ReconstructionError(
                        f"no consistent symbol at {x}: symbol {i} would need "
                        f"{gi} cells")
                if gi == 1:
                    if symbol >= 0:
                        raise ReconstructionError(
                            f"ambiguous symbol at {x}: {symbol} and {i} both fit")
                    symbol = i
            if symbol < 0:
                raise ReconstructionError(f"no symbol fits at {x}")
            values[sig.index(x)] = symbol
    out = CubeArray(sig, values)
    if not is_frequency_cube(out, p):
        raise ReconstructionError(
            "completion violates the face histograms; the given values are "
            "not a restriction of any member")
    return out


def reconstruct_csp(partial: PartialCube, T: PointSet, p: FreqParams,
                    node_cap: int | None = None, engine=None):
    """Complete an array known exactly on T by backtracking search.

    Returns (completion, unique); ``unique`` reports whether the search,
    continued past the first solution, found no second one.  Raises
    ReconstructionError when no completion exists and ResourceCapError when
    the node budget ran out first.
    """
    sig = p.sig
    if partial.sig != sig or partial.m != p.m:
        raise ValidationError("partial data does not match the parameters")
    if T.sig != sig:
        raise ValidationError("set lives on a different grid")
    if {i for i, _ in partial.fixed_pairs()} != set(T.indices()):
        raise ValidationError("the partial assignment must cover exactly T")
    cap = default_node_cap() if node_cap is None else int(node_cap)
    eng = resolve_engine(engine)
    searcher = eng.CubeSearcher(p.q, p.n, p.k, p.lambdas)
    status, count, sols, _ = searcher.enumerate(partial.fixed_pairs(), cap,
                                                2, True)
    if status == STATUS_NODE_CAP:
        raise ResourceCapError(
            f"completion search hit the node cap ({cap})")
    if count == 0:
        raise ReconstructionError("the partial data admits no completion")
    return CubeArray(sig, sols[0]), count == 1


# ---------------------------------------------------------------------------
# enumeration, counting, sampling

def enumerate_cubes(p: FreqParams, node_cap: int | None = None,
                    limit: int = 0, engine=None) -> list:
    """All members, in row-major search order; ``limit`` > 0 truncates."""
    cap = default_node_cap() if node_cap is None else int(node_cap)
    eng = resolve_engine(engine)
    searcher = eng.CubeSearcher(p.q, p.n, p.k, p.lambdas)
    status, _, sols, _ = searcher.enumerate((), cap, limit, True)
    if status == STATUS_NODE_CAP:
        raise ResourceCapError(
            f"enumeration hit the node cap ({cap})")
    return [CubeArray(p.sig, v) for v in sols]


def count_cubes(p: FreqParams, node_cap: int | None = None,
                engine=None) -> int:
    """Exact member count by exhaustive backtracking."""
    cap = default_node_cap() if node_cap is None else int(node_cap)
    eng = resolve_engine(engine)
    searcher = eng.CubeSearcher(p.q, p.n, p.k, p.lambdas)
    status, found, _ = searcher.count((), cap)
    if status == STATUS_NODE_CAP:
        raise ResourceCapError(f"counting hit the node cap ({cap})")
    return found


def _fisher_yates(seq: list, state: int) -> int:
    for i in range(len(seq) - 1, 0, -1):
        state, r = xs_next(state)
        j = r % (i + 1)
        seq[i], seq[j] = seq[j], seq[i]
    return state


def _seeded_relabeling(p: FreqParams, seed: int):
    """Seeded grid symmetry plus a frequency-preserving symbol permutation."""
    # offset keeps these draws decorrelated from the engine's value-order
    # stream, which consumes the unmodified seed
    state = xs_seed(seed ^ 0xD1B54A32D192ED03)
    coord_perm = list(range(p.n))
    state = _fisher_yates(coord_perm, state)
    alpha_perms = []
    for _ in range(p.n):
        row = list(range(p.q))
        state = _fisher_yates(row, state)
        alpha_perms.append(tuple(row))
    value_perm = list(range(p.m))
    groups = {}
    for i, lam in enumerate(p.lambdas):
        groups.setdefault(lam, []).append(i)
    for lam in sorted(groups):
        slots = groups[lam]
        images = slots[:]
        state = _fisher_yates(images, state)
        for slot, image in zip(slots, images):
            value_perm[slot] = image
    return Symmetry(tuple(coord_perm), tuple(alpha_perms)), value_perm


def sample_cube(p: FreqParams, seed: int, node_cap: int | None = None,
                engine=None, randomize: bool = True) -> CubeArray:
    """One member found under seeded randomization.

    The engine searches under a seeded shuffle of the symbol order; the
    result is then pushed through a seeded grid symmetry and a symbol
    permutation within equal-frequency classes (both preserve membership),
    which spreads successive seeds over far more of the family than the
    raw search reaches.  Deterministic for a fixed seed and
    engine-independent; not uniform.  ``randomize=False`` skips the
    relabeling and returns the raw search result.
    """
    cap = default_node_cap() if node_cap is None else int(node_cap)
    eng = resolve_engine(engine)
    searcher = eng.CubeSearcher(p.q, p.n, p.k, p.lambdas)
    status, vals, _ = searcher.sample(int(seed), cap)
    if status == STATUS_NODE_CAP:
        raise ResourceCapError(f"sampling hit the node cap ({cap})")
    if vals is None:
        raise ValidationError("the family is empty for these parameters")
    if not randomize:
        return CubeArray(p.sig, vals)
    sig = p.sig
    sym, value_perm = _seeded_relabeling(p, int(seed))
    out = [0] * sig.size
    for idx, x in enumerate(sig.points()):
        out[sig.index(sym.apply(x))] = value_perm[vals[idx]]
    return CubeArray(sig, out)


# ---------------------------------------------------------------------------
# the space of zero-face-sum arrays

def face_sum_matrix(q: int, n: int, k: int) -> list:
    """0/1 incidence rows: one row per k-face, one column per cell."""
    sig = GridSig(q, n)
    if not 1 <= k <= n:
        raise ValidationError(f"face dimension k={k} outside 1..{n}")
    n_faces, cell_faces, _ = face_incidence(q, n, k)
    rows = [[0] * sig.size for _ in range(n_faces)]
    for c in range(sig.size):
        for f in cell_faces[c]:
            rows[f][c] = 1
    return rows


def matrix_rank_exact(rows) -> int:
    """Rank over the rationals by fraction-free integer elimination."""
    m = [list(int(x) for x in r) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    prev = 1
    row = 0
    for col in range(ncols):
        piv = None
        for i in range(row, len(m)):
            if m[i][col]:
                piv = i
                break
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        p = m[row][col]
        for i in range(row + 1, len(m)):
            c = m[i][col]
            for j in range(col, ncols):
                m[i][j] = (p * m[i][j] - c * m[row][j]) // prev
        prev = p
        rank += 1
        row += 1
        if row == len(m):
            break
    return rank


RANK_CELL_CAP = 4096


def lk_nullity(q: int, n: int, k: int) -> int:
    """dim of {arrays summing to zero on every k-face}, by exact rank."""
    sig = GridSig(q, n)
    if sig.size > RANK_CELL_CAP:
        raise ResourceCapError(
            f"rank computation over {sig.size} cells exceeds the cap")
    return sig.size - matrix_rank_exact(face_sum_matrix(q, n, k))


def lk_dimension(q: int, n: int, k: int) -> int:
    """Same dimension in closed form: sigma(q, n, n-k).

    Witnessed by :func:`lk_basis`; the rank route :func:`lk_nullity` agrees
    and is used as the independent cross-check.
    """
    GridSig(q, n)
    if not 1 <= k <= n:
        raise ValidationError(f"face dimension k={k} outside 1..{n}")
    return sigma(q, n, n - k)


def lk_basis(q: int, n: int, k: int) -> list:
    """Basis arrays f_a, one per point a of weight above n-k.

    f_a is (-1)^weight(x) on the subcube {x : x_i in {0, a_i}} and zero
    elsewhere.  Each basis array sums to zero on every k-face, and the
    whole family is linearly independent (a is the unique maximal point of
    its subcube), so it spans the zero-face-sum space.
    """
    sig = GridSig(q, n)
    if not 1 <= k <= n:
        raise ValidationError(f"face dimension k={k} outside 1..{n}")
    basis = []
    for a in sig.points():
        if weight(a) <= n - k:
            continue
        vals = []
        for x in sig.points():
            if all(xi in (0, ai) for xi, ai in zip(x, a)):
                vals.append(1 if weight(x) % 2 == 0 else -1)
            else:
                vals.append(0)
        basis.append(CubeArray(sig, vals))
    return basis


# ---------------------------------------------------------------------------
# triangle recursion with prescribed boundaries

class PascalTable:
    """Values C(k, n) for 2 <= k <= n from C(k,n) = C(k,n-1) + C(k-1,n-1).

    The two-face row C(2, n) and the diagonal C(n, n) are prescribed; the
    diagonal takes precedence at the shared corner (2, 2).
    """

    def __init__(self, boundary2, boundary_diag):
        self.boundary2 = boundary2
        self.boundary_diag = boundary_diag
        self._memo = {}

    def value(self, k: int, n: int) -> int:
        if not 2 <= k <= n:
            raise ValidationError(f"need 2 <= k <= n, got k={k}, n={n}")
        if k == n:
            return self.boundary_diag(n)
        if k == 2:
            return self.boundary2(n)
        key = (k, n)
        got = self._memo.get(key)
        if got is None:
            got = self.value(k, n - 1) + self.value(k - 1, n - 1)
            self._memo[key] = got
        return got


def pascal_eval(boundary2, boundary_diag, k: int, n: int) -> int:
    return PascalTable(boundary2, boundary_diag).value(k, n)


def _comb0(a: int, b: int) -> int:
    # empty product is 1 even for negative a; otherwise out-of-range is 0
    if b == 0:
        return 1
    if a < 0 or a < b:
        return 0
    return comb(a, b)


def pascal_expansion(boundary2, boundary_diag, k: int, n: int) -> int:
    """Closed form of the triangle recursion.

    Sums path counts from (k, n) to each boundary entry: diagonal entries
    j = k-t are reached by C(n-k-1+t, t) interior paths and the two-face
    row entries C(2, n-k-t+2) by C(k+t-3, t) of them.  The k = 2 row is
    returned directly, so the expansion is only used for k >= 3.
    """
    if not 2 <= k <= n:
        raise ValidationError(f"need 2 <= k <= n, got k={k}, n={n}")
    if k == 2:
        return boundary2(n)
    total = 0
    for t in range(0, k - 2):  # diagonal entries, j = k-t >= 3
        total += _comb0(n - k - 1 + t, t) * boundary_diag(k - t)
    for t in range(0, n - k):  # two-face row entries
        total += _comb0(k + t - 3, t) * boundary2(n - k - t + 2)
    return total


def pascal_expansion_check(boundary2, boundary_diag, k: int, n: int) -> bool:
    """Closed form agrees with the recursion at (k, n)."""
    return (pascal_expansion(boundary2, boundary_diag, k, n)
            == pascal_eval(boundary2, boundary_diag, k, n))


def binomial_boundaries():
    """Boundaries turning the recursion into the binomial C(k,n) -> C(n,k)."""
    return (lambda n: n * (n - 1) // 2, lambda n: 1)


def ball_boundaries():
    """Boundaries whose solution is ball_count(2, n, k-1)."""
    return (lambda n: n + 1, lambda n: 2 ** n - 1)


def testset_boundaries():
    """Boundaries matching the recursive binary supertesting construction."""
    return (lambda n: ceil_log2(n + 1) + 1, lambda n: 2 ** n - 1)


# ---------------------------------------------------------------------------
# size comparison report

@dataclass(frozen=True)
class CardinalityReport:
    """Baseline vs constructed testing-set sizes for one parameter point."""

    q: int
    n: int
    k: int
    trivial_size: int
    constructed_size: int | None
    construction: str | None
    delta: int | None
    exponent_trivial: int | None
    exponent_constructed: int | None
    notes: tuple

    def to_json_dict(self) -> dict:
        def tag(value, source):
            return None if value is None else {"value": value, "source": source}

        return {
            "q": self.q, "n": self.n, "k": self.k,
            "trivial_size": tag(self.trivial_size, "formula"),
            "constructed_size": tag(self.constructed_size, "constructed"),
            "construction": self.construction,
            "delta": tag(self.delta, "formula"),
            "exponent_trivial": tag(self.exponent_trivial, "formula"),
            "exponent_constructed": tag(self.exponent_constructed,
                                        "constructed"),
            "notes": list(self.notes),
        }

    def render(self) -> str:
        lines = [f"testing-set sizes for q={self.q}, n={self.n}, k={self.k}"]
        lines.append(f"  baseline (weight threshold) : {self.trivial_size}")
        if self.constructed_size is not None:
            lines.append(f"  constructed ({self.construction:<12s}): "
                         f"{self.constructed_size}")
            lines.append(f"  improvement                 : {self.delta}")
        else:
            lines.append("  constructed                 : none at these parameters")
        if self.exponent_trivial is not None:
            lines.append(f"  count-bound exponent, baseline   : {self.exponent_trivial}")
        if self.exponent_constructed is not None:
            lines.append(f"  count-bound exponent, constructed: {self.exponent_constructed}")
        for note in self.notes:
            lines.append(f"  note: {note}")
        return "\n".join(lines)


def cardinality_report(q: int, n: int, k: int) -> CardinalityReport:
    """Compare the weight-threshold baseline size against the constructions.

    Constructions covered: the all-nonzero-points set at k = n (any q), the
    binary recursive set for q = 2 and 2 <= k < n, and the lifted-product
    set for k = 1 and q >= 3.  Sizes come from the closed formulas; the
    sets themselves are never materialized here.
    """
    GridSig(q, n)
    if not 1 <= k <= n:
        raise ValidationError(f"face dimension k={k} outside 1..{n}")
    trivial = sigma(q, n, n - k)
    constructed = None
    construction = None
    notes = []
    if k == n:
        constructed = q ** n - 1
        construction = "baseline"
    elif q == 2 and k >= 2:
        b2, bd = testset_boundaries()
        constructed = pascal_eval(b2, bd, k, n)
        construction = "recursive"
        notes.append("the two-face boundary row uses the binary logarithm")
    elif q >= 3 and k == 1:
        m_blocks, t = divmod(n, 3)
        constructed = ((q - 1) ** 3 - 1) ** m_blocks * (q - 1) ** t
        construction = "lifted-product"
        notes.append("the lifted-product set certifies the testing property "
                      "only; it is not supertesting")
    delta = None if constructed is None else trivial - constructed
    exponent_trivial = exponent_constructed = None
    if k == 1:
        exponent_trivial = (q - 1) ** n
        exponent_constructed = constructed
        notes.append("count-bound exponents assume one symbol per frequency "
                     "(m = q), giving q to the |T| for |T| test points")
    return CardinalityReport(q, n, k, trivial, constructed, construction,
                             delta, exponent_trivial, exponent_constructed,
                             tuple(notes))
