"""Points, faces, arrays and symmetries of the grid [q]^n.

Everything downstream (bitrades, testing sets, frequency cubes) rests on the
row-major cell indexing fixed here: the index of a point x = (x_0, ..., x_{n-1})
with entries in {0, ..., q-1} is sum_i x_i * q^(n-1-i).  All engines and all
file formats use this one layout.

The weight of a point is its number of nonzero coordinates.  A k-face is the
set of q^k points obtained by freeing k coordinates and fixing the rest.  The
symmetry group of the grid is generated by coordinate permutations and by
independent alphabet permutations in each coordinate; its order is n!*(q!)^n.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations, permutations, product
from math import comb, factorial

MAX_Q = 255
INDEX_LIMIT = 2 ** 62


class ValidationError(ValueError):
    """Malformed parameters or data."""


class ResourceCapError(RuntimeError):
    """A configured resource limit was reached before a verdict."""


class ReconstructionError(ValueError):
    """Partial data is not the restriction of any array in the family."""


# ---------------------------------------------------------------------------
# grid signature and points

@dataclass(frozen=True)
class GridSig:
    """Shape (q, n) of the grid [q]^n."""

    q: int
    n: int

    def __post_init__(self):
        if not isinstance(self.q, int) or not isinstance(self.n, int):
            raise ValidationError("q and n must be integers")
        if self.q < 2 or self.q > MAX_Q:
            raise ValidationError(f"alphabet size q={self.q} outside 2..{MAX_Q}")
        if self.n < 1:
            raise ValidationError(f"dimension n={self.n} must be at least 1")
        if self.q ** self.n > INDEX_LIMIT:
            raise ValidationError(f"grid [{self.q}]^{self.n} exceeds the index range")

    @property
    def size(self) -> int:
        return self.q ** self.n

    def index(self, point) -> int:
        """Row-major cell index of a point."""
        self.check_point(point)
        idx = 0
        for x in point:
            idx = idx * self.q + x
        return idx

    def point(self, index: int) -> tuple:
        """Inverse of :meth:`index`."""
        if not 0 <= index < self.size:
            raise ValidationError(f"cell index {index} out of range")
        out = [0] * self.n
        for i in range(self.n - 1, -1, -1):
            out[i] = index % self.q
            index //= self.q
        return tuple(out)

    def points(self):
        """All points in row-major order."""
        return product(range(self.q), repeat=self.n)

    def check_point(self, point) -> None:
        if len(point) != self.n:
            raise ValidationError(f"point {point} has wrong dimension")
        for x in point:
            if not isinstance(x, int) or not 0 <= x < self.q:
                raise ValidationError(f"coordinate {x} outside 0..{self.q - 1}")


def weight(point) -> int:
    """Number of nonzero coordinates."""
    return sum(1 for x in point if x)


def ball_count(q: int, n: int, r: int) -> int:
    """Number of points of [q]^n with weight at most r; 0 when r = -1."""
    sig = GridSig(q, n)  # validates q, n
    if not -1 <= r <= n:
        raise ValidationError(f"radius r={r} outside -1..{n}")
    return sum(comb(n, i) * (q - 1) ** i for i in range(r + 1))


def sigma(q: int, n: int, r: int) -> int:
    """Number of points of weight exceeding r: q^n - ball_count(q, n, r)."""
    return GridSig(q, n).size - ball_count(q, n, r)


# ---------------------------------------------------------------------------
# faces

@dataclass(frozen=True)
class Face:
    """A k-face: k free coordinates, the rest pinned to symbols."""

    sig: GridSig
    fixed: tuple  # ((position, symbol), ...) sorted by position

    def __post_init__(self):
        seen = set()
        for pos, sym in self.fixed:
            if not 0 <= pos < self.sig.n:
                raise ValidationError(f"fixed position {pos} out of range")
            if not 0 <= sym < self.sig.q:
                raise ValidationError(f"fixed symbol {sym} out of range")
            if pos in seen:
                raise ValidationError(f"position {pos} fixed twice")
            seen.add(pos)
        object.__setattr__(self, "fixed", tuple(sorted(self.fixed)))

    @property
    def free(self) -> tuple:
        pinned = {pos for pos, _ in self.fixed}
        return tuple(i for i in range(self.sig.n) if i not in pinned)

    @property
    def dimension(self) -> int:
        return self.sig.n - len(self.fixed)

    def points(self):
        """The q^k points of the face, row-major in the free coordinates."""
        free = self.free
        base = [0] * self.sig.n
        for pos, sym in self.fixed:
            base[pos] = sym
        for vals in product(range(self.sig.q), repeat=len(free)):
            pt = base[:]
            for i, v in zip(free, vals):
                pt[i] = v
            yield tuple(pt)

    def contains(self, point) -> bool:
        self.sig.check_point(point)
        return all(point[pos] == sym for pos, sym in self.fixed)


def enumerate_faces(sig: GridSig, k: int):
    """All k-faces: free sets in lexicographic order, fixed parts row-major."""
    if not 1 <= k <= sig.n:
        raise ValidationError(f"face dimension k={k} outside 1..{sig.n}")
    for free in combinations(range(sig.n), k):
        pinned = [i for i in range(sig.n) if i not in free]
        for vals in product(range(sig.q), repeat=len(pinned)):
            yield Face(sig, tuple(zip(pinned, vals)))


# ---------------------------------------------------------------------------
# symmetries

@dataclass(frozen=True)
class Symmetry:
    """Grid symmetry: y[i] = alpha_perms[i][ x[coord_perm[i]] ].

    ``coord_perm[i]`` names the source coordinate feeding output coordinate i;
    ``alpha_perms[i]`` permutes the alphabet of output coordinate i.
    """

    coord_perm: tuple
    alpha_perms: tuple

    def __post_init__(self):
        n = len(self.coord_perm)
        if sorted(self.coord_perm) != list(range(n)):
            raise ValidationError("coord_perm is not a permutation")
        if len(self.alpha_perms) != n:
            raise ValidationError("one alphabet permutation per coordinate required")
        q = len(self.alpha_perms[0]) if n else 0
        for p in self.alpha_perms:
            if sorted(p) != list(range(q)):
                raise ValidationError("alphabet permutation is not a permutation")
        object.__setattr__(self, "coord_perm", tuple(self.coord_perm))
        object.__setattr__(self, "alpha_perms", tuple(tuple(p) for p in self.alpha_perms))

    @property
    def n(self) -> int:
        return len(self.coord_perm)

    @property
    def q(self) -> int:
        return len(self.alpha_perms[0])

    def apply(self, point) -> tuple:
        if len(point) != self.n:
            raise ValidationError("point dimension does not match symmetry")
        return tuple(self.alpha_perms[i][point[self.coord_perm[i]]]
                     for i in range(self.n))

    def compose(self, other: "Symmetry") -> "Symmetry":
        """self after other: (self.compose(other)).apply(x) == self.apply(other.apply(x))."""
        if self.n != other.n or self.q != other.q:
            raise ValidationError("incompatible symmetries")
        cp = tuple(other.coord_perm[self.coord_perm[i]] for i in range(self.n))
        ap = tuple(
            tuple(self.alpha_perms[i][other.alpha_perms[self.coord_perm[i]][v]]
                  for v in range(self.q))
            for i in range(self.n)
        )
        return Symmetry(cp, ap)

    def inverse(self) -> "Symmetry":
        n, q = self.n, self.q
        inv_cp = [0] * n
        for i in range(n):
            inv_cp[self.coord_perm[i]] = i
        ap = []
        for j in range(n):
            # output coord j of the inverse is fed by source i = inv_cp[j]... the
            # inverse must undo alpha at the coordinate it reads from.
            i = inv_cp[j]
            src_alpha = self.alpha_perms[i]
            inv_alpha = [0] * q
            for v in range(q):
                inv_alpha[src_alpha[v]] = v
            ap.append(tuple(inv_alpha))
        return Symmetry(tuple(inv_cp), tuple(ap))

    @staticmethod
    def identity(q: int, n: int) -> "Symmetry":
        return Symmetry(tuple(range(n)), tuple(tuple(range(q)) for _ in range(n)))


def apply_symmetry(s: Symmetry, point) -> tuple:
    return s.apply(point)


def group_order(q: int, n: int) -> int:
    """Order of the grid symmetry group: n! * (q!)^n."""
    GridSig(q, n)
    return factorial(n) * factorial(q) ** n


def all_symmetries(q: int, n: int):
    """All grid symmetries, in a fixed deterministic order."""
    GridSig(q, n)
    alpha_choices = list(permutations(range(q)))
    for cp in permutations(range(n)):
        for alphas in product(alpha_choices, repeat=n):
            yield Symmetry(cp, alphas)


# ---------------------------------------------------------------------------
# point sets

class PointSet:
    """A set of points of [q]^n, kept sorted by row-major index."""

    __slots__ = ("sig", "_points", "_indices")

    def __init__(self, sig: GridSig, points):
        self.sig = sig
        idx = set()
        for p in points:
            p = tuple(p)
            sig.check_point(p)
            idx.add(sig.index(p))
        self._indices = tuple(sorted(idx))
        self._points = tuple(sig.point(i) for i in self._indices)

    @property
    def points(self) -> tuple:
        return self._points

    def indices(self) -> tuple:
        return self._indices

    def mask(self) -> int:
        """Bitmask of cell indices (bit i set iff cell i is in the set)."""
        m = 0
        for i in self._indices:
            m |= 1 << i
        return m

    def __len__(self):
        return len(self._points)

    def __iter__(self):
        return iter(self._points)

    def __contains__(self, point):
        try:
            return self.sig.index(tuple(point)) in set(self._indices)
        except ValidationError:
            return False

    def __eq__(self, other):
        return (isinstance(other, PointSet) and self.sig == other.sig
                and self._indices == other._indices)

    def __hash__(self):
        return hash((self.sig, self._indices))

    def __repr__(self):
        return f"PointSet(q={self.sig.q}, n={self.sig.n}, size={len(self)})"

    def union(self, other: "PointSet") -> "PointSet":
        if self.sig != other.sig:
            raise ValidationError("point sets live on different grids")
        return PointSet(self.sig, self._points + other._points)

    def to_json_dict(self) -> dict:
        return {"q": self.sig.q, "n": self.sig.n,
                "points": [list(p) for p in self._points]}

    @staticmethod
    def from_json_dict(doc: dict) -> "PointSet":
        try:
            sig = GridSig(int(doc["q"]), int(doc["n"]))
            pts = [tuple(int(x) for x in p) for p in doc["points"]]
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed point set document: {exc}") from exc
        return PointSet(sig, pts)

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @staticmethod
    def from_json(text: str) -> "PointSet":
        return PointSet.from_json_dict(json.loads(text))


def apply_symmetry_set(s: Symmetry, T: PointSet) -> PointSet:
    if s.n != T.sig.n or s.q != T.sig.q:
        raise ValidationError("symmetry does not act on this grid")
    return PointSet(T.sig, (s.apply(p) for p in T))


CANONICAL_GROUP_CAP = 10 ** 7


def canonical_form(T: PointSet, group_cap: int = CANONICAL_GROUP_CAP) -> PointSet:
    """Lexicographically least image of T under the full symmetry group.

    Two sets have equal canonical forms iff some grid symmetry maps one onto
    the other.  Refuses groups larger than ``group_cap``.
    """
    q, n = T.sig.q, T.sig.n
    order = group_order(q, n)
    if order > group_cap:
        raise ResourceCapError(
            f"symmetry group order {order} exceeds the cap {group_cap}")
    sig = T.sig
    best = None
    pts = T.points
    for s in all_symmetries(q, n):
        image = tuple(sorted(sig.index(s.apply(p)) for p in pts))
        if best is None or image < best:
            best = image
    if best is None:  # empty group cannot happen; empty set maps to itself
        best = ()
    return PointSet(sig, (sig.point(i) for i in best))


# ---------------------------------------------------------------------------
# dense arrays over the grid

class CubeArray:
    """Dense integer array over [q]^n in row-major order.

    The admissible value range depends on use: symbols 0..m-1 for frequency
    cubes, {-1, 0, +1} for bitrades.  The constructor only fixes the length;
    consumers validate ranges.
    """

    __slots__ = ("sig", "_values")

    def __init__(self, sig: GridSig, values):
        values = list(int(v) for v in values)
        if len(values) != sig.size:
            raise ValidationError(
                f"expected {sig.size} values for [{sig.q}]^{sig.n}, got {len(values)}")
        self.sig = sig
        self._values = values

    @staticmethod
    def constant(sig: GridSig, v: int) -> "CubeArray":
        return CubeArray(sig, [v] * sig.size)

    @staticmethod
    def from_function(sig: GridSig, fn) -> "CubeArray":
        return CubeArray(sig, [fn(p) for p in sig.points()])

    @property
    def values(self) -> tuple:
        return tuple(self._values)

    def value_at(self, point) -> int:
        return self._values[self.sig.index(point)]

    def __getitem__(self, point):
        return self.value_at(point)

    def __eq__(self, other):
        return (isinstance(other, CubeArray) and self.sig == other.sig
                and self._values == other._values)

    def __hash__(self):
        return hash((self.sig, tuple(self._values)))

    def __repr__(self):
        return f"CubeArray(q={self.sig.q}, n={self.sig.n})"

    def retract(self, axis: int, symbol: int) -> "CubeArray":
        """Subarray on the cells with coordinate ``axis`` pinned to ``symbol``.

        The result lives on [q]^(n-1); remaining coordinates keep their order.
        Requires n >= 2.
        """
        sig = self.sig
        if sig.n < 2:
            raise ValidationError("cannot retract a 1-dimensional array")
        if not 0 <= axis < sig.n:
            raise ValidationError(f"axis {axis} out of range")
        if not 0 <= symbol < sig.q:
            raise ValidationError(f"symbol {symbol} out of range")
        sub = GridSig(sig.q, sig.n - 1)
        vals = []
        for p in sub.points():
            full = p[:axis] + (symbol,) + p[axis:]
            vals.append(self._values[sig.index(full)])
        return CubeArray(sub, vals)

    def to_json_dict(self, m: int | None = None) -> dict:
        doc = {"q": self.sig.q, "n": self.sig.n}
        if m is not None:
            doc["m"] = m
        doc["values"] = list(self._values)
        return doc

    @staticmethod
    def from_json_dict(doc: dict) -> "CubeArray":
        try:
            sig = GridSig(int(doc["q"]), int(doc["n"]))
            vals = [int(v) for v in doc["values"]]
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed array document: {exc}") from exc
        return CubeArray(sig, vals)


def retract(f: CubeArray, axis: int, symbol: int) -> CubeArray:
    return f.retract(axis, symbol)


# ---------------------------------------------------------------------------
# text rendering (n <= 3)

def _layer_lines(rows):
    return [" ".join(str(v) for v in row) for row in rows]


def render_cube(f: CubeArray) -> str:
    """Human-readable grid layout, dimension at most 3.

    n=1: one line.  n=2: a q x q table, rows indexed by the first coordinate.
    n=3: q tables (layers indexed by the first coordinate), rows by the
    second coordinate, columns by the third.
    """
    q, n = f.sig.q, f.sig.n
    vals = f._values
    if n > 3:
        raise ValidationError("text rendering covers n <= 3 only")
    if n == 1:
        return " ".join(str(v) for v in vals)
    if n == 2:
        rows = [vals[r * q:(r + 1) * q] for r in range(q)]
        return "\n".join(_layer_lines(rows))
    blocks = []
    for layer in range(q):
        base = layer * q * q
        rows = [vals[base + r * q: base + (r + 1) * q] for r in range(q)]
        blocks.append(f"[{layer}]\n" + "\n".join(_layer_lines(rows)))
    return "\n\n".join(blocks)


def render_point_set(T: PointSet) -> str:
    """Same layout as :func:`render_cube`, with '*' marking members."""
    sig = T.sig
    q, n = sig.q, sig.n
    if n > 3:
        raise ValidationError("text rendering covers n <= 3 only")
    chosen = set(T.indices())
    cell = ["*" if i in chosen else "." for i in range(sig.size)]
    if n == 1:
        return " ".join(cell)
    if n == 2:
        return "\n".join(" ".join(cell[r * q:(r + 1) * q]) for r in range(q))
    blocks = []
    for layer in range(q):
        base = layer * q * q
        rows = [" ".join(cell[base + r * q: base + (r + 1) * q]) for r in range(q)]
        blocks.append(f"[{layer}]\n" + "\n".join(rows))
    return "\n\n".join(blocks)
