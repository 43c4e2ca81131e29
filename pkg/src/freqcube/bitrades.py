"""Balanced sign arrays (k-bitrades) on the grid [q]^n.

A k-bitrade is an array with values in {-1, 0, +1} in which every k-face
sums to zero.  Nonzero k-bitrades are the obstructions to testing: two
frequency arrays with the same face frequencies differ by a bitrade, so a
point set pins down every such array iff no nonzero k-bitrade vanishes on
the whole set.  The searches here back onto the engine subpackage; both
engine implementations explore the identical tree, so node counts are
reproducible measurements, not estimates.

For the binary grid the module also carries the algebraic normal form
machinery used to describe bitrade supports: XOR-polynomial coefficients,
degree, and the test for being affine in at most two variables.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import product

from . import _engine
from ._engine import (STATUS_COMPLETE, STATUS_FOUND, STATUS_LIMIT,
                      STATUS_NODE_CAP, STATUS_NAMES)
from ._engine._common import face_incidence
from .core import (CubeArray, GridSig, PointSet, ResourceCapError,
                   ValidationError)

DEFAULT_NODE_CAP = 10 ** 8


def default_node_cap() -> int:
    """Node budget for engine searches; FREQCUBE_NODE_CAP overrides."""
    raw = os.environ.get("FREQCUBE_NODE_CAP")
    if raw is None:
        return DEFAULT_NODE_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ValidationError(f"FREQCUBE_NODE_CAP={raw!r} is not an integer") from exc
    if cap < 1:
        raise ValidationError("FREQCUBE_NODE_CAP must be positive")
    return cap


def resolve_engine(engine=None):
    """Map an engine name (or None for the active default) to its module."""
    if engine is None:
        return _engine.active
    if isinstance(engine, str):
        return _engine.get_engine(engine)
    return engine


@dataclass(frozen=True)
class SearchOutcome:
    """Result of one engine run: verdict status, witness, node count."""

    status: int
    witness: CubeArray | None
    nodes: int
    engine: str

    @property
    def status_name(self) -> str:
        return STATUS_NAMES[self.status]

    @property
    def exhausted(self) -> bool:
        """True when the whole search space was covered without a hit."""
        return self.status == STATUS_COMPLETE


# ---------------------------------------------------------------------------
# bitrade predicates

def is_k_bitrade(g: CubeArray, k: int) -> bool:
    """Values in {-1, 0, +1} and every k-face sums to zero."""
    sig = g.sig
    if not 1 <= k <= sig.n:
        raise ValidationError(f"face dimension k={k} outside 1..{sig.n}")
    vals = g.values
    if any(v not in (-1, 0, 1) for v in vals):
        return False
    n_faces, cell_faces, _ = face_incidence(sig.q, sig.n, k)
    sums = [0] * n_faces
    for c, v in enumerate(vals):
        if v:
            for f in cell_faces[c]:
                sums[f] += v
    return all(s == 0 for s in sums)


def support_points(g: CubeArray) -> PointSet:
    """Cells where the array is nonzero."""
    sig = g.sig
    return PointSet(sig, (sig.point(i) for i, v in enumerate(g.values) if v))


def support_indicator(g: CubeArray) -> CubeArray:
    """0/1 array marking the nonzero cells."""
    return CubeArray(g.sig, [1 if v else 0 for v in g.values])


# ---------------------------------------------------------------------------
# searches

def _as_point_set(sig: GridSig, avoid) -> PointSet:
    if isinstance(avoid, PointSet):
        if avoid.sig != sig:
            raise ValidationError("avoid set lives on a different grid")
        return avoid
    return PointSet(sig, avoid)


def _check_witness(g: CubeArray, k: int, avoid: PointSet) -> None:
    # independent of the engine: a bad witness is an engine bug, not user error
    if not is_k_bitrade(g, k):
        raise RuntimeError("engine returned a non-bitrade witness")
    if all(v == 0 for v in g.values):
        raise RuntimeError("engine returned the zero array as a witness")
    hit = set(avoid.indices())
    if any(v and (i in hit) for i, v in enumerate(g.values)):
        raise RuntimeError("engine witness does not avoid the given set")


def find_bitrade_avoiding(q: int, n: int, k: int, avoid=(),
                          node_cap: int | None = None,
                          engine=None) -> SearchOutcome:
    """Search for a nonzero k-bitrade that vanishes on all of ``avoid``.

    status FOUND carries a verified witness; status COMPLETE means the
    exhaustive search proved no such bitrade exists, which certifies the
    avoided set as supertesting; status NODE_CAP is a non-verdict.
    """
    sig = GridSig(q, n)
    if not 1 <= k <= n:
        raise ValidationError(f"face dimension k={k} outside 1..{n}")
    T = _as_point_set(sig, avoid)
    cap = default_node_cap() if node_cap is None else int(node_cap)
    eng = resolve_engine(engine)
    status, values, nodes = eng.BitradeSearcher(q, n, k).search_avoiding(
        T.indices(), cap)
    witness = None
    if status == STATUS_FOUND:
        witness = CubeArray(sig, values)
        _check_witness(witness, k, T)
    return SearchOutcome(status, witness, nodes, eng.ENGINE_NAME)


def enumerate_bitrades(q: int, n: int, k: int, node_cap: int | None = None,
                       limit: int = 0, engine=None):
    """All k-bitrades of [q]^n, the zero array included.

    Returns (list of arrays, SearchOutcome); raises ResourceCapError if the
    node budget ran out before the enumeration finished.  ``limit`` > 0
    truncates the list (status LIMIT).
    """
    sig = GridSig(q, n)
    if not 1 <= k <= n:
        raise ValidationError(f"face dimension k={k} outside 1..{n}")
    cap = default_node_cap() if node_cap is None else int(node_cap)
    eng = resolve_engine(engine)
    status, sols, nodes = eng.BitradeSearcher(q, n, k).enumerate_all(cap, limit)
    if status == STATUS_NODE_CAP:
        raise ResourceCapError(
            f"bitrade enumeration hit the node cap ({cap}) after {nodes} nodes")
    arrays = [CubeArray(sig, v) for v in sols]
    return arrays, SearchOutcome(status, None, nodes, eng.ENGINE_NAME)


def enumerate_bitrades_brute(q: int, n: int, k: int,
                             cell_cap: int = 10) -> list:
    """Scan all 3^(q^n) sign arrays; independent oracle for tiny grids."""
    sig = GridSig(q, n)
    if sig.size > cell_cap:
        raise ResourceCapError(
            f"brute scan over 3^{sig.size} arrays refused (cap 3^{cell_cap})")
    out = []
    for vals in product((-1, 0, 1), repeat=sig.size):
        g = CubeArray(sig, vals)
        if is_k_bitrade(g, k):
            out.append(g)
    return out


# ---------------------------------------------------------------------------
# algebraic normal form on the binary grid

def _require_binary(f: CubeArray) -> int:
    if f.sig.q != 2:
        raise ValidationError("normal form is defined on the binary grid only")
    if any(v not in (0, 1) for v in f.values):
        raise ValidationError("array values must be 0/1")
    return f.sig.n


def anf(f: CubeArray) -> tuple:
    """XOR-polynomial coefficients of a 0/1 array on [2]^n.

    Entry j is the coefficient of the monomial formed by the coordinates
    marked in the binary expansion of the cell index j, so coefficient
    2^(n-1-i) belongs to the single variable x_i.  Computed by the in-place
    subset-XOR butterfly.
    """
    n = _require_binary(f)
    a = list(f.values)
    size = 1 << n
    for b in range(n):
        step = 1 << b
        for j in range(size):
            if j & step:
                a[j] ^= a[j ^ step]
    return tuple(a)


def from_anf(n: int, coeffs) -> CubeArray:
    """Inverse of :func:`anf`; the butterfly is an involution."""
    g = CubeArray(GridSig(2, n), coeffs)
    return CubeArray(GridSig(2, n), anf(g))


def degree(f: CubeArray) -> int:
    """Degree of the XOR polynomial; the zero function has degree 0."""
    coeffs = anf(f)
    deg = 0
    for j, c in enumerate(coeffs):
        if c:
            pc = bin(j).count("1")
            if pc > deg:
                deg = pc
    return deg


def essential_variables(f: CubeArray) -> tuple:
    """Coordinates some ANF monomial actually uses."""
    n = f.sig.n
    coeffs = anf(f)
    used = 0
    for j, c in enumerate(coeffs):
        if c:
            used |= j
    return tuple(i for i in range(n) if used >> (n - 1 - i) & 1)


def is_affine_leq2(f: CubeArray) -> bool:
    """Affine (degree <= 1) in at most two essential variables."""
    coeffs = anf(f)
    linear = 0
    for j, c in enumerate(coeffs):
        if c and j:
            if bin(j).count("1") > 1:
                return False
            linear += 1
    return linear <= 2


def affine_support_bitrade(n: int, essential, const: int = 0) -> CubeArray:
    """A 2-bitrade of [2]^n supported exactly on an affine-defined set.

    The support is {x : sum of x_i over ``essential`` = 1 + const (mod 2)}
    with at most two essential coordinates; the sign at x alternates with
    the coordinates outside the set's defining form.  Realizes every
    support that 2-bitrades on the binary grid admit.
    """
    ess = tuple(sorted(set(int(i) for i in essential)))
    if len(ess) > 2:
        raise ValidationError("at most two essential coordinates")
    if any(not 0 <= i < n for i in ess):
        raise ValidationError("essential coordinate out of range")
    if n < 2:
        raise ValidationError("2-bitrades need n >= 2")
    sig = GridSig(2, n)
    target = (1 + const) % 2

    def cell(x):
        if sum(x[i] for i in ess) % 2 != target:
            return 0
        sign = sum(x[i] for i in range(n) if i not in ess)
        if len(ess) == 2:
            sign += x[ess[0]]
        return 1 if sign % 2 == 0 else -1

    return CubeArray.from_function(sig, cell)


# ---------------------------------------------------------------------------
# small-grid census

@dataclass(frozen=True)
class BitradeCensus:
    """Every k-bitrade of a small grid, with the distinct nonzero supports."""

    q: int
    n: int
    k: int
    method: str
    bitrades: tuple
    supports: tuple  # sorted tuples of cell indices, zero array excluded
    engine: str | None = None

    @property
    def total(self) -> int:
        return len(self.bitrades)

    @property
    def nonzero(self) -> int:
        return sum(1 for g in self.bitrades if any(g.values))


def classify_small_bitrades(q: int, n: int, k: int, method: str = "auto",
                            node_cap: int | None = None,
                            engine=None) -> BitradeCensus:
    """Census of all k-bitrades of [q]^n.

    method "brute" scans every sign array (grids of at most 10 cells),
    "engine" runs the backtracking enumeration, "auto" picks brute for the
    tiny grids so the two paths cross-check each other in tests.
    """
    sig = GridSig(q, n)
    if method == "auto":
        method = "brute" if sig.size <= 10 else "engine"
    if method == "brute":
        arrays = enumerate_bitrades_brute(q, n, k)
        eng_name = None
    elif method == "engine":
        arrays, outcome = enumerate_bitrades(q, n, k, node_cap=node_cap,
                                             engine=engine)
        eng_name = outcome.engine
    else:
        raise ValidationError(f"unknown method {method!r}")
    supports = sorted({
        tuple(i for i, v in enumerate(g.values) if v)
        for g in arrays if any(g.values)
    })
    return BitradeCensus(q, n, k, method, tuple(arrays), tuple(supports),
                         eng_name)


# ---------------------------------------------------------------------------
# serialization

def bitrade_to_json_dict(g: CubeArray, k: int) -> dict:
    return {"q": g.sig.q, "n": g.sig.n, "k": int(k),
            "values": list(g.values)}


def bitrade_from_json_dict(doc: dict, validate: bool = True):
    """Returns (array, k); with ``validate`` the face sums are checked."""
    try:
        sig = GridSig(int(doc["q"]), int(doc["n"]))
        k = int(doc["k"])
        vals = [int(v) for v in doc["values"]]
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed bitrade document: {exc}") from exc
    g = CubeArray(sig, vals)
    if validate and not is_k_bitrade(g, k):
        raise ValidationError("document does not encode a k-bitrade")
    return g, k
