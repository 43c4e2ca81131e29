"""Data shared by both search engines.

The compiled and the pure-Python engine must agree on everything observable:
status codes, the incidence tables that fix the order in which constraints
are checked, and the pseudo-random stream used for sampled value orders.
Keeping those definitions in one place is what makes node counts comparable
across engines.
"""

from functools import lru_cache
from itertools import combinations

# Outcomes of a backtracking run.
STATUS_FOUND = 0      # witness / first solution found (existence queries)
STATUS_COMPLETE = 1   # search space exhausted
STATUS_NODE_CAP = 2   # stopped by the node cap; no verdict
STATUS_LIMIT = 3      # stopped after collecting the requested solution count

STATUS_NAMES = {
    STATUS_FOUND: "found",
    STATUS_COMPLETE: "exhausted",
    STATUS_NODE_CAP: "node-cap",
    STATUS_LIMIT: "solution-limit",
}


@lru_cache(maxsize=None)
def face_incidence(q: int, n: int, k: int):
    """Incidence of cells and k-faces of the grid [q]^n.

    Cells are indexed row-major: cell(x) = sum x_i * q^(n-1-i).  Faces are
    numbered by (free coordinate set, fixed part): free sets in lexicographic
    order of combinations(range(n), k), fixed parts row-major over the fixed
    positions.  Returns (n_faces, cell_faces, face_size) where cell_faces[c]
    lists, in face-id order, the C(n, k) faces through cell c.
    """
    if not (2 <= q and 1 <= k <= n):
        raise ValueError(f"bad face parameters q={q} n={n} k={k}")
    n_cells = q ** n
    free_sets = list(combinations(range(n), k))
    block = q ** (n - k)  # faces per free set

    coords = [None] * n_cells
    for cell in range(n_cells):
        c = cell
        pt = [0] * n
        for i in range(n - 1, -1, -1):
            pt[i] = c % q
            c //= q
        coords[cell] = pt

    cell_faces = []
    for cell in range(n_cells):
        pt = coords[cell]
        row = []
        for si, free in enumerate(free_sets):
            rank = 0
            for i in range(n):
                if i not in free:
                    rank = rank * q + pt[i]
            row.append(si * block + rank)
        cell_faces.append(tuple(row))
    return len(free_sets) * block, tuple(cell_faces), q ** k


# xorshift64* stream; reimplemented verbatim in the compiled engine.
_X0 = 0x9E3779B97F4A7C15
_XMUL = 0x2545F4914F6CDD1D
_M64 = (1 << 64) - 1


def xs_seed(seed: int) -> int:
    s = (seed ^ _X0) & _M64
    return s if s else _X0


def xs_next(s: int):
    s ^= s >> 12
    s ^= (s << 25) & _M64
    s ^= s >> 27
    return s, (s * _XMUL) & _M64


def shuffled_value_orders(m: int, depths: int, seed: int):
    """Per-depth permutations of range(m) drawn from one xorshift stream."""
    s = xs_seed(seed)
    rows = []
    for _ in range(depths):
        arr = list(range(m))
        for i in range(m - 1, 0, -1):
            s, r = xs_next(s)
            j = r % (i + 1)
            arr[i], arr[j] = arr[j], arr[i]
        rows.append(arr)
    return rows
