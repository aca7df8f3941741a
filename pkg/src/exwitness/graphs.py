"""Exclusivity-graph value type, explicit graph families, and graph file I/O.

Vertices of an exclusivity graph are events of a probability sum; an edge
joins two events that cannot both happen.  Adjacency is stored as one
integer bitmask per vertex so that neighbourhood intersections (the hot
operation of the independent-set search) are single big-int ANDs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .rng import uniform_block


def _bits(mask: int):
    """Yield the set bit positions of mask, ascending."""
    while mask:
        lsb = mask & -mask
        yield lsb.bit_length() - 1
        mask ^= lsb


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph with bit-row adjacency.

    rows[i] has bit j set iff vertices i and j are adjacent.  Instances are
    immutable (safe to share across threads) and validated on construction:
    symmetric adjacency, empty diagonal.
    """

    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise InputError(f"vertex count must be positive, got {self.n}")
        if len(self.rows) != self.n:
            raise InputError("adjacency row count does not match vertex count")
        full = (1 << self.n) - 1
        for i, row in enumerate(self.rows):
            if row & ~full:
                raise InputError(f"row {i} has bits outside 0..{self.n - 1}")
            if (row >> i) & 1:
                raise InputError(f"vertex {i} is adjacent to itself")
        for i in range(self.n):
            for j in _bits(self.rows[i] >> (i + 1)):
                if not (self.rows[i + 1 + j] >> i) & 1:
                    raise InputError(f"adjacency not symmetric at ({i}, {i + 1 + j})")

    @property
    def m(self) -> int:
        """Edge count."""
        return sum(row.bit_count() for row in self.rows) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.rows[u] >> v) & 1)

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def degrees(self) -> list[int]:
        return [row.bit_count() for row in self.rows]

    def edges(self) -> list[tuple[int, int]]:
        """All edges as (u, v) with u < v, sorted."""
        out = []
        for u in range(self.n):
            for v in _bits(self.rows[u] >> (u + 1)):
                out.append((u, u + 1 + v))
        return out

    def adjacency_matrix(self) -> np.ndarray:
        """Dense boolean adjacency matrix."""
        a = np.zeros((self.n, self.n), dtype=bool)
        for u in range(self.n):
            for v in _bits(self.rows[u]):
                a[u, v] = True
        return a

    def is_edgeless(self) -> bool:
        return all(row == 0 for row in self.rows)

    def is_complete(self) -> bool:
        full = (1 << self.n) - 1
        return all(row == full ^ (1 << i) for i, row in enumerate(self.rows))


def _graph_from_rows(n: int, rows: list[int]) -> Graph:
    return Graph(n, tuple(rows))


def new_graph(n: int, edges) -> Graph:
    """Graph on n vertices with the given edges (deduplicated, symmetric)."""
    if n < 1:
        raise InputError(f"vertex count must be positive, got {n}")
    rows = [0] * n
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise InputError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
        if u == v:
            raise InputError(f"self-loop at vertex {u}")
        rows[u] |= 1 << v
        rows[v] |= 1 << u
    return _graph_from_rows(n, rows)


def complement(g: Graph) -> Graph:
    """Same vertices; distinct pair adjacent iff not adjacent in g."""
    full = (1 << g.n) - 1
    rows = [(full ^ row ^ (1 << i)) for i, row in enumerate(g.rows)]
    return _graph_from_rows(g.n, rows)


def cycle(n: int) -> Graph:
    """The n-cycle, n >= 3."""
    if n < 3:
        raise InputError(f"cycle needs at least 3 vertices, got {n}")
    return new_graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> Graph:
    """The complete graph on n >= 1 vertices."""
    if n < 1:
        raise InputError(f"complete graph needs at least 1 vertex, got {n}")
    full = (1 << n) - 1
    return _graph_from_rows(n, [full ^ (1 << i) for i in range(n)])


@dataclass(frozen=True)
class SubsetFamily:
    """Parameters (q, s) of the subset-intersection family, q > s > 0.

    Vertices are the q-subsets of {1, ..., 2q}; two subsets are adjacent
    iff their intersection has exactly s elements.
    """

    q: int
    s: int

    def __post_init__(self):
        if not (self.q > self.s > 0):
            raise InputError(f"need q > s > 0, got q={self.q}, s={self.s}")

    @property
    def n(self) -> int:
        import math

        return math.comb(2 * self.q, self.q)


def intersection_family(spec: SubsetFamily) -> Graph:
    """Graph of the q-subsets of {1..2q}, adjacent iff |S ∩ T| = s.

    Vertex i is the i-th q-subset in lexicographic order of sorted element
    lists; the ordering is part of the contract so that representations and
    reports are reproducible.
    """
    q, s = spec.q, spec.s
    subsets = list(itertools.combinations(range(1, 2 * q + 1), q))
    masks = [sum(1 << (e - 1) for e in ss) for ss in subsets]
    n = len(masks)
    rows = [0] * n
    for i in range(n):
        mi = masks[i]
        for j in range(i + 1, n):
            if (mi & masks[j]).bit_count() == s:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
    return _graph_from_rows(n, rows)


def subset_labels(spec: SubsetFamily) -> list[tuple[int, ...]]:
    """The q-subsets in the vertex order used by intersection_family."""
    return list(itertools.combinations(range(1, 2 * spec.q + 1), spec.q))


def alon_r2() -> Graph:
    """The 64-vertex member (r=2) of Alon's small-independence Cayley family.

    Built as the complement of 16 vertex-disjoint squares: group g occupies
    vertices 4g..4g+3 with square (4g, 4g+1, 4g+2, 4g+3).  All choices of
    disjoint squares are isomorphic; this labeling is the canonical one here.
    """
    squares = []
    for g in range(16):
        a = 4 * g
        squares += [(a, a + 1), (a + 1, a + 2), (a + 2, a + 3), (a + 3, a)]
    return complement(new_graph(64, squares))


def random_graph(n: int, p: float, seed: int) -> Graph:
    """Erdős–Rényi G(n, p) from the package's portable seeded generator.

    Pair k in the lexicographic pair order (0,1), (0,2), ..., (n-2,n-1) is
    an edge iff output k of the splitmix64 counter stream is < p.  Identical
    (n, p, seed) give identical graphs on every platform.
    """
    if n < 1:
        raise InputError(f"vertex count must be positive, got {n}")
    if not (0.0 <= p <= 1.0):
        raise InputError(f"edge probability must be in [0, 1], got {p}")
    npairs = n * (n - 1) // 2
    rows = [0] * n
    if npairs:
        u = uniform_block(seed, 0, npairs)
        k = 0
        for i in range(n):
            for j in range(i + 1, n):
                if u[k] < p:
                    rows[i] |= 1 << j
                    rows[j] |= 1 << i
                k += 1
    return _graph_from_rows(n, rows)


# ---------------------------------------------------------------------------
# File formats


def write_dimacs(g: Graph, path) -> None:
    """DIMACS ascii: one `p edge n m` line, then `e u v` lines, 1-based, u<v."""
    lines = [f"p edge {g.n} {g.m}"]
    lines += [f"e {u + 1} {v + 1}" for u, v in g.edges()]
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")


def _open_text(path):
    try:
        return open(path)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}") from e


def read_dimacs(path) -> Graph:
    """Read a DIMACS graph; duplicate and reversed edge lines are tolerated."""
    n = None
    edges = []
    with _open_text(path) as f:
        for lineno, line in enumerate(f, 1):
            tok = line.split()
            if not tok or tok[0] == "c":
                continue
            if tok[0] == "p":
                if len(tok) < 4:
                    raise InputError(f"{path}:{lineno}: malformed problem line")
                n = int(tok[2])
            elif tok[0] == "e":
                if n is None:
                    raise InputError(f"{path}:{lineno}: edge before problem line")
                if len(tok) < 3:
                    raise InputError(f"{path}:{lineno}: malformed edge line")
                u, v = int(tok[1]) - 1, int(tok[2]) - 1
                if not (0 <= u < n and 0 <= v < n):
                    raise InputError(f"{path}:{lineno}: endpoint out of range")
                if u == v:
                    raise InputError(f"{path}:{lineno}: self-loop")
                a, b = min(u, v), max(u, v)
                edges.append((a, b))
            else:
                raise InputError(f"{path}:{lineno}: unknown line type {tok[0]!r}")
    if n is None:
        raise InputError(f"{path}: no problem line")
    return new_graph(n, sorted(set(edges)))


def write_graph_json(g: Graph, path) -> None:
    """Structured-text format: {"n": int, "edges": [[u, v], ...]}, 0-based."""
    import json

    with open(path, "w") as f:
        json.dump({"n": g.n, "edges": [[u, v] for u, v in g.edges()]}, f)
        f.write("\n")


def read_graph_json(path) -> Graph:
    import json

    with _open_text(path) as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise InputError(f"{path}: not valid JSON: {e}") from e
    if not isinstance(data, dict) or "n" not in data or "edges" not in data:
        raise InputError(f"{path}: expected an object with 'n' and 'edges'")
    return new_graph(int(data["n"]), [tuple(e) for e in data["edges"]])


def read_graph(path) -> Graph:
    """Read a graph file, sniffing DIMACS vs JSON from the first character."""
    with _open_text(path) as f:
        head = f.read(1)
    if head == "{":
        return read_graph_json(path)
    return read_dimacs(path)


def write_graph(g: Graph, path, fmt: str = "dimacs") -> None:
    if fmt == "dimacs":
        write_dimacs(g, path)
    elif fmt == "json":
        write_graph_json(g, path)
    else:
        raise InputError(f"unknown graph format {fmt!r}")
