"""Certified computation of the independence number (the noncontextual bound).

Exact values come from a branch-and-bound maximum-clique search on the
complement graph with a greedy-coloring upper bound; small instances have an
independent brute-force oracle.  Budget exhaustion is not an error: the
search then returns a certified bracket [best incumbent, best global bound].
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass, field

from .errors import InputError, InvariantError
from .graphs import Graph, _bits, complement

BRUTE_FORCE_LIMIT = 25
DEFAULT_BUDGET = 600.0
_TIME_CHECK_MASK = 0x3FF  # check the clock every 1024 nodes


@dataclass
class IndependenceResult:
    """Certified bracket on the independence number with a witness set."""

    lower_bound: int
    upper_bound: int
    witness_set: list[int]
    exact: bool
    nodes_explored: int = 0
    elapsed: float = 0.0

    def to_dict(self) -> dict:
        return {
            "lb": self.lower_bound,
            "ub": self.upper_bound,
            "exact": self.exact,
            "witness": list(self.witness_set),
            "nodes": self.nodes_explored,
            "elapsed": self.elapsed,
        }


def _check_witness(g: Graph, result: IndependenceResult) -> IndependenceResult:
    w = result.witness_set
    if len(w) != result.lower_bound:
        raise InvariantError("witness size does not match lower bound")
    for i, u in enumerate(w):
        for v in w[i + 1 :]:
            if g.has_edge(u, v):
                raise InvariantError(f"witness vertices {u}, {v} are adjacent")
    if result.lower_bound > result.upper_bound:
        raise InvariantError("lower bound exceeds upper bound")
    return result


def brute_force_alpha(g: Graph) -> int:
    """Exact independence number by exhaustive recursion; oracle for tests.

    Refuses graphs with more than 25 vertices.  Independent of the
    branch-and-bound path: recurses directly on independent sets of g.
    """
    if g.n > BRUTE_FORCE_LIMIT:
        raise InputError(
            f"brute force limited to {BRUTE_FORCE_LIMIT} vertices, got {g.n}"
        )
    closed = [g.rows[v] | (1 << v) for v in range(g.n)]
    best = 0

    def rec(cand: int, size: int) -> None:
        nonlocal best
        if size > best:
            best = size
        while cand:
            if size + cand.bit_count() <= best:
                return
            v = (cand & -cand).bit_length() - 1
            rec(cand & ~closed[v], size + 1)
            cand &= cand - 1  # drop v, continue without it
        return

    rec((1 << g.n) - 1, 0)
    return best


def greedy_lower_bound(g: Graph) -> IndependenceResult:
    """Greedy independent set, minimum residual degree first, lowest index ties."""
    remaining = (1 << g.n) - 1
    chosen: list[int] = []
    while remaining:
        best_v, best_d = -1, g.n + 1
        r = remaining
        while r:
            v = (r & -r).bit_length() - 1
            d = (g.rows[v] & remaining).bit_count()
            if d < best_d:
                best_v, best_d = v, d
            r &= r - 1
        chosen.append(best_v)
        remaining &= ~(g.rows[best_v] | (1 << best_v))
    lb = len(chosen)
    return _check_witness(
        g, IndependenceResult(lb, g.n, sorted(chosen), exact=lb == g.n)
    )


def _greedy_color_bound(adj: list[int], cand: int) -> int:
    """Number of colors a greedy sequential coloring uses on the induced set."""
    colors = 0
    uncolored = cand
    while uncolored:
        colors += 1
        q = uncolored
        while q:
            v = (q & -q).bit_length() - 1
            uncolored &= ~(1 << v)
            q &= ~adj[v]
            q &= uncolored
    return colors


def max_independent_set(g: Graph, budget: float | None = DEFAULT_BUDGET) -> IndependenceResult:
    """Branch-and-bound for the maximum independent set, clique formulation.

    Searches for a maximum clique in the complement graph, pruning with a
    greedy sequential coloring of the candidate set.  Root vertex order is
    descending complement degree with ascending-index ties, and every
    tie-break below is by ascending vertex index, so a completed search is
    bit-for-bit reproducible.  On budget exhaustion the best incumbent and
    the root coloring bound are returned with exact=False.
    """
    start = time.monotonic()
    n = g.n
    if g.is_edgeless():
        return _check_witness(
            g, IndependenceResult(n, n, list(range(n)), True, 0, time.monotonic() - start)
        )
    if g.is_complete():
        return _check_witness(
            g, IndependenceResult(1, 1, [0], True, 0, time.monotonic() - start)
        )

    h = complement(g)
    order = sorted(range(n), key=lambda v: (-h.degree(v), v))
    pos = [0] * n
    for i, v in enumerate(order):
        pos[v] = i
    # relabeled complement adjacency: clique search runs in this space
    adj = [0] * n
    for u in range(n):
        row = 0
        for v in _bits(h.rows[u]):
            row |= 1 << pos[v]
        adj[pos[u]] = row

    seed = greedy_lower_bound(g)
    best = seed.lower_bound
    best_clique: list[int] = [pos[v] for v in seed.witness_set]

    root_cand = (1 << n) - 1
    root_bound = _greedy_color_bound(adj, root_cand)

    nodes = 0
    timed_out = False
    deadline = None if budget is None else start + budget
    stack: list[int] = []  # current clique, relabeled

    sys.setrecursionlimit(max(4000, 2 * n + 100))

    def expand(cand: int) -> None:
        nonlocal best, best_clique, nodes, timed_out
        if timed_out:
            return
        nodes += 1
        if deadline is not None and (nodes & _TIME_CHECK_MASK) == 0:
            if time.monotonic() > deadline:
                timed_out = True
                return
        # greedy coloring of cand: vertices in assignment order + their colors
        verts: list[int] = []
        cols: list[int] = []
        color = 0
        uncolored = cand
        while uncolored:
            color += 1
            q = uncolored
            while q:
                v = (q & -q).bit_length() - 1
                uncolored &= ~(1 << v)
                q &= ~adj[v]
                q &= uncolored
                verts.append(v)
                cols.append(color)
        for i in range(len(verts) - 1, -1, -1):
            if len(stack) + cols[i] <= best:
                return
            v = verts[i]
            new_cand = cand & adj[v]
            stack.append(v)
            if new_cand:
                expand(new_cand)
                if timed_out:
                    stack.pop()
                    return
            elif len(stack) > best:
                best = len(stack)
                best_clique = stack.copy()
            stack.pop()
            cand &= ~(1 << v)

    expand(root_cand)
    elapsed = time.monotonic() - start

    witness = sorted(order[i] for i in best_clique)
    if timed_out:
        ub = max(best, root_bound)
        return _check_witness(
            g, IndependenceResult(best, ub, witness, False, nodes, elapsed)
        )
    return _check_witness(
        g, IndependenceResult(best, best, witness, True, nodes, elapsed)
    )
