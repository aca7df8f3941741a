"""Quantum realizations of witnesses: unit vectors orthogonal across edges,
plus a handle state whose squared overlaps give the event probabilities.

Two sources: factorizing a solved primal matrix (works for any graph), and a
closed-form two-value construction for the subset-intersection family that
meets the quantum bound in dimension 2q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError, UnsupportedConstructionError
from .graphs import Graph, SubsetFamily
from .theta import ThetaResult, symmetric_eig

RANK_CUTOFF = 1e-9


@dataclass
class OrthonormalRepresentation:
    """Unit vectors (one per vertex), handle state, and event probabilities.

    probabilities[i] is the squared overlap of vector i with the handle;
    value is their sum, the quantum value of the witness realized by
    measuring the rank-one projectors onto the vectors on the handle state.
    """

    dimension: int
    vectors: np.ndarray  # (n, dimension), rows are unit vectors
    handle: np.ndarray  # (dimension,)
    probabilities: np.ndarray  # (n,)
    value: float

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "handle": self.handle.tolist(),
            "vectors": self.vectors.tolist(),
            "probabilities": self.probabilities.tolist(),
            "value": self.value,
        }


@dataclass
class ValidationReport:
    """Worst violation per category; passes iff all are within tolerance."""

    passed: bool
    norm_violation: float
    orthogonality_violation: float
    probability_violation: float
    value_violation: float


def _finish(vectors: np.ndarray, handle: np.ndarray) -> OrthonormalRepresentation:
    probs = (vectors @ handle) ** 2
    return OrthonormalRepresentation(
        dimension=vectors.shape[1],
        vectors=vectors,
        handle=handle,
        probabilities=probs,
        value=float(probs.sum()),
    )


def extract_representation(g: Graph, primal: ThetaResult) -> OrthonormalRepresentation:
    """Representation from the factorization of a solved primal matrix.

    Eigendecomposes X, keeps eigenvalues above the rank cutoff, and uses the
    columns of sqrt(L) V^T as raw vectors: their pairwise inner products are
    the entries of X, so edge pairs come out orthogonal.  The handle is the
    normalized vector sum; at the optimum the value matches the certified
    bracket.  Vertices whose raw vector vanishes get a fresh axis each (their
    probability is 0) so every vertex still carries a projector.
    """
    X = primal.primal_matrix
    if X.shape[0] != g.n:
        raise InputError("primal matrix size does not match graph")
    edges = g.adjacency_matrix()
    edge_max = float(np.max(np.abs(X[edges]))) if edges.any() else 0.0
    if edge_max > 1e-12:
        raise InputError("primal matrix is nonzero on an edge")
    if abs(np.trace(X) - 1.0) > 1e-9:
        raise InputError("primal matrix does not have unit trace")
    w, v = symmetric_eig(X)
    if w[-1] < -1e-9:
        raise InputError("primal matrix is not positive semidefinite")

    keep = w > RANK_CUTOFF
    d = int(keep.sum())
    if d == 0:
        raise InputError("primal matrix has no significant spectrum")
    raw = (v[:, keep] * np.sqrt(w[keep])).T  # (d, n); column i is vertex i
    norms = np.linalg.norm(raw, axis=0)
    zero = norms < RANK_CUTOFF

    total = raw.sum(axis=1)
    tnorm = np.linalg.norm(total)
    if tnorm < 1e-12 * g.n:
        raise InputError("degenerate handle: vector sum vanishes")

    dim = d + int(zero.sum())
    vectors = np.zeros((g.n, dim))
    nonzero = ~zero
    vectors[nonzero, :d] = (raw[:, nonzero] / norms[nonzero]).T
    for axis, i in enumerate(np.nonzero(zero)[0]):
        vectors[i, d + axis] = 1.0
    handle = np.zeros(dim)
    handle[:d] = total / tnorm
    return _finish(vectors, handle)


def two_value_root(spec: SubsetFamily) -> float:
    """Larger root a of s a^2 + 2(q-s) a + s = 0; real only for q >= 2s."""
    q, s = spec.q, spec.s
    if q < 2 * s:
        raise UnsupportedConstructionError(
            f"two-value construction needs q >= 2s, got q={q}, s={s}"
        )
    return (-(q - s) + math.sqrt(q * (q - 2 * s))) / s


def two_value_representation(spec: SubsetFamily) -> OrthonormalRepresentation:
    """Closed-form representation for the subset-intersection family.

    Vertex S gets the unit vector with entry a on the coordinates in S and 1
    elsewhere, where a is the larger root of s a^2 + 2(q-s) a + s = 0, so
    adjacent pairs (intersection exactly s) are orthogonal by construction.
    The handle is the uniform vector; dimension is 2q and the value is
    n (a+1)^2 / (2 (a^2+1)), which meets the quantum bound for these graphs.
    """
    import itertools

    q = spec.q
    a = two_value_root(spec)
    scale = 1.0 / math.sqrt(q * (a * a + 1.0))
    subsets = list(itertools.combinations(range(2 * q), q))
    vectors = np.ones((len(subsets), 2 * q))
    for i, ss in enumerate(subsets):
        vectors[i, list(ss)] = a
    vectors *= scale
    handle = np.full(2 * q, 1.0 / math.sqrt(2 * q))
    return _finish(vectors, handle)


def validate_representation(
    g: Graph, rep: OrthonormalRepresentation, tol: float
) -> ValidationReport:
    """Check unit norms, edge orthogonality, probabilities, and the value."""
    vectors = np.asarray(rep.vectors, dtype=float)
    handle = np.asarray(rep.handle, dtype=float)
    probs = np.asarray(rep.probabilities, dtype=float)
    if vectors.shape[0] != g.n:
        raise InputError("one vector per vertex required")
    if vectors.shape[1] != rep.dimension or handle.shape != (rep.dimension,):
        raise InputError("vector/handle dimensions do not match")
    if probs.shape != (g.n,):
        raise InputError("one probability per vertex required")

    norms = np.linalg.norm(vectors, axis=1)
    norm_v = float(np.max(np.abs(norms - 1.0)))
    norm_v = max(norm_v, abs(float(np.linalg.norm(handle)) - 1.0))

    gram = vectors @ vectors.T
    edges = g.adjacency_matrix()
    orth_v = float(np.max(np.abs(gram[edges]))) if edges.any() else 0.0

    overlaps = (vectors @ handle) ** 2
    prob_v = float(np.max(np.abs(probs - overlaps)))
    prob_v = max(prob_v, float(np.max(np.maximum(probs - 1.0, -probs), initial=0.0)))

    value_v = abs(rep.value - float(probs.sum()))

    passed = max(norm_v, orth_v, prob_v, value_v) <= tol
    return ValidationReport(passed, norm_v, orth_v, prob_v, value_v)
