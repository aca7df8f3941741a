import math

import numpy as np
import pytest

from exwitness.errors import InputError
from exwitness.graphs import (
    SubsetFamily,
    complement,
    complete,
    cycle,
    intersection_family,
    new_graph,
    random_graph,
)
from exwitness.independence import brute_force_alpha
from exwitness.theta import (
    ThetaConfig,
    certify_lower,
    certify_upper,
    jacobi_eig,
    solve_theta,
    solve_theta_many,
    symmetric_eig,
)

TIGHT = ThetaConfig(tolerance=1e-7)


def test_config_validation():
    with pytest.raises(InputError):
        ThetaConfig(tolerance=0.0)
    with pytest.raises(InputError):
        ThetaConfig(max_iterations=-1)


# -- eigendecomposition ------------------------------------------------------


def test_symmetric_eig_trivial():
    w, v = symmetric_eig(np.eye(3))
    assert np.allclose(w, [1, 1, 1])
    w, _ = symmetric_eig(np.diag([3.0, 1.0, 2.0]))
    assert np.allclose(w, [3, 2, 1])
    w, _ = symmetric_eig(np.ones((4, 4)))
    assert np.allclose(w, [4, 0, 0, 0], atol=1e-12)


def test_symmetric_eig_contract():
    rng = np.random.default_rng(5)
    for n in (2, 5, 17, 40):
        m = rng.standard_normal((n, n))
        m = (m + m.T) / 2
        w, v = symmetric_eig(m)
        assert np.all(np.diff(w) <= 1e-12)  # descending
        assert np.linalg.norm(m - (v * w) @ v.T) <= 1e-10 * np.linalg.norm(m)
        assert np.max(np.abs(v.T @ v - np.eye(n))) <= 1e-10


def test_symmetric_eig_rejects_asymmetry():
    m = np.array([[1.0, 2.0], [2.1, 1.0]])
    with pytest.raises(InputError):
        symmetric_eig(m)


def test_jacobi_oracle_agrees():
    # independent correctness oracle for the eigensolver on small matrices
    rng = np.random.default_rng(11)
    for n in (2, 4, 7, 10):
        m = rng.standard_normal((n, n))
        m = (m + m.T) / 2
        w_fast, _ = symmetric_eig(m)
        w_jac, v_jac = jacobi_eig(m)
        assert np.allclose(w_fast, w_jac, atol=1e-10)
        assert np.linalg.norm(m - (v_jac * w_jac) @ v_jac.T) <= 1e-9


# -- certificates ------------------------------------------------------------


def test_certify_lower_identity_point():
    for g in (cycle(5), complete(4), random_graph(8, 0.4, 3)):
        assert certify_lower(g, np.eye(g.n) / g.n) == pytest.approx(1.0, abs=1e-12)


def test_certify_lower_edgeless_ones():
    g = new_graph(4, [])
    assert certify_lower(g, np.ones((4, 4)) / 4) == pytest.approx(4.0, abs=1e-12)


def test_certify_lower_validation():
    g = cycle(5)
    with pytest.raises(InputError):
        certify_lower(g, np.arange(25.0).reshape(5, 5))
    with pytest.raises(InputError):
        certify_lower(g, np.eye(4))


def test_certify_upper_trivial():
    g = complete(5)
    assert certify_upper(g, {e: 0.0 for e in g.edges()}) == pytest.approx(1.0, abs=1e-9)
    g = new_graph(6, [])
    assert certify_upper(g, {}) == pytest.approx(6.0, abs=1e-9)


def test_certify_upper_always_valid():
    # any edge assignment upper-bounds the optimum: try junk values
    g = cycle(5)
    junk = {e: 7.7 * i - 3 for i, e in enumerate(g.edges())}
    assert certify_upper(g, junk) >= math.sqrt(5) - 1e-9


def test_certify_upper_rejects_non_edge():
    g = cycle(5)
    with pytest.raises(InputError):
        certify_upper(g, {(0, 2): 1.0})


# -- solver ------------------------------------------------------------------


def test_complete_graphs():
    for k in (1, 2, 3, 6):
        res = solve_theta(complete(k)) if k > 1 else solve_theta(new_graph(1, []))
        assert res.converged
        assert res.lower_bound == pytest.approx(1.0, abs=1e-9)
        assert res.upper_bound == pytest.approx(1.0, abs=1e-9)


def test_edgeless():
    res = solve_theta(new_graph(4, []))
    assert res.lower_bound == pytest.approx(4.0, abs=1e-9)
    assert res.upper_bound == pytest.approx(4.0, abs=1e-9)


def test_pentagon_sqrt5():
    res = solve_theta(cycle(5), TIGHT)
    assert res.converged
    assert res.lower_bound == pytest.approx(math.sqrt(5), abs=1e-6)
    assert res.upper_bound == pytest.approx(math.sqrt(5), abs=1e-6)
    # the certificates round-trip from the stored matrices
    g = cycle(5)
    assert certify_lower(g, res.primal_matrix) == res.lower_bound
    edge_vals = {(u, v): res.dual_certificate[u, v] for u, v in g.edges()}
    assert certify_upper(g, edge_vals) == res.upper_bound


def test_result_invariants_pentagon():
    g = cycle(5)
    res = solve_theta(g, TIGHT)
    X = res.primal_matrix
    assert abs(np.trace(X) - 1.0) <= 1e-12
    for u, v in g.edges():
        assert X[u, v] == 0.0
    assert np.linalg.eigvalsh(X)[0] >= -1e-12
    B = res.dual_certificate
    for u in range(5):
        assert B[u, u] == 1.0
        for v in range(5):
            if u != v and not g.has_edge(u, v):
                assert B[u, v] == 1.0


def test_subset_family_20():
    g = intersection_family(SubsetFamily(3, 1))
    res = solve_theta(g, ThetaConfig(tolerance=1e-5))
    assert res.converged
    assert res.lower_bound == pytest.approx(5.0, abs=2e-5)
    assert res.upper_bound == pytest.approx(5.0, abs=2e-5)


def test_unconverged_is_flagged_not_raised():
    res = solve_theta(cycle(7), ThetaConfig(tolerance=1e-9, max_iterations=10))
    assert not res.converged
    assert res.lower_bound <= res.upper_bound + 1e-12
    assert res.upper_bound - res.lower_bound > 1e-9


def test_sandwich_against_exact_alpha():
    # alpha <= certified lower bound + 1e-6 on graphs solved tightly
    for g in (cycle(5), cycle(6), cycle(7), complete(4),
              intersection_family(SubsetFamily(2, 1)),
              random_graph(8, 0.5, 1), random_graph(9, 0.3, 2)):
        res = solve_theta(g, TIGHT)
        a = brute_force_alpha(g)
        assert a <= res.lower_bound + 1e-6
        assert res.lower_bound <= res.upper_bound + 1e-12


def test_edge_monotonicity_of_upper_bound():
    for seed in range(8):
        g = random_graph(7, 0.35, 300 + seed)
        non_edges = [
            (u, v)
            for u in range(7)
            for v in range(u + 1, 7)
            if not g.has_edge(u, v)
        ]
        if not non_edges:
            continue
        res = solve_theta(g, ThetaConfig(tolerance=1e-6))
        g2 = new_graph(7, g.edges() + [non_edges[0]])
        res2 = solve_theta(g2, ThetaConfig(tolerance=1e-6))
        assert res2.upper_bound <= res.upper_bound + 1e-6


def test_product_lower_bound():
    # theta(G) * theta(complement G) >= n
    for seed in range(6):
        g = random_graph(9, 0.4, 400 + seed)
        if g.is_edgeless() or g.is_complete():
            continue
        a = solve_theta(g, ThetaConfig(tolerance=1e-6))
        b = solve_theta(complement(g), ThetaConfig(tolerance=1e-6))
        assert a.lower_bound * b.lower_bound >= 9 - 1e-3


def test_product_near_equality_vertex_transitive():
    for g, n in ((cycle(5), 5), (cycle(7), 7),
                 (intersection_family(SubsetFamily(2, 1)), 6)):
        a = solve_theta(g, ThetaConfig(tolerance=1e-6))
        b = solve_theta(complement(g), ThetaConfig(tolerance=1e-6))
        assert a.lower_bound * b.lower_bound >= n - 1e-3
        assert a.upper_bound * b.upper_bound <= n + 0.05


def test_stack_solver_matches_single():
    gs = [random_graph(6, 0.2 + 0.1 * k, 500 + k) for k in range(6)]
    gs += [new_graph(6, []), complete(6)]
    triples = solve_theta_many(gs, ThetaConfig(tolerance=1e-6))
    for g, (lb, ub, conv) in zip(gs, triples):
        single = solve_theta(g, ThetaConfig(tolerance=1e-6))
        assert conv and single.converged
        assert lb == pytest.approx(single.lower_bound, abs=5e-6)
        assert ub == pytest.approx(single.upper_bound, abs=5e-6)


def test_solver_determinism():
    g = random_graph(10, 0.4, 777)
    r1 = solve_theta(g)
    r2 = solve_theta(g)
    assert r1.lower_bound == r2.lower_bound
    assert r1.upper_bound == r2.upper_bound
    assert r1.iterations == r2.iterations
