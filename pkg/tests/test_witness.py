import math

import pytest

from exwitness.errors import InputError, UnsupportedConstructionError
from exwitness.graphs import (
    SubsetFamily,
    alon_r2,
    complement,
    complete,
    cycle,
    intersection_family,
    random_graph,
)
from exwitness.theta import ThetaConfig
from exwitness.witness import (
    check_small_alpha_bound,
    exhaustive_ratio_scan,
    witness_report,
)

TIGHT = ThetaConfig(tolerance=1e-6)


def test_report_pentagon():
    rep = witness_report(cycle(5), TIGHT)
    assert (rep.alpha_lb, rep.alpha_ub, rep.alpha_exact) == (2, 2, True)
    assert rep.theta_lb == pytest.approx(math.sqrt(5), abs=1e-5)
    assert rep.ratio_ub == pytest.approx(math.sqrt(5) / 2, abs=1e-4)
    assert rep.is_witness
    assert rep.amc_fraction == pytest.approx(math.sqrt(5) / 10, abs=1e-4)
    assert rep.predicted_profit == pytest.approx(math.sqrt(5) / 2 - 1, abs=1e-4)


def test_report_non_witness():
    rep = witness_report(intersection_family(SubsetFamily(2, 1)), TIGHT)
    assert (rep.alpha_lb, rep.alpha_ub) == (2, 2)
    assert rep.theta_lb == pytest.approx(2.0, abs=1e-5)
    assert not rep.is_witness


def test_report_complete():
    rep = witness_report(complete(6), TIGHT)
    assert (rep.alpha_lb, rep.is_witness) == (1, False)
    assert rep.theta_lb == pytest.approx(1.0, abs=1e-9)
    assert rep.ratio_lb == pytest.approx(1.0, abs=1e-9)


def test_report_invariants_random():
    for seed in range(8):
        g = random_graph(8, 0.35, 900 + seed)
        rep = witness_report(g, TIGHT)
        assert rep.ratio_lb <= rep.ratio_ub + 1e-12
        assert 0 < rep.amc_fraction <= 1 + 1e-9
        assert rep.alpha_lb <= rep.theta_ub + 1e-6
        if rep.is_witness:
            assert rep.theta_lb > rep.alpha_ub


def test_report_json_schema():
    d = witness_report(cycle(5), TIGHT).to_dict()
    assert set(d) == {
        "n", "alpha", "theta", "ratio", "is_witness", "amc_fraction",
        "predicted_profit",
    }
    assert set(d["alpha"]) == {"lb", "ub", "exact"}
    assert set(d["theta"]) == {"lb", "ub", "iterations", "converged"}
    assert set(d["ratio"]) == {"lb", "ub"}


def test_bound_check_pentagon():
    chk = check_small_alpha_bound(cycle(5), 3)
    assert chk.m_k == pytest.approx(2 ** (2 / 3))
    assert chk.bound == pytest.approx(2 ** (2 / 3) * 5 ** (1 / 3))
    assert chk.satisfied
    assert chk.slack == pytest.approx(chk.bound - math.sqrt(5), abs=1e-3)


def test_bound_check_alon():
    chk = check_small_alpha_bound(alon_r2(), 3)
    assert chk.bound == pytest.approx(2 ** (2 / 3) * 64 ** (1 / 3), abs=1e-9)
    assert chk.bound == pytest.approx(6.3496, abs=1e-4)
    assert chk.satisfied
    assert chk.theta_ub == pytest.approx(2.0, abs=1e-3)


def test_bound_check_triangle_free_complements():
    # complements of triangle-free graphs have independence number < 3
    hits = 0
    for seed in range(12):
        g = random_graph(9, 0.25, 950 + seed)
        has_triangle = any(
            g.has_edge(a, b) and g.has_edge(b, c) and g.has_edge(a, c)
            for a in range(9) for b in range(a + 1, 9) for c in range(b + 1, 9)
        )
        if has_triangle:
            continue
        hits += 1
        assert check_small_alpha_bound(complement(g), 3).satisfied
    assert hits > 0


def test_bound_check_preconditions():
    with pytest.raises(UnsupportedConstructionError):
        check_small_alpha_bound(cycle(5), 4)
    with pytest.raises(InputError):
        check_small_alpha_bound(cycle(7), 3)  # alpha = 3


def test_scan_small():
    res = exhaustive_ratio_scan(3)
    assert res.max_ratio == pytest.approx(1.0, abs=1e-6)
    assert res.graphs_total == 8
    assert len(res.rows) == 8
    solved_rows = [r for r in res.rows if r.theta_lb is not None]
    assert len(solved_rows) == res.graphs_solved
    for row in solved_rows:
        assert row.ratio_lb == pytest.approx(row.theta_lb / row.alpha, abs=1e-15)


def test_scan_rejects_big_n():
    with pytest.raises(InputError):
        exhaustive_ratio_scan(8)
    with pytest.raises(InputError):
        exhaustive_ratio_scan(7)  # gated behind allow_large


def test_scan_determinism_and_workers():
    a = exhaustive_ratio_scan(4)
    b = exhaustive_ratio_scan(4)
    assert a.max_ratio == b.max_ratio
    assert a.argmax_edges == b.argmax_edges
    c = exhaustive_ratio_scan(4, workers=2)
    assert c.max_ratio == a.max_ratio
    assert c.argmax_edges == a.argmax_edges
