import json
import math

import pytest

from exwitness.cli import run
from exwitness.graphs import cycle, read_graph, write_dimacs


@pytest.fixture
def c5_file(tmp_path):
    path = tmp_path / "c5.dimacs"
    write_dimacs(cycle(5), path)
    return str(path)


def test_gen_gqs(tmp_path, capsys):
    out = tmp_path / "g.dimacs"
    assert run(["gen", "--family", "gqs", "--q", "3", "--s", "1",
                "--out", str(out)]) == 0
    g = read_graph(out)
    assert (g.n, g.m) == (20, 90)
    assert "n=20" in capsys.readouterr().out


def test_gen_families(tmp_path):
    for argv, n in (
        (["gen", "--family", "cycle", "--n", "5"], 5),
        (["gen", "--family", "complete", "--n", "4"], 4),
        (["gen", "--family", "alon-r2"], 64),
        (["gen", "--family", "random", "--n", "10", "--p", "0.5",
          "--seed", "42"], 10),
    ):
        out = tmp_path / "g.json"
        assert run(argv + ["--out", str(out), "--format", "json"]) == 0
        assert read_graph(out).n == n


def test_gen_missing_flags(tmp_path):
    assert run(["gen", "--family", "cycle", "--out", str(tmp_path / "x")]) == 1


def test_unknown_flag_exits_1(capsys):
    assert run(["gen", "--familly", "cycle"]) == 1
    assert run(["no-such-command"]) == 1


def test_alpha_command(c5_file, tmp_path, capsys):
    out = tmp_path / "alpha.json"
    assert run(["alpha", "--in", c5_file, "--json", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["lb"] == 2 and data["ub"] == 2 and data["exact"] is True
    assert "alpha in [2, 2]" in capsys.readouterr().out


def test_theta_command(c5_file, tmp_path):
    out = tmp_path / "theta.json"
    assert run(["theta", "--in", c5_file, "--tolerance", "1e-6",
                "--json", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["lb"] == pytest.approx(math.sqrt(5), abs=1e-5)
    assert data["converged"] is True


def test_witness_command(c5_file, tmp_path):
    out = tmp_path / "report.json"
    assert run(["witness", "--in", c5_file, "--json", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["ratio"]["ub"] == pytest.approx(1.1180, abs=1e-4)
    assert data["is_witness"] is True


def test_repr_extract_and_validate(c5_file, tmp_path):
    rep = tmp_path / "rep.json"
    assert run(["repr", "--in", c5_file, "--tolerance", "1e-6",
                "--json", str(rep)]) == 0
    data = json.loads(rep.read_text())
    assert data["value"] == pytest.approx(math.sqrt(5), abs=1e-4)
    assert run(["validate-repr", "--in", c5_file, "--repr", str(rep),
                "--tol", "1e-6"]) == 0


def test_repr_two_value(tmp_path):
    rep = tmp_path / "rep31.json"
    assert run(["repr", "--mode", "two-value", "--q", "3", "--s", "1",
                "--json", str(rep)]) == 0
    data = json.loads(rep.read_text())
    assert data["dimension"] == 6
    assert data["value"] == pytest.approx(5.0, abs=1e-9)


def test_scan_command(tmp_path, capsys):
    csv = tmp_path / "scan.csv"
    js = tmp_path / "scan.json"
    assert run(["scan", "--n", "4", "--csv", str(csv), "--json", str(js)]) == 0
    lines = csv.read_text().splitlines()
    assert lines[0] == "edge_bitmask,alpha,theta_lb,theta_ub,ratio_lb"
    assert len(lines) == 1 + 64
    data = json.loads(js.read_text())
    assert data["max_ratio"] == pytest.approx(1.0, abs=1e-6)


def test_scan_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(["scan", "--n", "3", "--csv", str(a)]) == 0
    assert run(["scan", "--n", "3", "--csv", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_game_command(tmp_path):
    rep = tmp_path / "rep.json"
    assert run(["repr", "--mode", "two-value", "--q", "3", "--s", "1",
                "--json", str(rep)]) == 0
    out = tmp_path / "game.json"
    assert run(["game", "--repr", str(rep), "--alpha", "4",
                "--rounds", "20000", "--seed", "1", "--json", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["rounds"] == 20000
    # value 5 against alpha 4: expected profit 5/4 - 1 = 0.25
    assert data["analytic"] == pytest.approx(0.25, abs=1e-9)
    assert abs(data["empirical"] - 0.25) <= 4 * data["stderr"]


def test_config_file_precedence(c5_file, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"tolerance": 1e-6, "rounds": 5}')
    out = tmp_path / "theta.json"
    assert run(["theta", "--in", c5_file, "--config", str(cfg),
                "--json", str(out)]) == 0
    data = json.loads(out.read_text())
    gap = data["ub"] - data["lb"]
    assert gap <= 1e-6  # config tightened the default tolerance


def test_missing_file_is_input_error():
    assert run(["alpha", "--in", "/nonexistent/graph.dimacs"]) == 1
