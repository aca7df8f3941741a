"""Command-line entry point.

Exit codes: 0 success, 1 input error, 2 budget exhausted without
convergence, 3 internal invariant failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import game as game_mod
from . import graphs, independence, representation, serialize, theta, witness
from .errors import InputError, InvariantError

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_UNCONVERGED = 2
EXIT_INTERNAL = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        raise InputError(message)


def _load_config(path) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise InputError(f"cannot read config {path}: {e}") from e
    if not isinstance(data, dict):
        raise InputError(f"config {path} must be a JSON object")
    return data


def _setting(args, config: dict, name: str, default):
    """Precedence: command-line flag > config file > default."""
    val = getattr(args, name.replace("-", "_"), None)
    if val is not None:
        return val
    if name in config:
        return config[name]
    return default


def _theta_cfg(args, config) -> theta.ThetaConfig:
    return theta.ThetaConfig(
        tolerance=float(_setting(args, config, "tolerance", 1e-4)),
        max_iterations=int(_setting(args, config, "max-iterations", 50000)),
        step_parameter=float(_setting(args, config, "step-parameter", 1.0)),
        residual_balance_factor=float(
            _setting(args, config, "residual-balance-factor", 10.0)
        ),
        eig_tolerance=float(_setting(args, config, "eig-tolerance", 1e-10)),
    )


def _write_text(path, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(path, "w") as f:
            f.write(text)
            if not text.endswith("\n"):
                f.write("\n")


def _build_parser() -> _Parser:
    p = _Parser(prog="exwitness", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a graph file")
    gen.add_argument("--family", required=True,
                     choices=["cycle", "complete", "gqs", "alon-r2", "random"])
    gen.add_argument("--n", type=int)
    gen.add_argument("--q", type=int)
    gen.add_argument("--s", type=int)
    gen.add_argument("--p", type=float)
    gen.add_argument("--seed", type=int)
    gen.add_argument("--out", required=True)
    gen.add_argument("--format", choices=["dimacs", "json"], default="dimacs")

    alpha = sub.add_parser("alpha", help="certified independence number")
    alpha.add_argument("--in", dest="infile", required=True)
    alpha.add_argument("--budget", type=float)
    alpha.add_argument("--json", dest="json_out")
    alpha.add_argument("--config")

    th = sub.add_parser("theta", help="certified quantum bound")
    th.add_argument("--in", dest="infile", required=True)
    th.add_argument("--tolerance", type=float)
    th.add_argument("--max-iterations", type=int)
    th.add_argument("--step-parameter", type=float)
    th.add_argument("--residual-balance-factor", type=float)
    th.add_argument("--eig-tolerance", type=float)
    th.add_argument("--json", dest="json_out")
    th.add_argument("--config")

    wit = sub.add_parser("witness", help="full witness report")
    wit.add_argument("--in", dest="infile", required=True)
    wit.add_argument("--budget", type=float)
    wit.add_argument("--tolerance", type=float)
    wit.add_argument("--max-iterations", type=int)
    wit.add_argument("--json", dest="json_out")
    wit.add_argument("--config")

    rep = sub.add_parser("repr", help="orthonormal representation")
    rep.add_argument("--mode", choices=["extract", "two-value"], default="extract")
    rep.add_argument("--in", dest="infile")
    rep.add_argument("--q", type=int)
    rep.add_argument("--s", type=int)
    rep.add_argument("--tolerance", type=float)
    rep.add_argument("--json", dest="json_out")
    rep.add_argument("--config")

    val = sub.add_parser("validate-repr", help="validate a stored representation")
    val.add_argument("--in", dest="infile", required=True)
    val.add_argument("--repr", dest="repr_file", required=True)
    val.add_argument("--tol", type=float, default=1e-6)

    scan = sub.add_parser("scan", help="exhaustive labeled ratio scan")
    scan.add_argument("--n", type=int, required=True)
    scan.add_argument("--long-run", action="store_true")
    scan.add_argument("--workers", type=int, default=1)
    scan.add_argument("--tolerance", type=float)
    scan.add_argument("--csv", dest="csv_out")
    scan.add_argument("--json", dest="json_out")
    scan.add_argument("--config")

    tab = sub.add_parser("table", help="reproduce the subset-family table")
    tab.add_argument("--alpha-budget", type=float)
    tab.add_argument("--large-alpha-budget", type=float)
    tab.add_argument("--csv", dest="csv_out")
    tab.add_argument("--json", dest="json_out")
    tab.add_argument("--config")

    gm = sub.add_parser("game", help="betting game simulation")
    gm.add_argument("--repr", dest="repr_file", required=True)
    gm.add_argument("--alpha", type=float, required=True)
    gm.add_argument("--epsilon", type=float)
    gm.add_argument("--rounds", type=int)
    gm.add_argument("--seed", type=int)
    gm.add_argument("--stake", type=float)
    gm.add_argument("--json", dest="json_out")
    gm.add_argument("--config")
    return p


def _cmd_gen(args) -> int:
    fam = args.family
    if fam == "cycle":
        if args.n is None:
            raise InputError("cycle needs --n")
        g = graphs.cycle(args.n)
    elif fam == "complete":
        if args.n is None:
            raise InputError("complete needs --n")
        g = graphs.complete(args.n)
    elif fam == "gqs":
        if args.q is None or args.s is None:
            raise InputError("gqs needs --q and --s")
        g = graphs.intersection_family(graphs.SubsetFamily(args.q, args.s))
    elif fam == "alon-r2":
        g = graphs.alon_r2()
    else:
        if args.n is None or args.p is None:
            raise InputError("random needs --n and --p")
        g = graphs.random_graph(args.n, args.p, args.seed or 0)
    graphs.write_graph(g, args.out, args.format)
    print(f"wrote {args.out}: n={g.n} m={g.m}")
    return EXIT_OK


def _cmd_alpha(args) -> int:
    config = _load_config(args.config)
    g = graphs.read_graph(args.infile)
    budget = float(_setting(args, config, "budget", independence.DEFAULT_BUDGET))
    res = independence.max_independent_set(g, budget)
    if args.json_out:
        _write_text(args.json_out, serialize.dumps(res.to_dict()))
    print(
        f"alpha in [{res.lower_bound}, {res.upper_bound}]"
        f" exact={res.exact} nodes={res.nodes_explored}"
        f" elapsed={serialize.round5(res.elapsed)}s"
    )
    return EXIT_OK if res.exact else EXIT_UNCONVERGED


def _cmd_theta(args) -> int:
    config = _load_config(args.config)
    g = graphs.read_graph(args.infile)
    res = theta.solve_theta(g, _theta_cfg(args, config))
    if args.json_out:
        _write_text(args.json_out, serialize.dumps(res.to_dict()))
    print(
        f"theta in [{serialize.round5(res.lower_bound)},"
        f" {serialize.round5(res.upper_bound)}]"
        f" converged={res.converged} iterations={res.iterations}"
    )
    return EXIT_OK if res.converged else EXIT_UNCONVERGED


def _cmd_witness(args) -> int:
    config = _load_config(args.config)
    g = graphs.read_graph(args.infile)
    budget = float(_setting(args, config, "budget", independence.DEFAULT_BUDGET))
    rep = witness.witness_report(g, _theta_cfg(args, config), budget)
    if args.json_out:
        _write_text(args.json_out, serialize.dumps(rep.to_dict()))
    print(
        f"n={rep.n} alpha=[{rep.alpha_lb},{rep.alpha_ub}]"
        f" theta=[{serialize.round5(rep.theta_lb)},{serialize.round5(rep.theta_ub)}]"
        f" ratio<={serialize.round5(rep.ratio_ub)} witness={rep.is_witness}"
    )
    ok = rep.alpha_exact and rep.theta_converged
    return EXIT_OK if ok else EXIT_UNCONVERGED


def _cmd_repr(args) -> int:
    config = _load_config(args.config)
    if args.mode == "two-value":
        if args.q is None or args.s is None:
            raise InputError("two-value mode needs --q and --s")
        rep = representation.two_value_representation(
            graphs.SubsetFamily(args.q, args.s)
        )
    else:
        if args.infile is None:
            raise InputError("extract mode needs --in")
        g = graphs.read_graph(args.infile)
        res = theta.solve_theta(g, _theta_cfg(args, config))
        rep = representation.extract_representation(g, res)
    if args.json_out:
        _write_text(args.json_out, serialize.dumps(rep.to_dict()))
    print(f"dimension={rep.dimension} value={serialize.round5(rep.value)}")
    return EXIT_OK


def _cmd_validate_repr(args) -> int:
    g = graphs.read_graph(args.infile)
    try:
        with open(args.repr_file) as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise InputError(f"cannot read representation: {e}") from e
    import numpy as np

    rep = representation.OrthonormalRepresentation(
        dimension=int(data["dimension"]),
        vectors=np.asarray(data["vectors"], dtype=float),
        handle=np.asarray(data["handle"], dtype=float),
        probabilities=np.asarray(data["probabilities"], dtype=float),
        value=float(data["value"]),
    )
    report = representation.validate_representation(g, rep, args.tol)
    print(
        f"passed={report.passed}"
        f" norm={serialize.round5(report.norm_violation)}"
        f" orthogonality={serialize.round5(report.orthogonality_violation)}"
        f" probability={serialize.round5(report.probability_violation)}"
        f" value={serialize.round5(report.value_violation)}"
    )
    return EXIT_OK if report.passed else EXIT_INPUT


def _cmd_scan(args) -> int:
    config = _load_config(args.config)
    tol = float(_setting(args, config, "tolerance", 1e-5))
    res = witness.exhaustive_ratio_scan(
        args.n,
        theta.ThetaConfig(tolerance=tol),
        allow_large=args.long_run,
        workers=args.workers,
        keep_rows=args.csv_out is not None,
    )
    if args.csv_out:
        lines = ["edge_bitmask,alpha,theta_lb,theta_ub,ratio_lb"]
        for row in res.rows:
            if row.theta_lb is None:
                lines.append(f"{row.edge_bitmask},{row.alpha},,,")
            else:
                lines.append(
                    f"{row.edge_bitmask},{row.alpha},"
                    f"{format(row.theta_lb, '.17g')},"
                    f"{format(row.theta_ub, '.17g')},"
                    f"{format(row.ratio_lb, '.17g')}"
                )
        _write_text(args.csv_out, "\n".join(lines) + "\n")
    if args.json_out:
        _write_text(
            args.json_out,
            serialize.dumps(
                {
                    "n": res.n,
                    "max_ratio": res.max_ratio,
                    "argmax_edges": [list(e) for e in res.argmax_edges],
                    "graphs_total": res.graphs_total,
                    "graphs_pruned": res.graphs_pruned,
                    "graphs_solved": res.graphs_solved,
                }
            ),
        )
    print(
        f"n={res.n}: max ratio {serialize.round5(res.max_ratio)} over"
        f" {res.graphs_total} graphs ({res.graphs_solved} solved,"
        f" {res.graphs_pruned} pruned) in {serialize.round5(res.elapsed)}s"
    )
    return EXIT_OK


def _cmd_table(args) -> int:
    config = _load_config(args.config)
    budget = float(_setting(args, config, "alpha-budget", independence.DEFAULT_BUDGET))
    large = float(_setting(args, config, "large-alpha-budget", 60.0))
    rows = witness.reproduce_table(
        None, budget, large, progress=lambda msg: print("  " + msg, file=sys.stderr)
    )
    header = (
        f"{'q':>2} {'s':>2} {'n':>4} {'alpha':>12} {'theta':>22}"
        f" {'two-value':>10} {'alpha?':>12} {'theta?':>6}"
    )
    print(header)
    failed = False
    for r in rows:
        a = (
            f"{r.alpha.lower_bound}"
            if r.alpha.exact
            else f"[{r.alpha.lower_bound},{r.alpha.upper_bound}]"
        )
        t = f"[{serialize.round5(r.theta.lower_bound)},{serialize.round5(r.theta.upper_bound)}]"
        tv = serialize.round5(r.two_value) if r.two_value is not None else "-"
        print(
            f"{r.q:>2} {r.s:>2} {r.n:>4} {a:>12} {t:>22} {tv:>10}"
            f" {r.alpha_status:>12} {r.theta_status:>6}"
        )
        if r.note:
            print(f"      note: {r.note}")
        if r.alpha_status == "FAIL" or r.theta_status == "FAIL":
            failed = True
    if args.csv_out:
        lines = ["q,s,n,alpha_lb,alpha_ub,alpha_exact,theta_lb,theta_ub,"
                 "two_value,alpha_status,theta_status"]
        for r in rows:
            tv = format(r.two_value, ".17g") if r.two_value is not None else ""
            lines.append(
                f"{r.q},{r.s},{r.n},{r.alpha.lower_bound},{r.alpha.upper_bound},"
                f"{r.alpha.exact},{format(r.theta.lower_bound, '.17g')},"
                f"{format(r.theta.upper_bound, '.17g')},{tv},"
                f"{r.alpha_status},{r.theta_status}"
            )
        _write_text(args.csv_out, "\n".join(lines) + "\n")
    if args.json_out:
        payload = [
            {
                "q": r.q,
                "s": r.s,
                "n": r.n,
                "alpha": r.alpha.to_dict(),
                "theta": r.theta.to_dict(),
                "two_value": r.two_value,
                "alpha_status": r.alpha_status,
                "theta_status": r.theta_status,
            }
            for r in rows
        ]
        _write_text(args.json_out, serialize.dumps(payload))
    return EXIT_UNCONVERGED if failed else EXIT_OK


def _cmd_game(args) -> int:
    config = _load_config(args.config)
    try:
        with open(args.repr_file) as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise InputError(f"cannot read representation: {e}") from e
    probs = tuple(float(x) for x in data["probabilities"])
    n = len(probs)
    cfg = game_mod.GameConfig(
        probabilities=probs,
        betting=game_mod.uniform_betting(n),
        alpha_used=args.alpha,
        epsilon=float(_setting(args, config, "epsilon", 0.0)),
        stake=float(_setting(args, config, "stake", 1.0)),
        rounds=int(_setting(args, config, "rounds", 1_000_000)),
        seed=int(_setting(args, config, "seed", 0)),
    )
    res = game_mod.simulate_game(cfg)
    if args.json_out:
        _write_text(args.json_out, serialize.dumps(res.to_dict()))
    print(
        f"empirical={serialize.round5(res.empirical_profit_per_unit)}"
        f" +- {serialize.round5(res.standard_error)}"
        f" analytic={serialize.round5(res.analytic_expectation)}"
        f" rounds={res.rounds}"
    )
    return EXIT_OK


_COMMANDS = {
    "gen": _cmd_gen,
    "alpha": _cmd_alpha,
    "theta": _cmd_theta,
    "witness": _cmd_witness,
    "repr": _cmd_repr,
    "validate-repr": _cmd_validate_repr,
    "scan": _cmd_scan,
    "table": _cmd_table,
    "game": _cmd_game,
}


def run(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantError as e:
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
