"""Command-line interface.

Exit codes: 0 success, 1 usage or input error, 2 verification failure,
3 exact search budget exceeded.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import committee, exact, experiments, generators, greedy, tree
from .election import (
    ParseError,
    candidate_set,
    is_jr_committee,
    is_justifying,
    read_election,
    serialize_election,
    write_election,
)

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_BUDGET = 0, 1, 2, 3

DESK_DEFAULTS = {
    "threshold": dict(n=2000, m=50, k=10, trials=200),
    "greedy": dict(n=60, m=60, k=10, trials=100),
}
FULL_SCALE_DEFAULTS = {
    "threshold": dict(n=5000, m=100, k=10, trials=1000),
    "greedy": dict(n=100, m=100, k=10, trials=200),
}
GRID_STOP = {"ic": 1.0, "e1d": 1.0, "e2d": 1.2}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    default = argparse.SUPPRESS if suppress else None
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=default, help="master seed (falls back to $JR_SEED)")
    p.add_argument("--budget", type=int, default=default, help="node budget for the exact search")
    p.add_argument("--output", "-o", default=default, help="output file (default: stdout)")
    p.add_argument("--format", choices=["csv"], default=argparse.SUPPRESS if suppress else "csv")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="jrgroups",
        description="Justifying groups and JR committees for approval elections.",
        epilog="exit codes: 0 ok, 1 usage or input error, 2 verification failed, 3 search budget exceeded",
        parents=[_global_flags(False)],
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = [_global_flags(True)]

    p = sub.add_parser("check", parents=common, help="verify a group or committee against an election")
    p.add_argument("election")
    p.add_argument("group", help="file of whitespace-separated candidate indices")
    p.add_argument("--committee", action="store_true", help="also require exactly k members (JR)")

    p = sub.add_parser("solve", parents=common, help="compute a small justifying group")
    p.add_argument("election")
    how = p.add_mutually_exclusive_group(required=True)
    how.add_argument("--greedy-cc", action="store_true")
    how.add_argument("--greedy-candidate", action="store_true")
    how.add_argument("--exact", action="store_true")
    how.add_argument("--quasi", action="store_true")
    how.add_argument("--tree", metavar="TREEFILE")

    p = sub.add_parser("tree", parents=common, help="tree representations")
    how = p.add_mutually_exclusive_group(required=True)
    how.add_argument("--from-vcr", metavar="VCRFILE", help="convert an interval model to a tree")
    how.add_argument("--validate", nargs=2, metavar=("ELECTION", "TREEFILE"))

    p = sub.add_parser("balance", parents=common, help="gender-aware JR committees")
    p.add_argument("election", help=".appr file with a genders line")
    how = p.add_mutually_exclusive_group(required=True)
    how.add_argument("--both-genders", action="store_true")
    how.add_argument("--min-imbalance", action="store_true")

    p = sub.add_parser("gen", parents=common, help="generate a random election")
    p.add_argument("model", choices=experiments.MODELS)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--p", type=float, help="approval probability (ic)")
    p.add_argument("--r", type=float, help="approval radius (e1d, e2d)")

    p = sub.add_parser("experiment", parents=common, help="run a parameter sweep, write CSV")
    how = p.add_mutually_exclusive_group(required=True)
    how.add_argument("--threshold", action="store_true")
    how.add_argument("--greedy", action="store_true")
    p.add_argument("--config", help="key=value file; flags override it")
    p.add_argument("--model", choices=experiments.MODELS)
    for name in ("n", "m", "k", "trials", "jobs"):
        p.add_argument(f"--{name}", type=int)
    for name in ("start", "stop", "step"):
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--sizes", help="group sizes, e.g. 1,2,3,4")
    p.add_argument("--fixture", choices=experiments.FIXTURES)
    p.add_argument("--no-exact", action="store_true", help="skip the exact solver")
    p.add_argument("--full-scale", action="store_true", help="use the large n=5000 / 1000-trial settings (slow)")
    p.add_argument("--plot", metavar="SCRIPT", help="also write a matplotlib script for the CSV")

    p = sub.add_parser("count-jr", parents=common, help="count JR committees exhaustively")
    p.add_argument("election")
    return parser


def _seed(args) -> int | None:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("JR_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"JR_SEED must be an integer, got {env!r}") from None
    return None


def _emit(args, text: str) -> None:
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _read_group(path: str) -> tuple[int, ...]:
    tokens = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        tokens += line.split("#", 1)[0].split()
    try:
        return candidate_set(int(t) for t in tokens)
    except ValueError:
        raise ParseError(f"{path}: group file must hold integer candidate indices") from None


def _fmt_group(w) -> str:
    return " ".join(map(str, w))


def cmd_check(args) -> int:
    e = read_election(args.election)
    w = _read_group(args.group)
    if any(not 0 <= c < e.m for c in w):
        raise UsageError(f"group mentions a candidate outside 0..{e.m - 1}")
    justifying = is_justifying(e, w)
    jr = is_jr_committee(e, w)
    _emit(args, f"size: {len(w)}\njustifying: {'yes' if justifying else 'no'}\njr_committee: {'yes' if jr else 'no'}\n")
    ok = jr if args.committee else justifying
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_solve(args) -> int:
    e = read_election(args.election)
    if args.greedy_cc:
        w = greedy.greedy_cc(e)
    elif args.greedy_candidate:
        w = greedy.greedy_candidate(e)
    elif args.quasi:
        w = exact.quasi_poly_min(e)
    elif args.tree:
        t = tree.parse_tree(Path(args.tree).read_text(encoding="utf-8"))
        if t.m != e.m:
            raise UsageError(f"tree has {t.m} candidates, election has {e.m}")
        if not tree.validate_tree_representation(e, t):
            print("error: the tree is not a representation of this election", file=sys.stderr)
            return EXIT_VERIFY
        w = tree.solve_on_tree(e, t)
    else:
        budget = args.budget or exact.DEFAULT_NODE_BUDGET
        try:
            w = exact.exact_min_justifying(e, budget)
        except exact.BudgetExceeded as exc:
            print(f"error: {exc}", file=sys.stderr)
            _emit(args, f"{_fmt_group(exc.best)}\nsize: {len(exc.best)}\ncertified: no\n")
            return EXIT_BUDGET
    _emit(args, f"{_fmt_group(w)}\nsize: {len(w)}\n")
    return EXIT_OK


def cmd_tree(args) -> int:
    if args.from_vcr:
        iv = tree.parse_vcr(Path(args.from_vcr).read_text(encoding="utf-8"))
        _emit(args, tree.serialize_tree(tree.vcr_to_tree(iv)))
        return EXIT_OK
    election_path, tree_path = args.validate
    e = read_election(election_path)
    t = tree.parse_tree(Path(tree_path).read_text(encoding="utf-8"))
    if t.m != e.m:
        raise UsageError(f"tree has {t.m} candidates, election has {e.m}")
    valid = tree.validate_tree_representation(e, t)
    _emit(args, f"tree_representation: {'yes' if valid else 'no'}\n")
    return EXIT_OK if valid else EXIT_VERIFY


def cmd_balance(args) -> int:
    e = read_election(args.election)
    if e.genders is None:
        raise UsageError("election file has no genders line")
    if args.both_genders:
        w = committee.committee_both_genders(e)
    else:
        w = committee.min_imbalance_heuristic(e)
    jr = is_jr_committee(e, w)
    text = f"{_fmt_group(w)}\nimbalance: {committee.imbalance(w, e.genders)}\njr: {'yes' if jr else 'no'}\n"
    _emit(args, text)
    return EXIT_OK if jr else EXIT_VERIFY


def cmd_gen(args) -> int:
    seed = _seed(args)
    seed = 0 if seed is None else seed
    if args.model == "ic":
        if args.p is None:
            raise UsageError("ic needs --p")
        e = generators.gen_ic(args.n, args.m, args.k, args.p, seed)
        model = None
    else:
        if args.r is None:
            raise UsageError(f"{args.model} needs --r")
        if args.model == "e1d":
            e, model = generators.gen_euclid1d(args.n, args.m, args.k, args.r, seed)
        else:
            e, model = generators.gen_euclid2d(args.n, args.m, args.k, args.r, seed), None
    if args.output:
        write_election(e, args.output)
        if model is not None:
            Path(args.output).with_suffix(".vcr").write_text(tree.serialize_vcr(model), encoding="utf-8")
    else:
        sys.stdout.write(serialize_election(e))
    return EXIT_OK


def cmd_experiment(args) -> int:
    kind = "threshold" if args.threshold else "greedy"
    base = dict((FULL_SCALE_DEFAULTS if args.full_scale else DESK_DEFAULTS)[kind])
    if args.config:
        base.update(experiments.parse_config(Path(args.config).read_text(encoding="utf-8")))
    overrides = {
        name: getattr(args, name)
        for name in ("model", "n", "m", "k", "trials", "jobs", "start", "stop", "step", "fixture")
    }
    if args.sizes:
        overrides["sizes"] = tuple(int(x) for x in args.sizes.replace(",", " ").split())
    if args.no_exact:
        overrides["exact"] = False
    if args.budget is not None:
        overrides["node_budget"] = args.budget
    seed = _seed(args)
    if seed is not None:
        overrides["seed"] = seed
    model = overrides["model"] or base.get("model", "ic")
    base.setdefault("stop", GRID_STOP[model])
    cfg = experiments.build_config(base, **overrides)
    if kind == "threshold":
        records = experiments.run_threshold_experiment(cfg)
    else:
        records = experiments.run_greedy_experiment(cfg)
    _emit(args, experiments.to_csv(records))
    if args.plot:
        if not args.output:
            raise UsageError("--plot needs --output so the script can find the CSV")
        script = experiments.emit_plot_script(args.output, kind, k=cfg.k, m=cfg.m, model=cfg.model)
        Path(args.plot).write_text(script, encoding="utf-8")
    return EXIT_OK


def cmd_count_jr(args) -> int:
    e = read_election(args.election)
    _emit(args, f"{exact.count_jr_committees(e)}\n")
    return EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "solve": cmd_solve,
    "tree": cmd_tree,
    "balance": cmd_balance,
    "gen": cmd_gen,
    "experiment": cmd_experiment,
    "count-jr": cmd_count_jr,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ValueError, OSError) as exc:
        # ParseError, ConfigError, PreconditionError and InstanceTooLarge are ValueErrors
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
