"""``divrank`` command line.

Exit status: 0 for success (valid rank, derivable goal, round trip holds),
1 for a negative answer (axiom failure, goal not derivable, round trip
fails, assertion set not closed), 2 for usage and input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .assertions import CONST, DEP, INDEP, AssertionSet, parse_assertion
from .core import DEFAULT_CAP, DEFAULT_TRIPLE_CAP, atoms_of, check_axioms, check_interaction
from .dependence import armstrong_close, dep_countermodel, dep_derivation, dep_entails
from .formats import (
    explicit_to_json,
    load_assertions,
    load_distribution,
    load_explicit,
    load_team,
    load_vectors,
    team_to_csv,
    write_team,
)
from .ground import DivrankError, parse_subset
from .independence import format_proof, indep_countermodel, indep_entails, indep_saturate, minimize_target
from .models import SIMPLE_KINDS, EntropyRank, ExplicitRankTable, LinearRank, RelationalRank, make_simple
from .representation import NotClosedError, build_poset, realize_rank, roundtrip_verify
from .values import DEFAULT_TOLERANCE, format_value, json_value

OK, NEGATIVE, USAGE = 0, 1, 2


class CliError(Exception):
    pass


def _emit_json(data) -> None:
    print(json.dumps(data, indent=2, ensure_ascii=False))


# -- model loading ---------------------------------------------------------


def _add_model_args(p: argparse.ArgumentParser) -> None:
    src = p.add_argument_group("model (choose one)")
    src.add_argument("--team", metavar="CSV", help="relational rank of a team")
    src.add_argument("--dist", metavar="JSON", help="entropy of a distribution")
    src.add_argument("--vectors", metavar="JSON", help="dimension of spans")
    src.add_argument("--explicit", metavar="JSON", help="explicit rank table")
    src.add_argument("--kind", choices=SIMPLE_KINDS, help="a parameter-only rank")
    src.add_argument("--attrs", metavar="A,B,...", help="ground set for --kind")
    src.add_argument(
        "--param",
        help="constant value, singular attribute, rank-1 attributes, "
        'or JSON {"label": [items]} for coverage',
    )
    p.add_argument("--tolerance", type=float, help=f"comparison tolerance (default {DEFAULT_TOLERANCE:g} where inexact)")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="largest ground set to enumerate")


def _load_model(args, validate: bool = True):
    chosen = [k for k in ("team", "dist", "vectors", "explicit", "kind") if getattr(args, k)]
    if len(chosen) != 1:
        raise CliError("give exactly one of --team, --dist, --vectors, --explicit, --kind")
    if args.tolerance is not None and args.tolerance <= 0:
        raise CliError("--tolerance must be positive")
    if args.team:
        return RelationalRank(load_team(args.team))
    if args.dist:
        return EntropyRank(load_distribution(args.dist), args.tolerance or DEFAULT_TOLERANCE)
    if args.vectors:
        return LinearRank(load_vectors(args.vectors))
    if args.explicit:
        table = load_explicit(args.explicit, validate=validate)
        if args.tolerance is not None:
            table = ExplicitRankTable(table.ground, table.entries, args.tolerance)
        return table
    if args.attrs is None:
        raise CliError("--kind needs --attrs")
    ground = [a for a in args.attrs.replace(",", " ").split() if a]
    param = args.param
    if args.kind == "coverage":
        if param is None:
            raise CliError('coverage needs --param \'{"label": [items], ...}\'')
        try:
            param = json.loads(param)
        except json.JSONDecodeError as exc:
            raise CliError(f"--param is not valid JSON: {exc.msg}") from None
    elif args.kind == "constant" and param is not None:
        param = param.strip()
    elif args.kind == "two_valued":
        param = parse_subset(param)
    return make_simple(args.kind, ground, param)


def _fmt_set(g, x) -> str:
    return g.fmt(x, empty="()", sep=",")


# -- commands --------------------------------------------------------------


def cmd_rank(args) -> int:
    model = _load_model(args)
    g = model.ground
    subsets = [g.subset(s) for s in args.subsets]
    if args.format == "json":
        _emit_json(
            {
                "kind": model.kind,
                "mode": model.mode,
                "ranks": [{"subset": g.ordered(x), "rank": json_value(model.rank(x))} for x in subsets],
            }
        )
    else:
        for x in subsets:
            print(format_value(model.rank(x)))
    return OK


def cmd_check(args) -> int:
    model = _load_model(args, validate=False)
    report = check_axioms(model, cap=args.cap, triple_cap=args.triple_cap, exhaustive=args.exhaustive)
    inter = check_interaction(model, cap=args.cap)
    status = OK if report.is_diversity_rank else NEGATIVE
    if args.format == "json":
        out = report.to_json()
        out["interaction"] = inter.to_json()["results"]
        out["diversity_rank"] = report.is_diversity_rank
        _emit_json(out)
    else:
        print(f"mode: {model.mode}" + ("" if report.exhaustive else " (triples sampled)"))
        for line in report.lines():
            print(line)
        for line in inter.lines():
            print(line)
        print("diversity rank: " + ("yes" if status == OK else "no"))
    return status


def cmd_atoms(args) -> int:
    model = _load_model(args)
    atoms = atoms_of(model, cap=args.cap)
    g = model.ground
    if args.format == "json":
        _emit_json(
            [{"kind": a.kind, "lhs": g.ordered(a.lhs), "rhs": g.ordered(a.rhs)} for a in atoms]
        )
    else:
        for a in atoms:
            print(a.show(g))
    return OK


def _inference_inputs(args):
    sigma = load_assertions(args.assertions)
    try:
        goal = parse_assertion(args.goal)
    except ValueError as exc:
        raise CliError(f"bad --goal: {exc}") from None
    for attr in goal.attrs:
        sigma.universe.index(attr)
    kinds = set(sigma.kinds) - {CONST}
    if len(kinds) > 1:
        raise CliError("combined dependence/independence inference is unsupported (open problem)")
    kind = kinds.pop() if kinds else (goal.kind if goal.kind != CONST else DEP)
    if goal.kind != CONST and goal.kind != kind:
        raise CliError("combined dependence/independence inference is unsupported (open problem)")
    return sigma, goal, kind


def _countermodel(sigma, goal, kind):
    if kind == DEP:
        rank, team = dep_countermodel(sigma, goal)
        note = "two-valued rank 1 exactly on: " + _fmt_set(sigma.universe, rank.ones)
        return team, note
    minimal = minimize_target(sigma, goal)
    team = indep_countermodel(sigma, goal)
    return team, "minimal refuted atom: " + minimal.show(sigma.universe)


def cmd_infer(args) -> int:
    sigma, goal, kind = _inference_inputs(args)
    g = sigma.universe
    if kind == DEP:
        derivable = dep_entails(sigma, goal)
        trace = [s.show(g) for s in dep_derivation(sigma, goal)] if derivable else []
    else:
        derivable = indep_entails(sigma, goal)
        a = goal.as_indep()
        trace = format_proof(indep_saturate(sigma).proof(a.lhs, a.rhs), g) if derivable else []
    result = {"goal": goal.show(g), "derivable": derivable}
    if derivable:
        result["derivation"] = trace
    else:
        team, note = _countermodel(sigma, goal, kind)
        out = Path(args.out)
        write_team(team, out)
        result["countermodel"] = str(out)
        result["note"] = note
    if args.format == "json":
        _emit_json(result)
    else:
        print(("DERIVABLE: " if derivable else "NOT DERIVABLE: ") + goal.show(g))
        for line in trace:
            print("  " + line)
        if not derivable:
            print(f"  {result['note']}")
            print(f"  countermodel team written to {result['countermodel']}")
    return OK if derivable else NEGATIVE


def cmd_counterexample(args) -> int:
    sigma, goal, kind = _inference_inputs(args)
    derivable = dep_entails(sigma, goal) if kind == DEP else indep_entails(sigma, goal)
    if derivable:
        print(f"{goal.show(sigma.universe)} is derivable; no countermodel exists", file=sys.stderr)
        return NEGATIVE
    team, note = _countermodel(sigma, goal, kind)
    if args.out:
        write_team(team, args.out)
        print(note)
        print(f"countermodel team written to {args.out}")
    else:
        sys.stdout.write(team_to_csv(team))
    return OK


def cmd_represent(args) -> int:
    sigma = load_assertions(args.assertions)
    if args.close:
        sigma = armstrong_close(AssertionSet(sigma.universe, [a.as_dep() for a in sigma]))
    try:
        poset = build_poset(sigma)
    except NotClosedError as exc:
        print(f"error: {exc} (use --close)", file=sys.stderr)
        return NEGATIVE
    table = realize_rank(sigma)
    ok = roundtrip_verify(sigma, table)
    text = explicit_to_json(table)
    if args.dot:
        Path(args.dot).write_text(poset.to_dot(), encoding="utf-8")
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    if args.format == "json":
        _emit_json({"table": json.loads(text), "classes": len(poset), "roundtrip": ok})
    else:
        if not args.out:
            sys.stdout.write(text)
        print(f"classes: {len(poset)}")
        print("roundtrip: " + ("OK" if ok else "FAIL"))
    return OK if ok else NEGATIVE


# -- entry point -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="divrank", description="Diversity rank functions, dependence and independence.")
    p.add_argument("--version", action="version", version=f"divrank {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("human", "json"), default="human")

    sp = sub.add_parser("rank", help="evaluate the rank of subsets")
    _add_model_args(sp)
    common(sp)
    sp.add_argument("subsets", nargs="+", help='subsets like "a,b"; "" for the empty set')
    sp.set_defaults(func=cmd_rank)

    sp = sub.add_parser("check", help="check R1-R4, SUBM and the interaction laws")
    _add_model_args(sp)
    common(sp)
    sp.add_argument("--triple-cap", type=int, default=DEFAULT_TRIPLE_CAP, help="sample triples above this size")
    sp.add_argument("--exhaustive", action="store_true", help="never sample")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("atoms", help="list the dependence and independence atoms that hold")
    _add_model_args(sp)
    common(sp)
    sp.set_defaults(func=cmd_atoms)

    for name, func, helptext in (
        ("infer", cmd_infer, "decide whether a goal follows from assertions"),
        ("counterexample", cmd_counterexample, "write a countermodel team for a non-derivable goal"),
    ):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--assertions", required=True, metavar="FILE")
        sp.add_argument("--goal", required=True, help='e.g. "dep: a -> b" or "indep: a _||_ b"')
        if name == "infer":
            sp.add_argument("--out", default="countermodel.csv", help="where to write a countermodel team")
        else:
            sp.add_argument("--out", help="where to write the team (default: stdout)")
        common(sp)
        sp.set_defaults(func=func)

    sp = sub.add_parser("represent", help="realise a closed set of dependence atoms as a rank table")
    sp.add_argument("--assertions", required=True, metavar="FILE")
    sp.add_argument("--close", action="store_true", help="close the set under Armstrong's rules first")
    sp.add_argument("--out", help="write the table here instead of stdout")
    sp.add_argument("--dot", help="write the class order as a DOT graph")
    common(sp)
    sp.set_defaults(func=cmd_represent)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, DivrankError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
