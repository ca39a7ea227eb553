"""``dimquot`` command line: functor values, dimension reports, free-group checks, verification."""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .abelian import AbelianGroupError, FPAbGroup, parse_abelian, sp
from .groupring import dimension_report
from .groups import GroupError, ResourceCapError, build_family
from .magnus import MagnusCapError, MagnusError, msq_equality, parse_relators
from .quadfun import FUNCTORS, GradedAbGroup, square_functor
from .verify import SUITES, run_suites

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

FUNCTOR_NAMES = ("tor", "omega", "gamma", "r", "lambda2", "sp2", "sp3", "tensor2", "ext-tor",
                 "sq-tensor", "sq-star")


class UsageError(Exception):
    pass


def _emit(doc: dict, path: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=False, ensure_ascii=False) + "\n"
    if path == "-":
        sys.stdout.write(text)
    elif path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _say(args, text: str) -> None:
    # keep stdout pure JSON when the report goes there
    print(text, file=sys.stderr if getattr(args, "json", None) == "-" else sys.stdout)


def _invariants(A: FPAbGroup) -> list[int]:
    return list(A.invariants)


def cmd_functor(args) -> int:
    A = parse_abelian(args.spec)
    name = args.name
    if name in ("sq-tensor", "sq-star"):
        graded = GradedAbGroup({args.degree: A})
        out = square_functor(graded, "tensor" if name == "sq-tensor" else "torsion")
        _say(args, "; ".join(f"{d}: {s}" for d, s in out.structure().items()) or "0")
        _emit({"input": args.spec, "functor": name, "degree": args.degree,
               "value": {str(d): {"structure": G.structure(), "invariants": _invariants(G)}
                         for d, G in out.components.items()}}, args.json)
        return EXIT_OK
    if name == "sp3":
        G = sp(A, 3).group
    elif name in FUNCTORS:
        G = FUNCTORS[name](A).group
    else:
        raise UsageError(f"unknown functor {name!r}; choose from {', '.join(FUNCTOR_NAMES)}")
    _say(args, G.structure())
    doc = {"input": args.spec, "functor": name, "structure": G.structure(), "invariants": _invariants(G)}
    if args.generators:
        doc["generators"] = list(G.labels)
        doc["relations"] = [list(r) for r in G.rel.basis]
        for lab in G.labels:
            _say(args, f"  {lab}")
    _emit(doc, args.json)
    return EXIT_OK


def cmd_dims(args) -> int:
    fam = build_family(args.group)
    G = fam.group
    N = None
    if args.relative is not None:
        N = {
            "N": fam.subgroup,
            "1": G.trivial(),
            "gamma2": G.derived_subgroup,
            "E": G.whole(),
        }[args.relative]
        if N is None:
            raise UsageError(f"{args.group} carries no distinguished subgroup; use --relative 1|gamma2|E")
    rep = dimension_report(G, args.n, N=N, name=args.group)
    doc = rep.as_dict()
    if args.elements:
        from .groupring import dimension_subgroup, relative_dimension_subgroup
        for row in doc["rows"]:
            D = dimension_subgroup(G, row["n"]) if N is None else relative_dimension_subgroup(G, N, row["n"])
            row["D_elements"] = [G.labels[g] for g in D.elements_list]
    for row in doc["rows"]:
        _say(args, f"n={row['n']}: |D|={row['order_D']} |low|={row['order_gamma']} "
             f"quotient {row['quotient']} (exponent {row['exponent']})")
    _emit(doc, args.json)
    return EXIT_OK


def cmd_free(args) -> int:
    if args.check != "msq":
        raise UsageError(f"unknown free-group check {args.check!r}")
    relators = parse_relators(args.relators, args.rank)
    if not relators:
        raise UsageError("no relators given")
    rep = msq_equality(relators, args.rank, seed=args.seed)
    doc = {
        "check": "msq",
        "rank": args.rank,
        "relators": rep.relators,
        "lhs_basis": [list(r) for r in rep.lhs.basis],
        "rhs_basis": [list(r) for r in rep.rhs.basis],
        "lhs_in_rhs": rep.lhs_in_rhs,
        "rhs_in_lhs": rep.rhs_in_lhs,
        "sanity_failures": rep.sanity_failures,
        "passed": rep.passed,
    }
    _say(args, f"msq rank {args.rank}: {'equal' if rep.equal else 'differ'}"
         f" (lhs<=rhs {rep.lhs_in_rhs}, rhs<=lhs {rep.rhs_in_lhs})")
    _emit(doc, args.json)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_verify(args) -> int:
    names = None
    if args.suite is not None:
        if args.suite not in SUITES:
            raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
        names = [args.suite]
    rep = run_suites(names, seed=args.seed, manifest_path=args.corpus, samples=args.samples,
                     group=args.group)
    s = rep.summary()
    for name, c in s["suites"].items():
        _say(args, f"{name}: {c['pass']} passed, {c['fail']} failed, {c['skip']} skipped")
    for r in rep.records:
        if r.passed is False:
            _say(args, f"FAIL {r.check}: expected {r.expected}, computed {r.computed}")
    _say(args, f"total {s['total']}: {s['passed']} passed, {s['failed']} failed, {s['skipped']} skipped")
    _emit(rep.as_dict(timings=args.timings), args.json)
    return EXIT_OK if rep.ok else EXIT_FAIL


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dimquot", description=__doc__)
    p.add_argument("--version", action="version", version=f"dimquot {__version__}")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    f = sub.add_parser("functor", help="evaluate a functor on an abelian group such as Z/2+Z/4+Z")
    f.add_argument("spec")
    f.add_argument("name", help=", ".join(FUNCTOR_NAMES))
    f.add_argument("--degree", type=int, default=1, help="degree of the input for sq-tensor/sq-star")
    f.add_argument("--generators", action="store_true", help="also list generators and relations")
    f.add_argument("--json", metavar="PATH", help="write JSON ('-' for stdout)")
    f.set_defaults(func=cmd_functor)

    d = sub.add_parser("dims", help="dimension subgroups of a finite group")
    d.add_argument("--group", required=True, help="family spec, e.g. cex:2,1,1 or dihedral:16")
    d.add_argument("--n", type=int, required=True)
    d.add_argument("--relative", nargs="?", const="N", choices=("N", "1", "gamma2", "E"),
                   help="relative version; defaults to the family's subgroup N")
    d.add_argument("--elements", action="store_true", help="list the elements of each D_n")
    d.add_argument("--json", metavar="PATH")
    d.set_defaults(func=cmd_dims)

    fr = sub.add_parser("free", help="free-group lattice checks")
    fr.add_argument("check", choices=("msq",))
    fr.add_argument("--rank", type=int, required=True)
    fr.add_argument("--relators", required=True, help='e.g. "[1,2]^2; [1,2,1]"')
    fr.add_argument("--seed", type=int, default=0)
    fr.add_argument("--json", metavar="PATH")
    fr.set_defaults(func=cmd_free)

    v = sub.add_parser("verify", help="run verification suites over the built-in corpus")
    v.add_argument("suite", nargs="?", help=", ".join(SUITES) + " (default: all)")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--group", help="restrict corpus suites to one family spec")
    v.add_argument("--corpus", metavar="MANIFEST", help="alternative corpus manifest (JSON)")
    v.add_argument("--samples", type=int, default=40, help="samples per Sjogren check")
    v.add_argument("--json", metavar="PATH")
    v.add_argument("--timings", action="store_true", help="include wall times (breaks byte identity)")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ResourceCapError, MagnusCapError) as exc:
        print(f"dimquot: resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (UsageError, GroupError, AbelianGroupError, MagnusError, OSError) as exc:
        print(f"dimquot: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
