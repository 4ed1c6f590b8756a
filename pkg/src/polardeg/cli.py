"""``polardeg`` command line."""

from __future__ import annotations

import argparse
import json
import sys

from polardeg.groebner import ResourceBudgetExceeded, step_budget
from polardeg.parsing import HypersurfaceInput, ParseError, parse_input, parse_linear_form
from polardeg.polar import GenericityError, cone_apex_set, pol_degree
from polardeg.report import FAILED, analyse, emit_report, point_json, rational_json
from polardeg.transversality import HyperplaneInVariety, check_admissible, special_points

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_NOT_ADMISSIBLE = 2
EXIT_GENERICITY = 3
EXIT_BUDGET = 4
EXIT_PARSE = 5


def _read(path: str) -> HypersurfaceInput:
    if path == "-":
        return parse_input(sys.stdin.read())
    with open(path, encoding="utf-8") as fh:
        return parse_input(fh.read())


def _hyperplane(args, inp: HypersurfaceInput):
    if getattr(args, "hyperplane", None):
        form = parse_linear_form(args.hyperplane, inp.ring)
        if form.is_zero():
            raise ParseError("hyperplane form is zero", 1, 1)
        return form
    if inp.hyperplane is None:
        raise ParseError("no hyperplane given (use --hyperplane or a 'hyperplane:' line)", 1, 1)
    return inp.hyperplane


def _emit(data: dict, as_json: bool, text: str) -> None:
    if as_json:
        sys.stdout.write(json.dumps(data, indent=2) + "\n")
    else:
        sys.stdout.write(text + "\n")


def cmd_pol(args) -> int:
    inp = _read(args.file)
    res = pol_degree(inp.polynomial, seed=args.seed, trials=args.trials)
    _emit({"pol": res.value, "seeds": res.seeds, "reduced": inp.reduced}, args.json, f"pol = {res.value}")
    return EXIT_OK


def cmd_decompose(args) -> int:
    inp = _read(args.file)
    form = _hyperplane(args, inp)
    report = analyse(inp, seed=args.seed, hyperplane=form)
    sys.stdout.write(emit_report(report, "json" if args.json else "text"))
    if report.status == FAILED:
        return EXIT_FAILED
    return EXIT_OK if report.admissible else EXIT_NOT_ADMISSIBLE


def cmd_special_points(args) -> int:
    inp = _read(args.file)
    rep = special_points(inp.polynomial, seed=args.seed)
    data = {
        "cone": rep.is_cone,
        "candidates": [{"point": point_json(c), "alpha": a} for c, a in zip(rep.candidates, rep.alpha)],
        "special_points": [point_json(p) for p in rep.special],
    }
    lines = [f"{json.dumps(c['point'])}: alpha {c['alpha']}" for c in data["candidates"]]
    lines.append(f"special points: {len(rep.special)}" + (" (cone)" if rep.is_cone else ""))
    _emit(data, args.json, "\n".join(lines))
    return EXIT_OK


def cmd_is_cone(args) -> int:
    inp = _read(args.file)
    res = cone_apex_set(inp.polynomial)
    apex = [[rational_json(c) for c in v] for v in res.apex_space]
    _emit({"cone": res.is_cone, "apex_space": apex}, args.json,
          "true" + "".join(f"\napex {a}" for a in apex) if res.is_cone else "false")
    return EXIT_OK


def cmd_admissible(args) -> int:
    inp = _read(args.file)
    form = _hyperplane(args, inp)
    verdict = check_admissible(inp.polynomial, form)
    _emit({"verdict": verdict.status, "admissible": verdict.admissible, "evidence": verdict.evidence},
          args.json, f"{verdict.status} {json.dumps(verdict.evidence)}")
    return EXIT_OK if verdict.admissible else EXIT_NOT_ADMISSIBLE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polardeg", description="Polar degree of projective hypersurfaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True):
        p.add_argument("-f", "--file", required=True, help="input file ('-' for stdin)")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        if seed:
            p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("pol", help="polar degree")
    common(p)
    p.add_argument("--trials", type=int, default=3, help="seeds that must agree")
    p.set_defaults(func=cmd_pol)

    p = sub.add_parser("decompose", help="pol = alpha + beta for a hyperplane")
    common(p)
    p.add_argument("--hyperplane", help="linear form, e.g. 'w - x - y'")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("special-points", help="special points and their alpha numbers")
    common(p)
    p.set_defaults(func=cmd_special_points)

    p = sub.add_parser("is-cone", help="cone test")
    common(p, seed=False)
    p.set_defaults(func=cmd_is_cone)

    p = sub.add_parser("admissible", help="admissibility of a hyperplane")
    common(p, seed=False)
    p.add_argument("--hyperplane", help="linear form")
    p.set_defaults(func=cmd_admissible)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with step_budget():
            return args.func(args)
    except ParseError as exc:
        print(f"polardeg: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (OSError, HyperplaneInVariety) as exc:
        print(f"polardeg: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except GenericityError as exc:
        print(f"polardeg: genericity failure: {exc}", file=sys.stderr)
        return EXIT_GENERICITY
    except ResourceBudgetExceeded as exc:
        print(f"polardeg: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
