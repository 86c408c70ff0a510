"""Command-line front end.

Results go to standard output (or ``--out``); diagnostics go to standard
error.  Exit codes: 0 success, 1 a property check failed, 2 bad usage or
bad input.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import bmw as B
from .expr import ExprError, Session, evaluate, evaluate_to_text, format_result
from .geometry import direction_classes, direction_graph_dot, gromov_product, hyperbolicity_defect
from .reduction import reduce_with_steps
from .sampling import SampledInstance, product_instance, segment_instance, word_instance
from .suites import SUITES, UnknownSuiteError, report_json, run_suite

EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits with 2 as well; keep the message on stderr
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _load_config(path: Optional[str]) -> Optional[dict]:
    if path is None:
        return None
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path} is not valid JSON: {exc}") from None


def _session(args) -> Session:
    config = _load_config(args.config)
    try:
        return Session.from_config(config)
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"bad config: {exc}") from None


def _presentation(args) -> B.BmwPresentation:
    if getattr(args, "presentation", None):
        try:
            text = Path(args.presentation).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read presentation {args.presentation}: {exc.strerror}") from None
    else:
        config = _load_config(args.config) or {}
        if "bmw" in config:
            text = config["bmw"]
        else:
            name = getattr(args, "preset", None) or "swap"
            if name not in B.PRESETS:
                raise UsageError(f"unknown preset {name!r}; choose from {', '.join(sorted(B.PRESETS))}")
            text = B.PRESETS[name]
    return B.parse_presentation(text)


def _emit(args, text: str) -> None:
    if args.out:
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            raise UsageError(f"cannot write {args.out}: {exc.strerror}") from None
    else:
        sys.stdout.write(text)


def _parse_element(session: Session, text: str):
    try:
        return evaluate(text, session)
    except ExprError as exc:
        raise UsageError(exc.caret(text)) from None


def _sampled(session: Session) -> SampledInstance:
    if session.kind == "word":
        return word_instance(session.generators)
    if session.kind == "product":
        return product_instance("config", session.system)
    return segment_instance("config", session.system)


def _elements(args, session: Session) -> list:
    if args.elements:
        return [_parse_element(session, e) for e in args.elements]
    rng = random.Random(args.seed)
    return _sampled(session).samples(rng, args.count or 8, admissible=True)


# ---------------------------------------------------------------------------
# commands


def cmd_eval(args) -> int:
    session = _session(args)
    try:
        text = evaluate_to_text(args.expr, session)
    except ExprError as exc:
        raise UsageError(exc.caret(args.expr)) from None
    if args.format == "json":
        text = json.dumps({"expr": args.expr, "value": text})
    _emit(args, text + "\n")
    return EXIT_OK


def cmd_reduce(args) -> int:
    session = _session(args)
    if session.kind != "segment":
        raise UsageError("reduce needs a segment label system")
    f = _parse_element(session, args.element)
    red, steps = reduce_with_steps(f)
    if args.format == "json":
        out = {"input": session.ore.format(f), "result": session.ore.format(red),
               "steps": [{"center": format_result(session, s.center),
                          "sigma": format_result(session, s.sigma)} for s in steps]}
        _emit(args, json.dumps(out, indent=2) + "\n")
    else:
        lines = [f"reduce at {format_result(session, s.center)} "
                 f"with half-width {format_result(session, s.sigma)}" for s in steps]
        _emit(args, "\n".join(lines + [session.ore.format(red)]) + "\n")
    return EXIT_OK


def cmd_gromov(args) -> int:
    session = _session(args)
    pts = [_parse_element(session, e) for e in args.points]
    if len(pts) not in (2, 3):
        raise UsageError("gromov takes two points and an optional basepoint")
    session.ore.require_admissible(*pts)
    _emit(args, str(gromov_product(session.ore, *pts)) + "\n")
    return EXIT_OK


def cmd_hyp(args) -> int:
    session = _session(args)
    pts = _elements(args, session)
    report = hyperbolicity_defect(session.ore, pts)
    out = report.as_dict()
    if args.format == "json":
        _emit(args, json.dumps(out, indent=2, sort_keys=True) + "\n")
    else:
        _emit(args, f"points {out['size']}\ndefect {out['defect']}\n"
                    f"all products in group {str(out['all_in_lambda']).lower()}\n")
    return EXIT_OK


def cmd_directions(args) -> int:
    session = _session(args)
    pts = _elements(args, session)
    classes = direction_classes(session.ore, pts)
    if args.format == "dot":
        _emit(args, direction_graph_dot(session.ore, pts))
    elif args.format == "json":
        out = {"classes": [[session.ore.format(pts[i]) for i in c] for c in classes],
               "lower_bound_on_valence": len(classes)}
        _emit(args, json.dumps(out, indent=2) + "\n")
    else:
        lines = [f"class {k}: " + ", ".join(session.ore.format(pts[i]) for i in c)
                 for k, c in enumerate(classes)]
        lines.append(f"valence at id is at least {len(classes)}")
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_suite(args) -> int:
    options = {}
    if args.name == "bmw":
        if args.preset:
            if args.preset not in B.PRESETS:
                raise UsageError(f"unknown preset {args.preset!r}")
            options["preset"] = args.preset
        elif args.presentation or args.config:
            options["presentation"] = _presentation(args)
    try:
        report = run_suite(args.name, seed=args.seed, count=args.count, **options)
    except UnknownSuiteError as exc:
        raise UsageError(exc.args[0]) from None
    if args.format == "text":
        lines = [f"suite {report['suite']} seed {report['seed']}: {report['cases']} cases, "
                 f"{report['failure_count']} failures"]
        lines += [f"  {f['instance']} {f['check']}: {f['detail']}" for f in report["failures"]]
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit(args, report_json(report))
    return EXIT_OK if report["failure_count"] == 0 else EXIT_FAILURE


def cmd_validate(args) -> int:
    p = _presentation(args)
    report = B.validate(p)
    if args.format == "json":
        _emit(args, json.dumps(report.as_dict(), indent=2) + "\n")
    else:
        lines = [f"valid {str(report.valid).lower()}"] + [f"  {m}" for m in report.problems]
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if report.valid else EXIT_FAILURE


def cmd_normal_form(args) -> int:
    p = _presentation(args)
    if args.level > 1:
        p = B.subdivide(p, args.level)
    nf = B.normal_form(p, B.parse_word(args.word))
    dist = nf.steps * p.edge_length
    _emit(args, f"{nf}\nlength {dist}\n")
    return EXIT_OK


def cmd_export_dot(args) -> int:
    if args.target == "bmw-ball":
        p = _presentation(args)
        if args.level > 1:
            p = B.subdivide(p, args.level)
        radius = args.radius if args.radius is not None else 1
        _emit(args, B.ball_to_dot(B.ball(p, Fraction(radius) * p.edge_length)))
        return EXIT_OK
    session = _session(args)
    _emit(args, direction_graph_dot(session.ore, _elements(args, session)))
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file describing the label system or presentation")
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--count", type=int, default=None, help="number of samples or cases")
    common.add_argument("--out", help="write the result to this file instead of standard output")
    common.add_argument("--format", choices=("text", "json", "dot"), default=None)

    parser = _Parser(prog="artifact", description="Ores, their extracted groups, and BMW towers.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", parents=[common], help="evaluate an expression")
    p.add_argument("expr")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("reduce", parents=[common], help="reduce a segment element, showing each step")
    p.add_argument("element")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("gromov", parents=[common], help="Gromov product (x, y)_p")
    p.add_argument("points", nargs="+")
    p.set_defaults(func=cmd_gromov)

    for name, func, text in (("hyp", cmd_hyp, "hyperbolicity defect of a sample"),
                             ("directions", cmd_directions, "direction classes at the identity")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("elements", nargs="*", help="elements; sampled from --seed when omitted")
        p.set_defaults(func=func)

    p = sub.add_parser("suite", parents=[common], help="run a property suite")
    p.add_argument("name", help=f"one of {', '.join(SUITES)}")
    p.add_argument("--preset", help=f"BMW preset: {', '.join(sorted(B.PRESETS))}")
    p.add_argument("--presentation", help="file holding a BMW presentation")
    p.set_defaults(func=cmd_suite)

    for name, func, text in (("validate", cmd_validate, "validate a BMW presentation"),
                             ("normal-form", cmd_normal_form, "normal form of a word in a BMW group")):
        p = sub.add_parser(name, parents=[common], help=text)
        if name == "normal-form":
            p.add_argument("word")
            p.add_argument("--level", type=int, default=1, help="subdivision level n")
        p.add_argument("--preset")
        p.add_argument("--presentation")
        p.set_defaults(func=func)

    p = sub.add_parser("export-dot", parents=[common], help="write a DOT graph")
    p.add_argument("target", choices=("bmw-ball", "direction-graph"))
    p.add_argument("--radius", type=int, default=None, help="ball radius in edge steps")
    p.add_argument("--level", type=int, default=1, help="subdivision level n")
    p.add_argument("--preset")
    p.add_argument("--presentation")
    p.add_argument("elements", nargs="*")
    p.set_defaults(func=cmd_export_dot)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.format is None:
            args.format = "json" if args.command == "suite" else "text"
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, KeyError) as exc:
        # domain errors: inadmissible inputs, invalid presentations, size caps
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
