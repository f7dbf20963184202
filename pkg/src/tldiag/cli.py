"""Command-line interface: ``tldiag <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .admissible import NotAdmissible, admissibility_violation, classify_diagram, length
from .algebra import AlgebraElement, theta_diagram
from .coxeter import CoxeterSpec, Family, NotFC, NotReduced, enumerate_fc
from .diagrams import Diagram
from .factor import factorize_trace
from .heaps import heap_from_word
from .render import render_ascii, render_svg
from .verify import CHECKS, run_verify


def _spec(args) -> CoxeterSpec:
    return CoxeterSpec(Family(args.family), args.n)


def _parse_word(text: str) -> tuple[int, ...]:
    text = text.strip()
    if text.startswith("["):
        return tuple(int(x) for x in json.loads(text))
    return tuple(int(x) for x in text.replace(",", " ").split())


def _load_diagram(src: str) -> Diagram:
    """A diagram from inline JSON, a file path, or ``-`` for stdin."""
    if src == "-":
        text = sys.stdin.read()
    elif src.lstrip().startswith("{"):
        text = src
    else:
        text = Path(src).read_text()
    return Diagram.from_json(json.loads(text))


def _emit(args, payload, text: str) -> None:
    if args.json:
        print(json.dumps(payload, ensure_ascii=False))
    else:
        print(text)


def _maybe_svg(args, d: Diagram) -> None:
    if getattr(args, "svg", None):
        Path(args.svg).write_text(render_svg(d))


def cmd_fc_enum(args) -> int:
    spec = _spec(args)
    levels = enumerate_fc(spec, args.max_len)
    payload = {"spec": spec.to_json(), "counts": [len(x) for x in levels], "words": [[list(w) for w in x] for x in levels]}
    lines = [f"{spec}: FC elements by length {payload['counts']} (total {sum(payload['counts'])})"]
    if args.words:
        for ln, ws in enumerate(levels):
            lines.extend(f"{ln}: {' '.join(map(str, w)) or 'e'}" for w in ws)
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_map(args) -> int:
    spec = _spec(args)
    w = _parse_word(args.word)
    d = theta_diagram(w, spec)
    _maybe_svg(args, d)
    _emit(args, d.to_json(), render_ascii(d))
    return 0


def cmd_factor(args) -> int:
    d = _load_diagram(args.diagram)
    f = factorize_trace(d, verify=True)
    lines = [f"word: {' '.join(map(str, f.word)) or 'e'}"]
    for q, st in enumerate(f.steps, 1):
        where = st.edge.describe() if st.edge is not None else ""
        lines.append(f"  step {q}: strip {st.generator} via {st.note} {where}".rstrip())
    _emit(args, f.to_json(), "\n".join(lines))
    return 0


def cmd_multiply(args) -> int:
    a, b = _load_diagram(args.a), _load_diagram(args.b)
    prod = AlgebraElement.from_diagram(a) * AlgebraElement.from_diagram(b)
    text = "\n".join(f"({c}) ·\n{render_ascii(d)}" for d, c in prod.items())
    if prod.items():
        _maybe_svg(args, prod.items()[0][0])
    _emit(args, prod.to_json(), text)
    return 0


def cmd_classify(args) -> int:
    d = _load_diagram(args.diagram)
    msg = admissibility_violation(d)
    if msg is not None:
        raise NotAdmissible(msg)
    cls = classify_diagram(d)
    _emit(args, cls.to_json(), json.dumps(cls.to_json()))
    return 0


def cmd_length(args) -> int:
    d = _load_diagram(args.diagram)
    msg = admissibility_violation(d)
    if msg is not None:
        raise NotAdmissible(msg)
    ln = length(d)
    _emit(args, {"length": ln}, str(ln))
    return 0


def cmd_verify(args) -> int:
    spec = _spec(args)
    only = args.only.split(",") if args.only else None
    report = run_verify(spec, args.max_len, seed=args.seed, jobs=args.jobs, corrupt=args.negative_control, only=only)
    _emit(args, report.to_json(), "\n".join(report.lines()))
    return 0 if report.passed else 1


def cmd_render(args) -> int:
    if args.word is not None:
        spec = _spec(args)
        w = _parse_word(args.word)
        if args.heap:
            print(render_ascii(heap_from_word(w, spec)))
            return 0
        d = theta_diagram(w, spec)
    else:
        d = _load_diagram(args.diagram)
    if args.svg:
        _maybe_svg(args, d)
    else:
        print(render_ascii(d))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", choices=["B", "D"], default="B")
    common.add_argument("--n", type=int, default=2)
    common.add_argument("--max-len", type=int, default=8)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--svg", metavar="PATH", help="also write an SVG rendering")

    p = argparse.ArgumentParser(prog="tldiag", description="Decorated diagram algebras of affine types B and D.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("fc-enum", parents=[common], help="enumerate FC elements")
    s.add_argument("--words", action="store_true", help="list the words")
    s.set_defaults(func=cmd_fc_enum)

    s = sub.add_parser("map", parents=[common], help="diagram of an FC word")
    s.add_argument("word", help='e.g. "0 2 1" or "[0,2,1]"')
    s.set_defaults(func=cmd_map)

    s = sub.add_parser("factor", parents=[common], help="factor an admissible diagram")
    s.add_argument("diagram", help="diagram JSON, file path or -")
    s.set_defaults(func=cmd_factor)

    s = sub.add_parser("multiply", parents=[common], help="product of two diagrams")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_multiply)

    s = sub.add_parser("classify", parents=[common], help="family of an admissible diagram")
    s.add_argument("diagram")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("length", parents=[common], help="length of an admissible diagram")
    s.add_argument("diagram")
    s.set_defaults(func=cmd_length)

    s = sub.add_parser("verify", parents=[common], help="run the verification suite")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--only", help="comma separated subset of: " + ",".join(CHECKS))
    s.add_argument("--negative-control", action="store_true", help="corrupt a generator; the suite must fail")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("render", parents=[common], help="ASCII or SVG rendering")
    s.add_argument("diagram", nargs="?", help="diagram JSON, file path or -")
    s.add_argument("--word", help="render the diagram (or heap) of this word instead")
    s.add_argument("--heap", action="store_true", help="with --word, draw the heap")
    s.set_defaults(func=cmd_render)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "render" and args.diagram is None and args.word is None:
        parser.error("render needs a diagram or --word")
    try:
        return args.func(args)
    except (NotFC, NotReduced, NotAdmissible, ValueError, KeyError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
