"""Command line front end.

Exit codes: 0 passed, 1 a mathematical check failed (a witness is reported),
2 the input could not be read or has the wrong shape.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Callable

from .core import (
    AxiomError, StructuralError, Verdict, validate_functor, validate_groupoid, validate_natiso,
)
from .weakgroupoid import (
    check_presentation, from_crossed_module, from_skeletal, validate_crossed_module,
    validate_skeletal,
)
from .action import check_a2_a4
from .prequotient import InvariantViolation, check_principal, prequotient
from .morita import check_bibundle, compose_bibundles, flip_bibundle, is_biprincipal
from .document import Document, DocumentError, parse, serialize
from . import corpus

EXIT_PASSED, EXIT_FAILED, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    """Wraps anything that makes the input unusable, for exit code 2."""


def _examples() -> dict[str, Callable]:
    return {
        "pair-groupoid": lambda: corpus.groupoids()["pair-2"],
        "crossed-module": lambda: corpus.crossed_modules()["Z2-into-Z4"],
        "skeletal-cocycle": lambda: corpus.skeletal_data()["Z2-Z2-cocycle"],
        "skeletal-cocycle-presentation": lambda: corpus.presentations()["skeletal-Z2-Z2-cocycle"],
        "fibre-bibundle": lambda: corpus.stacky_bibundles()["fibre/pair-2"],
        "discrete-prequantization": lambda: corpus.prequantization_bibundle("Z/4-2Z/4"),
        "bz2-trivial-on-point": corpus.bz2_trivial_on_point,
        "free-z2-action": lambda: corpus.weak_actions()["strict/Z/2-on-2-free"],
        "identity-bibundle": lambda: corpus.stacky_bibundles()["identity/cm-identity"],
        "one-sided-bibundle": lambda: corpus.stacky_bibundles()["fibre/discrete-2"],
    }


EXAMPLE_NOTES = {
    "discrete-prequantization": "finite analogue: [Z/4 / 2Z/4] against pair(2) x [Z/4 / 2Z/4], not the smooth example",
}


def _load(path: str, kinds: tuple[str, ...] | None = None) -> Document:
    try:
        text = Path(path).read_text() if path != "-" else sys.stdin.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        doc = parse(text)
    except DocumentError as exc:
        raise InputError(f"{path}: {exc}") from None
    if kinds is not None and doc.kind not in kinds:
        raise InputError(f"{path}: expected kind {' or '.join(kinds)}, found {doc.kind}")
    return doc


def _write(value, out: str | None) -> None:
    text = serialize(value)
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _validate(doc: Document) -> Verdict:
    """The axioms of a document's kind."""
    v = doc.value
    if doc.kind == "groupoid":
        return validate_groupoid(v)
    if doc.kind == "functor":
        for label, G in (("source", v.dom), ("target", v.cod)):
            r = validate_groupoid(G)
            if not r:
                return Verdict.fail(f"{label}:{r.witness.law}", *r.witness.ids)
        return validate_functor(v)
    if doc.kind == "natiso":
        return validate_natiso(v)
    if doc.kind == "stacky-groupoid":
        return check_presentation(v)
    if doc.kind == "action":
        return check_a2_a4(v)
    if doc.kind == "bibundle":
        return check_bibundle(v)
    if doc.kind == "crossed-module":
        return validate_crossed_module(v)
    return validate_skeletal(v)


def _coherence(doc: Document) -> Verdict:
    """Structure checks followed by the higher coherence diagrams."""
    if doc.kind in ("crossed-module", "skeletal"):
        r = _validate(doc)
        if not r:
            return r
        sg = from_crossed_module(doc.value) if doc.kind == "crossed-module" else from_skeletal(doc.value)
        return check_presentation(sg)
    return _validate(doc)


# ---------------------------------------------------------------------------
# reports


def _report(args, command: str, verdict: Verdict, extra: dict | None = None) -> int:
    body = {"command": command, **verdict.as_dict(), **(extra or {})}
    if args.format == "json":
        sys.stdout.write(json.dumps(body, sort_keys=True, indent=2) + "\n")
    else:
        line = f"{command}: {'passed' if verdict else 'FAILED'}"
        if verdict.witness is not None:
            line += f" at {verdict.witness.law} {list(verdict.witness.ids)}"
        sys.stdout.write(line + "\n")
        for key, value in sorted({**verdict.details, **(extra or {})}.items()):
            sys.stdout.write(f"  {key}: {json.dumps(_plain_detail(value), sort_keys=True)}\n")
    return EXIT_PASSED if verdict else EXIT_FAILED


def _plain_detail(value):
    if isinstance(value, Verdict):
        return value.as_dict()
    return value


def _error(args, message: str) -> int:
    if getattr(args, "format", "human") == "json":
        sys.stdout.write(json.dumps({"error": message}, sort_keys=True) + "\n")
    sys.stderr.write(f"error: {message}\n")
    return EXIT_INPUT


# ---------------------------------------------------------------------------
# commands


def cmd_validate(args) -> int:
    doc = _load(args.file)
    return _report(args, f"validate {doc.kind}", _validate(doc))


def cmd_check(args) -> int:
    if args.what == "coherence":
        doc = _load(args.file)
        return _report(args, f"check coherence {doc.kind}", _coherence(doc))
    if args.what == "principal":
        doc = _load(args.file, ("action",))
        structure = check_a2_a4(doc.value)
        if not structure:
            return _report(args, "check principal", structure, {"stage": "action axioms"})
        verdict = check_principal(doc.value)
        return _report(args, "check principal", verdict)
    doc = _load(args.file, ("bibundle",))
    structure = check_bibundle(doc.value)
    if not structure:
        return _report(args, "check morita", structure, {"stage": "bibundle axioms"})
    return _report(args, "check morita", is_biprincipal(doc.value))


def cmd_prequotient(args) -> int:
    doc = _load(args.file, ("action",))
    structure = check_a2_a4(doc.value)
    if not structure:
        return _report(args, "prequotient", structure, {"stage": "action axioms"})
    pre = prequotient(doc.value)
    _write(pre.q, args.output)
    if args.output not in (None, "-"):
        return _report(args, "prequotient", Verdict.ok(objects=pre.carrier.n_objects,
                                                       arrows=pre.carrier.n_arrows))
    return EXIT_PASSED


def cmd_compose(args) -> int:
    first = _load(args.first, ("bibundle",))
    second = _load(args.second, ("bibundle",))
    for label, doc in (("first", first), ("second", second)):
        v = check_bibundle(doc.value)
        if not v:
            return _report(args, "compose", v, {"stage": f"{label} bibundle axioms"})
    composite = compose_bibundles(first.value, second.value)
    _write(composite, args.output)
    if args.output not in (None, "-"):
        return _report(args, "compose", Verdict.ok(objects=composite.X.n_objects,
                                                   arrows=composite.X.n_arrows))
    return EXIT_PASSED


def cmd_flip(args) -> int:
    doc = _load(args.file, ("bibundle",))
    v = check_bibundle(doc.value)
    if not v:
        return _report(args, "flip", v, {"stage": "bibundle axioms"})
    _write(flip_bibundle(doc.value), args.output)
    return EXIT_PASSED


def cmd_examples(args) -> int:
    table = _examples()
    if args.name is None:
        for name in sorted(table):
            note = EXAMPLE_NOTES.get(name)
            sys.stdout.write(name + (f"  ({note})" if note else "") + "\n")
        return EXIT_PASSED
    if args.name not in table:
        raise InputError(f"unknown example {args.name!r}; choose from {', '.join(sorted(table))}")
    if args.name in EXAMPLE_NOTES:
        sys.stderr.write(f"note: {EXAMPLE_NOTES[args.name]}\n")
    _write(table[args.name](), args.output)
    return EXIT_PASSED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="finstack", description="Finite stacky groupoids, actions and bibundles.")
    parser.add_argument("--format", choices=("human", "json"), default="human", help="report style")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "json"), default=argparse.SUPPRESS,
                        help="report style")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check the axioms of any document")
    p.add_argument("file")
    p.set_defaults(run=cmd_validate)

    p = sub.add_parser("check", parents=[common], help="coherence, principality or Morita checks")
    p.add_argument("what", choices=("coherence", "principal", "morita"))
    p.add_argument("file")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("prequotient", parents=[common], help="write the quotient map of an action as a functor document")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.set_defaults(run=cmd_prequotient)

    p = sub.add_parser("compose", parents=[common], help="compose two bibundles")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("-o", "--output")
    p.set_defaults(run=cmd_compose)

    p = sub.add_parser("flip", parents=[common], help="invert a bibundle")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.set_defaults(run=cmd_flip)

    p = sub.add_parser("examples", parents=[common], help="emit a built-in instance (no name: list them)")
    p.add_argument("name", nargs="?")
    p.add_argument("-o", "--output")
    p.set_defaults(run=cmd_examples)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_PASSED
    try:
        return args.run(args)
    except InputError as exc:
        return _error(args, str(exc))
    except (StructuralError, DocumentError) as exc:
        return _error(args, str(exc))
    except (AxiomError, InvariantViolation) as exc:
        verdict = exc.verdict if isinstance(exc, AxiomError) else Verdict.fail("invariant", message=str(exc))
        return _report(args, args.command, verdict)


if __name__ == "__main__":
    sys.exit(main())
