"""Command-line front end.

Words use the syntax of the words module: a, b are generators, A, B their
inverses, caret exponents allowed ('a^2', 'a^-1'); '1' is the identity.
An endomorphism is written "a->WORD;b->WORD".

Exit codes: 0 on success, 2 when a budgeted computation is inconclusive
(so scripts can retry with a larger budget), 1 on input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Optional

from .engine import (
    brute_fix_oracle,
    classify_endo,
    fix,
    stable_image,
)
from .mofix import Budget, brute_mofix_oracle, mofix
from .twisted import brute_twisted_oracle, solve_conjugator_equation, solve_twisted
from .words import Endomorphism, format_word, parse_word

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_INCONCLUSIVE = 2

_STATUS_LABEL = {
    "Complete": "complete",
    "Inconclusive": "inconclusive",
    "AutFallbackIncomplete": "aut-fallback-incomplete",
}

_CLASS_LABEL = {
    "NonInjective": "non-injective",
    "Automorphism": "automorphism",
    "NonSurjectiveMono": "non-surjective-mono",
}


def parse_endo(text: str) -> Endomorphism:
    """Parse "a->WORD;b->WORD"; empty images must be written "1"."""
    parts = text.split(";")
    if len(parts) != 2:
        raise ValueError("an endomorphism must have the form 'a->WORD;b->WORD'")
    images = {}
    offset = 0
    for part, gen in zip(parts, ("a", "b")):
        prefix = f"{gen}->"
        if not part.startswith(prefix):
            raise ValueError(
                f"expected '{prefix}' at position {offset} in {text!r}"
            )
        body = part[len(prefix) :]
        if not body.strip():
            raise ValueError(
                f"empty image of '{gen}' at position {offset + len(prefix)}: "
                "write '1' for the identity"
            )
        try:
            images[gen] = parse_word(body)
        except ValueError as exc:
            raise ValueError(f"in the image of '{gen}': {exc}") from None
        offset += len(part) + 1
    return Endomorphism(images["a"], images["b"])


def _emit(report: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(report, indent=2))
        return
    for key, value in report.items():
        if isinstance(value, list):
            value = ", ".join(str(v) for v in value) if value else "(none)"
        print(f"{key}: {value}")


def _status_exit(status: str) -> int:
    return EXIT_INCONCLUSIVE if status == "Inconclusive" else EXIT_OK


def _budget(args: argparse.Namespace) -> Budget:
    return Budget(max_p=args.max_p, max_len=args.max_len)


def _cmd_classify(args) -> tuple[dict, int]:
    psi = parse_endo(args.endo)
    return {"classification": _CLASS_LABEL[classify_endo(psi)]}, EXIT_OK


def _cmd_fix(args) -> tuple[dict, int]:
    psi = parse_endo(args.endo)
    result = fix(psi, _budget(args))
    report = {
        "classification": _CLASS_LABEL[classify_endo(psi)],
        "basis": [format_word(w) for w in result.basis],
        "status": _STATUS_LABEL[result.status],
    }
    return report, _status_exit(result.status)


def _cmd_stable_image(args) -> tuple[dict, int]:
    psi = parse_endo(args.endo)
    result = stable_image(psi, _budget(args))
    report = {
        "classification": _CLASS_LABEL[classify_endo(psi)],
        "basis": [format_word(w) for w in result.basis],
        "status": _STATUS_LABEL[result.status],
    }
    return report, _status_exit(result.status)


def _cmd_mofix(args) -> tuple[dict, int]:
    psi = parse_endo(args.endo)
    report_obj = mofix(psi, _budget(args))
    report = {
        "classes": [format_word(c.rep) for c in report_obj.classes],
        "status": _STATUS_LABEL[report_obj.status],
    }
    if report_obj.witness is not None:
        p, x = report_obj.witness
        report["witness"] = {"p": p, "x": format_word(x)}
    return report, _status_exit(report_obj.status)


def _cmd_twisted(args) -> tuple[dict, int]:
    p, z = parse_word(args.word), parse_word(args.z)
    witness = solve_twisted(p, z, args.k)
    report: dict = {"solvable": witness is not None}
    if witness is not None:
        report["witness"] = {"w": format_word(witness), "k": args.k}
    return report, EXIT_OK


def _cmd_solve_eq5(args) -> tuple[dict, int]:
    p, z = parse_word(args.word), parse_word(args.z)
    hit = solve_conjugator_equation(p, z)
    report: dict = {"solvable": hit is not None}
    if hit is not None:
        w, k = hit
        report["witness"] = {"w": format_word(w), "k": k}
    return report, EXIT_OK


def _cmd_oracle_fix(args) -> tuple[dict, int]:
    psi = parse_endo(args.endo)
    found = brute_fix_oracle(psi, args.oracle_len)
    return {"fixed": [format_word(w) for w in found]}, EXIT_OK


def _cmd_oracle_mofix(args) -> tuple[dict, int]:
    psi = parse_endo(args.endo)
    found = sorted(
        brute_mofix_oracle(psi, args.oracle_len),
        key=lambda c: (len(c), c.letters_canonical),
    )
    return {"classes": [format_word(c.rep) for c in found]}, EXIT_OK


_COMMANDS = {
    "classify": (_cmd_classify, ("endo",)),
    "fix": (_cmd_fix, ("endo", "budget")),
    "stable-image": (_cmd_stable_image, ("endo", "budget")),
    "mofix": (_cmd_mofix, ("endo", "budget")),
    "twisted": (_cmd_twisted, ("word", "z", "k")),
    "solve-eq5": (_cmd_solve_eq5, ("word", "z")),
    "oracle-fix": (_cmd_oracle_fix, ("endo", "oracle-len")),
    "oracle-mofix": (_cmd_oracle_mofix, ("endo", "oracle-len")),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="f2fix",
        description="Fixed subgroups, maximal outer fixed points, stable "
        "images and twisted conjugacy for endomorphisms of F(a,b).",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, needs) in _COMMANDS.items():
        p = sub.add_parser(name)
        if "endo" in needs:
            p.add_argument("--endo", required=True, help="a->WORD;b->WORD")
        if "word" in needs:
            p.add_argument(
                "--word", required=True, help="the word P of the instance"
            )
        if "z" in needs:
            p.add_argument("--z", required=True, help="the word Z defining phi_Z")
        if "k" in needs:
            p.add_argument("--k", required=True, type=int, help="exponent k")
        if "budget" in needs:
            p.add_argument("--max-p", type=int, default=6)
            p.add_argument("--max-len", type=int, default=8)
        if "oracle-len" in needs:
            p.add_argument("--oracle-len", type=int, default=6)
        p.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    handler, _ = _COMMANDS[args.command]
    start = time.perf_counter()
    try:
        report, code = handler(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    report["timing_ms"] = round((time.perf_counter() - start) * 1000, 3)
    _emit(report, args.format)
    return code


if __name__ == "__main__":
    sys.exit(main())
