"""Command line front end: ``treefree <command> [flags]`` writes a JSON report.

Commands: ``decide``, ``membership``, ``tl``, ``overlap``, ``amalgam-decide``.
Exit status 0 means the job ran (a negative verdict is still 0); failures
use the codes in :data:`EXIT_CODES`.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Any

from . import words
from .amalgam import AmalgamError, AmalgamSpec, decide_amalgam
from .bt_tree import Disjoint, axes_relation
from .pingpong import CertificateError, build_certificate, membership
from .reduction import (DEFAULT_MAX_ITERATIONS, DiscreteFree, OracleError, decide,
                        decide_with_restarts, overlap_from_lengths)
from .sl2 import DeterminantError, Mat2, cyclic_discrete, parse_matrix, translation_length
from .valued_field import ParseError, PrecisionLoss, make_field

EXIT_CODES = {
    "parse": 3,
    "field_mismatch": 4,
    "determinant": 5,
    "precision": 6,
    "amalgam": 7,
    "internal": 8,
}

COMMANDS = ("decide", "membership", "tl", "overlap", "amalgam-decide")


class FieldMismatch(ValueError):
    pass


class JobError(Exception):
    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


def _matrix(text: str | None, field, name: str) -> Mat2:
    if text is None:
        raise ParseError(f"missing operand {name}")
    # optional "qp:7@[[...]]" prefix pins the operand's field
    if "@" in text:
        desc, _, text = text.partition("@")
        if make_field(desc.strip()) != field:
            raise FieldMismatch(f"operand {name} is over {desc.strip()}, job is over "
                                f"{field.descriptor}")
    return parse_matrix(text, field)


def _verdict_json(verdict) -> dict:
    out: dict[str, Any] = {
        "discrete_free": verdict.discrete_free,
        "iterations": verdict.iterations,
        "trace": [s.to_json() for s in verdict.trace],
    }
    if isinstance(verdict, DiscreteFree):
        out["word_x"] = words.to_str(verdict.word_x)
        out["word_y"] = words.to_str(verdict.word_y)
    else:
        out["witness_word"] = words.to_str(verdict.witness_word)
        out["witness_kind"] = verdict.witness_kind
    return out


def run(job: dict) -> dict:
    """Execute one job description and return its JSON-ready report."""
    try:
        return _run(job)
    except FieldMismatch as exc:
        raise JobError("field_mismatch", str(exc)) from None
    except DeterminantError as exc:
        raise JobError("determinant", str(exc)) from None
    except ParseError as exc:
        raise JobError("parse", str(exc)) from None
    except PrecisionLoss as exc:
        raise JobError("precision", str(exc)) from None
    except AmalgamError as exc:
        raise JobError("amalgam", str(exc)) from None
    except (OracleError, CertificateError, RuntimeError) as exc:
        raise JobError("internal", str(exc)) from None


def _run(job: dict) -> dict:
    command = job.get("command")
    if command not in COMMANDS:
        raise ParseError(f"unknown command {command!r}")
    report: dict[str, Any] = {"command": command}
    max_it = job.get("max_iterations") or DEFAULT_MAX_ITERATIONS

    if command == "amalgam-decide":
        spec_doc = job.get("amalgam")
        if spec_doc is None:
            raise ParseError("amalgam-decide needs an amalgam spec")
        if isinstance(spec_doc, str):
            with open(spec_doc) as fh:
                spec_doc = json.load(fh)
        spec = AmalgamSpec.from_json(spec_doc)
        A, B = spec.parse_word(job.get("A") or ""), spec.parse_word(job.get("B") or "")
        verdict = decide_amalgam(spec, A, B, max_iterations=max_it)
        report.update(_verdict_json(verdict))
        report["lengths"] = {"A": spec.translation_length(A), "B": spec.translation_length(B)}
        if isinstance(verdict, DiscreteFree):
            report["X"], report["Y"] = spec.format(verdict.X), spec.format(verdict.Y)
        return report

    field = make_field(job.get("field") or "")
    report["field"] = field.descriptor
    A = _matrix(job.get("A"), field, "A")

    if command == "tl":
        ok, reason = cyclic_discrete(A)
        report.update({"translation_length": translation_length(A),
                       "kind": "hyperbolic" if translation_length(A) else "elliptic",
                       "cyclic_discrete": ok, "reason": reason})
        return report

    B = _matrix(job.get("B"), field, "B")
    if job.get("psl"):
        report["psl"] = True

    if command == "overlap":
        la, lb = translation_length(A), translation_length(B)
        lab, lainvb = translation_length(A @ B), translation_length(A.inv() @ B)
        report["lengths"] = {"A": la, "B": lb, "AB": lab, "AinvB": lainvb}
        report["min_product_length"] = min(lab, lainvb)
        if la and lb:
            case = overlap_from_lengths(la, lb, lab, lainvb)
            report["case"] = case.case
            if case.k is not None:
                report["k"] = case.k
            if case.delta is not None:
                report["delta"] = case.delta
            rel = axes_relation(A, B)
            if isinstance(rel, Disjoint):
                report["geometry"] = {"kind": "disjoint", "k": rel.k}
            else:
                delta = rel.delta if rel.delta != float("inf") else "inf"
                report["geometry"] = {"kind": "overlap", "delta": delta,
                                      "same_direction": rel.same_direction}
        else:
            report["case"] = "elliptic"
        return report

    if command == "decide":
        precision = job.get("precision")
        if precision is not None:
            rr = decide_with_restarts(A, B, int(precision), max_iterations=max_it)
            verdict = rr.verdict
            report["precision"] = {"initial": int(precision), "final": rr.precision,
                                   "restarts": rr.restarts, "consumed": rr.consumed,
                                   "attempts": list(rr.attempts)}
        else:
            verdict = decide(A, B, max_iterations=max_it)
        report.update(_verdict_json(verdict))
        if isinstance(verdict, DiscreteFree) and precision is None:
            report["certificate"] = build_certificate(verdict).to_json()
        return report

    # membership
    if job.get("words"):
        C = words.evaluate(words.parse(job["words"]), A, B, Mat2.__matmul__, Mat2.inv,
                           Mat2.identity(field))
    else:
        C = _matrix(job.get("C"), field, "C")
    verdict = decide(A, B, max_iterations=max_it)
    report["discrete_free"] = verdict.discrete_free
    if not isinstance(verdict, DiscreteFree):
        report["member"] = None
        report["reason"] = "generators do not certify a discrete free group"
        return report
    cert = build_certificate(verdict)
    ans = membership(cert, C, psl=bool(job.get("psl")))
    report["member"] = ans.member
    report["steps"] = ans.steps
    if ans.member:
        report["word"] = words.to_str(ans.word)
        report["word_xy"] = words.to_str(ans.word_xy)
    return report


def _job_from_args(args: argparse.Namespace) -> dict:
    job = {"command": args.command, "field": args.field, "A": args.A, "B": args.B,
           "C": args.C, "words": args.words, "psl": args.psl,
           "precision": args.precision, "amalgam": args.amalgam,
           "max_iterations": args.max_iterations}
    return {k: v for k, v in job.items() if v is not None and v is not False}


def _safe_run(job: dict) -> dict:
    try:
        return {"ok": True, "report": run(job)}
    except JobError as exc:
        return {"ok": False, "error": exc.kind, "message": str(exc)}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treefree",
        description="Decide discreteness and freeness of two-generated subgroups of SL2 "
                    "over a local field, and solve membership for certified groups.")
    parser.add_argument("command", nargs="?", choices=COMMANDS)
    parser.add_argument("--field", help="qp:<p> or fqt:<p>")
    parser.add_argument("--precision", type=int, help="use truncated digit expansions from M")
    parser.add_argument("--A", help="matrix [[a,b],[c,d]] (or an amalgam word)")
    parser.add_argument("--B", help="matrix [[a,b],[c,d]] (or an amalgam word)")
    parser.add_argument("--C", help="query matrix for membership")
    parser.add_argument("--words", help="membership query as a word in a b A B")
    parser.add_argument("--psl", action="store_true", help="compare up to sign")
    parser.add_argument("--amalgam", help="amalgam spec JSON file")
    parser.add_argument("--max-iterations", type=int)
    parser.add_argument("--batch", help="JSON file with a list of jobs, run in parallel")
    parser.add_argument("--workers", type=int, default=None)
    parser.add_argument("--json-out", help="write the report here instead of stdout")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        stream=sys.stderr)
    status = 0
    if args.batch:
        try:
            with open(args.batch) as fh:
                jobs = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            print(f"error: cannot read batch file: {exc}", file=sys.stderr)
            return EXIT_CODES["parse"]
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            out: Any = list(pool.map(_safe_run, jobs))
    else:
        if args.command is None:
            parser.error("a command is required unless --batch is given")
        try:
            out = run(_job_from_args(args))
        except JobError as exc:
            print(f"error ({exc.kind}): {exc}", file=sys.stderr)
            return EXIT_CODES[exc.kind]
    text = json.dumps(out, indent=2, sort_keys=True) + "\n"
    if args.json_out:
        with open(args.json_out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
