"""``good`` command-line entry point.

Exit codes: 0 clean, 1 findings, 2 parse errors, 3 environment or I/O trouble.
Reports go to stdout, logs to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from good import checker, testgen, workflow
from good.model import MasterDocument, ViewKind
from good.parser import ParseDiagnostic, parse_master
from good.projector import project, write_views

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FINDINGS, EXIT_PARSE, EXIT_IO = 0, 1, 2, 3
CONFIG_NAME = "good.toml"

log = logging.getLogger("good")


class _IOFailure(Exception):
    pass


# --- output helpers ------------------------------------------------------


def _color_enabled(stream) -> bool:
    if os.environ.get("GOOD_NO_COLOR"):
        return False
    return hasattr(stream, "isatty") and stream.isatty()


def _style(text: str, severity: str, stream) -> str:
    if not _color_enabled(stream):
        return text
    code = {"error": "31", "warning": "33"}.get(severity, "36")
    return f"\x1b[{code}m{text}\x1b[0m"


def _emit(text: str) -> None:
    sys.stdout.write(text)
    sys.stdout.flush()


def _diag_line(path: str, code: str, severity: str, message: str, span) -> str:
    (line, col), _ = span
    return f"{path}:{line}:{col} {_style(code, severity, sys.stdout)} {message}\n"


def _one_line(text: str) -> str:
    return " ".join(text.split())


def _span_json(span) -> dict:
    (l1, c1), (l2, c2) = span
    return {"line": l1, "col": c1, "end_line": l2, "end_col": c2}


def _parse_diag_json(d: ParseDiagnostic) -> dict:
    return {"code": d.code, "severity": d.severity, "message": d.message, "span": _span_json(d.span)}


# --- config & input ------------------------------------------------------


def load_config(path: Optional[str]) -> dict:
    """Read ``good.toml`` (explicit path, else the working directory).  Missing default file means no config."""
    candidate = Path(path) if path else Path.cwd() / CONFIG_NAME
    if not candidate.exists():
        if path:
            raise _IOFailure(f"config file {path} not found")
        return {}
    try:
        data = tomllib.loads(candidate.read_text(encoding="utf-8"))
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise _IOFailure(f"cannot read config {candidate}: {exc}") from None
    return data.get("good", data)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise _IOFailure(f"cannot read {path}: {exc}") from None


def _parse_file(path: str) -> tuple[MasterDocument, list[ParseDiagnostic]]:
    return parse_master(_read(path), path)


def _has_parse_errors(diags: Sequence[ParseDiagnostic]) -> bool:
    return any(d.severity == "error" for d in diags)


# --- subcommands ---------------------------------------------------------


def cmd_project(args, config: dict) -> int:
    kind = ViewKind.parse(args.view or config.get("view", "external"))
    out_dir = Path(args.out or config.get("out", "build"))
    parsed = [(p, *_parse_file(p)) for p in args.paths]
    exit_code = EXIT_OK
    for path, doc, diags in parsed:
        for d in diags:
            _emit(_diag_line(path, d.code, d.severity, d.message, d.span))
        if _has_parse_errors(diags):
            exit_code = EXIT_PARSE
        try:
            for written in write_views(project(doc, kind), out_dir):
                log.info("wrote %s", written)
        except OSError as exc:
            raise _IOFailure(f"cannot write to {out_dir}: {exc}") from None
    return exit_code


def _obligation_json(ob: checker.Obligation) -> dict:
    return {
        "rule": ob.rule.value,
        "class": ob.subject[0],
        "member": ob.subject[1],
        "subspec": ob.subspec,
        "antecedents": [c.raw for c in ob.antecedents],
        "consequent": [c.raw for c in ob.consequent],
        "status": ob.status.value,
    }


def cmd_check(args, config: dict) -> int:
    fmt = args.format or config.get("format", "human")
    parse_errors = findings = False
    files = []
    for path in args.paths:
        doc, pdiags = _parse_file(path)
        diags = checker.check(doc)
        obligations = checker.document_obligations(doc)
        parse_errors |= _has_parse_errors(pdiags)
        findings |= any(d.is_error for d in diags)
        files.append((path, pdiags, diags, obligations))
    if fmt == "machine":
        report = {
            "schema_version": SCHEMA_VERSION,
            "kind": "good.check-report",
            "files": [
                {
                    "path": path,
                    "parse_diagnostics": [_parse_diag_json(d) for d in pdiags],
                    "diagnostics": [
                        {
                            "code": d.code,
                            "severity": d.severity,
                            "class": d.subject[0],
                            "member": d.subject[1],
                            "message": d.message,
                            "span": _span_json(d.span),
                        }
                        for d in diags
                    ],
                    "obligations": [_obligation_json(o) for o in obligations],
                }
                for path, pdiags, diags, obligations in files
            ],
        }
        _emit(json.dumps(report, indent=2, ensure_ascii=False) + "\n")
    else:
        for path, pdiags, diags, obligations in files:
            for d in pdiags:
                _emit(_diag_line(path, d.code, d.severity, d.message, d.span))
            for d in diags:
                _emit(_diag_line(path, d.code, d.severity, d.message, d.span))
            for ob in obligations:
                where = ob.subject[0] + (f"#{ob.subject[1]}" if ob.subject[1] else "")
                sub = f" @sub {ob.subspec!r}" if ob.subspec else ""
                _emit(f"{path}: {ob.rule.value} {where}{sub} [{ob.status.value}]\n")
                for c in ob.antecedents:
                    _emit(f"    assume {_one_line(c.raw)}\n")
                for c in ob.consequent:
                    _emit(f"    show   {_one_line(c.raw)}\n")
    if parse_errors:
        return EXIT_PARSE
    return EXIT_FINDINGS if findings else EXIT_OK


def cmd_gentests(args, config: dict) -> int:
    kind = ViewKind.parse(args.view or config.get("view", "external"))
    if kind is ViewKind.CODE:
        raise _UsageError("gen-tests works on the external or internal view")
    out_dir = Path(args.out or config.get("out", "build"))
    model_text = _read(args.model)
    doc, pdiags = _parse_file(args.path)
    for d in pdiags:
        _emit(_diag_line(args.path, d.code, d.severity, d.message, d.span))
    if _has_parse_errors(pdiags):
        return EXIT_PARSE
    view = project(doc, kind)
    model, mdiags = testgen.load_test_model(model_text, view)
    for d in mdiags:
        _emit(f"{args.model}:{d.line}:0 {_style(d.code, d.severity, sys.stdout)} {d.message}\n")
    if model is None or any(d.severity == "error" for d in mdiags):
        return EXIT_FINDINGS
    try:
        cases = testgen.enumerate_cases(model, view)
    except testgen.TestModelError as exc:
        _emit(f"{args.model}:0:0 {_style(exc.code, 'error', sys.stdout)} {exc.message}\n")
        return EXIT_FINDINGS
    stem = testgen.suite_class_name(model.subject)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / f"{stem}.java").write_text(testgen.emit_skeletons(cases, subject=model.subject), encoding="utf-8")
        (out_dir / f"{stem}.manifest.json").write_text(
            testgen.emit_manifest(cases, subject=model.subject, view=kind), encoding="utf-8"
        )
    except OSError as exc:
        raise _IOFailure(f"cannot write to {out_dir}: {exc}") from None
    for c in cases:
        _emit(f"{c.name}\n")
    return EXIT_OK


def cmd_workflow(args, config: dict) -> int:
    try:
        graph = workflow.load_graph(_read(args.graph)) if args.graph else workflow.default_graph()
        if args.action == "graph":
            _emit(graph.to_json())
            return EXIT_OK
        if args.state is None:
            raise _UsageError("workflow status needs a state file")
        states = workflow.load_state(graph, _read(args.state))
    except workflow.GraphError as exc:
        raise _UsageError(str(exc)) from None
    report = workflow.status(graph, states)
    fmt = args.format or config.get("format", "human")
    if fmt == "machine":
        _emit(json.dumps(report.to_dict(), indent=2) + "\n")
    else:
        for a in report.startable:
            _emit(f"startable    {a}\n")
        for a in report.in_progress:
            _emit(f"in progress  {a}\n")
        for a in report.revisitable:
            _emit(f"revisitable  {a}\n")
        for v in report.violations:
            _emit(_style("violation", "error", sys.stdout) + f"    {v.describe()}\n")
    return EXIT_FINDINGS if report.violations else EXIT_OK


# --- wiring --------------------------------------------------------------


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse would exit 2, which this tool reserves for parse errors
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_IO, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="good", description="Project, check and derive tests from GOOD-annotated sources.")
    p.add_argument("--config", help=f"configuration file (default: ./{CONFIG_NAME} if present)")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    pp = sub.add_parser("project", help="write External, Internal or Code views")
    pp.add_argument("paths", nargs="+")
    pp.add_argument("--view", choices=[k.value for k in ViewKind])
    pp.add_argument("--out")
    pp.set_defaults(func=cmd_project)

    pc = sub.add_parser("check", help="structural checks and refinement obligations")
    pc.add_argument("paths", nargs="+")
    pc.add_argument("--format", choices=["human", "machine"])
    pc.set_defaults(func=cmd_check)

    pg = sub.add_parser("gen-tests", help="derive test skeletons from a test model")
    pg.add_argument("path")
    pg.add_argument("--model", required=True)
    pg.add_argument("--view", choices=["external", "internal"])
    pg.add_argument("--out")
    pg.set_defaults(func=cmd_gentests)

    pw = sub.add_parser("workflow", help="lint project progress against the activity graph")
    pw.add_argument("action", choices=["status", "graph"])
    pw.add_argument("state", nargs="?")
    pw.add_argument("--graph", help="graph file (default: the shipped graph)")
    pw.add_argument("--format", choices=["human", "machine"])
    pw.set_defaults(func=cmd_workflow)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="good: %(message)s")
    try:
        config = load_config(args.config)
        return args.func(args, config)
    except _IOFailure as exc:
        print(f"good: {exc}", file=sys.stderr)
        return EXIT_IO
    except BrokenPipeError:
        # reader went away (e.g. piped into head); nothing left to report to
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_IO
    except (_UsageError, ValueError) as exc:
        print(f"good: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
