"""Command line entry point: ``azurep run`` and ``azurep suite``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .serialize import dumps, to_text
from .tasks import EXIT, run_problem


def load_problem(path: Path):
    """Parsed JSON, or an ``(report, code)`` pair describing why it failed."""
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        return None, ({"task": None, "status": "input_error", "result": {"error": f"cannot read {path}: {exc.strerror}"}}, 2)
    try:
        return json.loads(text), None
    except json.JSONDecodeError as exc:
        return None, ({"task": None, "status": "input_error",
                       "result": {"error": f"malformed JSON: {exc.msg}",
                                  "position": {"line": exc.lineno, "column": exc.colno}}}, 2)


def run_file(path: Path, args) -> tuple[dict, int]:
    problem, failure = load_problem(path)
    if failure is not None:
        return failure
    return run_problem(problem, seed=args.seed, max_points=args.max_points, max_group=args.max_group,
                       timing=not args.compare)


def run_suite(manifest: Path, args) -> tuple[dict, int]:
    data, failure = load_problem(manifest)
    if failure is not None:
        rep, code = failure
        rep["task"] = "suite"
        return rep, code
    entries = data.get("problems") if isinstance(data, dict) else data
    if not isinstance(entries, list) or not all(isinstance(e, str) for e in entries):
        return {"task": "suite", "status": "input_error",
                "result": {"error": "manifest must be a list of paths or {\"problems\": [...]}"}}, 2
    items, code = [], 0
    for entry in entries:
        path = (manifest.parent / entry) if not Path(entry).is_absolute() else Path(entry)
        rep, c = run_file(path, args)
        rep["file"] = entry
        items.append(rep)
        code = max(code, c)
    counts = {}
    for it in items:
        counts[it["status"]] = counts.get(it["status"], 0) + 1
    status = "ok" if code == 0 else next(s for s, c in EXIT.items() if c == code and s in counts)
    return {"task": "suite", "status": status, "result": {"total": len(items), "counts": counts}, "items": items}, code


def _emit(report: dict, args) -> None:
    text = to_text(report) if args.format == "text" else dumps(report)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--output", help="write the report here instead of standard output")
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.add_argument("--seed", type=int, default=None, help="override the problem's seed")
    p.add_argument("--max-points", type=int, default=None, dest="max_points")
    p.add_argument("--max-group", type=int, default=None, dest="max_group")
    p.add_argument("--compare", action="store_true", help="omit timing so reports are byte-identical")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="azurep", description="Run exact verification problems from JSON files.")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run one problem file")
    run.add_argument("--input", required=True, help="problem JSON file")
    _common(run)
    suite = sub.add_parser("suite", help="run every problem listed in a manifest")
    suite.add_argument("manifest")
    _common(suite)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        report, code = run_file(Path(args.input), args)
    else:
        report, code = run_suite(Path(args.manifest), args)
    _emit(report, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
