"""Command-line front end.

    hornpair run --pipeline "asp:oct,app:oct,solve" [options] files...
    hornpair transform --strategy app --domain poly file.clp
    hornpair emit file.clp
    hornpair stats report.json

Exit code 0 on completion, 2 on any pass or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .domains import DomainTag
from .harness import (
    PipelineSpec, SuiteReport, RunStats, parse_pipeline, run_suite,
)
from .engine import transform_system
from .parser import parse_clp
from .smtlib import emit_smtlib
from .syntax import ChcError, system_to_clp


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hornpair")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a pass pipeline over problems")
    run.add_argument("--pipeline", required=True,
                     help='e.g. "asp:oct,app:oct,solve"')
    run.add_argument("--domain-default", default="poly",
                     choices=[t.value for t in DomainTag])
    run.add_argument("--timeout", type=float, default=300.0,
                     help="per-pass timeout in seconds")
    run.add_argument("--solver", default=None,
                     help="external solver command; {file} is substituted")
    run.add_argument("--out", type=Path, default=None,
                     help="write the JSON report here")
    run.add_argument("--workdir", type=Path, default=None,
                     help="directory for emitted SMT-LIB artifacts")
    run.add_argument("--jobs", type=int, default=1)
    run.add_argument("files", nargs="+", type=Path)

    tr = sub.add_parser("transform", help="apply one strategy to a file")
    tr.add_argument("--strategy", required=True, choices=["asp", "app"])
    tr.add_argument("--domain", default="poly",
                    choices=[t.value for t in DomainTag])
    tr.add_argument("--timeout", type=float, default=300.0)
    tr.add_argument("-o", "--output", type=Path, default=None)
    tr.add_argument("file", type=Path)

    em = sub.add_parser("emit", help="emit SMT-LIB HORN for a file")
    em.add_argument("-o", "--output", type=Path, default=None)
    em.add_argument("file", type=Path)

    st = sub.add_parser("stats", help="render the table of a JSON report")
    st.add_argument("report", type=Path)
    return ap


def _write(text: str, output: Path | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text, encoding="utf-8")


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            spec = parse_pipeline(args.pipeline, args.domain_default,
                                  args.timeout, args.solver, args.workdir)
            report = run_suite(spec, list(args.files), jobs=args.jobs)
            if args.out:
                args.out.write_text(report.to_json(), encoding="utf-8")
            sys.stdout.write(report.to_table())
            if any(s.error for s in report.stats):
                return 2
            return 0
        if args.command == "transform":
            system = parse_clp(args.file.read_text(encoding="utf-8"))
            out = transform_system(system, args.strategy,
                                   DomainTag(args.domain),
                                   timeout=args.timeout)
            _write(system_to_clp(out), args.output)
            return 0
        if args.command == "emit":
            system = parse_clp(args.file.read_text(encoding="utf-8"))
            _write(emit_smtlib(system), args.output)
            return 0
        if args.command == "stats":
            doc = json.loads(args.report.read_text(encoding="utf-8"))
            report = SuiteReport([_stats_from_json(p)
                                  for p in doc["problems"]])
            sys.stdout.write(report.to_table())
            return 0
    except ChcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


def _stats_from_json(doc: dict) -> RunStats:
    from fractions import Fraction

    stats = RunStats(doc["problem"], doc["in_clauses"])
    stats.out_clauses = doc.get("out_clauses")
    ratio = doc.get("size_ratio")
    stats.size_ratio = None if ratio is None else Fraction(ratio)
    stats.verdict = doc.get("verdict")
    stats.error = doc.get("error")
    stats.pass_times = [tuple(x) for x in doc.get("pass_times", [])]
    stats.solver_time = doc.get("solver_time")
    return stats


if __name__ == "__main__":
    raise SystemExit(main())
