"""Pipeline sequencing, solver invocation, and suite statistics.

A pipeline is an ordered list of passes over one problem: transformation
passes (``asp:<domain>`` / ``app:<domain>``), an optional ``emit`` pass
writing the SMT-LIB artifact, and at most one final ``solve`` pass.  A pass
exceeding its timeout aborts the problem's remaining passes; the stats
record is always produced.  Suite reports mirror the usual benchmark
columns (InProbls, OutProbls, OutCls, AvgTime1, SizeRatio, SolvedProbls,
AvgTime2) with exact rational size ratios.

The external solver is optional: a system without constrained facts is
satisfiable outright (all-false interpretation), which `solve` uses as a
fast path before shelling out.
"""

from __future__ import annotations

import json
import os
import shlex
import subprocess
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .domains import DomainTag
from .engine import PassTimeout, transform_system
from .parser import parse_clp
from .smtlib import emit_smtlib
from .syntax import ChcError, ChcSystem, constrained_facts, system_to_clp

SOLVER_ENV = "HORNPAIR_SOLVER"


def check_trivial_sat(system: ChcSystem) -> bool:
    """Satisfiability shortcut: with no constrained facts the all-false
    interpretation models every non-goal clause, and goal clauses hold
    vacuously as long as each has at least one body atom."""
    if constrained_facts(system):
        return False
    from . import lp

    return all(g.body or not lp.satisfiable(g.constraint)
               for g in system.goal_clauses())


@dataclass(frozen=True)
class PipelinePass:
    kind: str  # "asp" | "app" | "emit" | "solve"
    tag: DomainTag | None = None

    def __str__(self) -> str:
        return f"{self.kind}:{self.tag.value}" if self.tag else self.kind


@dataclass(frozen=True)
class PipelineSpec:
    passes: tuple[PipelinePass, ...]
    timeout: float = 300.0
    solver_cmd: str | None = None
    workdir: Path | None = None


def parse_pipeline(text: str, default_tag: str = "poly",
                   timeout: float = 300.0,
                   solver_cmd: str | None = None,
                   workdir: Path | None = None) -> PipelineSpec:
    passes = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        name, _, tag = part.partition(":")
        if name in ("asp", "app"):
            passes.append(PipelinePass(name, DomainTag(tag or default_tag)))
        elif name in ("emit", "solve"):
            passes.append(PipelinePass(name))
        else:
            raise ChcError(f"unknown pass {part!r}")
    for i, p in enumerate(passes):
        if p.kind == "solve" and i != len(passes) - 1:
            raise ChcError("solve must be the last pass")
    return PipelineSpec(tuple(passes), timeout, solver_cmd, workdir)


@dataclass
class RunStats:
    problem: str
    in_clauses: int
    out_clauses: int | None = None
    size_ratio: Fraction | None = None
    pass_times: list[tuple[str, float]] = field(default_factory=list)
    verdict: str | None = None  # sat | unsat | unknown | timeout
    solver_time: float | None = None
    error: str | None = None

    @property
    def transform_time(self) -> float:
        return sum(t for name, t in self.pass_times
                   if name.split(":")[0] in ("asp", "app"))

    @property
    def completed(self) -> bool:
        return self.error is None and self.verdict != "timeout"

    def to_json(self, include_times: bool = True) -> dict:
        out = {
            "problem": self.problem,
            "in_clauses": self.in_clauses,
            "out_clauses": self.out_clauses,
            "size_ratio": None if self.size_ratio is None
            else str(self.size_ratio),
            "verdict": self.verdict,
            "error": self.error,
        }
        if include_times:
            out["pass_times"] = [[n, t] for n, t in self.pass_times]
            out["solver_time"] = self.solver_time
        return out


def _parse_solver_output(text: str) -> str:
    for line in text.splitlines():
        token = line.strip()
        if token in ("sat", "unsat", "unknown"):
            return token
    return "unknown"


def _run_solver(cmd: str, smt_path: Path, timeout: float) -> tuple[str, float]:
    argv = [a.replace("{file}", str(smt_path))
            for a in shlex.split(cmd)]
    if not any("{file}" in a for a in shlex.split(cmd)):
        argv.append(str(smt_path))
    t0 = time.monotonic()
    try:
        proc = subprocess.run(argv, capture_output=True, text=True,
                              timeout=timeout)
    except subprocess.TimeoutExpired:
        return "timeout", time.monotonic() - t0
    except FileNotFoundError as exc:
        raise ChcError(f"solver command not found: {exc}") from exc
    return _parse_solver_output(proc.stdout), time.monotonic() - t0


def run_pipeline(spec: PipelineSpec, system: ChcSystem,
                 problem: str = "problem") -> tuple[RunStats, ChcSystem]:
    """Execute the passes in order; returns the stats record and the final
    clause system (the input one if the first pass already failed)."""
    stats = RunStats(problem, in_clauses=len(system.clauses))
    current = system
    for p in spec.passes:
        t0 = time.monotonic()
        try:
            if p.kind in ("asp", "app"):
                current = transform_system(current, p.kind, p.tag,
                                           timeout=spec.timeout)
                stats.out_clauses = len(current.clauses)
            elif p.kind == "emit":
                workdir = spec.workdir or Path.cwd()
                workdir.mkdir(parents=True, exist_ok=True)
                (workdir / f"{problem}.smt2").write_text(
                    emit_smtlib(current), encoding="utf-8")
            elif p.kind == "solve":
                if check_trivial_sat(current):
                    stats.verdict = "sat"
                    stats.solver_time = 0.0
                else:
                    cmd = spec.solver_cmd or os.environ.get(SOLVER_ENV)
                    if cmd:
                        workdir = spec.workdir or Path.cwd()
                        workdir.mkdir(parents=True, exist_ok=True)
                        smt = workdir / f"{problem}.smt2"
                        smt.write_text(emit_smtlib(current),
                                       encoding="utf-8")
                        stats.verdict, stats.solver_time = _run_solver(
                            cmd, smt, spec.timeout)
                    else:
                        stats.verdict = "unknown"
        except PassTimeout:
            stats.pass_times.append((str(p), time.monotonic() - t0))
            stats.verdict = "timeout"
            break
        except Exception as exc:
            stats.pass_times.append((str(p), time.monotonic() - t0))
            stats.error = f"{type(exc).__name__}: {exc}"
            break
        stats.pass_times.append((str(p), time.monotonic() - t0))
    if stats.out_clauses is not None and stats.verdict != "timeout" \
            and stats.error is None:
        stats.size_ratio = Fraction(stats.out_clauses, stats.in_clauses)
    return stats, current


@dataclass
class SuiteReport:
    stats: list[RunStats]

    def aggregates(self) -> dict:
        transformed = [s for s in self.stats
                       if s.completed and s.out_clauses is not None]
        solved = [s for s in self.stats if s.verdict in ("sat", "unsat")]
        out_cls = sum(s.out_clauses for s in transformed)
        in_cls = sum(s.in_clauses for s in transformed)
        ratio = Fraction(out_cls, in_cls) if in_cls else None
        avg1 = (sum(s.transform_time for s in transformed) / len(transformed)
                if transformed else None)
        avg2 = (sum(s.solver_time or 0.0 for s in solved) / len(solved)
                if solved else None)
        return {
            "InProbls": len(self.stats),
            "OutProbls": len(transformed),
            "OutCls": out_cls,
            "AvgTime1": avg1,
            "SizeRatio": None if ratio is None else str(ratio),
            "SolvedProbls": len(solved),
            "AvgTime2": avg2,
        }

    def to_json(self, include_times: bool = True) -> str:
        agg = self.aggregates()
        if not include_times:
            agg["AvgTime1"] = None
            agg["AvgTime2"] = None
        doc = {
            "problems": [s.to_json(include_times) for s in self.stats],
            "aggregates": agg,
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    def to_table(self) -> str:
        agg = self.aggregates()
        cols = ["InProbls", "OutProbls", "OutCls", "AvgTime1", "SizeRatio",
                "SolvedProbls", "AvgTime2"]
        width = {c: max(len(c), 10) for c in cols}
        header = "  ".join(c.rjust(width[c]) for c in cols)
        vals = []
        for c in cols:
            v = agg[c]
            if v is None:
                vals.append("---".rjust(width[c]))
            elif isinstance(v, float):
                vals.append(f"{v:.2f}".rjust(width[c]))
            else:
                vals.append(str(v).rjust(width[c]))
        lines = [header, "  ".join(vals), ""]
        lines.append("  ".join(["problem".ljust(24), "in".rjust(5),
                                "out".rjust(5), "ratio".rjust(8),
                                "verdict".rjust(8)]))
        for s in self.stats:
            lines.append("  ".join([
                s.problem.ljust(24),
                str(s.in_clauses).rjust(5),
                ("-" if s.out_clauses is None
                 else str(s.out_clauses)).rjust(5),
                ("-" if s.size_ratio is None
                 else str(s.size_ratio)).rjust(8),
                (s.verdict or s.error or "-").rjust(8)[:48],
            ]))
        return "\n".join(lines) + "\n"


def run_suite(spec: PipelineSpec, paths: list[Path],
              jobs: int = 1) -> SuiteReport:
    """Run the pipeline over a set of problem files (sorted by name)."""
    paths = sorted(paths, key=lambda p: p.name)
    if not paths:
        raise ChcError("no problem files given")
    stats: list[RunStats] = []
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_run_one, spec, p) for p in paths]
            stats = [f.result() for f in futures]
    else:
        stats = [_run_one(spec, p) for p in paths]
    return SuiteReport(stats)


def _run_one(spec: PipelineSpec, path: Path) -> RunStats:
    try:
        system = parse_clp(path.read_text(encoding="utf-8"))
    except ChcError as exc:
        stats = RunStats(path.stem, in_clauses=0)
        stats.error = f"{type(exc).__name__}: {exc}"
        return stats
    stats, _ = run_pipeline(spec, system, problem=path.stem)
    return stats


def transform_file(text: str, strategy: str, tag: DomainTag,
                   timeout: float | None = None) -> str:
    system = parse_clp(text)
    return system_to_clp(transform_system(system, strategy, tag,
                                          timeout=timeout))
