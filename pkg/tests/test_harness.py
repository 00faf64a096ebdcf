"""Pipelines, suite statistics, and the trivial-satisfiability shortcut."""

import json
from fractions import Fraction
from pathlib import Path

import pytest

from hornpair.domains import DomainTag
from hornpair.harness import (
    PipelinePass, PipelineSpec, check_trivial_sat, parse_pipeline,
    run_pipeline, run_suite,
)
from hornpair.parser import parse_clp
from hornpair.syntax import ChcError, system_to_clp
from hornpair.engine import transform_system


def test_parse_pipeline():
    spec = parse_pipeline("asp:oct,app:oct,solve", "poly", timeout=60)
    assert [str(p) for p in spec.passes] == ["asp:oct", "app:oct", "solve"]
    assert spec.timeout == 60


def test_parse_pipeline_default_domain():
    spec = parse_pipeline("app", "bds")
    assert spec.passes[0].tag is DomainTag.BDS


def test_parse_pipeline_solve_must_be_last():
    with pytest.raises(ChcError):
        parse_pipeline("solve,app:poly", "poly")


def test_check_trivial_sat_examples(fixtures_dir):
    s = parse_clp((fixtures_dir / "pipelining_x.clp").read_text())
    assert not check_trivial_sat(s)  # the input has constrained facts
    out = transform_system(s, "app", DomainTag.POLY)
    assert check_trivial_sat(out)
    t = parse_clp("p(X) :- X =< 0.\nfalse :- X >= 0, p(X).")
    assert not check_trivial_sat(t)
    assert check_trivial_sat(parse_clp(""))


def test_check_trivial_sat_atomless_goal():
    # a satisfiable goal without atoms cannot be modelled at all
    s = parse_clp("false :- X =< 0.")
    assert not check_trivial_sat(s)


def test_run_pipeline_trivially_sat_solve():
    s = parse_clp("p(X) :- q(X).\nq(X) :- p(X).")
    spec = parse_pipeline("solve", "poly")
    stats, _ = run_pipeline(spec, s, "triv")
    assert stats.verdict == "sat"
    assert stats.solver_time == 0.0


def test_run_pipeline_app_poly_pipeline(fixtures_dir):
    s = parse_clp((fixtures_dir / "pipelining_x.clp").read_text())
    spec = parse_pipeline("app:poly,solve", "poly")
    stats, out = run_pipeline(spec, s, "pipelining")
    assert stats.out_clauses == 3
    assert stats.verdict == "sat"
    assert stats.size_ratio == Fraction(1, 3)


def test_run_pipeline_no_solve_no_verdict(fixtures_dir):
    s = parse_clp((fixtures_dir / "pipelining_x.clp").read_text())
    spec = parse_pipeline("asp:oct", "poly")
    stats, _ = run_pipeline(spec, s, "p")
    assert stats.verdict is None
    assert stats.size_ratio is not None


def test_run_pipeline_timeout_aborts(fixtures_dir):
    s = parse_clp((fixtures_dir / "pipelining_x.clp").read_text())
    spec = PipelineSpec((PipelinePass("app", DomainTag.POLY),
                         PipelinePass("solve")), timeout=1e-9)
    stats, _ = run_pipeline(spec, s, "p")
    assert stats.verdict == "timeout"
    assert stats.size_ratio is None
    assert len(stats.pass_times) == 1  # solve never ran


def test_run_pipeline_unknown_without_solver(monkeypatch):
    monkeypatch.delenv("HORNPAIR_SOLVER", raising=False)
    s = parse_clp("p(X) :- X =< 0.\nfalse :- X >= 0, p(X).")
    stats, _ = run_pipeline(parse_pipeline("solve", "poly"), s, "p")
    assert stats.verdict == "unknown"


def test_pipeline_composition_matches_chained(fixtures_dir):
    # running asp then app in one pipeline equals running them separately
    s = parse_clp((fixtures_dir / "pipelining_x.clp").read_text())
    step1 = transform_system(s, "asp", DomainTag.BDS)
    step2 = transform_system(step1, "app", DomainTag.BDS)
    spec = parse_pipeline("asp:bds,app:bds", "poly")
    _, out = run_pipeline(spec, s, "p")
    assert system_to_clp(out) == system_to_clp(step2)


def test_run_suite_aggregates(fixtures_dir, tmp_path):
    spec = parse_pipeline("app:poly,solve", "poly", workdir=tmp_path)
    paths = [fixtures_dir / "pipelining_x.clp",
             fixtures_dir / "pipelining_x_both.clp"]
    report = run_suite(spec, paths)
    agg = report.aggregates()
    assert agg["InProbls"] == 2
    assert agg["OutProbls"] == 2
    assert agg["SolvedProbls"] == 2
    assert agg["OutCls"] == 3 + 6
    assert agg["SizeRatio"] == str(Fraction(9, 19))
    table = report.to_table()
    for col in ("InProbls", "OutProbls", "OutCls", "AvgTime1", "SizeRatio",
                "SolvedProbls", "AvgTime2"):
        assert col in table


def test_run_suite_timeout_excluded_from_aggregates(fixtures_dir):
    spec = PipelineSpec((PipelinePass("app", DomainTag.POLY),), timeout=1e-9)
    report = run_suite(spec, [fixtures_dir / "pipelining_x.clp"])
    agg = report.aggregates()
    assert agg["OutProbls"] == 0
    assert agg["SizeRatio"] is None
    assert agg["AvgTime1"] is None


def test_run_suite_empty_rejected():
    with pytest.raises(ChcError):
        run_suite(parse_pipeline("emit", "poly"), [])


def test_suite_json_deterministic(fixtures_dir):
    spec = parse_pipeline("app:poly,solve", "poly")
    paths = [fixtures_dir / "small_00.clp", fixtures_dir / "small_01.clp"]
    a = run_suite(spec, paths).to_json(include_times=False)
    b = run_suite(spec, paths).to_json(include_times=False)
    assert a == b
    doc = json.loads(a)
    assert {p["problem"] for p in doc["problems"]} == {"small_00",
                                                       "small_01"}


def test_stats_ratio_exact(fixtures_dir):
    spec = parse_pipeline("app:poly", "poly")
    report = run_suite(spec, [fixtures_dir / "pipelining_x.clp"])
    (stats,) = report.stats
    assert stats.size_ratio == Fraction(stats.out_clauses, stats.in_clauses)


def test_solver_invocation(fixtures_dir, tmp_path):
    # a stand-in solver script: answers sat to anything
    script = tmp_path / "fakesolver.sh"
    script.write_text("#!/bin/sh\necho sat\n")
    script.chmod(0o755)
    s = parse_clp("p(X) :- X =< 0.\nfalse :- X >= 0, p(X).")
    spec = PipelineSpec((PipelinePass("solve"),), timeout=10,
                        solver_cmd=f"{script} {{file}}", workdir=tmp_path)
    stats, _ = run_pipeline(spec, s, "probe")
    assert stats.verdict == "sat"
    assert (tmp_path / "probe.smt2").exists()


def test_emit_pass_writes_artifact(fixtures_dir, tmp_path):
    s = parse_clp((fixtures_dir / "small_00.clp").read_text())
    spec = PipelineSpec((PipelinePass("emit"),), workdir=tmp_path)
    run_pipeline(spec, s, "artifact")
    assert (tmp_path / "artifact.smt2").read_text().startswith(
        "(set-logic HORN)")
