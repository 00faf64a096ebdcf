"""hornpair: constrained Horn clause transformations over numeric domains.

Parses CLP-style clause files, transforms them by abstraction-based
predicate pairing (app) or clause specialization (asp) parametric in the
abstract domain (universe, box, bds, oct, poly), and emits SMT-LIB HORN
scripts for external solvers.
"""

from .bounded import derives_false, least_model
from .domains import (
    AbstractValue, DomainTag, alpha, equivalent, format_value, is_empty,
    leq, lub, meet, project, to_constraint, widen,
)
from .engine import (
    PAIRING, SINGLETON, PartitionOp, StrategyError, app, asp, run_strategy,
    run_strategy_result, transform_system, unfold, unfold_all,
)
from .generator import random_constraint, random_system
from .harness import (
    PipelineSpec, RunStats, check_trivial_sat, parse_pipeline, run_pipeline,
    run_suite,
)
from .lp import LpProblem, LpResult, lp_solve
from .parser import ParseError, parse_clp
from .smtlib import emit_smtlib
from .syntax import (
    Atom, AtomicConstraint, ChcError, ChcSystem, Clause, Constraint, VarId,
    constrained_facts, normalize_clause, split_disequalities, system_to_clp,
)

__version__ = "0.1.0"
