"""Goal-directed logic-programming engine with query-relevance pruning,
exercised by a discrete household planning domain."""

from .engine import (
    Answer,
    BudgetExceeded,
    FlounderError,
    SolveConfig,
    SolveTimeout,
    solve,
    solve_all,
    solve_naf,
)
from .fixpoint import OracleUnsupported, fixpoint_answers, fixpoint_eval
from .parser import ParseError, parse_program, parse_query, parse_term_text
from .planner import (
    TASK_CATALOG,
    PlanOptions,
    Task,
    UnresolvableTask,
    domain_kb,
    encode_task,
    execute_plan,
    goal_satisfied,
    plan,
)
from .program import Clause, Literal, PredId, Program, format_clause, format_program
from .relevance import DepGraph, build_depgraph, prune_program, reachable, to_dot
from .terms import Const, Struct, Term, Var, apply_subst, format_term, unify, variant_of
from .world import (
    Action,
    IllegalAction,
    SchemaError,
    WorldState,
    apply_action,
    fluent_list,
    legal,
    load_scene,
    random_scene,
    state_to_facts,
)

__version__ = "0.1.0"

__all__ = [
    "Action",
    "Answer",
    "BudgetExceeded",
    "Clause",
    "Const",
    "DepGraph",
    "FlounderError",
    "IllegalAction",
    "Literal",
    "OracleUnsupported",
    "ParseError",
    "PlanOptions",
    "PredId",
    "Program",
    "SchemaError",
    "SolveConfig",
    "SolveTimeout",
    "Struct",
    "TASK_CATALOG",
    "Task",
    "Term",
    "UnresolvableTask",
    "Var",
    "WorldState",
    "apply_action",
    "apply_subst",
    "build_depgraph",
    "domain_kb",
    "encode_task",
    "execute_plan",
    "fixpoint_answers",
    "fixpoint_eval",
    "fluent_list",
    "format_clause",
    "format_program",
    "format_term",
    "goal_satisfied",
    "legal",
    "load_scene",
    "parse_program",
    "parse_query",
    "parse_term_text",
    "plan",
    "prune_program",
    "random_scene",
    "reachable",
    "solve",
    "solve_all",
    "solve_naf",
    "state_to_facts",
    "to_dot",
    "unify",
    "variant_of",
]
