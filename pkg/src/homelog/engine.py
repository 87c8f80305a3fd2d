"""Goal-directed SLDNF solver with loop detection and resource budgets.

Search is depth-first, clauses are tried in source order, body literals
left to right.  A positive call that is a variant of an ancestor call on
the current derivation path fails (loop check), which makes the kind of
left recursion found in family-tree rule sets terminate.  Negation as
failure runs the positive atom in a sub-derivation on a slice of the
remaining step budget; non-ground negated calls flounder loudly.

Answers stream lazily from a generator.  The stream ends in one of three
ways: normal exhaustion, `BudgetExceeded`, or `SolveTimeout` (the latter
two raised out of the generator, never silently swallowed).
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Set, Tuple

from .parser import parse_program
from .program import Clause, Literal, PredId, Program, pred_of
from .terms import (
    Const,
    Struct,
    Subst,
    Term,
    Var,
    apply_subst,
    format_term,
    rename_apart_term,
    term_vars,
    undo_trail,
    unify_in_place,
)

__all__ = [
    "SolveConfig",
    "Answer",
    "BudgetExceeded",
    "SolveTimeout",
    "FlounderError",
    "PRELUDE",
    "PRELUDE_PREDS",
    "solve",
    "solve_all",
    "solve_naf",
]


class BudgetExceeded(Exception):
    """Step budget or depth cap exhausted before the search finished."""


class SolveTimeout(Exception):
    """Wall-clock limit hit before the search finished."""


class FlounderError(Exception):
    """A negated call (or sorted insertion) was selected while non-ground."""


@dataclass(frozen=True)
class SolveConfig:
    max_depth: int = 10_000
    step_budget: int = 5_000_000
    occurs_check: bool = True
    loop_check: bool = True
    wall_timeout: Optional[float] = None
    trace: Optional[Callable[[str], None]] = None


@dataclass(frozen=True)
class Answer:
    """Bindings for the query's variables, in first-occurrence order.

    Every value is either ground or contains only presentation variables
    (_A, _B, ...); solver-internal names never leak.
    """

    bindings: Dict[str, Term] = field(default_factory=dict)
    order: Tuple[str, ...] = ()

    def __str__(self) -> str:
        if not self.order:
            return "yes"
        return ", ".join(f"{v} = {format_term(self.bindings[v])}" for v in self.order)


_PRELUDE_TEXT = """\
member(X, [X|_]).
member(X, [_|T]) :- member(X, T).
subset([], _).
subset([H|T], L) :- member(H, L), subset(T, L).
"""

PRELUDE: Program = parse_program(_PRELUDE_TEXT)

_INSERT_SORTED = PredId("insert_sorted", 3)

# Predicates the solver provides when the program does not define them.
PRELUDE_PREDS: Tuple[PredId, ...] = (
    PredId("member", 2),
    PredId("subset", 2),
    _INSERT_SORTED,
)


class _Budget:
    """Shared step counter with a stack of limits for naf slices."""

    __slots__ = ("used", "limits", "deadline")

    def __init__(self, limit: int, deadline: Optional[float]):
        self.used = 0
        self.limits = [limit]
        self.deadline = deadline

    def step(self) -> None:
        self.used += 1
        if self.used > self.limits[-1]:
            raise BudgetExceeded(f"step budget exhausted after {self.used} steps")
        if self.deadline is not None and self.used & 0xFF == 0:
            if time.monotonic() > self.deadline:
                raise SolveTimeout("wall-clock limit reached")

    def push_half(self) -> None:
        remaining = self.limits[-1] - self.used
        self.limits.append(self.used + max(1, remaining // 2))

    def pop(self) -> None:
        self.limits.pop()


def _cyclic_preds(index: Dict[PredId, Tuple[Clause, ...]]) -> Set[PredId]:
    """Predicates that sit on a cycle of the program's call graph.

    Only these can ever meet a same-predicate ancestor on a derivation
    path, so the variant loop check is restricted to them.
    """
    adj: Dict[PredId, Set[PredId]] = {}
    for pred, clauses in index.items():
        succ = adj.setdefault(pred, set())
        for c in clauses:
            for lit in c.body:
                if not lit.is_builtin:
                    succ.add(lit.pred)
    cyclic: Set[PredId] = set()
    for start in adj:
        seen: Set[PredId] = set()
        stack = list(adj[start])
        while stack:
            p = stack.pop()
            if p == start:
                cyclic.add(start)
                break
            if p in seen:
                continue
            seen.add(p)
            stack.extend(adj.get(p, ()))
    return cyclic


_FAILED = object()


class _Solver:
    def __init__(
        self,
        program: Program,
        goals: Sequence[Literal],
        config: SolveConfig,
        budget: Optional[_Budget] = None,
        lookup: Optional[Dict[PredId, Tuple[Clause, ...]]] = None,
        cyclic: Optional[Set[PredId]] = None,
        fresh: Optional[Iterator[int]] = None,
    ):
        if not goals:
            raise ValueError("empty goal list")
        self.program = program
        self.config = config
        self.goals = list(goals)
        deadline = (
            time.monotonic() + config.wall_timeout
            if config.wall_timeout is not None
            else None
        )
        self.budget = budget if budget is not None else _Budget(config.step_budget, deadline)
        self.fresh = fresh if fresh is not None else itertools.count()
        self.bindings: Subst = {}
        self.trail: List[str] = []
        if lookup is None:
            lookup = dict(program.index)
            for pred, clauses in PRELUDE.index.items():
                if pred not in lookup:
                    lookup[pred] = clauses
        self.lookup = lookup
        self.native_insert = _INSERT_SORTED not in program.index
        if cyclic is None:
            cyclic = _cyclic_preds(self.lookup) if config.loop_check else set()
        self.cyclic = cyclic
        seen: Dict[str, None] = {}
        for lit in goals:
            for name in term_vars(lit.atom):
                seen.setdefault(name)
        self.query_vars: Tuple[str, ...] = tuple(seen)
        self.seen_answers: Set[Tuple[str, ...]] = set()

    # -- derivation machinery ------------------------------------------------

    def run(self) -> Iterator[Answer]:
        # Goal stack nodes are (literal, ancestors, depth, next); ancestors
        # is a linked list of (pred, variant-key, parent) frames.
        cur = None
        for lit in reversed(self.goals):
            cur = (lit, None, 0, cur)
        cps: List[list] = []
        cfg = self.config
        while True:
            if cur is None:
                ans = self._answer()
                if ans is not None:
                    yield ans
                cur = self._backtrack(cps)
                if cur is _FAILED:
                    return
                continue
            lit, anc, depth, nxt = cur
            ok: object
            if lit.negated:
                self.budget.step()
                ok = nxt if self._naf(lit) else _FAILED
            elif lit.is_builtin:
                self.budget.step()
                ok = nxt if self._builtin(lit) else _FAILED
            else:
                pred = lit.pred
                if self.native_insert and pred == _INSERT_SORTED:
                    self.budget.step()
                    ok = nxt if self._insert_sorted(lit.atom) else _FAILED
                else:
                    if depth >= cfg.max_depth:
                        raise BudgetExceeded(f"derivation depth cap {cfg.max_depth} exceeded")
                    key = None
                    if cfg.loop_check and pred in self.cyclic:
                        key = self._call_key(lit.atom)
                        if self._seen_on_path(anc, pred, key):
                            self.budget.step()
                            cur = self._backtrack(cps)
                            if cur is _FAILED:
                                return
                            continue
                    if cfg.trace is not None:
                        cfg.trace("  " * depth + "call " + format_term(apply_subst(self.bindings, lit.atom)))
                    clauses = self.lookup.get(pred, ())
                    cp = [cur, clauses, 0, len(self.trail), key]
                    cps.append(cp)
                    ok = self._try_clauses(cp)
                    if ok is _FAILED:
                        cps.pop()
            if ok is _FAILED:
                cur = self._backtrack(cps)
                if cur is _FAILED:
                    return
            else:
                cur = ok

    def _backtrack(self, cps: List[list]) -> object:
        while cps:
            nxt = self._try_clauses(cps[-1])
            if nxt is not _FAILED:
                return nxt
            cps.pop()
        undo_trail(self.bindings, self.trail, 0)
        return _FAILED

    def _try_clauses(self, cp: list) -> object:
        node, clauses, _, mark, key = cp
        lit, anc, depth, nxt = node
        occ = self.config.occurs_check
        while cp[2] < len(clauses):
            clause = clauses[cp[2]]
            cp[2] += 1
            undo_trail(self.bindings, self.trail, mark)
            self.budget.step()
            mapping: Dict[str, str] = {}
            head = rename_apart_term(clause.head, mapping, self.fresh)
            if not unify_in_place(lit.atom, head, self.bindings, self.trail, occ):
                continue
            frame = (lit.pred, key, anc)
            out = nxt
            for blit in reversed(clause.body):
                atom = rename_apart_term(blit.atom, mapping, self.fresh)
                out = (Literal(atom, blit.negated), frame, depth + 1, out)
            return out
        undo_trail(self.bindings, self.trail, mark)
        return _FAILED

    def _seen_on_path(self, anc, pred: PredId, key: str) -> bool:
        while anc is not None:
            apred, akey, anc = anc
            if apred == pred and akey == key:
                return True
        return False

    def _call_key(self, t: Term) -> str:
        parts: List[str] = []
        mapping: Dict[str, str] = {}
        self._call_key_walk(t, mapping, parts)
        return "".join(parts)

    def _call_key_walk(self, t: Term, mapping: Dict[str, str], parts: List[str]) -> None:
        bindings = self.bindings
        while isinstance(t, Var):
            nxt = bindings.get(t.name)
            if nxt is None:
                break
            t = nxt
        if isinstance(t, Var):
            new = mapping.get(t.name)
            if new is None:
                new = f"_{len(mapping)}"
                mapping[t.name] = new
            parts.append(new)
        elif isinstance(t, Const):
            parts.append(f"i{t.value}" if isinstance(t.value, int) else t.value)
        else:
            parts.append(t.functor)
            parts.append("(")
            for i, a in enumerate(t.args):
                if i:
                    parts.append(",")
                self._call_key_walk(a, mapping, parts)
            parts.append(")")

    # -- deterministic goals ---------------------------------------------------

    def _builtin(self, lit: Literal) -> bool:
        atom = lit.atom
        assert isinstance(atom, Struct)
        lhs, rhs = atom.args
        if atom.functor == "=":
            mark = len(self.trail)
            if unify_in_place(lhs, rhs, self.bindings, self.trail, self.config.occurs_check):
                return True
            undo_trail(self.bindings, self.trail, mark)
            return False
        # \=: succeeds exactly when the two sides do not unify
        mark = len(self.trail)
        ok = unify_in_place(lhs, rhs, self.bindings, self.trail, self.config.occurs_check)
        undo_trail(self.bindings, self.trail, mark)
        return not ok

    def _naf(self, lit: Literal) -> bool:
        atom = apply_subst(self.bindings, lit.atom)
        if term_vars(atom):
            raise FlounderError(
                f"negated call not ground: not {format_term(atom)}"
            )
        self.budget.push_half()
        try:
            sub = _Solver(
                self.program,
                [Literal(atom)],
                self.config,
                budget=self.budget,
                lookup=self.lookup,
                cyclic=self.cyclic,
                fresh=self.fresh,
            )
            for _ in sub.run():
                return False
            return True
        finally:
            self.budget.pop()

    def _insert_sorted(self, atom: Term) -> bool:
        assert isinstance(atom, Struct)
        item = apply_subst(self.bindings, atom.args[0])
        lst = apply_subst(self.bindings, atom.args[1])
        if term_vars(item) or term_vars(lst):
            raise FlounderError("insert_sorted/3 needs ground item and list")
        items: List[Term] = []
        tail = lst
        while isinstance(tail, Struct) and tail.functor == "." and len(tail.args) == 2:
            items.append(tail.args[0])
            tail = tail.args[1]
        if tail != Const("[]"):
            raise FlounderError("insert_sorted/3 needs a proper list")
        if item not in items:
            text = format_term(item)
            at = len(items)
            for i, existing in enumerate(items):
                if format_term(existing) > text:
                    at = i
                    break
            items.insert(at, item)
        out: Term = Const("[]")
        for x in reversed(items):
            out = Struct(".", (x, out))
        return unify_in_place(atom.args[2], out, self.bindings, self.trail, self.config.occurs_check)

    # -- answers ---------------------------------------------------------------

    def _answer(self) -> Optional[Answer]:
        free: Dict[str, Term] = {}
        values: Dict[str, Term] = {}
        for name in self.query_vars:
            values[name] = self._present(apply_subst(self.bindings, Var(name)), free)
        key = tuple(format_term(values[n]) for n in self.query_vars)
        if key in self.seen_answers:
            return None
        self.seen_answers.add(key)
        return Answer(values, self.query_vars)

    def _present(self, t: Term, free: Dict[str, Term]) -> Term:
        if isinstance(t, Var):
            got = free.get(t.name)
            if got is None:
                i = len(free)
                label = chr(ord("A") + i) if i < 26 else f"V{i}"
                got = Var(f"_{label}")
                free[t.name] = got
            return got
        if isinstance(t, Struct):
            return Struct(t.functor, tuple(self._present(a, free) for a in t.args))
        return t


def solve(
    program: Program,
    goals: Sequence[Literal],
    config: Optional[SolveConfig] = None,
) -> Iterator[Answer]:
    """Lazily enumerate answers for a conjunctive query.

    Answers are deduplicated by variant.  The generator raises
    BudgetExceeded or SolveTimeout when a resource limit interrupts the
    search; normal exhaustion just ends the iteration.
    """
    return _Solver(program, goals, config or SolveConfig()).run()


def solve_all(
    program: Program,
    goals: Sequence[Literal],
    config: Optional[SolveConfig] = None,
) -> Tuple[List[Answer], str]:
    """Collect every answer plus a final status.

    Status is one of "exhausted", "budget_exceeded" or "timeout"; the
    answers already produced are returned either way.
    """
    answers: List[Answer] = []
    try:
        for a in solve(program, goals, config):
            answers.append(a)
    except BudgetExceeded:
        return answers, "budget_exceeded"
    except SolveTimeout:
        return answers, "timeout"
    return answers, "exhausted"


def solve_naf(
    program: Program,
    literal: Literal,
    config: Optional[SolveConfig] = None,
) -> bool:
    """Decide a single negation-as-failure call for a ground atom.

    Returns True when no proof of the atom exists.  Raises FlounderError
    if the atom is non-ground and BudgetExceeded if the budget runs out
    before the question is decided.
    """
    atom = literal.atom
    if term_vars(atom):
        raise FlounderError(f"negated call not ground: {format_term(atom)}")
    cfg = config or SolveConfig()
    for _ in solve(program, [Literal(atom)], cfg):
        return False
    return True
