"""Clause-level syntax: literals, clauses and indexed programs."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Tuple, Union

from .terms import Const, Struct, Term, Var, format_term

__all__ = [
    "BUILTIN_FUNCTORS",
    "PredId",
    "Literal",
    "Clause",
    "Program",
    "pred_of",
    "format_literal",
    "format_clause",
    "format_program",
]

# Comparison builtins handled natively by the solver.
BUILTIN_FUNCTORS = ("=", "\\=")


@dataclass(frozen=True, slots=True)
class PredId:
    name: str
    arity: int

    def __str__(self) -> str:
        return f"{self.name}/{self.arity}"


def pred_of(atom: Term) -> PredId:
    """Predicate identifier of an atom (a constant is a 0-ary predicate)."""
    if isinstance(atom, Struct):
        return PredId(atom.functor, len(atom.args))
    if isinstance(atom, Const) and isinstance(atom.value, str):
        return PredId(atom.value, 0)
    raise ValueError(f"not a callable atom: {atom!r}")


@dataclass(frozen=True, slots=True)
class Literal:
    """A body literal: an atom, possibly under negation as failure.

    Negation only ever wraps a positive atom; the parser rejects `not not p`.
    The equality builtins are ordinary positive literals with functor = or \\=
    and exactly two arguments.
    """

    atom: Term
    negated: bool = False

    def __post_init__(self) -> None:
        if isinstance(self.atom, Var):
            raise ValueError("a variable is not a literal")
        if self.is_builtin and self.negated:
            raise ValueError("builtins cannot appear under not")

    @property
    def is_builtin(self) -> bool:
        return (
            isinstance(self.atom, Struct)
            and self.atom.functor in BUILTIN_FUNCTORS
            and len(self.atom.args) == 2
        )

    @property
    def pred(self) -> PredId:
        return pred_of(self.atom)


@dataclass(frozen=True, slots=True)
class Clause:
    """head :- body.  A fact is a clause with an empty body."""

    head: Term
    body: Tuple[Literal, ...] = ()

    def __post_init__(self) -> None:
        hp = pred_of(self.head)  # raises on non-atoms
        if hp.name in BUILTIN_FUNCTORS and hp.arity == 2:
            raise ValueError(f"cannot define builtin {hp}")

    @property
    def is_fact(self) -> bool:
        return not self.body

    @property
    def head_pred(self) -> PredId:
        return pred_of(self.head)


class Program:
    """An ordered clause list with a (name, arity) -> clauses index.

    The index is an exact partition of the clauses; both views preserve
    source order.
    """

    __slots__ = ("clauses", "index")

    def __init__(self, clauses: Iterable[Clause]):
        self.clauses: Tuple[Clause, ...] = tuple(clauses)
        index: Dict[PredId, List[Clause]] = {}
        for c in self.clauses:
            index.setdefault(c.head_pred, []).append(c)
        self.index: Dict[PredId, Tuple[Clause, ...]] = {
            k: tuple(v) for k, v in index.items()
        }

    def __len__(self) -> int:
        return len(self.clauses)

    def __iter__(self):
        return iter(self.clauses)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Program) and self.clauses == other.clauses

    def __add__(self, other: "Program") -> "Program":
        return Program(self.clauses + other.clauses)

    def defines(self, pred: PredId) -> bool:
        return pred in self.index

    def clauses_for(self, pred: PredId) -> Tuple[Clause, ...]:
        return self.index.get(pred, ())

    def fact_count(self) -> int:
        return sum(1 for c in self.clauses if c.is_fact)


def format_literal(lit: Literal) -> str:
    if lit.is_builtin:
        assert isinstance(lit.atom, Struct)
        lhs, rhs = lit.atom.args
        return f"{format_term(lhs)} {lit.atom.functor} {format_term(rhs)}"
    text = format_term(lit.atom)
    return f"not {text}" if lit.negated else text


def format_clause(c: Clause) -> str:
    head = format_term(c.head)
    if c.is_fact:
        return f"{head}."
    body = ", ".join(format_literal(l) for l in c.body)
    return f"{head} :- {body}."


def format_program(p: Program) -> str:
    return "\n".join(format_clause(c) for c in p.clauses) + ("\n" if len(p) else "")
