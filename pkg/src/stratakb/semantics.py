"""Evaluation and the meaning of 'solution'.

A candidate interprets the level-1 unknowns: plain values for objective
unknowns, finite tables for relation unknowns, plus an explicit universe of
ground values. A candidate solves a model when it is relevant (stays inside
the ground domain and interprets every unknown) and every formula holds
under every relevant substitution of its variables.

Atomic formulas touching an undefined value are false; the connectives on
top stay classical. Work is metered in two ledgers: eval_steps counts value
comparisons and arithmetic applications, lookup_steps counts per-position
comparisons inside fact-table scans.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional

from . import syntax as S
from . import values as V
from .errors import (
    NonTableInterpretationError,
    NotRelevantError,
    UnboundVariableError,
)
from .signature import FUNCTIONAL, OBJECTIVE, PREDICATE, FiniteTable, lookup


@dataclass
class StepCounter:
    eval_steps: int = 0
    lookup_steps: int = 0

    def total(self) -> int:
        return self.eval_steps + self.lookup_steps


@dataclass
class Candidate:
    """An interpretation of the unknowns over an explicit ground universe."""

    universe: frozenset
    values: dict  # objective unknown name -> Value
    tables: dict  # relation unknown name -> FiniteTable

    def with_value(self, name: str, value) -> "Candidate":
        vals = dict(self.values)
        vals[name] = value
        return Candidate(self.universe, vals, dict(self.tables))


@dataclass(frozen=True)
class Situation:
    """One labelled worked case: a candidate system and the expected verdict."""

    name: str
    system: Candidate
    expected: str  # 'adequate' | 'violating'
    extra: tuple = ()  # universe values beyond the closure of the bindings


_BUILTIN_FUNCTIONAL = {"add": "+", "sub": "-", "mul": "*", "div": "/"}
_BUILTIN_CMP = {"eq": "=", "lt": "<", "le": "<=", "gt": ">", "ge": ">="}


def eval_term(
    t: S.Term,
    model: S.LogicalModel,
    candidate: Optional[Candidate],
    env: Optional[dict] = None,
    counter: Optional[StepCounter] = None,
    tol: float = V.DEFAULT_TOLERANCE,
):
    if isinstance(t, S.Lit):
        return t.value
    if isinstance(t, S.ConstRef):
        cv = model.const_value(t.name)
        return cv if cv is not None else V.UNDEFINED
    if isinstance(t, S.UnknownRef):
        if candidate is None:
            return V.UNDEFINED
        return candidate.values.get(t.name, V.UNDEFINED)
    if isinstance(t, S.VarRef):
        if env is None or t.name not in env:
            raise UnboundVariableError(f"variable '{t.name}' has no substitution")
        return env[t.name]
    if isinstance(t, S.Field):
        base = eval_term(t.base, model, candidate, env, counter, tol)
        if isinstance(base, V.Composite):
            return base.get(t.field)
        return V.UNDEFINED
    if isinstance(t, S.Neg):
        v = eval_term(t.operand, model, candidate, env, counter, tol)
        if isinstance(v, V.Num):
            if counter is not None:
                counter.eval_steps += 1
            return V.num_neg(v)
        return V.UNDEFINED
    if isinstance(t, S.Arith):
        left = eval_term(t.left, model, candidate, env, counter, tol)
        right = eval_term(t.right, model, candidate, env, counter, tol)
        if not (isinstance(left, V.Num) and isinstance(right, V.Num)):
            return V.UNDEFINED
        if counter is not None:
            counter.eval_steps += 1
        return V.num_arith(t.op, left, right)
    if isinstance(t, S.App):
        return _eval_app(t.head, t.args, model, candidate, env, counter, tol)
    if isinstance(t, S.VarApp):
        if env is None or t.var not in env:
            raise UnboundVariableError(f"variable '{t.var}' has no substitution")
        head = env[t.var]
        if not isinstance(head, V.SymbolRef):
            return V.UNDEFINED
        return _eval_app(head.name, t.args, model, candidate, env, counter, tol)
    raise TypeError(f"not a term: {t!r}")


def _eval_app(head, args, model, candidate, env, counter, tol):
    vals = [eval_term(a, model, candidate, env, counter, tol) for a in args]
    op = _BUILTIN_FUNCTIONAL.get(head)
    if op is not None:
        if len(vals) != 2 or not all(isinstance(v, V.Num) for v in vals):
            return V.UNDEFINED
        if counter is not None:
            counter.eval_steps += 1
        return V.num_arith(op, vals[0], vals[1])
    if head == "minus":
        if len(vals) != 1 or not isinstance(vals[0], V.Num):
            return V.UNDEFINED
        if counter is not None:
            counter.eval_steps += 1
        return V.num_neg(vals[0])
    table = _table_for(head, model, candidate)
    if table is None:
        return V.UNDEFINED
    if any(v is V.UNDEFINED for v in vals):
        return V.UNDEFINED
    result = lookup(table, vals, tol, counter)
    if table.kind == PREDICATE:
        # a predicate symbol evaluated in term position has no value
        return V.UNDEFINED
    return result


def _table_for(head: str, model: S.LogicalModel, candidate: Optional[Candidate]):
    sym = model.signature.get(head)
    if sym is None:
        return None
    if sym.level == 1:
        if candidate is None:
            return None
        table = candidate.tables.get(head)
        return table
    if sym.level >= 2:
        table = model.fact_table(head)
        if table is None:
            raise NonTableInterpretationError(
                f"symbol '{head}' has no finite-table interpretation"
            )
        return table
    return None


def eval_formula(
    f: S.Formula,
    model: S.LogicalModel,
    candidate: Optional[Candidate],
    env: Optional[dict] = None,
    counter: Optional[StepCounter] = None,
    tol: float = V.DEFAULT_TOLERANCE,
) -> bool:
    if isinstance(f, S.BoolLit):
        return f.value
    if isinstance(f, S.Cmp):
        left = eval_term(f.left, model, candidate, env, counter, tol)
        right = eval_term(f.right, model, candidate, env, counter, tol)
        return _compare(f.op, left, right, counter, tol)
    if isinstance(f, S.Member):
        item = eval_term(f.item, model, candidate, env, counter, tol)
        container = eval_term(f.container, model, candidate, env, counter, tol)
        if counter is not None:
            counter.eval_steps += 1
        if isinstance(item, V.Num) and isinstance(container, V.Interval):
            return V.in_interval(item, container, tol)
        return False
    if isinstance(f, S.PredApp):
        return _eval_pred_app(f.head, f.args, model, candidate, env, counter, tol)
    if isinstance(f, S.VarPredApp):
        if env is None or f.var not in env:
            raise UnboundVariableError(f"variable '{f.var}' has no substitution")
        head = env[f.var]
        if not isinstance(head, V.SymbolRef):
            return False
        return _eval_pred_app(head.name, f.args, model, candidate, env, counter, tol)
    if isinstance(f, S.Not):
        return not eval_formula(f.operand, model, candidate, env, counter, tol)
    if isinstance(f, S.And):
        return all(eval_formula(p, model, candidate, env, counter, tol) for p in f.parts)
    if isinstance(f, S.Or):
        return any(eval_formula(p, model, candidate, env, counter, tol) for p in f.parts)
    if isinstance(f, S.Implies):
        if not eval_formula(f.premise, model, candidate, env, counter, tol):
            return True
        return eval_formula(f.conclusion, model, candidate, env, counter, tol)
    if isinstance(f, S.Cases):
        # first-match scan: a failed guard moves on to the next branch,
        # and the first fully guarded branch decides via its body alone
        for branch in f.branches:
            if all(
                eval_formula(g, model, candidate, env, counter, tol)
                for g in branch.guards
            ):
                return eval_formula(branch.body, model, candidate, env, counter, tol)
        return False
    raise TypeError(f"not a formula: {f!r}")


def _compare(op: str, left, right, counter, tol: float) -> bool:
    if counter is not None:
        counter.eval_steps += 1
    if left is V.UNDEFINED or right is V.UNDEFINED:
        return False
    if op == "=":
        return V.values_equal(left, right, tol)
    if not (isinstance(left, V.Num) and isinstance(right, V.Num)):
        return False
    if op == "<":
        return V.num_lt(left, right, tol)
    if op == "<=":
        return V.num_le(left, right, tol)
    if op == ">":
        return V.num_lt(right, left, tol)
    if op == ">=":
        return V.num_le(right, left, tol)
    raise ValueError(f"unknown comparison {op!r}")


def _eval_pred_app(head, args, model, candidate, env, counter, tol) -> bool:
    op = _BUILTIN_CMP.get(head)
    if op is not None and len(args) == 2:
        left = eval_term(args[0], model, candidate, env, counter, tol)
        right = eval_term(args[1], model, candidate, env, counter, tol)
        return _compare(op, left, right, counter, tol)
    if head == "member" and len(args) == 2:
        item = eval_term(args[0], model, candidate, env, counter, tol)
        container = eval_term(args[1], model, candidate, env, counter, tol)
        if counter is not None:
            counter.eval_steps += 1
        if isinstance(item, V.Num) and isinstance(container, V.Interval):
            return V.in_interval(item, container, tol)
        return False
    vals = [eval_term(a, model, candidate, env, counter, tol) for a in args]
    table = _table_for(head, model, candidate)
    if table is None:
        return False
    if any(v is V.UNDEFINED for v in vals):
        return False
    if table.kind == FUNCTIONAL:
        # a functional symbol in atom position is not a truth-bearer
        return False
    return bool(lookup(table, vals, tol, counter))


# --- relevant substitutions ------------------------------------------------

def substitution_range(model: S.LogicalModel, candidate: Candidate, decl: S.VariableDecl) -> list:
    """The ordered values a variable runs through for this candidate."""
    if decl.order == 1:
        members = [v for v in candidate.universe if model.scales.conforms(v, decl.scale)]
        return V.sorted_values(members)
    return V.sorted_values(decl.values)


def relevant_substitutions(
    model: S.LogicalModel, candidate: Candidate, var_names
) -> Iterator[dict]:
    names = sorted(var_names)
    ranges = []
    for name in names:
        decl = model.variables.get(name)
        if decl is None:
            raise UnboundVariableError(f"variable '{name}' is not declared")
        ranges.append(substitution_range(model, candidate, decl))
    for combo in itertools.product(*ranges):
        yield dict(zip(names, combo))


def in_agreement(
    model: S.LogicalModel,
    candidate: Candidate,
    formula: S.Formula,
    counter: Optional[StepCounter] = None,
    tol: float = V.DEFAULT_TOLERANCE,
):
    """(holds, witness): witness is the first substitution falsifying it."""
    var_names = S.variables_of(formula)
    if not var_names:
        ok = eval_formula(formula, model, candidate, None, counter, tol)
        return (True, None) if ok else (False, {})
    for env in relevant_substitutions(model, candidate, var_names):
        if not eval_formula(formula, model, candidate, env, counter, tol):
            return False, env
    return True, None


# --- the solution check ----------------------------------------------------

def check_relevant(model: S.LogicalModel, candidate: Candidate) -> Optional[str]:
    """None when the candidate is a relevant system; else the reason it is not.

    A universe element that is not a ground value at all is a harder error
    than an ill-shaped candidate, and raises instead of returning a reason.
    """
    if not candidate.universe:
        return "the universe is empty"
    for v in sorted(candidate.universe, key=V.sort_key):
        if not model.scales.valid_base_value(v):
            raise NotRelevantError(
                f"universe value {v!r} is not a value of the ground system"
            )
    for sym in model.signature.level(1):
        if sym.kind == OBJECTIVE:
            value = candidate.values.get(sym.name, V.UNDEFINED)
            if value is V.UNDEFINED:
                return f"unknown '{sym.name}' has no value"
            scale = model.unknown_scales.get(sym.name)
            if scale is not None and not model.scales.conforms(value, scale):
                return f"value of '{sym.name}' does not fit scale '{scale}'"
            if value not in candidate.universe:
                return f"value of '{sym.name}' is outside the universe"
        else:
            table = candidate.tables.get(sym.name)
            if table is None:
                return f"unknown '{sym.name}' has no table"
            if table.kind != sym.kind or table.arity != sym.arity:
                return f"table for '{sym.name}' has the wrong shape"
            for row in table.rows:
                cells = row.args + ((row.result,) if row.result is not None else ())
                for cell in cells:
                    if isinstance(cell, V.SymbolRef):
                        return f"table for '{sym.name}' contains a symbol reference"
                    if cell not in candidate.universe:
                        return f"table for '{sym.name}' uses values outside the universe"
    return None


@dataclass(frozen=True)
class Failure:
    """One reason a candidate is not a solution.

    ``formula`` is the failing formula's name, or None when the candidate is
    not even a relevant system.  ``witness`` is the variable substitution the
    formula fails under (empty for variable-free formulas, None for relevance
    failures).
    """

    formula: Optional[str]
    witness: Optional[dict]
    message: str

    def __str__(self) -> str:
        return self.message


def _witness_text(witness: dict) -> str:
    from . import printer

    return ", ".join(
        f"{k} = {printer.format_value(witness[k])}" for k in sorted(witness)
    )


def is_solution(
    model: S.LogicalModel,
    candidate: Candidate,
    counter: Optional[StepCounter] = None,
    tol: float = V.DEFAULT_TOLERANCE,
    formulas: Optional[list] = None,
):
    """(solves, failures): every failing formula with a falsifying witness.

    Raises NotRelevantError when the candidate's universe contains a value
    that is not a value of the ground system at all.
    """
    why = check_relevant(model, candidate)
    if why is not None:
        return False, [Failure(None, None, why)]
    failures = []
    for nf in formulas if formulas is not None else model.formulas:
        holds, witness = in_agreement(model, candidate, nf.formula, counter, tol)
        if not holds:
            if witness:
                message = (
                    f"formula '{nf.name}' fails under {_witness_text(witness)}"
                )
            else:
                message = f"formula '{nf.name}' fails"
            failures.append(Failure(nf.name, witness, message))
    return (not failures), failures
