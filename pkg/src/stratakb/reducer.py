"""Order reduction: compile away the top knowledge level of a model.

A model of order n carries finite fact tables for its level-n symbols, so
any application of such a symbol can be replaced by a case split over the
table's rows.  Within the atomic formula containing the application, the
application f(t1..tk) with rows (a1..ak) -> r becomes

    (t1 = a1 and ... and tk = ak and atomic[f(t1..tk) := r])  or  ...

one disjunct per row; a level-n predicate atomic becomes the disjunction
of its rows' argument equalities.  No row matching makes every disjunct
false, which reproduces the closed-world reading of a missed lookup, and
an empty table collapses the atomic to false outright.  Applications are
expanded innermost first, and dropping the emptied level yields a model
of order n-1 over the same ground scales and unknowns.

Variables ranging over level-n symbols are eliminated before the tables:
a formula must hold under every substitution of its variables, so the
formula is replaced by the conjunction of its instances over the declared
range.  (A disjunction would accept candidates that satisfy merely one
instance, which breaks the defining property of the translation: the
reduced model must have exactly the original's solutions.)

check_equivalence puts that property to the test by brute force: it
enumerates every candidate interpretation over a finite value pool and
compares is_solution under both models.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import List, Optional, Tuple

from . import semantics as E
from . import syntax as S
from . import values as V
from .errors import (
    BoundExceededError,
    InputError,
    NotRelevantError,
    OrderTooLowError,
    SignatureMismatchError,
)
from .signature import OBJECTIVE, PREDICATE, FiniteTable, Row


# --- term/formula rewriting ------------------------------------------------

def _map_term(t: S.Term, fn) -> S.Term:
    """Rebuild a term bottom-up, applying fn to every node."""
    if isinstance(t, S.App):
        t = S.App(t.head, tuple(_map_term(a, fn) for a in t.args))
    elif isinstance(t, S.VarApp):
        t = S.VarApp(t.var, tuple(_map_term(a, fn) for a in t.args))
    elif isinstance(t, S.Field):
        t = S.Field(t.field, _map_term(t.base, fn))
    elif isinstance(t, S.Arith):
        t = S.Arith(t.op, _map_term(t.left, fn), _map_term(t.right, fn))
    elif isinstance(t, S.Neg):
        t = S.Neg(_map_term(t.operand, fn))
    return fn(t)


def _map_formula(f: S.Formula, term_fn, formula_fn=None) -> S.Formula:
    """Rebuild a formula bottom-up, applying term_fn to every term."""
    if isinstance(f, S.Cmp):
        out: S.Formula = S.Cmp(f.op, _map_term(f.left, term_fn), _map_term(f.right, term_fn))
    elif isinstance(f, S.Member):
        out = S.Member(_map_term(f.item, term_fn), _map_term(f.container, term_fn))
    elif isinstance(f, S.PredApp):
        out = S.PredApp(f.head, tuple(_map_term(a, term_fn) for a in f.args))
    elif isinstance(f, S.VarPredApp):
        out = S.VarPredApp(f.var, tuple(_map_term(a, term_fn) for a in f.args))
    elif isinstance(f, S.Not):
        out = S.Not(_map_formula(f.operand, term_fn, formula_fn))
    elif isinstance(f, S.And):
        out = S.make_and([_map_formula(p, term_fn, formula_fn) for p in f.parts])
    elif isinstance(f, S.Or):
        out = S.make_or([_map_formula(p, term_fn, formula_fn) for p in f.parts])
    elif isinstance(f, S.Implies):
        out = S.Implies(
            _map_formula(f.premise, term_fn, formula_fn),
            _map_formula(f.conclusion, term_fn, formula_fn),
        )
    elif isinstance(f, S.Cases):
        out = S.Cases(
            tuple(
                S.CaseBranch(
                    tuple(
                        _map_formula(g, term_fn, formula_fn)
                        for g in b.guards
                    ),
                    _map_formula(b.body, term_fn, formula_fn),
                )
                for b in f.branches
            )
        )
    else:
        out = f
    return formula_fn(out) if formula_fn is not None else out


def _substitute_symbol_var(f: S.Formula, var: str, sym: V.SymbolRef) -> S.Formula:
    """Replace a symbol-ranging variable by a concrete symbol."""

    def on_term(t: S.Term) -> S.Term:
        if isinstance(t, S.VarRef) and t.name == var:
            return S.Lit(sym)
        if isinstance(t, S.VarApp) and t.var == var:
            return S.App(sym.name, t.args)
        return t

    def on_formula(g: S.Formula) -> S.Formula:
        if isinstance(g, S.VarPredApp) and g.var == var:
            return S.PredApp(sym.name, g.args)
        return g

    return _map_formula(f, on_term, on_formula)


def _replace_term_everywhere(node, target: S.Term, replacement: S.Term):
    """Replace every occurrence equal to target (they denote the same value)."""

    def on_term(t: S.Term) -> S.Term:
        return replacement if t == target else t

    if isinstance(node, (S.Cmp, S.Member, S.PredApp, S.VarPredApp)):
        return _map_formula(node, on_term)
    return _map_term(node, on_term)


# --- finding work ----------------------------------------------------------

def _level_n_apps_in_term(t: S.Term, names: frozenset) -> List[S.App]:
    return [
        x for x in S.walk_terms(t) if isinstance(x, S.App) and x.head in names
    ]


def _innermost_app(atomic, names: frozenset) -> Optional[S.App]:
    """The first top-level application whose arguments hold no deeper one."""
    _, terms = S.formula_parts(atomic)
    for t in terms:
        for app in _level_n_apps_in_term(t, names):
            inner = [
                a for arg in app.args for a in _level_n_apps_in_term(arg, names)
            ]
            if not inner:
                return app
    return None


def _expand_atomic(atomic, model: S.LogicalModel, names: frozenset) -> S.Formula:
    """Expand every level-n application inside one atomic formula."""
    app = _innermost_app(atomic, names)
    if app is not None:
        table = model.fact_table(app.head)
        if table is None or table.kind == PREDICATE:
            # a predicate symbol inside a term never denotes a value
            return S.FALSE
        branches = []
        for row in table.rows:
            guards = tuple(
                S.Cmp("=", arg, S.Lit(cell))
                for arg, cell in zip(app.args, row.args)
            )
            body = _replace_term_everywhere(atomic, app, S.Lit(row.result))
            # each branch's copy of the atomic may hold further applications
            if _has_app(body, names):
                body = _expand_atomic(body, model, names)
            branches.append(S.CaseBranch(guards, body))
        if not branches:
            return S.FALSE
        return S.Cases(tuple(branches))
    if isinstance(atomic, S.PredApp) and atomic.head in names:
        table = model.fact_table(atomic.head)
        rows = table.rows if table is not None else ()
        branches = [
            S.CaseBranch(
                tuple(
                    S.Cmp("=", arg, S.Lit(cell))
                    for arg, cell in zip(atomic.args, row.args)
                ),
                S.TRUE,
            )
            for row in rows
        ]
        return S.Cases(tuple(branches)) if branches else S.FALSE
    return atomic


def _has_app(node, names: frozenset) -> bool:
    for g in S.walk_formulas(node):
        if isinstance(g, S.PredApp) and g.head in names:
            return True
        _, terms = S.formula_parts(g)
        for t in terms:
            if _level_n_apps_in_term(t, names):
                return True
    return False


def _expand_formula(f: S.Formula, model: S.LogicalModel, names: frozenset) -> S.Formula:
    def on_atomic(g: S.Formula) -> S.Formula:
        if isinstance(g, (S.Cmp, S.Member, S.PredApp)) and _has_app(g, names):
            return _expand_atomic(g, model, names)
        return g

    return _map_formula(f, lambda t: t, on_atomic)


# --- the reduction ---------------------------------------------------------

@dataclass(frozen=True)
class ReductionStep:
    from_order: int
    to_order: int
    eliminated_symbols: Tuple[str, ...]
    eliminated_variables: Tuple[str, ...]
    formulas: int
    nodes_before: int
    nodes_after: int
    per_formula: Tuple[Tuple[str, int, int], ...]  # name, nodes before, after

    def to_dict(self) -> dict:
        return {
            "fromOrder": self.from_order,
            "toOrder": self.to_order,
            "eliminatedSymbols": list(self.eliminated_symbols),
            "eliminatedVariables": list(self.eliminated_variables),
            "formulas": self.formulas,
            "nodesBefore": self.nodes_before,
            "nodesAfter": self.nodes_after,
            "perFormula": [
                {"name": n, "nodesBefore": b, "nodesAfter": a}
                for n, b, a in self.per_formula
            ],
        }


@dataclass(frozen=True)
class ReductionReport:
    steps: Tuple[ReductionStep, ...]

    def to_dict(self) -> dict:
        return {"steps": [s.to_dict() for s in self.steps]}

    def render(self) -> str:
        lines = []
        for s in self.steps:
            lines.append(f"order {s.from_order} -> {s.to_order}")
            lines.append(
                "  eliminated symbols: "
                + (", ".join(s.eliminated_symbols) or "(none)")
            )
            if s.eliminated_variables:
                lines.append(
                    "  eliminated variables: " + ", ".join(s.eliminated_variables)
                )
            lines.append(
                f"  formulas: {s.formulas}   nodes: {s.nodes_before} -> {s.nodes_after}"
            )
            for name, b, a in s.per_formula:
                lines.append(f"    {name}: {b} -> {a}")
        return "\n".join(lines)


def reduce_once(model: S.LogicalModel) -> S.LogicalModel:
    """Compile a model of order n into an equivalent one of order n-1."""
    n = model.order
    if n < 2:
        raise OrderTooLowError(
            f"the model has order {n}; there is no level to compile away"
        )
    names = frozenset(sym.name for sym in model.signature.level(n))
    top_vars = {
        name: decl for name, decl in model.variables.items() if decl.order == n
    }

    new_formulas: List[S.NamedFormula] = []
    for nf in model.formulas:
        f = nf.formula
        used = S.variables_of(f) & set(top_vars)
        for var in sorted(used):
            decl = top_vars[var]
            instances = [
                _substitute_symbol_var(f, var, sym)
                for sym in V.sorted_values(decl.values)
            ]
            # every substitution instance must hold: conjoin them
            f = S.make_and(instances)
        f = _expand_formula(f, model, names)
        new_formulas.append(S.NamedFormula(nf.name, f))

    new_signature = model.signature.drop_level(n)
    new_facts = {
        level: system for level, system in model.facts.items() if level != n
    }
    new_variables = {
        name: decl
        for name, decl in model.variables.items()
        if name not in top_vars
    }
    return S.LogicalModel(
        signature=new_signature,
        scales=model.scales,
        consts=model.consts,
        unknown_scales=model.unknown_scales,
        facts=new_facts,
        variables=new_variables,
        formulas=new_formulas,
    )


def describe_step(before: S.LogicalModel, after: S.LogicalModel) -> ReductionStep:
    eliminated = tuple(
        sorted(sym.name for sym in before.signature.level(before.order))
    )
    gone_vars = tuple(
        sorted(set(before.variables) - set(after.variables))
    )
    per_formula = []
    for nf in before.formulas:
        out = after.formula_named(nf.name)
        per_formula.append(
            (
                nf.name,
                S.node_count(nf.formula),
                S.node_count(out.formula) if out is not None else 0,
            )
        )
    return ReductionStep(
        from_order=before.order,
        to_order=after.order,
        eliminated_symbols=eliminated,
        eliminated_variables=gone_vars,
        formulas=len(before.formulas),
        nodes_before=sum(S.node_count(nf.formula) for nf in before.formulas),
        nodes_after=sum(S.node_count(nf.formula) for nf in after.formulas),
        per_formula=tuple(per_formula),
    )


def reduce_to_first_order(model: S.LogicalModel):
    """Iterate reduce_once down to order 1; returns (model, report)."""
    steps: List[ReductionStep] = []
    current = model
    while current.order >= 2:
        nxt = reduce_once(current)
        steps.append(describe_step(current, nxt))
        current = nxt
    return current, ReductionReport(steps=tuple(steps))


# --- brute-force equivalence -----------------------------------------------

@dataclass(frozen=True)
class EquivalenceResult:
    verdict: str  # "equivalent-within-bound" | "counterexample"
    candidates_checked: int
    counterexample: Optional[E.Candidate] = None
    first_verdict: Optional[bool] = None
    second_verdict: Optional[bool] = None

    @property
    def equivalent(self) -> bool:
        return self.verdict == "equivalent-within-bound"


def _default_pool(m1: S.LogicalModel, m2: S.LogicalModel, cap: int = 6) -> List:
    values: List = []
    for model in (m1, m2):
        for name in model.scales.declared():
            sc = model.scales.get(name)
            if isinstance(sc, V.ScalarScale):
                values.extend(V.Scalar(name, e) for e in sc.elements)
        for system in model.facts.values():
            for tbl in system.tables.values():
                for row in tbl.rows:
                    values.extend(c for c in row.args)
                    if row.result is not None:
                        values.append(row.result)
    values = [
        v
        for v in V.sorted_values(set(values))
        if not isinstance(v, V.SymbolRef)
    ]
    deduped: List = []
    for v in values:
        if not any(V.values_equal(v, d) for d in deduped):
            deduped.append(v)
    return deduped[:cap]


def _conforming(model: S.LogicalModel, universe: List, scale: Optional[str]) -> List:
    if scale is None:
        return list(universe)
    return [v for v in universe if model.scales.conforms(v, scale)]


def _table_space(sym, universe: List) -> Tuple[int, "object"]:
    """(count, generator factory) of every table for an unknown relation."""
    tuples = list(itertools.product(universe, repeat=sym.arity))
    if sym.kind == PREDICATE:
        count = 2 ** len(tuples)

        def gen():
            for mask in range(count):
                rows = [
                    Row(args=tuple(t), result=None)
                    for i, t in enumerate(tuples)
                    if mask >> i & 1
                ]
                yield FiniteTable(
                    symbol=sym.name,
                    kind=sym.kind,
                    arity=sym.arity,
                    rows=tuple(sorted(rows, key=lambda r: tuple(V.sort_key(c) for c in r.args))),
                    arg_scales=tuple([None] * sym.arity),
                    result_scale=None,
                )

        return count, gen
    # functional: each argument tuple is absent or mapped to one universe value
    options = len(universe) + 1
    count = options ** len(tuples)

    def gen():
        for combo in itertools.product(range(options), repeat=len(tuples)):
            rows = [
                Row(args=tuple(t), result=universe[c - 1])
                for t, c in zip(tuples, combo)
                if c > 0
            ]
            yield FiniteTable(
                symbol=sym.name,
                kind=sym.kind,
                arity=sym.arity,
                rows=tuple(sorted(rows, key=lambda r: tuple(V.sort_key(c) for c in r.args))),
                arg_scales=tuple([None] * sym.arity),
                result_scale=None,
            )

    return count, gen


def check_equivalence(
    m1: S.LogicalModel,
    m2: S.LogicalModel,
    pool: Optional[List] = None,
    bound: int = 200_000,
) -> EquivalenceResult:
    """Compare two models' solution sets over every candidate from a pool.

    The models must agree on their ground and unknown signature levels;
    the translation only ever touches levels above those.
    """
    for lvl in (0, 1):
        if set(m1.signature.level(lvl)) != set(m2.signature.level(lvl)):
            raise SignatureMismatchError(
                f"the models disagree on signature level {lvl}"
            )
    if pool is None:
        pool = _default_pool(m1, m2)
    pool = V.sorted_values(pool)
    if not pool:
        raise InputError("the candidate value pool is empty")

    unknowns = sorted(m1.signature.level(1), key=lambda s: s.name)
    checked = 0
    # count first so the bound is enforced before any work explodes
    planned = 0
    universes = []
    for k in range(1, len(pool) + 1):
        for combo in itertools.combinations(range(len(pool)), k):
            universe = [pool[i] for i in combo]
            per_universe = 1
            for sym in unknowns:
                if sym.kind == OBJECTIVE:
                    opts = _conforming(
                        m1, universe, m1.unknown_scales.get(sym.name)
                    )
                    per_universe *= len(opts)
                else:
                    count, _ = _table_space(sym, universe)
                    per_universe *= count
            if per_universe == 0:
                continue
            planned += per_universe
            if planned > bound:
                raise BoundExceededError(
                    f"equivalence check needs {planned}+ candidates, over the bound {bound}"
                )
            universes.append(universe)

    for universe in universes:
        spaces = []
        for sym in unknowns:
            if sym.kind == OBJECTIVE:
                opts = _conforming(m1, universe, m1.unknown_scales.get(sym.name))
                spaces.append([("value", sym.name, v) for v in opts])
            else:
                _, gen = _table_space(sym, universe)
                spaces.append([("table", sym.name, t) for t in gen()])
        for combo in itertools.product(*spaces):
            values = {}
            tables = {}
            for kind, name, item in combo:
                if kind == "value":
                    values[name] = item
                else:
                    tables[name] = item
            cand = E.Candidate(
                universe=frozenset(universe), values=values, tables=tables
            )
            checked += 1

            def verdict(model: S.LogicalModel) -> bool:
                try:
                    ok, _ = E.is_solution(model, cand)
                except NotRelevantError:
                    return False
                return ok

            ok1 = verdict(m1)
            ok2 = verdict(m2)
            if ok1 != ok2:
                return EquivalenceResult(
                    verdict="counterexample",
                    candidates_checked=checked,
                    counterexample=cand,
                    first_verdict=ok1,
                    second_verdict=ok2,
                )
    return EquivalenceResult(
        verdict="equivalent-within-bound", candidates_checked=checked
    )


# --- evaluation-cost comparison --------------------------------------------

@dataclass(frozen=True)
class CandidateCost:
    """Metered formula evaluation for one candidate under both models."""

    source_eval: int
    source_lookup: int
    reduced_eval: int
    reduced_lookup: int
    agrees: bool  # both models accept or both reject

    @property
    def source_total(self) -> int:
        return self.source_eval + self.source_lookup

    @property
    def reduced_total(self) -> int:
        return self.reduced_eval + self.reduced_lookup


@dataclass(frozen=True)
class StepCostReport:
    """Per-candidate evaluation cost of a task before and after reduction.

    Candidates come from the source model's search domains; reduction
    rewrites the formulas, not the task, so both models are metered over
    the identical candidate set.
    """

    task: str
    candidates: Tuple[CandidateCost, ...]

    @property
    def source_total(self) -> int:
        return sum(c.source_total for c in self.candidates)

    @property
    def reduced_total(self) -> int:
        return sum(c.reduced_total for c in self.candidates)

    @property
    def never_costlier(self) -> bool:
        return all(c.reduced_total <= c.source_total for c in self.candidates)

    @property
    def all_agree(self) -> bool:
        return all(c.agrees for c in self.candidates)

    def to_dict(self) -> dict:
        return {
            "task": self.task,
            "candidates": len(self.candidates),
            "sourceEval": sum(c.source_eval for c in self.candidates),
            "sourceLookup": sum(c.source_lookup for c in self.candidates),
            "reducedEval": sum(c.reduced_eval for c in self.candidates),
            "reducedLookup": sum(c.reduced_lookup for c in self.candidates),
            "sourceTotal": self.source_total,
            "reducedTotal": self.reduced_total,
            "neverCostlier": self.never_costlier,
            "allAgree": self.all_agree,
        }

    def render(self) -> str:
        lines = [
            f"task {self.task}: {len(self.candidates)} candidates metered",
            f"  source model:  {self.source_total} steps "
            f"({sum(c.source_eval for c in self.candidates)} eval + "
            f"{sum(c.source_lookup for c in self.candidates)} lookup)",
            f"  reduced model: {self.reduced_total} steps "
            f"({sum(c.reduced_eval for c in self.candidates)} eval + "
            f"{sum(c.reduced_lookup for c in self.candidates)} lookup)",
            "  reduced model is never costlier per candidate: "
            + ("yes" if self.never_costlier else "NO"),
        ]
        return "\n".join(lines)


def _domain_candidates(model: S.LogicalModel, domain) -> "object":
    from . import solver as SV

    enum_slots = [s for s in domain.slots if not s.is_hole]

    def rec(i: int, leaves: dict, tables: dict):
        if i == len(enum_slots):
            for completed in SV.complete_holes(model, domain, leaves, tables):
                yield SV.assemble_candidate(model, completed, tables)
            return
        slot = enum_slots[i]
        if slot.tables is not None:
            for option in slot.tables:
                yield from rec(i + 1, leaves, {**tables, slot.key: option})
        else:
            for option in slot.values or ():
                yield from rec(i + 1, {**leaves, slot.key: option}, tables)

    yield from rec(0, {}, {})


def _metered_verdict(model: S.LogicalModel, formulas, candidate, tol: float):
    """Evaluate formulas until the first failure, metering every step."""
    counter = E.StepCounter()
    ok = True
    for nf in formulas:
        holds, _ = E.in_agreement(model, candidate, nf.formula, counter, tol)
        if not holds:
            ok = False
            break
    return ok, counter


def step_cost_comparison(
    model: S.LogicalModel,
    reduced: S.LogicalModel,
    task: S.TaskSpec,
    tol: float = V.DEFAULT_TOLERANCE,
) -> StepCostReport:
    """Meter a task's formula evaluation under a model and its reduction.

    Both models are evaluated over the candidates the source model's
    search domains generate, with the solver's first-failure discipline,
    so the two step counts are directly comparable.
    """
    from . import solver as SV

    tm_source = SV.compose_task_model(model, task)
    tm_reduced = SV.compose_task_model(reduced, task)
    m_source = tm_source.as_model()
    m_reduced = tm_reduced.as_model()
    domain = SV.derive_domains(model, task)

    records: List[CandidateCost] = []
    for cand in _domain_candidates(model, domain):
        ok1, c1 = _metered_verdict(m_source, tm_source.formulas, cand, tol)
        ok2, c2 = _metered_verdict(m_reduced, tm_reduced.formulas, cand, tol)
        records.append(
            CandidateCost(
                source_eval=c1.eval_steps,
                source_lookup=c1.lookup_steps,
                reduced_eval=c2.eval_steps,
                reduced_lookup=c2.lookup_steps,
                agrees=ok1 == ok2,
            )
        )
    return StepCostReport(task=task.name, candidates=tuple(records))
