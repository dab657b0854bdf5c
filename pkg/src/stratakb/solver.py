"""Task solving: derive finite search domains, enumerate, check, project.

A task never enlarges the knowledge: its input-data formulas join the
model's own, and the solver only enumerates values it can justify from the
task and the model themselves.  The derivation discipline, per leaf slot of
an unknown, in priority order:

1. a hard pin — a ground equality standing as a top-level conjunct of a
   task or model formula;
2. an explicit task domain annotation;
3. the set of values the slot is compared against in ground equalities of
   positive polarity anywhere in the formulas;
4. defining expressions (directed equalities whose right side mentions
   other unknowns): the slot becomes a computed hole filled from the rest
   of the assignment;
5. the intrinsic elements of the slot's scale, when finite;
6. values drawn from fact-table columns of the slot's scale inside
   formulas mentioning the unknown; interval-valued columns of the slot's
   base scale contribute both endpoints and the midpoint of each cell.

A slot none of these can bound raises UnboundedUnknown.  Relation unknowns
take their finite tables from the task's pinned alternatives and are never
invented.  The search is a backtracking product over the derived slots;
a partial assignment already falsifying a variable-free formula whose
unknowns are fully assigned (and hole-free) prunes its subtree.  The
brute-force twin enumerates the same product with no pruning at all.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from . import semantics as E
from . import syntax as S
from . import values as V
from .errors import (
    BoundExceededError,
    InputError,
    NotRelevantError,
    UnboundedUnknownError,
)
from .signature import OBJECTIVE, FiniteTable


@dataclass(frozen=True)
class SolveConfig:
    max_candidates: int = 1_000_000
    time_budget: float = 60.0
    workers: int = 1


@dataclass
class SolveStats:
    candidates: int = 0
    pruned: int = 0
    elapsed: float = 0.0
    truncated_reason: Optional[str] = None


@dataclass(frozen=True)
class Solution:
    candidate: E.Candidate
    outputs: Tuple[Tuple[str, object], ...]

    def output_map(self) -> Dict[str, object]:
        return dict(self.outputs)


@dataclass
class TaskResult:
    status: str  # "solutions-found" | "no-solutions" | "truncated"
    solutions: List[Solution]
    stats: SolveStats

    @property
    def truncated(self) -> bool:
        return self.status == "truncated"


# --- task composition ------------------------------------------------------

def compose_task_model(model: S.LogicalModel, task: S.TaskSpec) -> S.TaskModel:
    """Join the task's input-data formulas onto the model, namespaced."""
    extra = [
        S.NamedFormula(f"{task.name}.{nf.name}", nf.formula)
        for nf in task.delta
    ]
    return S.TaskModel(base=model, task=task, formulas=list(model.formulas) + extra)


# --- search domains --------------------------------------------------------

@dataclass
class Slot:
    """One enumerable position of the search: a leaf path or a relation name."""

    key: str
    path: Optional[S.FieldPath]  # None for relation unknowns
    scale: Optional[str]
    values: Optional[List[object]] = None  # enumerated candidates
    defs: Optional[List[S.Term]] = None  # computed hole: defining expressions
    tables: Optional[List[FiniteTable]] = None  # relation unknown alternatives
    source: str = ""

    @property
    def is_hole(self) -> bool:
        return self.defs is not None


@dataclass
class SearchDomain:
    slots: List[Slot]  # sorted by key
    unknown_names: List[str]

    def slot_map(self) -> Dict[str, Slot]:
        return {s.key: s for s in self.slots}

    def size_bound(self) -> int:
        """Product of the enumerated slot sizes (holes count once)."""
        n = 1
        for s in self.slots:
            if s.values is not None:
                n *= max(len(s.values), 0)
            elif s.tables is not None:
                n *= max(len(s.tables), 0)
        return n


def _leaf_paths(scales: V.ScaleSet, unknown: str, scale_name: str):
    """Yield (FieldPath, leaf scale name) for every slot of the unknown."""
    sc = scales.get(scale_name)
    if isinstance(sc, V.StructuralScale):
        for fname, fscale in sc.fields:
            for path, leaf in _leaf_paths(scales, unknown, fscale):
                yield S.FieldPath(unknown, (fname,) + path.fields), leaf
    else:
        yield S.FieldPath(unknown, ()), scale_name


def _path_scale(model: S.LogicalModel, path: S.FieldPath) -> Optional[str]:
    name = model.unknown_scales.get(path.unknown)
    for fname in path.fields:
        sc = model.scales.get(name) if name else None
        if not isinstance(sc, V.StructuralScale):
            return None
        name = sc.field_scale(fname)
    return name


def _is_ground(model: S.LogicalModel, term: S.Term) -> bool:
    """True when the term mentions no unknowns and no variables."""
    for t in S.walk_terms(term):
        if isinstance(t, (S.UnknownRef, S.VarRef, S.VarApp, S.Field)):
            return False
        if isinstance(t, S.App):
            sym = model.signature.get(t.head)
            if sym is not None and sym.level == 1:
                return False
    return True


def _eval_ground(model: S.LogicalModel, term: S.Term):
    """Evaluate a term mentioning no unknowns and no variables."""
    empty = E.Candidate(universe=frozenset(), values={}, tables={})
    try:
        return E.eval_term(term, model, empty, env={})
    except Exception:
        return V.UNDEFINED


def _equality_pairs(formula: S.Formula):
    """Yield (path, other-term, polarity, top_level) for every equality.

    polarity is True for occurrences that must hold in some branch for the
    formula to hold (not under an odd number of negations, not inside a
    premise).  top_level marks equalities standing as root conjuncts.
    """

    def walk(f: S.Formula, pol: bool, top: bool):
        if isinstance(f, S.Cmp) and f.op == "=":
            for a, b in ((f.left, f.right), (f.right, f.left)):
                p = S.term_to_path(a)
                if p is not None:
                    yield p, b, pol, top
        elif isinstance(f, S.Not):
            yield from walk(f.operand, not pol, False)
        elif isinstance(f, S.And):
            for part in f.parts:
                yield from walk(part, pol, top and pol)
        elif isinstance(f, S.Or):
            for part in f.parts:
                yield from walk(part, pol, False)
        elif isinstance(f, S.Implies):
            yield from walk(f.premise, not pol, False)
            yield from walk(f.conclusion, pol, False)
        elif isinstance(f, S.Cases):
            # a branch behaves like (guards and body) inside a disjunction
            for branch in f.branches:
                for g in branch.guards:
                    yield from walk(g, pol, False)
                yield from walk(branch.body, pol, False)

    yield from walk(formula, True, True)


def _interval_samples(iv: V.Interval) -> List[V.Num]:
    lo, hi = iv.lo, iv.hi
    mid = V.num_arith("/", V.num_arith("+", lo, hi), V.Num(2))
    out = [lo]
    if isinstance(mid, V.Num):
        out.append(mid)
    out.append(hi)
    return out


def _dedupe_sorted(values: List[object]) -> List[object]:
    ordered = V.sorted_values(values)
    out: List[object] = []
    for v in ordered:
        if out and V.values_equal(out[-1], v):
            continue
        out.append(v)
    return out


def _table_column_values(
    model: S.LogicalModel, scale_name: str, tables: List[FiniteTable]
) -> List[object]:
    """Values of the given scale found in the tables' typed columns."""
    base = model.scales.get(scale_name)
    found: List[object] = []
    for tbl in tables:
        columns = list(tbl.arg_scales)
        if tbl.result_scale is not None:
            columns.append(tbl.result_scale)
        for idx, col_scale in enumerate(columns):
            if col_scale is None:
                continue
            cells = []
            for row in tbl.rows:
                cell = row.args[idx] if idx < tbl.arity else row.result
                if cell is not None:
                    cells.append(cell)
            if col_scale == scale_name:
                found.extend(cells)
                continue
            col = model.scales.get(col_scale)
            if (
                isinstance(col, V.IntervalScale)
                and col.base == scale_name
                and not isinstance(base, V.IntervalScale)
            ):
                for cell in cells:
                    if isinstance(cell, V.Interval):
                        found.extend(_interval_samples(cell))
    return [v for v in found if model.scales.conforms(v, scale_name)]


def derive_domains(model: S.LogicalModel, task: S.TaskSpec) -> SearchDomain:
    """Bound every unknown slot of the task to a finite candidate set."""
    tm = compose_task_model(model, task)
    formulas = tm.formulas

    def _fact_level(name: str) -> int:
        sym = model.signature.get(name)
        return sym.level if sym is not None else 0

    # Which fact tables appear in formulas mentioning each unknown.
    tables_near: Dict[str, List[FiniteTable]] = {}
    for nf in formulas:
        mentioned = S.unknowns_of(nf.formula, model.signature)
        names = set()
        for t in S.walk_terms(nf.formula):
            if isinstance(t, S.App) and _fact_level(t.head) >= 2:
                names.add(t.head)
        for g in S.walk_formulas(nf.formula):
            if isinstance(g, S.PredApp) and _fact_level(g.head) >= 2:
                names.add(g.head)
        for u in mentioned:
            bucket = tables_near.setdefault(u, [])
            for name in sorted(names):
                tbl = model.fact_table(name)
                if tbl is not None and tbl not in bucket:
                    bucket.append(tbl)

    # Ground equalities, classified once.
    pins: Dict[str, List[object]] = {}
    positives: Dict[str, List[object]] = {}
    defs: Dict[str, List[S.Term]] = {}
    for nf in formulas:
        for path, other, pol, top in _equality_pairs(nf.formula):
            key = str(path)
            if _is_ground(model, other):
                value = _eval_ground(model, other)
                if value is V.UNDEFINED:
                    continue
                if pol:
                    positives.setdefault(key, []).append(value)
                    if top:
                        pins.setdefault(key, []).append(value)
            elif pol and S.term_to_path(other) != path:
                defs.setdefault(key, []).append(other)

    # Ground interval containers of membership atoms.  Sampling them mirrors
    # sampling an interval-valued table column, so a model whose tables were
    # inlined into its formulas still bounds the member the same way.
    member_samples: Dict[str, List[object]] = {}
    for nf in formulas:
        for g in S.walk_formulas(nf.formula):
            if not isinstance(g, S.Member):
                continue
            p = S.term_to_path(g.item)
            if p is None or not _is_ground(model, g.container):
                continue
            value = _eval_ground(model, g.container)
            if isinstance(value, V.Interval):
                member_samples.setdefault(str(p), []).extend(
                    _interval_samples(value)
                )

    annotations = {str(p): vals for p, vals in task.domains.items()}

    slots: List[Slot] = []
    unknown_names: List[str] = []
    for sym in sorted(model.signature.level(1), key=lambda s: s.name):
        unknown_names.append(sym.name)
        if sym.kind != OBJECTIVE:
            alternatives = task.pins.get(sym.name)
            if not alternatives:
                raise UnboundedUnknownError(
                    sym.name,
                    "relation unknown has no pinned table alternatives",
                )
            slots.append(
                Slot(
                    key=sym.name,
                    path=None,
                    scale=None,
                    tables=list(alternatives),
                    source="pinned tables",
                )
            )
            continue
        scale_name = model.unknown_scales.get(sym.name)
        if scale_name is None:
            raise UnboundedUnknownError(sym.name, "unknown has no scale")
        for path, leaf_scale in _leaf_paths(model.scales, sym.name, scale_name):
            key = str(path)
            def conforming(vs):
                return [v for v in vs if model.scales.conforms(v, leaf_scale)]

            if key in pins:
                distinct = _dedupe_sorted(pins[key])
                # several contradictory hard pins leave an empty intersection
                vals = conforming(distinct) if len(distinct) == 1 else []
                slots.append(Slot(key, path, leaf_scale, values=vals, source="pin"))
                continue
            if key in annotations:
                vals = _dedupe_sorted(conforming(annotations[key]))
                slots.append(
                    Slot(key, path, leaf_scale, values=vals, source="annotation")
                )
                continue
            if key in positives:
                vals = _dedupe_sorted(conforming(positives[key]))
                if vals:
                    slots.append(
                        Slot(key, path, leaf_scale, values=vals, source="equalities")
                    )
                    continue
            if key in defs:
                slots.append(
                    Slot(key, path, leaf_scale, defs=list(defs[key]), source="computed")
                )
                continue
            scale = model.scales.get(leaf_scale)
            if isinstance(scale, V.ScalarScale):
                vals = [V.Scalar(leaf_scale, e) for e in scale.elements]
                slots.append(
                    Slot(
                        key,
                        path,
                        leaf_scale,
                        values=_dedupe_sorted(vals),
                        source="scale elements",
                    )
                )
                continue
            nearby = tables_near.get(sym.name, [])
            vals = _dedupe_sorted(
                _table_column_values(model, leaf_scale, nearby)
                + conforming(member_samples.get(key, []))
            )
            if vals:
                slots.append(
                    Slot(key, path, leaf_scale, values=vals, source="fact tables")
                )
                continue
            raise UnboundedUnknownError(
                key,
                f"no finite candidate set derivable for scale '{leaf_scale}'",
            )
    slots.sort(key=lambda s: s.key)
    return SearchDomain(slots=slots, unknown_names=unknown_names)


# --- candidate assembly ----------------------------------------------------

def _build_value(
    scales: V.ScaleSet, scale_name: str, path: S.FieldPath, leaves: Dict[str, object]
):
    sc = scales.get(scale_name)
    if isinstance(sc, V.StructuralScale):
        fields = []
        for fname, fscale in sc.fields:
            sub = S.FieldPath(path.unknown, path.fields + (fname,))
            fields.append((fname, _build_value(scales, fscale, sub, leaves)))
        return V.Composite(scale_name, tuple(fields))
    return leaves.get(str(path), V.UNDEFINED)


def assemble_candidate(
    model: S.LogicalModel,
    leaves: Dict[str, object],
    tables: Dict[str, FiniteTable],
) -> E.Candidate:
    """Build a candidate from leaf assignments and pinned relation tables."""
    values: Dict[str, object] = {}
    pool: List[object] = []
    for sym in model.signature.level(1):
        if sym.kind != OBJECTIVE:
            continue
        scale_name = model.unknown_scales.get(sym.name)
        root = S.FieldPath(sym.name, ())
        value = _build_value(model.scales, scale_name, root, leaves)
        if value is not V.UNDEFINED:
            values[sym.name] = value
            pool.append(value)
    for tbl in tables.values():
        for row in tbl.rows:
            pool.extend(c for c in row.args if c is not None)
            if row.result is not None:
                pool.append(row.result)
    universe = frozenset(V.downward_closure(pool))
    return E.Candidate(universe=universe, values=values, tables=dict(tables))


def _has_hole(value) -> bool:
    if value is V.UNDEFINED:
        return True
    if isinstance(value, V.Composite):
        return value.has_hole()
    return False


def complete_holes(
    model: S.LogicalModel,
    domain: SearchDomain,
    leaves: Dict[str, object],
    tables: Dict[str, FiniteTable],
) -> List[Dict[str, object]]:
    """Fill computed slots from the rest of the assignment.

    Defining expressions may depend on one another, so evaluation iterates
    to a fixpoint; when several defining expressions give a hole different
    values, each value opens its own branch.  Returns every completed leaf
    assignment (without the ones whose holes stay undefined — those cannot
    become relevant candidates).
    """
    hole_slots = [s for s in domain.slots if s.is_hole and s.key not in leaves]
    if not hole_slots:
        return [dict(leaves)]
    results: List[Dict[str, object]] = []

    def attempt(current: Dict[str, object], pending: List[Slot]) -> None:
        while True:
            progress = False
            branched = False
            for i, slot in enumerate(pending):
                cand = assemble_candidate(model, current, tables)
                options: List[object] = []
                for term in slot.defs or ():
                    value = E.eval_term(term, model, cand, env={})
                    if value is V.UNDEFINED or _has_hole(value):
                        continue
                    if slot.scale and not model.scales.conforms(value, slot.scale):
                        continue
                    if not any(V.values_equal(value, o) for o in options):
                        options.append(value)
                if not options:
                    continue
                rest = pending[:i] + pending[i + 1 :]
                if len(options) == 1:
                    current = dict(current)
                    current[slot.key] = options[0]
                    pending = rest
                    progress = True
                    break
                for value in V.sorted_values(options):
                    nxt = dict(current)
                    nxt[slot.key] = value
                    attempt(nxt, rest)
                branched = True
                break
            if branched:
                return
            if not progress:
                break
        if not pending:
            results.append(current)
        # otherwise: some hole never became defined; drop the branch.

    attempt(dict(leaves), hole_slots)
    return results


# --- enumeration -----------------------------------------------------------

class _Budget:
    def __init__(self, config: SolveConfig):
        self.config = config
        self.start = time.monotonic()
        self.candidates = 0
        self.pruned = 0
        self.truncated_reason: Optional[str] = None

    def elapsed(self) -> float:
        return time.monotonic() - self.start

    def charge_candidate(self) -> bool:
        self.candidates += 1
        if self.candidates > self.config.max_candidates:
            self.truncated_reason = (
                f"candidate limit {self.config.max_candidates} reached"
            )
            return False
        if self.elapsed() > self.config.time_budget:
            self.truncated_reason = (
                f"time budget {self.config.time_budget:g}s exhausted"
            )
            return False
        return True


def _prunable_formulas(
    model: S.LogicalModel, formulas, domain: SearchDomain
) -> List[Tuple[frozenset, S.NamedFormula]]:
    """Variable-free formulas paired with the slot keys they depend on.

    A formula becomes a pruning rule once every slot of every unknown it
    mentions is an enumerated slot (no computed holes): such a formula is
    fully ground as soon as those slots are assigned, and a false value
    rules out the whole subtree.
    """
    hole_keys = {s.key for s in domain.slots if s.is_hole}
    out = []
    for nf in formulas:
        if S.variables_of(nf.formula):
            continue
        keys = set()
        for u in S.unknowns_of(nf.formula, model.signature):
            for s in domain.slots:
                if s.key == u or (s.path is not None and s.path.unknown == u):
                    keys.add(s.key)
        if keys and not keys & hole_keys:
            out.append((frozenset(keys), nf))
    return out


def _solution_sort_key(model: S.LogicalModel, solution: Solution):
    key = []
    for name in sorted(
        s.name for s in model.signature.level(1)
    ):
        value = solution.candidate.values.get(name)
        if value is not None:
            key.append((0,) + V.sort_key(value))
            continue
        table = solution.candidate.tables.get(name)
        if table is not None:
            rows = tuple(
                tuple(V.sort_key(c) for c in row.args)
                + ((V.sort_key(row.result),) if row.result is not None else ())
                for row in table.rows
            )
            key.append((1, len(table.rows), rows))
        else:
            key.append((2,))
    return tuple(key)


def _project(model: S.LogicalModel, task: S.TaskSpec, candidate: E.Candidate):
    from . import printer

    outputs = []
    for term in task.outputs:
        try:
            value = E.eval_term(term, model, candidate, env={})
        except Exception:
            value = V.UNDEFINED
        outputs.append((printer.format_term(term), value))
    return tuple(outputs)


def _apply_criterion(
    model: S.LogicalModel,
    task: S.TaskSpec,
    found: List[E.Candidate],
    tol: float,
) -> List[E.Candidate]:
    crit = task.criterion
    if crit is None:
        return found
    if isinstance(crit, S.BoolCriterion):
        kept = []
        for cand in found:
            holds, _ = E.in_agreement(model, cand, crit.formula, None, tol)
            if holds:
                kept.append(cand)
        return kept
    assert isinstance(crit, S.Extremal)
    scored = []
    for cand in found:
        value = E.eval_term(crit.objective, model, cand, env={})
        if isinstance(value, V.Num):
            scored.append((value, cand))
    if not scored:
        return []
    best = scored[0][0]
    for value, _ in scored[1:]:
        if crit.direction == "minimize":
            if V.num_lt(value, best):
                best = value
        else:
            if V.num_lt(best, value):
                best = value
    return [
        cand
        for value, cand in scored
        if V.nums_equal(value, best, tol)
    ]


def _enumerate(
    model: S.LogicalModel,
    tm: S.TaskModel,
    domain: SearchDomain,
    budget: Optional[_Budget],
    prune: bool,
    tol: float,
):
    """DFS over the slot product; returns (solution candidates, total seen)."""
    enum_slots = [s for s in domain.slots if not s.is_hole]
    check_model = tm.as_model()
    rules = (
        _prunable_formulas(model, tm.formulas, domain) if prune else []
    )
    found: List[E.Candidate] = []
    total = [0]

    def descend(i: int, leaves: Dict[str, object], tables: Dict[str, FiniteTable], assigned: frozenset) -> bool:
        """Returns False when the budget ran out."""
        if budget is not None and budget.truncated_reason is not None:
            return False
        if i == len(enum_slots):
            for completed in complete_holes(model, domain, leaves, tables):
                total[0] += 1
                if budget is not None and not budget.charge_candidate():
                    return False
                cand = assemble_candidate(model, completed, tables)
                try:
                    ok, _ = E.is_solution(check_model, cand, None, tol)
                except NotRelevantError:
                    ok = False
                if ok:
                    found.append(cand)
            return True
        slot = enum_slots[i]
        if slot.tables is not None:
            options: List = list(slot.tables)
        else:
            options = list(slot.values or ())
        for option in options:
            if slot.tables is not None:
                new_tables = dict(tables)
                new_tables[slot.key] = option
                new_leaves = leaves
            else:
                new_tables = tables
                new_leaves = dict(leaves)
                new_leaves[slot.key] = option
            new_assigned = assigned | {slot.key}
            if prune and rules:
                cand = None
                pruned_here = False
                for keys, nf in rules:
                    if slot.key not in keys or not keys <= new_assigned:
                        continue
                    if cand is None:
                        cand = assemble_candidate(model, new_leaves, new_tables)
                    if not E.eval_formula(
                        nf.formula, check_model, cand, None, None, tol
                    ):
                        pruned_here = True
                        break
                if pruned_here:
                    if budget is not None:
                        budget.pruned += 1
                    continue
            if not descend(i + 1, new_leaves, new_tables, new_assigned):
                return False
        return True

    descend(0, {}, {}, frozenset())
    return found, total[0]


def solve(
    model: S.LogicalModel,
    task: S.TaskSpec,
    config: Optional[SolveConfig] = None,
    tol: float = V.DEFAULT_TOLERANCE,
) -> TaskResult:
    """Search the derived domains for every solution of the task."""
    config = config or SolveConfig()
    if config.workers < 1:
        raise InputError("workers must be at least 1")
    tm = compose_task_model(model, task)
    domain = derive_domains(model, task)
    budget = _Budget(config)
    if config.workers > 1 and len(domain.slots) > 0:
        found = _solve_parallel(model, tm, domain, budget, config, tol)
    else:
        found, _ = _enumerate(model, tm, domain, budget, prune=True, tol=tol)
    kept = _apply_criterion(model, task, found, tol)
    solutions = [
        Solution(candidate=c, outputs=_project(model, task, c)) for c in kept
    ]
    solutions.sort(key=lambda s: _solution_sort_key(model, s))
    stats = SolveStats(
        candidates=budget.candidates,
        pruned=budget.pruned,
        elapsed=budget.elapsed(),
        truncated_reason=budget.truncated_reason,
    )
    if budget.truncated_reason is not None:
        status = "truncated"
    elif solutions:
        status = "solutions-found"
    else:
        status = "no-solutions"
    return TaskResult(status=status, solutions=solutions, stats=stats)


def _solve_parallel(
    model: S.LogicalModel,
    tm: S.TaskModel,
    domain: SearchDomain,
    budget: _Budget,
    config: SolveConfig,
    tol: float,
) -> List[E.Candidate]:
    """Split the first enumerable slot's options across worker threads."""
    from concurrent.futures import ThreadPoolExecutor

    enum_slots = [s for s in domain.slots if not s.is_hole]
    if not enum_slots:
        found, _ = _enumerate(model, tm, domain, budget, prune=True, tol=tol)
        return found
    first = enum_slots[0]
    options = list(first.tables if first.tables is not None else first.values or ())
    if len(options) <= 1:
        found, _ = _enumerate(model, tm, domain, budget, prune=True, tol=tol)
        return found

    def run_chunk(chunk):
        if first.tables is not None:
            narrowed = Slot(
                first.key, first.path, first.scale, tables=chunk, source=first.source
            )
        else:
            narrowed = Slot(
                first.key, first.path, first.scale, values=chunk, source=first.source
            )
        slots = [narrowed if s.key == first.key else s for s in domain.slots]
        sub = SearchDomain(slots=slots, unknown_names=domain.unknown_names)
        return _enumerate(model, tm, sub, budget, prune=True, tol=tol)

    chunks: List[List] = [[] for _ in range(min(config.workers, len(options)))]
    for idx, option in enumerate(options):
        chunks[idx % len(chunks)].append(option)
    found: List[E.Candidate] = []
    with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
        for part, _ in pool.map(run_chunk, chunks):
            found.extend(part)
    return found


def brute_force_solve(
    model: S.LogicalModel,
    task: S.TaskSpec,
    bound: int = 1_000_000,
    tol: float = V.DEFAULT_TOLERANCE,
) -> TaskResult:
    """Exhaustive twin of solve: same domains, no pruning, hard bound."""
    tm = compose_task_model(model, task)
    domain = derive_domains(model, task)
    start = time.monotonic()
    found, total = _enumerate(model, tm, domain, None, prune=False, tol=tol)
    if total > bound:
        raise BoundExceededError(
            f"brute-force enumeration visited {total} candidates, over the bound {bound}"
        )
    kept = _apply_criterion(model, task, found, tol)
    solutions = [
        Solution(candidate=c, outputs=_project(model, task, c)) for c in kept
    ]
    solutions.sort(key=lambda s: _solution_sort_key(model, s))
    stats = SolveStats(
        candidates=total,
        pruned=0,
        elapsed=time.monotonic() - start,
    )
    status = "solutions-found" if solutions else "no-solutions"
    return TaskResult(status=status, solutions=solutions, stats=stats)
