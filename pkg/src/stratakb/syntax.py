"""Abstract syntax for terms, formulas, models and tasks."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence, Union

from . import values as V
from .signature import AlgebraicSystem, FiniteTable, Signature

# --- terms -----------------------------------------------------------------

@dataclass(frozen=True)
class Lit:
    value: object  # Value


@dataclass(frozen=True)
class ConstRef:
    name: str


@dataclass(frozen=True)
class UnknownRef:
    name: str


@dataclass(frozen=True)
class VarRef:
    name: str


@dataclass(frozen=True)
class App:
    head: str
    args: tuple


@dataclass(frozen=True)
class VarApp:
    var: str
    args: tuple


@dataclass(frozen=True)
class Field:
    field: str
    base: "Term"


@dataclass(frozen=True)
class Arith:
    op: str  # + - * /
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Neg:
    operand: "Term"


Term = Union[Lit, ConstRef, UnknownRef, VarRef, App, VarApp, Field, Arith, Neg]


def make_neg(t: Term) -> Term:
    """Fold unary minus on numeric literals so -3 is one literal."""
    if isinstance(t, Lit) and isinstance(t.value, V.Num):
        return Lit(V.num_neg(t.value))
    if isinstance(t, Neg):
        return t.operand
    return Neg(t)


def make_arith(op: str, left: Term, right: Term) -> Term:
    """Fold division of exact integer literals: 3/2 is the rational literal 3/2."""
    if (
        op == "/"
        and isinstance(left, Lit)
        and isinstance(right, Lit)
        and isinstance(left.value, V.Num)
        and isinstance(right.value, V.Num)
        and left.value.exact
        and right.value.exact
        and right.value.value != 0
    ):
        return Lit(V.Num(Fraction(left.value.value) / Fraction(right.value.value)))
    return Arith(op, left, right)


# --- formulas --------------------------------------------------------------

@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class Cmp:
    op: str  # = < <= > >=
    left: Term
    right: Term


@dataclass(frozen=True)
class Member:
    item: Term
    container: Term


@dataclass(frozen=True)
class PredApp:
    head: str
    args: tuple


@dataclass(frozen=True)
class VarPredApp:
    var: str
    args: tuple


@dataclass(frozen=True)
class Not:
    operand: "Formula"


@dataclass(frozen=True)
class And:
    parts: tuple


@dataclass(frozen=True)
class Or:
    parts: tuple


@dataclass(frozen=True)
class Implies:
    premise: "Formula"
    conclusion: "Formula"


@dataclass(frozen=True)
class CaseBranch:
    """One arm of a guarded choice: equality guards and a consequent."""

    guards: tuple  # tuple[Cmp, ...]
    body: "Formula"


@dataclass(frozen=True)
class Cases:
    """First-match guarded choice over mutually exclusive branches.

    Branches are tried in order; guards are checked left to right, and the
    first branch whose guards all hold decides the verdict via its body.
    No branch matching means false.  When at most one branch can match —
    as with guards drawn from distinct rows of a finite table — this is
    logically the disjunction of (guards and body) over the branches.
    """

    branches: tuple  # tuple[CaseBranch, ...]


Formula = Union[
    BoolLit, Cmp, Member, PredApp, VarPredApp, Not, And, Or, Implies, Cases
]

TRUE = BoolLit(True)
FALSE = BoolLit(False)


def make_and(parts: Sequence[Formula]) -> Formula:
    flat: list = []
    for p in parts:
        if isinstance(p, And):
            flat.extend(p.parts)
        elif isinstance(p, BoolLit):
            if not p.value:
                return FALSE
        else:
            flat.append(p)
    if not flat:
        return TRUE
    if len(flat) == 1:
        return flat[0]
    return And(tuple(flat))


def make_or(parts: Sequence[Formula]) -> Formula:
    flat: list = []
    for p in parts:
        if isinstance(p, Or):
            flat.extend(p.parts)
        elif isinstance(p, BoolLit):
            if p.value:
                return TRUE
        else:
            flat.append(p)
    if not flat:
        return FALSE
    if len(flat) == 1:
        return flat[0]
    return Or(tuple(flat))


# --- generic walking -------------------------------------------------------

def term_children(t: Term) -> tuple:
    if isinstance(t, App):
        return t.args
    if isinstance(t, VarApp):
        return t.args
    if isinstance(t, Field):
        return (t.base,)
    if isinstance(t, Arith):
        return (t.left, t.right)
    if isinstance(t, Neg):
        return (t.operand,)
    return ()


def formula_parts(f: Formula) -> tuple:
    """(sub-formulas, direct terms) of a formula node."""
    if isinstance(f, Cmp):
        return (), (f.left, f.right)
    if isinstance(f, Member):
        return (), (f.item, f.container)
    if isinstance(f, (PredApp, VarPredApp)):
        return (), f.args
    if isinstance(f, Not):
        return (f.operand,), ()
    if isinstance(f, (And, Or)):
        return f.parts, ()
    if isinstance(f, Implies):
        return (f.premise, f.conclusion), ()
    if isinstance(f, Cases):
        return tuple(
            part
            for branch in f.branches
            for part in (*branch.guards, branch.body)
        ), ()
    return (), ()


def walk_terms(node) -> Iterator[Term]:
    """All term nodes under a formula or term, preorder."""
    if isinstance(node, (BoolLit, Cmp, Member, PredApp, VarPredApp, Not, And, Or, Implies, Cases)):
        subs, terms = formula_parts(node)
        for s in subs:
            yield from walk_terms(s)
        for t in terms:
            yield from walk_terms(t)
    else:
        yield node
        for c in term_children(node):
            yield from walk_terms(c)


def walk_formulas(f: Formula) -> Iterator[Formula]:
    yield f
    subs, _ = formula_parts(f)
    for s in subs:
        yield from walk_formulas(s)


def variables_of(node) -> set:
    out = set()
    if isinstance(node, (BoolLit, Cmp, Member, PredApp, VarPredApp, Not, And, Or, Implies, Cases)):
        for g in walk_formulas(node):
            if isinstance(g, VarPredApp):
                out.add(g.var)
            _, terms = formula_parts(g)
            for t in terms:
                for sub in walk_terms(t):
                    if isinstance(sub, VarRef):
                        out.add(sub.name)
                    elif isinstance(sub, VarApp):
                        out.add(sub.var)
    else:
        for sub in walk_terms(node):
            if isinstance(sub, VarRef):
                out.add(sub.name)
            elif isinstance(sub, VarApp):
                out.add(sub.var)
    return out


def unknowns_of(node, signature: Signature) -> set:
    """Level-1 symbols whose interpretation the node's value depends on."""
    out = set()

    def scan_term(t: Term) -> None:
        for sub in walk_terms(t):
            if isinstance(sub, UnknownRef):
                out.add(sub.name)
            elif isinstance(sub, App):
                sym = signature.get(sub.head)
                if sym is not None and sym.level == 1:
                    out.add(sub.head)

    if isinstance(node, (BoolLit, Cmp, Member, PredApp, VarPredApp, Not, And, Or, Implies, Cases)):
        for g in walk_formulas(node):
            if isinstance(g, PredApp):
                sym = signature.get(g.head)
                if sym is not None and sym.level == 1:
                    out.add(g.head)
            _, terms = formula_parts(g)
            for t in terms:
                scan_term(t)
    else:
        scan_term(node)
    return out


def node_count(node) -> int:
    n = 0
    if isinstance(node, (BoolLit, Cmp, Member, PredApp, VarPredApp, Not, And, Or, Implies, Cases)):
        n = 1
        subs, terms = formula_parts(node)
        for s in subs:
            n += node_count(s)
        for t in terms:
            n += node_count(t)
    else:
        n = 1
        for c in term_children(node):
            n += node_count(c)
    return n


# --- field paths -----------------------------------------------------------

@dataclass(frozen=True)
class FieldPath:
    """A chain of field projections rooted at an unknown, outermost last.

    diameter.tool.v maps to FieldPath('v', ('tool', 'diameter')).
    """

    unknown: str
    fields: tuple

    def __str__(self) -> str:
        return ".".join(tuple(reversed(self.fields)) + (self.unknown,))


def term_to_path(t: Term) -> Optional[FieldPath]:
    fields: list = []
    while isinstance(t, Field):
        fields.append(t.field)
        t = t.base
    if isinstance(t, UnknownRef):
        return FieldPath(t.name, tuple(reversed(fields)))
    return None


def path_to_term(p: FieldPath) -> Term:
    t: Term = UnknownRef(p.unknown)
    for f in p.fields:
        t = Field(f, t)
    return t


def paths_of(node) -> set:
    """Every maximal field path over an unknown appearing in the node."""
    out = set()

    def visit_term(t: Term) -> None:
        p = term_to_path(t)
        if p is not None:
            out.add(p)
            return
        for c in term_children(t):
            visit_term(c)

    if isinstance(node, (BoolLit, Cmp, Member, PredApp, VarPredApp, Not, And, Or, Implies, Cases)):
        for g in walk_formulas(node):
            _, terms = formula_parts(g)
            for t in terms:
                visit_term(t)
    else:
        visit_term(node)
    return out


# --- declarations and documents -------------------------------------------

@dataclass(frozen=True)
class VariableDecl:
    name: str
    order: int
    scale: Optional[str] = None  # order-1 range: a scale
    values: tuple = ()  # order >= 2 range: explicit finite value set


@dataclass(frozen=True)
class NamedFormula:
    name: str
    formula: Formula


@dataclass
class LogicalModel:
    """A domain model: signature, scales, facts for levels >= 2, and formulas."""

    signature: Signature
    scales: V.ScaleSet
    consts: dict  # user-declared level-0 constants: name -> Value
    unknown_scales: dict  # objective unknown name -> scale name
    facts: dict  # level -> AlgebraicSystem
    variables: dict  # name -> VariableDecl
    formulas: list  # list[NamedFormula]

    @property
    def order(self) -> int:
        return self.signature.order

    def const_value(self, name: str):
        from .signature import BUILTIN_CONSTS

        if name in self.consts:
            return self.consts[name]
        return BUILTIN_CONSTS.get(name)

    def fact_table(self, name: str) -> Optional[FiniteTable]:
        sym = self.signature.get(name)
        if sym is None or sym.level < 2:
            return None
        level = self.facts.get(sym.level)
        if level is None:
            return None
        return level.tables.get(name)

    def formula_named(self, name: str) -> Optional[NamedFormula]:
        for nf in self.formulas:
            if nf.name == name:
                return nf
        return None

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, LogicalModel)
            and self.signature == other.signature
            and self.scales == other.scales
            and self.consts == other.consts
            and self.unknown_scales == other.unknown_scales
            and self.facts == other.facts
            and self.variables == other.variables
            and self.formulas == other.formulas
        )


# --- tasks -----------------------------------------------------------------

@dataclass(frozen=True)
class BoolCriterion:
    formula: Formula


@dataclass(frozen=True)
class Extremal:
    direction: str  # 'minimize' | 'maximize'
    objective: Term


Criterion = Union[None, BoolCriterion, Extremal]


@dataclass
class TaskSpec:
    """What to solve: extra constraints, a selection criterion, and outputs."""

    name: str
    delta: list  # list[NamedFormula], first-order over levels 0-1
    criterion: Criterion
    outputs: list  # list[Term]
    domains: dict  # FieldPath -> tuple[Value, ...] explicit domain annotations
    pins: dict  # relation unknown name -> tuple[FiniteTable, ...] alternatives

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, TaskSpec)
            and self.name == other.name
            and self.delta == other.delta
            and self.criterion == other.criterion
            and self.outputs == other.outputs
            and self.domains == other.domains
            and self.pins == other.pins
        )


@dataclass
class TaskModel:
    """A model joined with a task: the formula set is the union of both."""

    base: LogicalModel
    task: TaskSpec
    formulas: list  # model formulas then namespaced task constraints

    def as_model(self) -> LogicalModel:
        return LogicalModel(
            signature=self.base.signature,
            scales=self.base.scales,
            consts=self.base.consts,
            unknown_scales=self.base.unknown_scales,
            facts=self.base.facts,
            variables=self.base.variables,
            formulas=self.formulas,
        )
