"""Canonical text rendering for values, terms, formulas, models and tasks.

The printer and parser are inverses: parsing a printed document yields a
structurally equal object. Symbol references print bare inside value
contexts (table cells, ranges, bindings) and as @name inside formulas,
where a bare identifier would instead resolve to the symbol's value.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional

from . import syntax as S
from . import values as V
from .signature import BUILTIN_NAMES, FUNCTIONAL, OBJECTIVE, PREDICATE, FiniteTable


def format_num(n: V.Num) -> str:
    v = n.value
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return str(v.numerator)
        return f"{v.numerator}/{v.denominator}"
    return repr(v)


def format_value(v) -> str:
    if v is V.UNDEFINED:
        return "undefined"
    if isinstance(v, V.Num):
        return format_num(v)
    if isinstance(v, V.Scalar):
        return v.name
    if isinstance(v, V.Interval):
        body = f"[{format_num(v.lo)}, {format_num(v.hi)}]"
        return f"{body} {v.unit}" if v.unit else body
    if isinstance(v, V.Composite):
        inner = ", ".join(f"{n}: {format_value(fv)}" for n, fv in v.fields)
        return f"{v.scale}{{{inner}}}"
    if isinstance(v, V.SymbolRef):
        return v.name
    raise TypeError(f"not a value: {v!r}")


# --- terms -----------------------------------------------------------------

_TERM_ATOM = 4
_TERM_UNARY = 3
_TERM_MUL = 2
_TERM_ADD = 1


def _term_prec(t) -> int:
    if isinstance(t, S.Arith):
        return _TERM_ADD if t.op in "+-" else _TERM_MUL
    if isinstance(t, S.Neg):
        return _TERM_UNARY
    return _TERM_ATOM


def format_term(t) -> str:
    return _fmt_term(t, 0)


def _fmt_term(t, min_prec: int) -> str:
    if isinstance(t, S.Lit):
        s = f"@{t.value.name}" if isinstance(t.value, V.SymbolRef) else format_value(t.value)
    elif isinstance(t, (S.ConstRef, S.UnknownRef, S.VarRef)):
        s = t.name
    elif isinstance(t, S.App):
        s = f"{t.head}({', '.join(_fmt_term(a, 0) for a in t.args)})"
    elif isinstance(t, S.VarApp):
        s = f"{t.var}({', '.join(_fmt_term(a, 0) for a in t.args)})"
    elif isinstance(t, S.Field):
        s = f"{t.field}.{_fmt_term(t.base, _TERM_ATOM)}"
    elif isinstance(t, S.Neg):
        s = f"-{_fmt_term(t.operand, _TERM_UNARY)}"
    elif isinstance(t, S.Arith):
        prec = _term_prec(t)
        s = f"{_fmt_term(t.left, prec)} {t.op} {_fmt_term(t.right, prec + 1)}"
    else:
        raise TypeError(f"not a term: {t!r}")
    if _term_prec(t) < min_prec:
        return f"({s})"
    return s


# --- formulas --------------------------------------------------------------

_F_ATOM = 5
_F_NOT = 4
_F_AND = 3
_F_OR = 2
_F_IMPLIES = 1


def _formula_prec(f) -> int:
    if isinstance(f, S.Implies):
        return _F_IMPLIES
    if isinstance(f, (S.Or, S.Cases)):
        return _F_OR
    if isinstance(f, S.And):
        return _F_AND
    if isinstance(f, S.Not):
        return _F_NOT
    return _F_ATOM


def format_formula(f) -> str:
    return _fmt_formula(f, 0)


def _fmt_formula(f, min_prec: int) -> str:
    if isinstance(f, S.BoolLit):
        s = "true" if f.value else "false"
    elif isinstance(f, S.Cmp):
        s = f"{format_term(f.left)} {f.op} {format_term(f.right)}"
    elif isinstance(f, S.Member):
        s = f"{format_term(f.item)} in {format_term(f.container)}"
    elif isinstance(f, S.PredApp):
        s = f"{f.head}({', '.join(format_term(a) for a in f.args)})"
    elif isinstance(f, S.VarPredApp):
        s = f"{f.var}({', '.join(format_term(a) for a in f.args)})"
    elif isinstance(f, S.Not):
        s = f"not {_fmt_formula(f.operand, _F_NOT)}"
    elif isinstance(f, S.And):
        s = " and ".join(_fmt_formula(p, _F_AND + 1) for p in f.parts)
    elif isinstance(f, S.Or):
        s = " or ".join(_fmt_formula(p, _F_OR + 1) for p in f.parts)
    elif isinstance(f, S.Implies):
        s = f"{_fmt_formula(f.premise, _F_IMPLIES + 1)} implies {_fmt_formula(f.conclusion, _F_IMPLIES)}"
    elif isinstance(f, S.Cases):
        # written in its logical form: one guards-and-body conjunction per
        # branch, joined disjunctively (branches are mutually exclusive)
        s = " or ".join(
            _fmt_formula(S.make_and(list(b.guards) + [b.body]), _F_OR + 1)
            for b in f.branches
        )
        if not f.branches:
            s = "false"
    else:
        raise TypeError(f"not a formula: {f!r}")
    if _formula_prec(f) < min_prec:
        return f"({s})"
    return s


# --- tables ----------------------------------------------------------------

def _format_row(row) -> str:
    args = ", ".join(format_value(a) for a in row.args)
    if row.result is not None:
        return f"({args}) -> {format_value(row.result)}"
    return f"({args})"


def format_table_block(table: FiniteTable, indent: str = "") -> str:
    lines = [f"{indent}table {table.symbol} {{"]
    for row in table.rows:
        lines.append(f"{indent}    {_format_row(row)}")
    lines.append(f"{indent}}}")
    return "\n".join(lines)


def format_table_tsv(table: FiniteTable) -> str:
    """Sidecar spreadsheet form: tab-separated cells, '->' before results."""
    lines = []
    for row in table.rows:
        cells = [format_value(a) for a in row.args]
        if row.result is not None:
            cells += ["->", format_value(row.result)]
        lines.append("\t".join(cells))
    return "\n".join(lines) + "\n"


# --- model documents -------------------------------------------------------

def format_model(m: S.LogicalModel) -> str:
    out: list = []

    for sc in m.scales.declared():
        if isinstance(sc, V.DimensionalScale):
            head = f"scale {sc.name} dimensional"
            if sc.unit != sc.name:
                head += f" unit {sc.unit}"
            if sc.integral:
                head += " integral"
            out.append(head)
        elif isinstance(sc, V.ScalarScale):
            out.append(f"scale {sc.name} scalar {{{', '.join(sc.elements)}}}")
        elif isinstance(sc, V.IntervalScale):
            out.append(f"scale {sc.name} interval of {sc.base}")
        elif isinstance(sc, V.StructuralScale):
            fields = "; ".join(f"{n}: {s}" for n, s in sc.fields)
            out.append(f"structure {sc.name} {{{fields}}}")
    if any(True for _ in m.scales.declared()):
        out.append("")

    for name, val in m.consts.items():
        out.append(f"const {name} = {format_value(val)}")
    if m.consts:
        out.append("")

    for sym in m.signature.level(1):
        if sym.kind == OBJECTIVE:
            out.append(f"unknown {sym.name} : {m.unknown_scales[sym.name]}")
        elif sym.kind == FUNCTIONAL:
            out.append(f"unknown {sym.name} : function({sym.arity})")
        else:
            out.append(f"unknown {sym.name} : predicate({sym.arity})")
    if m.signature.level(1):
        out.append("")

    tables: list = []
    for level in sorted(m.facts):
        system = m.facts[level]
        for sym in m.signature.level(level):
            table = system.tables.get(sym.name)
            if table is None:
                continue
            args = ", ".join(s or "number" for s in table.arg_scales)
            head = f"relation {sym.name}"
            if level != 2:
                head += f" level {level}"
            head += f" ({args})"
            if table.kind == FUNCTIONAL:
                head += f" -> {table.result_scale or 'number'}"
            out.append(head)
            tables.append(table)
    if tables:
        out.append("")
        for table in tables:
            out.append(format_table_block(table))
        out.append("")

    for decl in m.variables.values():
        if decl.order == 1:
            out.append(f"var {decl.name} : {decl.scale}")
        else:
            vals = ", ".join(format_value(v) for v in decl.values)
            out.append(f"var {decl.name} order {decl.order} in {{{vals}}}")
    if m.variables:
        out.append("")

    for nf in m.formulas:
        out.append(f"formula {nf.name}: {format_formula(nf.formula)}")

    text = "\n".join(out).strip("\n")
    return text + "\n" if text else ""


# --- task documents --------------------------------------------------------

def format_task(t: S.TaskSpec) -> str:
    out = [f"task {t.name} {{"]
    for nf in t.delta:
        out.append(f"    given {nf.name}: {format_formula(nf.formula)}")
    if isinstance(t.criterion, S.BoolCriterion):
        out.append(f"    criterion {format_formula(t.criterion.formula)}")
    elif isinstance(t.criterion, S.Extremal):
        out.append(f"    {t.criterion.direction} {format_term(t.criterion.objective)}")
    for path in sorted(t.domains, key=lambda p: (p.unknown, p.fields)):
        vals = ", ".join(format_value(v) for v in t.domains[path])
        out.append(f"    domain {path} in {{{vals}}}")
    for name in sorted(t.pins):
        for table in t.pins[name]:
            out.append(f"    pin {name} {{")
            for row in table.rows:
                out.append(f"        {_format_row(row)}")
            out.append("    }")
    for term in t.outputs:
        out.append(f"    output {format_term(term)}")
    out.append("}")
    return "\n".join(out) + "\n"


# --- situation corpora -----------------------------------------------------

def format_situation(sit) -> str:
    out = [f"situation {sit.name} {{", f"    expect: {sit.expected}"]
    for name in sorted(sit.system.values):
        out.append(f"    {name} = {format_value(sit.system.values[name])}")
    for name in sorted(sit.system.tables):
        table = sit.system.tables[name]
        out.append(f"    {name} table {{")
        for row in table.rows:
            out.append(f"        {_format_row(row)}")
        out.append("    }")
    if sit.extra:
        vals = ", ".join(format_value(v) for v in sit.extra)
        out.append(f"    universe {{{vals}}}")
    out.append("}")
    return "\n".join(out) + "\n"


def format_corpus(situations: Iterable) -> str:
    return "\n".join(format_situation(s) for s in situations)


def format(node) -> str:
    """One entry point across node families."""
    if isinstance(node, S.LogicalModel):
        return format_model(node)
    if isinstance(node, S.TaskSpec):
        return format_task(node)
    if isinstance(
        node,
        (S.BoolLit, S.Cmp, S.Member, S.PredApp, S.VarPredApp, S.Not, S.And, S.Or, S.Implies),
    ):
        return format_formula(node)
    return format_term(node)
