"""Lexer, parser and binder for the model, task and situation documents.

Documents are plain text. Statements are keyword-led; names must be declared
before they are used, so binding happens inline while parsing. The formula
language is quantifier-free by design: 'forall' and 'exists' are recognised
only to be rejected with a dedicated error.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import printer  # noqa: F401  (kept close: printer and parser are inverses)
from . import syntax as S
from . import values as V
from .errors import (
    BadArityError,
    DeltaWithoutUnknownError,
    DuplicateSymbolError,
    EmptyOutputError,
    InputError,
    LevelViolationError,
    ModelSyntaxError,
    Pos,
    QuantifierRejectedError,
    ScaleMismatchError,
    SecondOrderInDeltaError,
    UnknownScaleError,
    UnknownSymbolError,
)
from .signature import (
    BUILTIN_CONSTS,
    BUILTIN_NAMES,
    FUNCTIONAL,
    OBJECTIVE,
    PREDICATE,
    BUILTIN_CORE,
    FiniteTable,
    Row,
    Signature,
    Symbol,
    build_signature,
    build_table,
)

STATEMENT_WORDS = frozenset(
    """scale structure const unknown relation table var formula
       task situation given criterion minimize maximize domain pin output
       expect universe""".split()
)
FORMULA_WORDS = frozenset("and or not implies in true false".split())
QUANTIFIER_WORDS = frozenset(("forall", "exists"))
RESERVED_WORDS = STATEMENT_WORDS | FORMULA_WORDS | QUANTIFIER_WORDS | {"undefined"}

_CMP_OPS = ("=", "<", "<=", ">", ">=")


# --- lexer -----------------------------------------------------------------

@dataclass(frozen=True)
class Tok:
    kind: str  # 'ident' | 'num' | 'str' | 'op' | 'eof'
    text: str
    line: int
    col: int
    num: object = None  # Fraction for integer literals, float otherwise


_TWO_CHAR_OPS = ("->", "<=", ">=")
_ONE_CHAR_OPS = set("(){}[],:;=<>+-*/@.")


def tokenize(text: str, source: str) -> list:
    toks: list = []
    i, line, col = 0, 1, 1
    n = len(text)

    def pos() -> Pos:
        return Pos(source, line, col)

    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c.isdigit():
            start = i
            startcol = col
            while i < n and text[i].isdigit():
                i += 1
            is_float = False
            if i < n and text[i] == "." and i + 1 < n and text[i + 1].isdigit():
                is_float = True
                i += 1
                while i < n and text[i].isdigit():
                    i += 1
            if i < n and text[i] in "eE":
                j = i + 1
                if j < n and text[j] in "+-":
                    j += 1
                if j < n and text[j].isdigit():
                    is_float = True
                    i = j
                    while i < n and text[i].isdigit():
                        i += 1
            lexeme = text[start:i]
            num = float(lexeme) if is_float else Fraction(lexeme)
            toks.append(Tok("num", lexeme, line, startcol, num))
            col += i - start
            continue
        if c.isalpha() or c == "_":
            start = i
            startcol = col
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
            toks.append(Tok("ident", text[start:i], line, startcol))
            col += i - start
            continue
        if c == '"':
            start = i
            startcol = col
            i += 1
            while i < n and text[i] not in '"\n':
                i += 1
            if i >= n or text[i] != '"':
                raise ModelSyntaxError("unterminated string", Pos(source, line, startcol))
            body = text[start + 1 : i]
            i += 1
            toks.append(Tok("str", body, line, startcol))
            col += i - start
            continue
        two = text[i : i + 2]
        if two in _TWO_CHAR_OPS:
            toks.append(Tok("op", two, line, col))
            i += 2
            col += 2
            continue
        if c in _ONE_CHAR_OPS:
            toks.append(Tok("op", c, line, col))
            i += 1
            col += 1
            continue
        raise ModelSyntaxError(f"unexpected character {c!r}", pos())
    toks.append(Tok("eof", "", line, col))
    return toks


# --- name view -------------------------------------------------------------

class _View:
    """Uniform name resolution over either a builder in progress or a model."""

    def __init__(self, scales, consts, variables, unknown_scales, symbol_fn):
        self.scales = scales
        self._consts = consts
        self.variables = variables
        self.unknown_scales = unknown_scales
        self._symbol_fn = symbol_fn

    @staticmethod
    def of_model(m: S.LogicalModel) -> "_View":
        return _View(m.scales, m.consts, m.variables, m.unknown_scales, m.signature.get)

    def symbol(self, name: str) -> Optional[Symbol]:
        return self._symbol_fn(name)

    def const_value(self, name: str):
        if name in self._consts:
            return self._consts[name]
        return BUILTIN_CONSTS.get(name)

    def element(self, name: str) -> Optional[V.Scalar]:
        owner = self.scales.element_owner(name)
        if owner is None:
            return None
        return V.Scalar(owner, name)


# --- model builder ---------------------------------------------------------

class ModelBuilder:
    def __init__(self) -> None:
        self.scales = V.ScaleSet()
        self.consts: dict = {}
        self.unknowns: list = []  # level-1 Symbols in declaration order
        self.unknown_scales: dict = {}
        self.relations: list = []  # level >= 2 Symbols in declaration order
        self.rel_sig: dict = {}  # name -> (arg_scales, result_scale, level)
        self.tables: dict = {}
        self.variables: dict = {}
        self.formulas: list = []
        self.names: dict = {}  # global namespace: name -> description
        for n in V.BUILTIN_SCALE_NAMES:
            self.names[n] = "builtin scale"
        for s in BUILTIN_CORE:
            self.names[s.name] = "builtin symbol"
        self._symbols = {s.name: s for s in BUILTIN_CORE}

    def view(self) -> _View:
        return _View(
            self.scales, self.consts, self.variables, self.unknown_scales, self._symbols.get
        )

    def claim(self, name: str, what: str, pos: Pos) -> None:
        if name in RESERVED_WORDS:
            raise ModelSyntaxError(f"'{name}' is a reserved word", pos)
        prior = self.names.get(name)
        if prior is not None:
            raise DuplicateSymbolError(f"name '{name}' already used as {prior}", pos)
        self.names[name] = what

    def add_symbol(self, sym: Symbol) -> None:
        self._symbols[sym.name] = sym
        if sym.level == 1:
            self.unknowns.append(sym)
        else:
            self.relations.append(sym)

    def add_element_symbols(self, scale: V.ScalarScale) -> None:
        for el in scale.elements:
            self._symbols[el] = Symbol(el, OBJECTIVE, 0)

    def add_const_symbol(self, name: str) -> None:
        self._symbols[name] = Symbol(name, OBJECTIVE, 0)

    def finalize(self, source: str) -> S.LogicalModel:
        for sym in self.relations:
            if sym.name not in self.tables:
                raise ModelSyntaxError(
                    f"relation '{sym.name}' has no fact table", Pos(source, 1, 1)
                )
        self.scales.check_structures()
        decls = list(BUILTIN_CORE)
        for sc in self.scales.declared():
            if isinstance(sc, V.ScalarScale):
                decls.extend(Symbol(el, OBJECTIVE, 0) for el in sc.elements)
        decls.extend(Symbol(c, OBJECTIVE, 0) for c in self.consts)
        decls.extend(self.unknowns)
        decls.extend(self.relations)
        signature = build_signature(decls)
        facts: dict = {}
        for sym in self.relations:
            system = facts.setdefault(sym.level, None)
            if system is None:
                facts[sym.level] = system = _new_system(sym.level)
            system.tables[sym.name] = self.tables[sym.name]
        return S.LogicalModel(
            signature=signature,
            scales=self.scales,
            consts=self.consts,
            unknown_scales=self.unknown_scales,
            facts=facts,
            variables=self.variables,
            formulas=self.formulas,
        )


def _new_system(level: int):
    from .signature import AlgebraicSystem

    return AlgebraicSystem(level, {})


# --- parser core -----------------------------------------------------------

class Parser:
    def __init__(self, text: str, source: str, base_dir: Optional[Path] = None):
        self.toks = tokenize(text, source)
        self.i = 0
        self.source = source
        self.base_dir = base_dir

    # - token plumbing -

    def peek(self, ahead: int = 0) -> Tok:
        j = min(self.i + ahead, len(self.toks) - 1)
        return self.toks[j]

    def next(self) -> Tok:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def pos(self, tok: Optional[Tok] = None) -> Pos:
        t = tok or self.peek()
        return Pos(self.source, t.line, t.col)

    def fail(self, message: str, err=ModelSyntaxError, tok: Optional[Tok] = None):
        raise err(message, self.pos(tok))

    def at_op(self, text: str) -> bool:
        t = self.peek()
        return t.kind == "op" and t.text == text

    def at_word(self, word: str) -> bool:
        t = self.peek()
        return t.kind == "ident" and t.text == word

    def eat_op(self, text: str) -> Tok:
        if not self.at_op(text):
            self.fail(f"expected '{text}'")
        return self.next()

    def eat_word(self, word: str) -> Tok:
        if not self.at_word(word):
            self.fail(f"expected '{word}'")
        return self.next()

    def eat_ident(self, what: str = "a name") -> Tok:
        t = self.peek()
        if t.kind != "ident":
            self.fail(f"expected {what}")
        if t.text in QUANTIFIER_WORDS:
            self.fail("quantifiers are not part of the formula language", QuantifierRejectedError)
        return self.next()

    def eat_int(self, what: str = "an integer") -> int:
        t = self.peek()
        if t.kind != "num" or not isinstance(t.num, Fraction) or t.num.denominator != 1:
            self.fail(f"expected {what}")
        self.next()
        return int(t.num)

    def at_end(self) -> bool:
        return self.peek().kind == "eof"

    # - values -

    def parse_value(self, view: _View, expected: Optional[str] = None):
        t = self.peek()
        if t.kind == "op" and t.text == "-":
            self.next()
            return V.num_neg(self._parse_number())
        if t.kind == "num":
            return self._parse_number()
        if t.kind == "op" and t.text == "[":
            return self._parse_interval(view, expected)
        if t.kind == "op" and t.text == "@":
            self.next()
            name = self.eat_ident("a symbol name").text
            if view.symbol(name) is None:
                self.fail(f"unknown symbol '{name}'", UnknownSymbolError)
            return V.SymbolRef(name)
        if t.kind == "ident":
            if t.text == "undefined":
                self.fail("'undefined' is not a writable value")
            if t.text in QUANTIFIER_WORDS:
                self.fail("quantifiers are not part of the formula language", QuantifierRejectedError)
            if self.peek(1).kind == "op" and self.peek(1).text == "{":
                return self._parse_composite(view)
            self.next()
            return self._resolve_value_ident(t, view, expected)
        self.fail("expected a value")

    def _parse_number(self, rational: bool = True) -> V.Num:
        # rational=True lets a value position spell 'a / b' as one exact
        # literal; term positions must leave '/' to the expression grammar
        t = self.peek()
        if t.kind != "num":
            self.fail("expected a number")
        self.next()
        if (
            rational
            and isinstance(t.num, Fraction)
            and self.at_op("/")
            and self.peek(1).kind == "num"
            and isinstance(self.peek(1).num, Fraction)
        ):
            self.next()
            d = self.next()
            if d.num == 0:
                self.fail("rational literal divides by zero", tok=d)
            return V.Num(t.num / d.num)
        return V.Num(t.num)

    def _parse_bound(self, view: _View) -> V.Num:
        t = self.peek()
        if t.kind == "op" and t.text == "-":
            self.next()
            return V.num_neg(self._parse_number())
        if t.kind == "num":
            return self._parse_number()
        if t.kind == "ident":
            cv = view.const_value(t.text)
            if isinstance(cv, V.Num):
                self.next()
                return cv
            self.fail(f"'{t.text}' is not a numeric constant", UnknownSymbolError)
        self.fail("expected a numeric bound")

    def _parse_interval(self, view: _View, expected: Optional[str] = None) -> V.Interval:
        open_tok = self.eat_op("[")
        lo = self._parse_bound(view)
        self.eat_op(",")
        hi = self._parse_bound(view)
        self.eat_op("]")
        unit = None
        t = self.peek()
        if t.kind == "ident" and t.text not in RESERVED_WORDS:
            unit = t.text
            self.next()
        if unit is None and expected is not None:
            # an unlabelled interval written where an interval scale is
            # expected adopts that scale's base unit
            sc = view.scales.get(expected)
            if isinstance(sc, V.IntervalScale):
                base = view.scales.get(sc.base)
                if isinstance(base, V.DimensionalScale):
                    unit = base.unit
        try:
            return V.Interval(lo, hi, unit)
        except InputError as e:
            raise ModelSyntaxError(e.message, self.pos(open_tok)) from None

    def _parse_composite(self, view: _View) -> V.Composite:
        name_tok = self.eat_ident("a structural scale name")
        sc = view.scales.get(name_tok.text)
        if not isinstance(sc, V.StructuralScale):
            self.fail(f"'{name_tok.text}' is not a structural scale", UnknownScaleError, name_tok)
        self.eat_op("{")
        given: dict = {}
        while not self.at_op("}"):
            ftok = self.eat_ident("a field name")
            fscale = sc.field_scale(ftok.text)
            if fscale is None:
                self.fail(f"'{sc.name}' has no field '{ftok.text}'", ModelSyntaxError, ftok)
            if ftok.text in given:
                self.fail(f"field '{ftok.text}' given twice", ModelSyntaxError, ftok)
            self.eat_op(":")
            given[ftok.text] = self.parse_value(view, fscale)
            if self.at_op(","):
                self.next()
            elif not self.at_op("}"):
                self.fail("expected ',' or '}'")
        self.eat_op("}")
        missing = [n for n, _ in sc.fields if n not in given]
        if missing:
            self.fail(
                f"composite of '{sc.name}' misses field(s): {', '.join(missing)}",
                ModelSyntaxError,
                name_tok,
            )
        return V.Composite(sc.name, tuple((n, given[n]) for n, _ in sc.fields))

    def _resolve_value_ident(self, tok: Tok, view: _View, expected: Optional[str]):
        name = tok.text
        exp = view.scales.get(expected) if expected else None
        if isinstance(exp, V.ScalarScale):
            if name in exp.elements:
                return V.Scalar(exp.name, name)
            self.fail(
                f"'{name}' is not one of the points of scale '{exp.name}'",
                ScaleMismatchError,
                tok,
            )
        el = view.element(name)
        if el is not None:
            return el
        if isinstance(exp, V.TermScale):
            if view.symbol(name) is not None:
                return V.SymbolRef(name)
            cv = view.const_value(name)
            if cv is not None:
                return cv
        else:
            cv = view.const_value(name)
            if cv is not None:
                return cv
            if view.symbol(name) is not None:
                return V.SymbolRef(name)
        self.fail(f"unknown value name '{name}'", UnknownSymbolError, tok)

    # - terms and formulas -

    def parse_formula(self, view: _View) -> S.Formula:
        left = self._parse_disjunction(view)
        if self.at_word("implies"):
            self.next()
            right = self.parse_formula(view)
            return S.Implies(left, right)
        return left

    def _parse_disjunction(self, view: _View) -> S.Formula:
        parts = [self._parse_conjunction(view)]
        while self.at_word("or"):
            self.next()
            parts.append(self._parse_conjunction(view))
        return S.make_or(parts) if len(parts) > 1 else parts[0]

    def _parse_conjunction(self, view: _View) -> S.Formula:
        parts = [self._parse_negation(view)]
        while self.at_word("and"):
            self.next()
            parts.append(self._parse_negation(view))
        return S.make_and(parts) if len(parts) > 1 else parts[0]

    def _parse_negation(self, view: _View) -> S.Formula:
        if self.at_word("not"):
            self.next()
            return S.Not(self._parse_negation(view))
        return self._parse_atom(view)

    def _parse_atom(self, view: _View) -> S.Formula:
        t = self.peek()
        if t.kind == "ident":
            if t.text in QUANTIFIER_WORDS:
                self.fail(
                    "quantifiers are not part of the formula language", QuantifierRejectedError
                )
            if t.text == "true":
                self.next()
                return S.TRUE
            if t.text == "false":
                self.next()
                return S.FALSE
            head = self._predicate_head(t.text, view)
            if head is not None and self.peek(1).kind == "op" and self.peek(1).text == "(":
                return self._parse_pred_app(view)
        save = self.i
        try:
            return self._parse_comparison(view)
        except InputError as first:
            first_progress = self.i
            self.i = save
            if self.at_op("("):
                try:
                    self.next()
                    f = self.parse_formula(view)
                    self.eat_op(")")
                    return f
                except InputError as second:
                    second_progress = self.i
                    self.i = save
                    raise first if first_progress >= second_progress else second
            raise first

    def _predicate_head(self, name: str, view: _View) -> Optional[str]:
        """'predicate' | 'variable' when the name heads a predicate application."""
        decl = view.variables.get(name)
        if decl is not None:
            if decl.order >= 2 and _range_kind(decl) == PREDICATE:
                return "variable"
            return None
        sym = view.symbol(name)
        if sym is not None and sym.kind == PREDICATE:
            return "predicate"
        return None

    def _parse_pred_app(self, view: _View) -> S.Formula:
        head_tok = self.eat_ident()
        args = self._parse_args(view)
        decl = view.variables.get(head_tok.text)
        if decl is not None:
            self._check_arg_levels(args, decl.order, head_tok, view)
            return S.VarPredApp(head_tok.text, tuple(args))
        sym = view.symbol(head_tok.text)
        if sym.arity != len(args):
            self.fail(
                f"'{sym.name}' takes {sym.arity} argument(s), got {len(args)}",
                BadArityError,
                head_tok,
            )
        self._check_arg_levels(args, sym.level, head_tok, view)
        return S.PredApp(head_tok.text, tuple(args))

    def _parse_comparison(self, view: _View) -> S.Formula:
        left = self.parse_term(view)
        t = self.peek()
        if t.kind == "op" and t.text in _CMP_OPS:
            self.next()
            right = self.parse_term(view)
            return S.Cmp(t.text, left, right)
        if t.kind == "ident" and t.text == "in":
            self.next()
            container = self.parse_term(view)
            return S.Member(left, container)
        self.fail("expected a comparison operator or 'in'")

    def parse_term(self, view: _View) -> S.Term:
        left = self._parse_multiplicative(view)
        while self.at_op("+") or self.at_op("-"):
            op = self.next().text
            right = self._parse_multiplicative(view)
            left = S.make_arith(op, left, right)
        return left

    def _parse_multiplicative(self, view: _View) -> S.Term:
        left = self._parse_unary(view)
        while self.at_op("*") or self.at_op("/"):
            op = self.next().text
            right = self._parse_unary(view)
            left = S.make_arith(op, left, right)
        return left

    def _parse_unary(self, view: _View) -> S.Term:
        if self.at_op("-"):
            self.next()
            return S.make_neg(self._parse_unary(view))
        return self._parse_chain(view)

    def _parse_chain(self, view: _View) -> S.Term:
        t = self.peek()
        if t.kind == "ident" and self.peek(1).kind == "op" and self.peek(1).text == ".":
            selectors: list = []
            while (
                self.peek().kind == "ident"
                and self.peek(1).kind == "op"
                and self.peek(1).text == "."
            ):
                selectors.append(self.eat_ident("a field name"))
                self.eat_op(".")
            base = self._parse_primary(view)
            term = base
            for sel in reversed(selectors):
                self._check_field(sel, term, view)
                term = S.Field(sel.text, term)
            return term
        return self._parse_primary(view)

    def _check_field(self, sel: Tok, base: S.Term, view: _View) -> None:
        scale = self._static_scale(base, view)
        if scale is None:
            return
        sc = view.scales.get(scale)
        if not isinstance(sc, V.StructuralScale):
            self.fail(f"'{scale}' has no fields to select from", ModelSyntaxError, sel)
        if sc.field_scale(sel.text) is None:
            self.fail(f"'{scale}' has no field '{sel.text}'", ModelSyntaxError, sel)

    def _static_scale(self, t: S.Term, view: _View) -> Optional[str]:
        if isinstance(t, S.UnknownRef):
            return view.unknown_scales.get(t.name)
        if isinstance(t, S.Field):
            base = self._static_scale(t.base, view)
            if base is None:
                return None
            sc = view.scales.get(base)
            if isinstance(sc, V.StructuralScale):
                return sc.field_scale(t.field)
            return None
        if isinstance(t, S.VarRef):
            decl = view.variables.get(t.name)
            return decl.scale if decl is not None else None
        return None

    def _parse_primary(self, view: _View) -> S.Term:
        t = self.peek()
        if t.kind == "num":
            return S.Lit(V.Num(self._parse_number(rational=False).value))
        if t.kind == "op" and t.text == "@":
            self.next()
            name_tok = self.eat_ident("a symbol name")
            if view.symbol(name_tok.text) is None:
                self.fail(f"unknown symbol '{name_tok.text}'", UnknownSymbolError, name_tok)
            return S.Lit(V.SymbolRef(name_tok.text))
        if t.kind == "op" and t.text == "[":
            return S.Lit(self._parse_interval(view))
        if t.kind == "op" and t.text == "(":
            self.next()
            inner = self.parse_term(view)
            self.eat_op(")")
            return inner
        if t.kind == "ident":
            if t.text in QUANTIFIER_WORDS:
                self.fail(
                    "quantifiers are not part of the formula language", QuantifierRejectedError
                )
            if t.text in RESERVED_WORDS:
                self.fail(f"unexpected '{t.text}'")
            nxt = self.peek(1)
            if nxt.kind == "op" and nxt.text == "{":
                return S.Lit(self._parse_composite(view))
            if nxt.kind == "op" and nxt.text == "(":
                return self._parse_application(view)
            self.next()
            return self._resolve_term_ident(t, view)
        self.fail("expected a term")

    def _parse_args(self, view: _View) -> list:
        self.eat_op("(")
        args = [self.parse_term(view)]
        while self.at_op(","):
            self.next()
            args.append(self.parse_term(view))
        self.eat_op(")")
        return args

    def _parse_application(self, view: _View) -> S.Term:
        head_tok = self.eat_ident()
        name = head_tok.text
        decl = view.variables.get(name)
        if decl is not None:
            if decl.order < 2:
                self.fail(
                    f"variable '{name}' ranges over plain values and cannot be applied",
                    ModelSyntaxError,
                    head_tok,
                )
            if _range_kind(decl) == PREDICATE:
                self.fail(
                    f"variable '{name}' ranges over predicates; its application is a formula",
                    ModelSyntaxError,
                    head_tok,
                )
            args = self._parse_args(view)
            self._check_arg_levels(args, decl.order, head_tok, view)
            return S.VarApp(name, tuple(args))
        sym = view.symbol(name)
        if sym is None:
            self.fail(f"unknown symbol '{name}'", UnknownSymbolError, head_tok)
        if sym.kind == OBJECTIVE:
            self.fail(f"'{name}' is not applicable", ModelSyntaxError, head_tok)
        if sym.kind == PREDICATE:
            self.fail(
                f"'{name}' is a predicate; its application is a formula, not a term",
                ModelSyntaxError,
                head_tok,
            )
        args = self._parse_args(view)
        if sym.arity != len(args):
            self.fail(
                f"'{name}' takes {sym.arity} argument(s), got {len(args)}",
                BadArityError,
                head_tok,
            )
        self._check_arg_levels(args, sym.level, head_tok, view)
        return S.App(name, tuple(args))

    def _resolve_term_ident(self, tok: Tok, view: _View) -> S.Term:
        name = tok.text
        if name in view.variables:
            return S.VarRef(name)
        el = view.element(name)
        if el is not None:
            return S.Lit(el)
        if view.const_value(name) is not None:
            return S.ConstRef(name)
        sym = view.symbol(name)
        if sym is not None:
            if sym.level == 1 and sym.kind == OBJECTIVE:
                return S.UnknownRef(name)
            self.fail(
                f"'{name}' names a symbol, not a value; apply it or write @{name}",
                ModelSyntaxError,
                tok,
            )
        self.fail(f"unknown name '{name}'", UnknownSymbolError, tok)

    def _check_arg_levels(self, args, head_level: int, head_tok: Tok, view: _View) -> None:
        if head_level < 1:
            limit = 0
        else:
            limit = head_level - 1
        for a in args:
            lvl = _entity_level(a, view)
            if lvl > limit:
                self.fail(
                    f"argument of level {lvl} passed where level {limit} or lower is required",
                    LevelViolationError,
                    head_tok,
                )


def _entity_level(t: S.Term, view: _View) -> int:
    """The level of the entity a term denotes (values are level 0)."""
    if isinstance(t, S.Lit) and isinstance(t.value, V.SymbolRef):
        sym = view.symbol(t.value.name)
        return sym.level if sym is not None else 0
    if isinstance(t, S.VarRef):
        decl = view.variables.get(t.name)
        if decl is not None and decl.order >= 2:
            return decl.order
    return 0


def _range_kind(decl: S.VariableDecl) -> Optional[str]:
    """The uniform symbol kind of an order->=2 variable's range, if known."""
    return getattr(decl, "_kind", None)


# --- model statement parsing ----------------------------------------------

class ModelParser(Parser):
    def __init__(self, text: str, source: str, base_dir: Optional[Path], builder: ModelBuilder):
        super().__init__(text, source, base_dir)
        self.b = builder

    def run(self) -> None:
        while not self.at_end():
            t = self.peek()
            if t.kind != "ident":
                self.fail("expected a statement")
            word = t.text
            handler = {
                "scale": self._stmt_scale,
                "structure": self._stmt_structure,
                "const": self._stmt_const,
                "unknown": self._stmt_unknown,
                "relation": self._stmt_relation,
                "table": self._stmt_table,
                "var": self._stmt_var,
                "formula": self._stmt_formula,
            }.get(word)
            if handler is None:
                if word in ("task", "situation"):
                    self.fail(f"'{word}' documents are separate from model documents")
                self.fail(f"expected a statement, found '{word}'")
            handler()

    # each statement handler consumes its whole statement

    def _stmt_scale(self) -> None:
        self.eat_word("scale")
        name_tok = self.eat_ident("a scale name")
        name = name_tok.text
        self.b.claim(name, "a scale", self.pos(name_tok))
        if self.at_word("dimensional"):
            self.next()
            unit = name
            if self.at_word("unit"):
                self.next()
                unit = self.eat_ident("a unit name").text
            integral = False
            if self.at_word("integral"):
                self.next()
                integral = True
            self.b.scales.add(V.DimensionalScale(name, unit, integral))
            return
        if self.at_word("scalar"):
            self.next()
            self.eat_op("{")
            elements = [self.eat_ident("a scalar point name").text]
            while self.at_op(","):
                self.next()
                elements.append(self.eat_ident("a scalar point name").text)
            self.eat_op("}")
            for el in elements:
                self.b.claim(el, f"a point of scale '{name}'", self.pos(name_tok))
            scale = V.ScalarScale(name, tuple(elements))
            try:
                self.b.scales.add(scale)
            except InputError as e:
                self.fail(e.message, DuplicateSymbolError, name_tok)
            self.b.add_element_symbols(scale)
            return
        if self.at_word("interval"):
            self.next()
            self.eat_word("of")
            base_tok = self.eat_ident("a dimensional scale name")
            base = self.b.scales.get(base_tok.text)
            if not isinstance(base, V.DimensionalScale):
                self.fail(
                    f"'{base_tok.text}' is not a dimensional scale", UnknownScaleError, base_tok
                )
            self.b.scales.add(V.IntervalScale(name, base_tok.text))
            return
        self.fail("expected 'dimensional', 'scalar' or 'interval'")

    def _stmt_structure(self) -> None:
        self.eat_word("structure")
        name_tok = self.eat_ident("a structure name")
        self.b.claim(name_tok.text, "a structure", self.pos(name_tok))
        self.eat_op("{")
        fields: list = []
        seen: set = set()
        while not self.at_op("}"):
            ftok = self.eat_ident("a field name")
            if ftok.text in RESERVED_WORDS:
                self.fail(f"'{ftok.text}' is a reserved word", ModelSyntaxError, ftok)
            if ftok.text in seen:
                self.fail(f"field '{ftok.text}' declared twice", DuplicateSymbolError, ftok)
            seen.add(ftok.text)
            self.eat_op(":")
            stok = self.eat_ident("a scale name")
            if stok.text not in self.b.scales:
                self.fail(f"unknown scale '{stok.text}'", UnknownScaleError, stok)
            fields.append((ftok.text, stok.text))
            if self.at_op(";") or self.at_op(","):
                self.next()
            elif not self.at_op("}"):
                self.fail("expected ';' or '}'")
        self.eat_op("}")
        if not fields:
            self.fail("a structure needs at least one field", ModelSyntaxError, name_tok)
        self.b.scales.add(V.StructuralScale(name_tok.text, tuple(fields)))

    def _stmt_const(self) -> None:
        self.eat_word("const")
        name_tok = self.eat_ident("a constant name")
        self.b.claim(name_tok.text, "a constant", self.pos(name_tok))
        self.eat_op("=")
        value = self.parse_value(self.b.view())
        if isinstance(value, V.SymbolRef):
            self.fail("a constant must name a ground value", ModelSyntaxError, name_tok)
        self.b.consts[name_tok.text] = value
        self.b.add_const_symbol(name_tok.text)

    def _stmt_unknown(self) -> None:
        self.eat_word("unknown")
        name_tok = self.eat_ident("an unknown name")
        name = name_tok.text
        self.b.claim(name, "an unknown", self.pos(name_tok))
        self.eat_op(":")
        if self.at_word("function") or self.at_word("predicate"):
            kind = FUNCTIONAL if self.next().text == "function" else PREDICATE
            self.eat_op("(")
            arity = self.eat_int("an arity")
            self.eat_op(")")
            if arity < 1:
                self.fail("arity must be at least 1", BadArityError, name_tok)
            self.b.add_symbol(Symbol(name, kind, 1, arity))
            return
        stok = self.eat_ident("a scale name")
        if stok.text not in self.b.scales:
            self.fail(f"unknown scale '{stok.text}'", UnknownScaleError, stok)
        if isinstance(self.b.scales.get(stok.text), V.TermScale):
            self.fail("an unknown cannot range over the term pseudo-scale", ScaleMismatchError, stok)
        self.b.add_symbol(Symbol(name, OBJECTIVE, 1))
        self.b.unknown_scales[name] = stok.text

    def _stmt_relation(self) -> None:
        self.eat_word("relation")
        name_tok = self.eat_ident("a relation name")
        name = name_tok.text
        self.b.claim(name, "a relation", self.pos(name_tok))
        level = 2
        if self.at_word("level"):
            self.next()
            lvl_tok = self.peek()
            level = self.eat_int("a level")
            if level < 2:
                self.fail("relations live at level 2 or higher", ModelSyntaxError, lvl_tok)
        self.eat_op("(")
        arg_scales = [self._relation_scale()]
        while self.at_op(","):
            self.next()
            arg_scales.append(self._relation_scale())
        self.eat_op(")")
        result_scale = None
        kind = PREDICATE
        if self.at_op("->"):
            self.next()
            kind = FUNCTIONAL
            result_scale = self._relation_scale()
        self.b.add_symbol(Symbol(name, kind, level, len(arg_scales)))
        self.b.rel_sig[name] = (tuple(arg_scales), result_scale, level)

    def _relation_scale(self) -> str:
        stok = self.eat_ident("a scale name")
        if stok.text not in self.b.scales:
            self.fail(f"unknown scale '{stok.text}'", UnknownScaleError, stok)
        return stok.text

    def _stmt_table(self) -> None:
        self.eat_word("table")
        name_tok = self.eat_ident("a relation name")
        name = name_tok.text
        sig = self.b.rel_sig.get(name)
        if sig is None:
            self.fail(f"'{name}' is not a declared relation", UnknownSymbolError, name_tok)
        if name in self.b.tables:
            self.fail(f"relation '{name}' already has a fact table", DuplicateSymbolError, name_tok)
        arg_scales, result_scale, level = sig
        sym = self.b._symbols[name]
        if self.at_word("file"):
            self.next()
            ftok = self.peek()
            if ftok.kind != "str":
                self.fail("expected a quoted file path")
            self.next()
            rows = self._read_table_file(ftok, sym, arg_scales, result_scale)
        else:
            rows = self._parse_rows_block(arg_scales, result_scale, sym.kind)
        self._check_cell_levels(rows, level, name_tok)
        try:
            table = build_table(
                name, sym.kind, sym.arity, rows, arg_scales, result_scale, self.b.scales
            )
        except InputError as e:
            raise type(e)(e.message, self.pos(name_tok)) from None
        self.b.tables[name] = table

    def _check_cell_levels(self, rows, level: int, name_tok: Tok) -> None:
        view = self.b.view()
        for row in rows:
            cells = row.args + ((row.result,) if row.result is not None else ())
            for cell in cells:
                if isinstance(cell, V.SymbolRef):
                    sym = view.symbol(cell.name)
                    if sym is not None and sym.level >= level:
                        self.fail(
                            f"cell names level-{sym.level} symbol '{cell.name}' inside a "
                            f"level-{level} table",
                            LevelViolationError,
                            name_tok,
                        )

    def _parse_rows_block(self, arg_scales, result_scale, kind) -> list:
        view = self.b.view()
        self.eat_op("{")
        rows: list = []
        while not self.at_op("}"):
            rows.append(self._parse_row(view, arg_scales, result_scale, kind))
            if self.at_op(",") or self.at_op(";"):
                self.next()
        self.eat_op("}")
        return rows

    def _parse_row(self, view: _View, arg_scales, result_scale, kind) -> Row:
        self.eat_op("(")
        args = [self.parse_value(view, arg_scales[0] if arg_scales else None)]
        k = 1
        while self.at_op(","):
            self.next()
            expected = arg_scales[k] if k < len(arg_scales) else None
            args.append(self.parse_value(view, expected))
            k += 1
        self.eat_op(")")
        result = None
        if self.at_op("->"):
            self.next()
            result = self.parse_value(view, result_scale)
        if kind == FUNCTIONAL and result is None:
            self.fail("functional row needs '-> result'")
        if kind == PREDICATE and result is not None:
            self.fail("predicate row must not carry a result")
        return Row(tuple(args), result)

    def _read_table_file(self, ftok: Tok, sym: Symbol, arg_scales, result_scale) -> list:
        if self.base_dir is None:
            self.fail("table files need a base directory (load the model from a file)", tok=ftok)
        path = (self.base_dir / ftok.text).resolve()
        if not path.is_file():
            self.fail(f"table file not found: {ftok.text}", tok=ftok)
        rows: list = []
        view = self.b.view()
        for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            cells = [c.strip() for c in raw.split("\t") if c.strip()]
            if "->" in cells:
                idx = cells.index("->")
                arg_cells, result_cells = cells[:idx], cells[idx + 1 :]
                if len(result_cells) != 1:
                    raise ModelSyntaxError(
                        "expected exactly one result cell after '->'",
                        Pos(str(path), lineno, 1),
                    )
            else:
                arg_cells, result_cells = cells, []
            if sym.kind == FUNCTIONAL and not result_cells:
                raise ModelSyntaxError(
                    "functional row needs a '->' result cell", Pos(str(path), lineno, 1)
                )
            if sym.kind == PREDICATE and result_cells:
                raise ModelSyntaxError(
                    "predicate row must not carry a result cell", Pos(str(path), lineno, 1)
                )
            args = tuple(
                _parse_cell(cell, view, arg_scales[j] if j < len(arg_scales) else None, path, lineno)
                for j, cell in enumerate(arg_cells)
            )
            result = (
                _parse_cell(result_cells[0], view, result_scale, path, lineno)
                if result_cells
                else None
            )
            rows.append(Row(args, result))
        return rows

    def _stmt_var(self) -> None:
        self.eat_word("var")
        name_tok = self.eat_ident("a variable name")
        name = name_tok.text
        self.b.claim(name, "a variable", self.pos(name_tok))
        if self.at_op(":"):
            self.next()
            stok = self.eat_ident("a scale name")
            sc = self.b.scales.get(stok.text)
            if sc is None:
                self.fail(f"unknown scale '{stok.text}'", UnknownScaleError, stok)
            self.b.variables[name] = S.VariableDecl(name, 1, stok.text)
            return
        self.eat_word("order")
        order_tok = self.peek()
        order = self.eat_int("an order")
        if order < 2:
            self.fail("write 'var name : scale' for order-1 variables", ModelSyntaxError, order_tok)
        self.eat_word("in")
        self.eat_op("{")
        view = self.b.view()
        values = [self.parse_value(view, "term")]
        while self.at_op(","):
            self.next()
            values.append(self.parse_value(view, "term"))
        self.eat_op("}")
        kind, arity = self._check_order_range(values, order, name_tok, view)
        decl = S.VariableDecl(name, order, None, tuple(values))
        object.__setattr__(decl, "_kind", kind)
        object.__setattr__(decl, "_arity", arity)
        self.b.variables[name] = decl

    def _check_order_range(self, values, order: int, name_tok: Tok, view: _View):
        kinds: set = set()
        arities: set = set()
        for v in values:
            if not isinstance(v, V.SymbolRef):
                self.fail(
                    "the range of an order-2-or-higher variable lists symbols",
                    ModelSyntaxError,
                    name_tok,
                )
            sym = view.symbol(v.name)
            if sym.level > order:
                self.fail(
                    f"'{v.name}' lives at level {sym.level}, above this order-{order} variable",
                    LevelViolationError,
                    name_tok,
                )
            if sym.kind == OBJECTIVE:
                self.fail(
                    f"'{v.name}' is not applicable and cannot enter an applied range",
                    ModelSyntaxError,
                    name_tok,
                )
            kinds.add(sym.kind)
            arities.add(sym.arity)
        if len(kinds) > 1:
            self.fail(
                "variable range mixes functional and predicate symbols", ModelSyntaxError, name_tok
            )
        if len(arities) > 1:
            self.fail("variable range mixes arities", ModelSyntaxError, name_tok)
        return kinds.pop(), arities.pop()

    def _stmt_formula(self) -> None:
        self.eat_word("formula")
        name_tok = self.eat_ident("a formula name")
        if name_tok.text in RESERVED_WORDS:
            self.fail(f"'{name_tok.text}' is a reserved word", ModelSyntaxError, name_tok)
        if any(nf.name == name_tok.text for nf in self.b.formulas):
            self.fail(f"formula '{name_tok.text}' declared twice", DuplicateSymbolError, name_tok)
        self.eat_op(":")
        formula = self.parse_formula(self.b.view())
        self.b.formulas.append(S.NamedFormula(name_tok.text, formula))


def _parse_cell(text: str, view: _View, expected: Optional[str], path: Path, lineno: int):
    p = Parser(text, f"{path}:{lineno}")
    try:
        value = p.parse_value(view, expected)
    except InputError as e:
        raise type(e)(e.message, Pos(str(path), lineno, 1)) from None
    if not p.at_end():
        raise ModelSyntaxError(f"trailing text in cell {text!r}", Pos(str(path), lineno, 1))
    return value


# --- task documents --------------------------------------------------------

class TaskParser(Parser):
    def __init__(self, text: str, source: str, model: S.LogicalModel):
        super().__init__(text, source)
        self.model = model
        self.v = _View.of_model(model)

    def run(self) -> S.TaskSpec:
        self.eat_word("task")
        name_tok = self.eat_ident("a task name")
        self.eat_op("{")
        delta: list = []
        criterion: Optional[object] = None
        outputs: list = []
        domains: dict = {}
        pins: dict = {}
        auto = 0
        while not self.at_op("}"):
            t = self.peek()
            if t.kind != "ident":
                self.fail("expected a task statement")
            if t.text == "given":
                self.next()
                gname = None
                if (
                    self.peek().kind == "ident"
                    and self.peek().text not in RESERVED_WORDS
                    and self.peek(1).kind == "op"
                    and self.peek(1).text == ":"
                ):
                    gname = self.eat_ident().text
                    self.next()
                if gname is None:
                    auto += 1
                    gname = f"g{auto}"
                if any(nf.name == gname for nf in delta):
                    self.fail(f"given '{gname}' declared twice", DuplicateSymbolError, t)
                formula = self.parse_formula(self.v)
                self._check_delta(formula, t)
                delta.append(S.NamedFormula(gname, formula))
            elif t.text == "criterion":
                if criterion is not None:
                    self.fail("a task carries at most one criterion", ModelSyntaxError, t)
                self.next()
                criterion = S.BoolCriterion(self.parse_formula(self.v))
            elif t.text in ("minimize", "maximize"):
                if criterion is not None:
                    self.fail("a task carries at most one criterion", ModelSyntaxError, t)
                self.next()
                criterion = S.Extremal(t.text, self.parse_term(self.v))
            elif t.text == "domain":
                self.next()
                path, scale = self._parse_domain_path()
                if path in domains:
                    self.fail(f"domain for '{path}' given twice", DuplicateSymbolError, t)
                self.eat_word("in")
                self.eat_op("{")
                vals = [self._domain_value(scale, t)]
                while self.at_op(","):
                    self.next()
                    vals.append(self._domain_value(scale, t))
                self.eat_op("}")
                domains[path] = tuple(V.sorted_values(vals))
            elif t.text == "pin":
                self.next()
                self._parse_pin(pins)
            elif t.text == "output":
                self.next()
                outputs.append(self.parse_term(self.v))
            else:
                self.fail(f"unexpected '{t.text}' inside a task")
        self.eat_op("}")
        if not self.at_end():
            self.fail("expected exactly one task per document")
        if not outputs:
            raise EmptyOutputError(
                f"task '{name_tok.text}' declares no outputs", self.pos(name_tok)
            )
        return S.TaskSpec(
            name=name_tok.text,
            delta=delta,
            criterion=criterion,
            outputs=outputs,
            domains=domains,
            pins={k: tuple(v) for k, v in pins.items()},
        )

    def _check_delta(self, formula: S.Formula, tok: Tok) -> None:
        sig = self.model.signature
        if not S.unknowns_of(formula, sig):
            raise DeltaWithoutUnknownError(
                "a given must constrain at least one unknown", self.pos(tok)
            )
        for g in S.walk_formulas(formula):
            if isinstance(g, S.PredApp):
                sym = sig.get(g.head)
                if sym is not None and sym.level >= 2:
                    raise SecondOrderInDeltaError(
                        f"given uses level-{sym.level} symbol '{g.head}'; "
                        "givens stay at levels 0-1",
                        self.pos(tok),
                    )
            if isinstance(g, (S.VarPredApp,)):
                decl = self.model.variables.get(g.var)
                if decl is not None and decl.order >= 2:
                    raise SecondOrderInDeltaError(
                        f"given uses order-{decl.order} variable '{g.var}'", self.pos(tok)
                    )
        for t in S.walk_terms(formula):
            if isinstance(t, S.App):
                sym = sig.get(t.head)
                if sym is not None and sym.level >= 2:
                    raise SecondOrderInDeltaError(
                        f"given uses level-{sym.level} symbol '{t.head}'; "
                        "givens stay at levels 0-1",
                        self.pos(tok),
                    )
            if isinstance(t, S.Lit) and isinstance(t.value, V.SymbolRef):
                sym = sig.get(t.value.name)
                if sym is not None and sym.level >= 2:
                    raise SecondOrderInDeltaError(
                        f"given names level-{sym.level} symbol '{t.value.name}'", self.pos(tok)
                    )
            if isinstance(t, (S.VarRef, S.VarApp)):
                vname = t.name if isinstance(t, S.VarRef) else t.var
                decl = self.model.variables.get(vname)
                if decl is not None and decl.order >= 2:
                    raise SecondOrderInDeltaError(
                        f"given uses order-{decl.order} variable '{vname}'", self.pos(tok)
                    )

    def _parse_domain_path(self):
        first = self.eat_ident("an unknown name")
        names = [first.text]
        while self.at_op("."):
            self.next()
            names.append(self.eat_ident("a field name").text)
        unknown = names[-1]
        selectors = tuple(reversed(names[:-1]))
        sym = self.model.signature.get(unknown)
        if sym is None or sym.level != 1 or sym.kind != OBJECTIVE:
            self.fail(f"'{unknown}' is not an objective unknown", UnknownSymbolError, first)
        scale = self.model.unknown_scales.get(unknown)
        for f in selectors:
            sc = self.v.scales.get(scale) if scale else None
            if not isinstance(sc, V.StructuralScale) or sc.field_scale(f) is None:
                self.fail(f"'{scale}' has no field '{f}'", ModelSyntaxError, first)
            scale = sc.field_scale(f)
        return S.FieldPath(unknown, selectors), scale

    def _domain_value(self, scale: Optional[str], tok: Tok):
        value = self.parse_value(self.v, scale)
        if scale is not None and not self.v.scales.conforms(value, scale):
            raise ScaleMismatchError(
                f"domain value does not fit scale '{scale}'", self.pos(tok)
            )
        return value

    def _parse_pin(self, pins: dict) -> None:
        name_tok = self.eat_ident("an unknown name")
        sym = self.model.signature.get(name_tok.text)
        if sym is None or sym.level != 1 or sym.kind == OBJECTIVE:
            self.fail(
                f"'{name_tok.text}' is not a relation unknown", UnknownSymbolError, name_tok
            )
        self.eat_op("{")
        rows: list = []
        while not self.at_op("}"):
            rows.append(self._parse_row(self.v, (), None, sym.kind))
        self.eat_op("}")
        try:
            table = build_table(name_tok.text, sym.kind, sym.arity, rows)
        except InputError as e:
            raise type(e)(e.message, self.pos(name_tok)) from None
        pins.setdefault(name_tok.text, []).append(table)

    def _parse_row(self, view: _View, arg_scales, result_scale, kind) -> Row:
        self.eat_op("(")
        args = [self.parse_value(view, arg_scales[0] if arg_scales else None)]
        k = 1
        while self.at_op(","):
            self.next()
            expected = arg_scales[k] if k < len(arg_scales) else None
            args.append(self.parse_value(view, expected))
            k += 1
        self.eat_op(")")
        result = None
        if self.at_op("->"):
            self.next()
            result = self.parse_value(view, result_scale)
        if kind == FUNCTIONAL and result is None:
            self.fail("functional row needs '-> result'")
        if kind == PREDICATE and result is not None:
            self.fail("predicate row must not carry a result")
        return Row(tuple(args), result)


# --- situation corpora -----------------------------------------------------

class CorpusParser(TaskParser):
    def run_corpus(self) -> list:
        from .semantics import Candidate, Situation

        situations: list = []
        names: set = set()
        while not self.at_end():
            self.eat_word("situation")
            name_tok = self.eat_ident("a situation name")
            if name_tok.text in names:
                self.fail(
                    f"situation '{name_tok.text}' declared twice", DuplicateSymbolError, name_tok
                )
            names.add(name_tok.text)
            self.eat_op("{")
            self.eat_word("expect")
            self.eat_op(":")
            exp_tok = self.eat_ident("'adequate' or 'violating'")
            if exp_tok.text not in ("adequate", "violating"):
                self.fail("expected 'adequate' or 'violating'", tok=exp_tok)
            values: dict = {}
            tables: dict = {}
            extra: list = []
            while not self.at_op("}"):
                t = self.peek()
                if t.kind != "ident":
                    self.fail("expected a binding or 'universe'")
                if t.text == "universe":
                    self.next()
                    self.eat_op("{")
                    extra.append(self.parse_value(self.v))
                    while self.at_op(","):
                        self.next()
                        extra.append(self.parse_value(self.v))
                    self.eat_op("}")
                    continue
                name = self.eat_ident("an unknown name").text
                sym = self.model.signature.get(name)
                if sym is None or sym.level != 1:
                    self.fail(f"'{name}' is not an unknown", UnknownSymbolError, t)
                if name in values or name in tables:
                    self.fail(f"'{name}' bound twice", DuplicateSymbolError, t)
                if sym.kind == OBJECTIVE:
                    self.eat_op("=")
                    values[name] = self.parse_value(self.v, self.model.unknown_scales.get(name))
                else:
                    self.eat_word("table")
                    self.eat_op("{")
                    rows: list = []
                    while not self.at_op("}"):
                        rows.append(self._parse_row(self.v, (), None, sym.kind))
                    self.eat_op("}")
                    try:
                        tables[name] = build_table(name, sym.kind, sym.arity, rows)
                    except InputError as e:
                        raise type(e)(e.message, self.pos(t)) from None
            self.eat_op("}")
            universe = V.downward_closure(values.values())
            for table in tables.values():
                for row in table.rows:
                    cells = row.args + ((row.result,) if row.result is not None else ())
                    universe |= V.downward_closure(
                        c for c in cells if not isinstance(c, V.SymbolRef)
                    )
            universe |= set(extra)
            situations.append(
                Situation(
                    name=name_tok.text,
                    system=Candidate(frozenset(universe), values, tables),
                    expected=exp_tok.text,
                    extra=tuple(V.sorted_values(extra)),
                )
            )
        return situations


# --- entry points ----------------------------------------------------------

def parse_model(
    text: str,
    source: str = "<model>",
    base_dir: Optional[Path] = None,
    builder: Optional[ModelBuilder] = None,
    finalize: bool = True,
):
    b = builder or ModelBuilder()
    ModelParser(text, source, base_dir, b).run()
    if finalize:
        return b.finalize(source)
    return b


def parse_model_files(paths: Sequence) -> S.LogicalModel:
    b = ModelBuilder()
    last = "<model>"
    for p in paths:
        path = Path(p)
        last = str(path)
        ModelParser(path.read_text(), str(path), path.parent, b).run()
    return b.finalize(last)


def parse_task(text: str, model: S.LogicalModel, source: str = "<task>") -> S.TaskSpec:
    return TaskParser(text, source, model).run()


def parse_task_file(path, model: S.LogicalModel) -> S.TaskSpec:
    p = Path(path)
    return parse_task(p.read_text(), model, str(p))


def parse_corpus(text: str, model: S.LogicalModel, source: str = "<corpus>") -> list:
    return CorpusParser(text, source, model).run_corpus()


def parse_corpus_file(path, model: S.LogicalModel) -> list:
    p = Path(path)
    return parse_corpus(p.read_text(), model, str(p))


def parse_value_text(text: str, model: S.LogicalModel, expected: Optional[str] = None):
    p = Parser(text, "<value>")
    value = p.parse_value(_View.of_model(model), expected)
    if not p.at_end():
        p.fail("trailing text after value")
    return value
