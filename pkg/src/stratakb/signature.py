"""Levelled signatures and finite fact tables.

A signature is a partition of symbols into levels: level 0 holds the builtin
calculable core (arithmetic, comparison, membership, the constant pi, plus
any declared constants and scalar names), level 1 holds the unknowns a task
is solved for, and levels 2 and up hold parameter names whose meaning is a
finite table of facts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from . import values as V
from .errors import (
    ArityMismatchError,
    BadArityError,
    DuplicateSymbolError,
    EmptyLevelZeroError,
    FunctionalConflictError,
    InvalidSignatureError,
    ScaleMismatchError,
)

OBJECTIVE = "objective"
FUNCTIONAL = "functional"
PREDICATE = "predicate"
KINDS = (OBJECTIVE, FUNCTIONAL, PREDICATE)


@dataclass(frozen=True)
class Symbol:
    name: str
    kind: str
    level: int
    arity: Optional[int] = None  # None exactly for objective symbols


# The calculable core every signature's level 0 carries. These symbols give
# arithmetic, comparison and membership a home in the formal partition; the
# evaluator dispatches on dedicated syntax nodes rather than on their names.
BUILTIN_CORE = (
    Symbol("pi", OBJECTIVE, 0),
    Symbol("add", FUNCTIONAL, 0, 2),
    Symbol("sub", FUNCTIONAL, 0, 2),
    Symbol("mul", FUNCTIONAL, 0, 2),
    Symbol("div", FUNCTIONAL, 0, 2),
    Symbol("minus", FUNCTIONAL, 0, 1),
    Symbol("eq", PREDICATE, 0, 2),
    Symbol("lt", PREDICATE, 0, 2),
    Symbol("le", PREDICATE, 0, 2),
    Symbol("gt", PREDICATE, 0, 2),
    Symbol("ge", PREDICATE, 0, 2),
    Symbol("member", PREDICATE, 0, 2),
)
BUILTIN_NAMES = frozenset(s.name for s in BUILTIN_CORE)
BUILTIN_CONSTS: Mapping[str, V.Num] = {"pi": V.PI}


class Signature:
    """Symbols partitioned into levels; order is the highest occupied level."""

    def __init__(self, levels: Sequence[Sequence[Symbol]]):
        self._levels = tuple(tuple(syms) for syms in levels)
        self._by_name = {}
        for syms in self._levels:
            for s in syms:
                self._by_name[s.name] = s

    @property
    def order(self) -> int:
        top = 0
        for i, syms in enumerate(self._levels):
            if syms:
                top = i
        return top

    def level(self, i: int) -> tuple:
        return self._levels[i] if i < len(self._levels) else ()

    @property
    def levels(self) -> tuple:
        return self._levels

    def get(self, name: str) -> Optional[Symbol]:
        return self._by_name.get(name)

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Signature) and self._levels == other._levels

    def symbols(self) -> Iterable[Symbol]:
        for syms in self._levels:
            yield from syms

    def drop_level(self, i: int) -> "Signature":
        levels = [list(s) for s in self._levels]
        if i < len(levels):
            levels[i] = []
        while levels and not levels[-1]:
            levels.pop()
        return Signature(levels)


def build_signature(declarations: Iterable[Symbol]) -> Signature:
    """Assemble and validate a signature from symbol declarations.

    Names must be unique across every level, functional and predicate symbols
    need an arity of at least one, level 0 must be populated, and the
    resulting order must be at least one.
    """
    decls = list(declarations)
    seen: dict = {}
    top = 0
    for s in decls:
        if s.kind not in KINDS:
            raise InvalidSignatureError(f"symbol '{s.name}' has unknown kind '{s.kind}'")
        if s.level < 0:
            raise InvalidSignatureError(f"symbol '{s.name}' has negative level")
        if s.kind == OBJECTIVE:
            if s.arity is not None:
                raise BadArityError(f"objective symbol '{s.name}' must not carry an arity")
        else:
            if s.arity is None or s.arity < 1:
                raise BadArityError(f"symbol '{s.name}' needs arity >= 1")
        prior = seen.get(s.name)
        if prior is not None:
            raise DuplicateSymbolError(
                f"symbol '{s.name}' declared at level {prior.level} and again at level {s.level}"
            )
        seen[s.name] = s
        top = max(top, s.level)
    levels: list = [[] for _ in range(top + 1)]
    for s in decls:
        levels[s.level].append(s)
    if not levels or not levels[0]:
        raise EmptyLevelZeroError("level 0 is empty; the builtin core is required")
    sig = Signature(levels)
    if sig.order < 1:
        raise InvalidSignatureError("signature order must be at least 1 (no symbols above level 0)")
    return sig


# --- finite tables ---------------------------------------------------------

@dataclass(frozen=True)
class Row:
    args: tuple  # tuple[Value, ...]
    result: Optional[object] = None  # Value for functional rows, None for predicate rows


def _row_key(row: Row):
    k = tuple(V.sort_key(a) for a in row.args)
    return k + (V.sort_key(row.result),) if row.result is not None else k


@dataclass(frozen=True)
class FiniteTable:
    """An explicit, finite interpretation of one functional or predicate symbol.

    Rows are kept sorted in canonical value order, so construction is
    insensitive to the order facts were written down.
    """

    symbol: str
    kind: str
    arity: int
    rows: tuple  # tuple[Row, ...]
    arg_scales: tuple = ()  # tuple[Optional[str], ...] — () when unscaled
    result_scale: Optional[str] = None

    def is_empty(self) -> bool:
        return not self.rows


def build_table(
    symbol: str,
    kind: str,
    arity: int,
    rows: Iterable[Row],
    arg_scales: Sequence = (),
    result_scale: Optional[str] = None,
    scales: Optional[V.ScaleSet] = None,
    tol: float = V.DEFAULT_TOLERANCE,
) -> FiniteTable:
    """Validate and canonicalise rows; no level restriction (candidate tables too)."""
    checked = []
    for row in rows:
        if len(row.args) != arity:
            raise ArityMismatchError(
                f"table '{symbol}': row has {len(row.args)} arguments, expected {arity}"
            )
        if kind == FUNCTIONAL and row.result is None:
            raise ArityMismatchError(f"table '{symbol}': functional row lacks a result")
        if kind == PREDICATE and row.result is not None:
            raise ArityMismatchError(f"table '{symbol}': predicate row carries a result")
        if scales is not None and arg_scales:
            for j, (a, sc) in enumerate(zip(row.args, arg_scales)):
                if sc is not None and not scales.conforms(a, sc):
                    raise ScaleMismatchError(
                        f"table '{symbol}': argument {j + 1} value does not fit scale '{sc}'"
                    )
            if kind == FUNCTIONAL and result_scale is not None:
                if not scales.conforms(row.result, result_scale):
                    raise ScaleMismatchError(
                        f"table '{symbol}': result value does not fit scale '{result_scale}'"
                    )
        checked.append(row)

    # Dedup identical rows; reject functional rows whose arguments collide
    # within tolerance while their results do not.
    unique: list = []
    for row in checked:
        clash = False
        for prior in unique:
            if row == prior:
                clash = True
                break
            if kind == FUNCTIONAL and all(
                V.values_equal(a, b, tol) for a, b in zip(row.args, prior.args)
            ):
                if not V.values_equal(row.result, prior.result, tol):
                    raise FunctionalConflictError(
                        f"table '{symbol}': two rows share arguments but disagree on results"
                    )
                clash = True
                break
        if not clash:
            unique.append(row)
    unique.sort(key=_row_key)
    return FiniteTable(
        symbol, kind, arity, tuple(unique), tuple(arg_scales), result_scale
    )


def make_table(
    symbol: Symbol,
    rows: Iterable[Row],
    arg_scales: Sequence = (),
    result_scale: Optional[str] = None,
    scales: Optional[V.ScaleSet] = None,
) -> FiniteTable:
    """The public constructor for fact tables of level-2-and-up symbols."""
    if symbol.level < 2:
        raise InvalidSignatureError(
            f"'{symbol.name}' is level {symbol.level}; fact tables interpret level >= 2 symbols"
        )
    if symbol.kind == OBJECTIVE:
        raise BadArityError(f"objective symbol '{symbol.name}' cannot own a table")
    return build_table(
        symbol.name, symbol.kind, symbol.arity, rows, arg_scales, result_scale, scales
    )


def lookup(table: FiniteTable, args: Sequence, tol: float = V.DEFAULT_TOLERANCE, counter=None):
    """Scan rows in canonical order; first tolerant match wins.

    Functional tables return the row result or UNDEFINED on a miss;
    predicate tables answer membership closed-world (miss means False).
    Each per-position comparison is charged to counter.lookup_steps.
    """
    if len(args) != table.arity:
        raise ArityMismatchError(
            f"table '{table.symbol}' called with {len(args)} arguments, expected {table.arity}"
        )
    for row in table.rows:
        matched = True
        for a, b in zip(args, row.args):
            if counter is not None:
                counter.lookup_steps += 1
            if not V.values_equal(a, b, tol):
                matched = False
                break
        if matched:
            return row.result if table.kind == FUNCTIONAL else True
    return V.UNDEFINED if table.kind == FUNCTIONAL else False


@dataclass
class AlgebraicSystem:
    """The fact layer for one level: symbol name -> finite table."""

    level: int
    tables: dict

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, AlgebraicSystem)
            and self.level == other.level
            and self.tables == other.tables
        )
