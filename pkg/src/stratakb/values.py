"""Values and scales.

Every quantity the engine touches is one of a handful of immutable value
kinds: numbers (exact rationals where possible, floats otherwise), named
points of scalar scales, closed intervals with an opaque unit label,
composites typed by a structural scale, and references to signature symbols.
A single tolerant equality predicate is shared by formula evaluation and by
table row matching; keeping those two in lockstep is what makes the
order-reduction translation checkable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Union

from .errors import DuplicateSymbolError, InputError, UnknownScaleError

DEFAULT_TOLERANCE = 1e-9

Numeric = Union[Fraction, float]


class _Undefined:
    """The single 'no value' result of partial operations."""

    _instance: Optional["_Undefined"] = None

    def __new__(cls) -> "_Undefined":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "undefined"


UNDEFINED = _Undefined()


@dataclass(frozen=True)
class Num:
    """A number. Exact while the payload is a Fraction, inexact once a float."""

    value: Numeric

    @property
    def exact(self) -> bool:
        return isinstance(self.value, Fraction)

    def __repr__(self) -> str:
        return f"Num({self.value!r})"


@dataclass(frozen=True)
class Scalar:
    """A named point of a scalar scale, e.g. cast_iron on classification."""

    scale: str
    name: str


@dataclass(frozen=True)
class Interval:
    """A closed numeric interval with an opaque unit label."""

    lo: Num
    hi: Num
    unit: Optional[str] = None

    def __post_init__(self) -> None:
        if not (self.lo.value <= self.hi.value):
            raise InputError(
                f"interval lower bound {self.lo.value} exceeds upper bound {self.hi.value}"
            )


@dataclass(frozen=True)
class Composite:
    """A structured value: ordered (field, value) pairs typed by a structural scale.

    Fields may transiently hold UNDEFINED while a solver assembles a value;
    such holes make any formula touching them false.
    """

    scale: str
    fields: tuple  # tuple[tuple[str, Value | UNDEFINED], ...] in scale field order

    def get(self, name: str):
        for fname, fval in self.fields:
            if fname == name:
                return fval
        return UNDEFINED

    def with_field(self, name: str, value) -> "Composite":
        return Composite(
            self.scale,
            tuple((n, value if n == name else v) for n, v in self.fields),
        )

    def has_hole(self) -> bool:
        for _, v in self.fields:
            if v is UNDEFINED:
                return True
            if isinstance(v, Composite) and v.has_hole():
                return True
        return False


@dataclass(frozen=True)
class SymbolRef:
    """A signature symbol used as a value (an element of a higher universe)."""

    name: str


Value = Union[Num, Scalar, Interval, Composite, SymbolRef]


# --- scales ----------------------------------------------------------------

@dataclass(frozen=True)
class DimensionalScale:
    name: str
    unit: Optional[str] = None
    integral: bool = False


@dataclass(frozen=True)
class ScalarScale:
    name: str
    elements: tuple


@dataclass(frozen=True)
class StructuralScale:
    name: str
    fields: tuple  # tuple[tuple[str field, str scale_name], ...]

    def field_scale(self, fname: str) -> Optional[str]:
        for n, s in self.fields:
            if n == fname:
                return s
        return None


@dataclass(frozen=True)
class IntervalScale:
    name: str
    base: str  # name of a dimensional scale


@dataclass(frozen=True)
class TermScale:
    """The pseudo-scale of symbol-reference positions in fact relations."""

    name: str = "term"


Scale = Union[DimensionalScale, ScalarScale, StructuralScale, IntervalScale, TermScale]

NUMBER = DimensionalScale("number")
INTEGER = DimensionalScale("integer", integral=True)
TERM = TermScale()
BUILTIN_SCALE_NAMES = ("number", "integer", "term")


class ScaleSet:
    """Ordered registry of scales; builtins are always present."""

    def __init__(self) -> None:
        self._scales: dict = {"number": NUMBER, "integer": INTEGER, "term": TERM}
        self._element_owner: dict = {}

    def add(self, scale: Scale) -> None:
        if scale.name in self._scales:
            raise DuplicateSymbolError(f"scale '{scale.name}' declared twice")
        if isinstance(scale, ScalarScale):
            for el in scale.elements:
                owner = self._element_owner.get(el)
                if owner is not None:
                    raise DuplicateSymbolError(
                        f"scalar name '{el}' belongs to both '{owner}' and '{scale.name}'"
                    )
                self._element_owner[el] = scale.name
        self._scales[scale.name] = scale

    def get(self, name: str) -> Optional[Scale]:
        return self._scales.get(name)

    def require(self, name: str) -> Scale:
        sc = self._scales.get(name)
        if sc is None:
            raise UnknownScaleError(f"unknown scale '{name}'")
        return sc

    def element_owner(self, element: str) -> Optional[str]:
        return self._element_owner.get(element)

    def declared(self) -> Iterator[Scale]:
        """User-declared scales in declaration order (builtins skipped)."""
        for name, sc in self._scales.items():
            if name not in BUILTIN_SCALE_NAMES:
                yield sc

    def __iter__(self) -> Iterator[Scale]:
        return iter(self._scales.values())

    def __contains__(self, name: str) -> bool:
        return name in self._scales

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ScaleSet) and self._scales == other._scales

    def check_structures(self) -> None:
        """Reject structural cycles and dangling field scale references."""
        for sc in self._scales.values():
            if isinstance(sc, StructuralScale):
                for fname, fscale in sc.fields:
                    if fscale not in self._scales:
                        raise UnknownScaleError(
                            f"field '{fname}' of '{sc.name}' uses unknown scale '{fscale}'"
                        )
            if isinstance(sc, IntervalScale):
                base = self._scales.get(sc.base)
                if not isinstance(base, DimensionalScale):
                    raise UnknownScaleError(
                        f"interval scale '{sc.name}' needs a dimensional base, got '{sc.base}'"
                    )
        state: dict = {}

        def visit(name: str, trail: tuple) -> None:
            if state.get(name) == 2:
                return
            if state.get(name) == 1:
                cycle = " -> ".join(trail + (name,))
                raise InputError(f"structural scales form a cycle: {cycle}")
            state[name] = 1
            sc = self._scales[name]
            if isinstance(sc, StructuralScale):
                for _, fscale in sc.fields:
                    visit(fscale, trail + (name,))
            state[name] = 2

        for name, sc in self._scales.items():
            if isinstance(sc, StructuralScale):
                visit(name, ())

    def conforms(self, value, scale_name: str) -> bool:
        sc = self._scales.get(scale_name)
        if sc is None:
            return False
        if value is UNDEFINED:
            return False
        if isinstance(sc, DimensionalScale):
            return isinstance(value, Num) and (not sc.integral or _is_integral(value))
        if isinstance(sc, ScalarScale):
            return isinstance(value, Scalar) and value.scale == sc.name and value.name in sc.elements
        if isinstance(sc, IntervalScale):
            if not isinstance(value, Interval):
                return False
            base = self._scales.get(sc.base)
            base_unit = base.unit if isinstance(base, DimensionalScale) else None
            return value.unit == base_unit
        if isinstance(sc, StructuralScale):
            if not isinstance(value, Composite) or value.scale != sc.name:
                return False
            if len(value.fields) != len(sc.fields):
                return False
            for (fname, fval), (dname, dscale) in zip(value.fields, sc.fields):
                if fname != dname or not self.conforms(fval, dscale):
                    return False
            return True
        if isinstance(sc, TermScale):
            return isinstance(value, (SymbolRef, Scalar, Num))
        return False

    def valid_base_value(self, value) -> bool:
        """Is this a value of the ground domain (usable in a candidate universe)?"""
        if isinstance(value, Num):
            return True
        if isinstance(value, Scalar):
            owner = self._scales.get(value.scale)
            return isinstance(owner, ScalarScale) and value.name in owner.elements
        if isinstance(value, Interval):
            return True  # units are opaque labels
        if isinstance(value, Composite):
            sc = self._scales.get(value.scale)
            return isinstance(sc, StructuralScale) and self.conforms(value, value.scale)
        return False  # SymbolRef and UNDEFINED live above the ground domain


def _is_integral(n: Num) -> bool:
    if isinstance(n.value, Fraction):
        return n.value.denominator == 1
    return float(n.value).is_integer()


# --- tolerant comparison ---------------------------------------------------

def _as_fraction(n: Numeric) -> Fraction:
    return n if isinstance(n, Fraction) else Fraction(n)


def nums_equal(a: Num, b: Num, tol: float = DEFAULT_TOLERANCE) -> bool:
    if a.exact and b.exact:
        return a.value == b.value
    fa, fb = float(a.value), float(b.value)
    return abs(fa - fb) <= tol * max(1.0, abs(fa), abs(fb))


def num_lt(a: Num, b: Num, tol: float = DEFAULT_TOLERANCE) -> bool:
    if nums_equal(a, b, tol):
        return False
    return a.value < b.value


def num_le(a: Num, b: Num, tol: float = DEFAULT_TOLERANCE) -> bool:
    return nums_equal(a, b, tol) or a.value < b.value


def in_interval(x: Num, iv: Interval, tol: float = DEFAULT_TOLERANCE) -> bool:
    return num_le(iv.lo, x, tol) and num_le(x, iv.hi, tol)


def values_equal(a, b, tol: float = DEFAULT_TOLERANCE) -> bool:
    """Tolerant equality; UNDEFINED equals nothing, itself included."""
    if a is UNDEFINED or b is UNDEFINED:
        return False
    if isinstance(a, Num) and isinstance(b, Num):
        return nums_equal(a, b, tol)
    if isinstance(a, Scalar) and isinstance(b, Scalar):
        return a.scale == b.scale and a.name == b.name
    if isinstance(a, Interval) and isinstance(b, Interval):
        return (
            a.unit == b.unit
            and nums_equal(a.lo, b.lo, tol)
            and nums_equal(a.hi, b.hi, tol)
        )
    if isinstance(a, Composite) and isinstance(b, Composite):
        if a.scale != b.scale or len(a.fields) != len(b.fields):
            return False
        return all(
            na == nb and values_equal(va, vb, tol)
            for (na, va), (nb, vb) in zip(a.fields, b.fields)
        )
    if isinstance(a, SymbolRef) and isinstance(b, SymbolRef):
        return a.name == b.name
    return False


# --- arithmetic ------------------------------------------------------------

def num_arith(op: str, a: Num, b: Num):
    """Apply +, -, *, / keeping exactness when both operands are exact."""
    av, bv = a.value, b.value
    if op == "/":
        if (isinstance(bv, Fraction) and bv == 0) or (isinstance(bv, float) and bv == 0.0):
            return UNDEFINED
    exact = isinstance(av, Fraction) and isinstance(bv, Fraction)
    if not exact:
        av, bv = float(av), float(bv)
    if op == "+":
        return Num(av + bv)
    if op == "-":
        return Num(av - bv)
    if op == "*":
        return Num(av * bv)
    if op == "/":
        return Num(av / bv)
    raise ValueError(f"unknown arithmetic op {op!r}")


def num_neg(a: Num) -> Num:
    return Num(-a.value)


# --- canonical ordering ----------------------------------------------------

def sort_key(v):
    """Total order over values: numbers, scalars, intervals, composites, refs."""
    if isinstance(v, Num):
        return (0, _as_fraction(v.value), 0 if v.exact else 1)
    if isinstance(v, Scalar):
        return (1, v.scale, v.name)
    if isinstance(v, Interval):
        return (2, _as_fraction(v.lo.value), _as_fraction(v.hi.value), v.unit or "")
    if isinstance(v, Composite):
        return (3, v.scale, tuple(sort_key(fv) for _, fv in v.fields))
    if isinstance(v, SymbolRef):
        return (4, v.name)
    return (9,)  # UNDEFINED sorts last


def sorted_values(values: Iterable) -> list:
    return sorted(values, key=sort_key)


def downward_closure(values: Iterable) -> set:
    """The values plus every field value nested inside composites."""
    out: set = set()

    def add(v) -> None:
        if v is UNDEFINED:
            return
        if v not in out:
            out.add(v)
            if isinstance(v, Composite):
                for _, fv in v.fields:
                    add(fv)

    for v in values:
        add(v)
    return out


PI = Num(math.pi)
