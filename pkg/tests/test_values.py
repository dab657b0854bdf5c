"""Value layer: numbers, scales, conformance, canonical ordering."""

from fractions import Fraction

import pytest

from stratakb import values as V
from stratakb.errors import InputError


class TestNum:
    def test_integer_literals_stay_exact(self):
        n = V.Num(Fraction(3))
        assert n.exact
        assert V.nums_equal(n, V.Num(Fraction(3)))

    def test_exact_comparison_admits_no_tolerance(self):
        a = V.Num(Fraction(1, 3))
        b = V.Num(Fraction(1, 3) + Fraction(1, 10**12))
        assert not V.nums_equal(a, b)

    def test_inexact_comparison_is_relative(self):
        a = V.Num(1e9)
        b = V.Num(1e9 + 0.5)  # 5e-10 relative
        assert V.nums_equal(a, b, tol=1e-9)
        assert not V.nums_equal(a, b, tol=1e-12)

    def test_small_magnitudes_use_absolute_floor(self):
        assert V.nums_equal(V.Num(0.0), V.Num(5e-10), tol=1e-9)
        assert not V.nums_equal(V.Num(0.0), V.Num(5e-9), tol=1e-9)

    def test_ordering_helpers_respect_tolerance(self):
        a, b = V.Num(1.0), V.Num(1.0 + 1e-12)
        assert not V.num_lt(a, b)
        assert V.num_le(a, b)
        assert V.num_lt(V.Num(1.0), V.Num(2.0))


class TestArithmetic:
    def test_exact_operands_stay_exact(self):
        out = V.num_arith("/", V.Num(Fraction(1)), V.Num(Fraction(3)))
        assert out.exact and out.value == Fraction(1, 3)

    def test_mixed_operands_fall_to_float(self):
        out = V.num_arith("+", V.Num(Fraction(1)), V.Num(0.5))
        assert not out.exact and out.value == 1.5

    def test_division_by_zero_is_undefined(self):
        assert V.num_arith("/", V.Num(1.0), V.Num(0.0)) is V.UNDEFINED
        assert V.num_arith("/", V.Num(Fraction(1)), V.Num(Fraction(0))) is V.UNDEFINED


class TestUndefined:
    def test_undefined_equals_nothing_including_itself(self):
        assert not V.values_equal(V.UNDEFINED, V.UNDEFINED)
        assert not V.values_equal(V.UNDEFINED, V.Num(1))

    def test_undefined_sorts_last(self):
        out = V.sorted_values([V.UNDEFINED, V.Num(1)])
        assert out[-1] is V.UNDEFINED


class TestInterval:
    def test_inverted_bounds_rejected(self):
        with pytest.raises(InputError):
            V.Interval(V.Num(2), V.Num(1))

    def test_equality_needs_matching_unit(self):
        a = V.Interval(V.Num(1), V.Num(2), "mm")
        b = V.Interval(V.Num(1), V.Num(2), "kg")
        assert not V.values_equal(a, b)
        assert V.values_equal(a, V.Interval(V.Num(1), V.Num(2), "mm"))


class TestComposite:
    def _box(self):
        return V.Composite(
            "box", (("depth", V.Num(3)), ("tint", V.Scalar("hue", "red")))
        )

    def test_get_and_update(self):
        box = self._box()
        assert box.get("depth") == V.Num(3)
        assert box.get("missing") is V.UNDEFINED
        taller = box.with_field("depth", V.Num(9))
        assert taller.get("depth") == V.Num(9)
        assert box.get("depth") == V.Num(3)

    def test_hole_detection_recurses(self):
        box = self._box().with_field("depth", V.UNDEFINED)
        assert box.has_hole()
        nested = V.Composite("outer", (("inner", box),))
        assert nested.has_hole()
        assert not self._box().has_hole()


class TestScaleConformance:
    def _scales(self):
        s = V.ScaleSet()
        s.add(V.DimensionalScale("mm", "mm"))
        s.add(V.DimensionalScale("teeth", "teeth", integral=True))
        s.add(V.ScalarScale("hue", ("red", "blue")))
        s.add(V.IntervalScale("span", "mm"))
        s.add(V.StructuralScale("box", (("depth", "mm"), ("tint", "hue"))))
        return s

    def test_dimensional_accepts_numbers(self):
        s = self._scales()
        assert s.conforms(V.Num(3.5), "mm")
        assert not s.conforms(V.Scalar("hue", "red"), "mm")

    def test_integral_scale_rejects_fractions(self):
        s = self._scales()
        assert s.conforms(V.Num(Fraction(4)), "teeth")
        assert not s.conforms(V.Num(4.5), "teeth")

    def test_scalar_membership(self):
        s = self._scales()
        assert s.conforms(V.Scalar("hue", "red"), "hue")
        assert not s.conforms(V.Scalar("hue", "green"), "hue")
        assert not s.conforms(V.Scalar("other", "red"), "hue")

    def test_interval_scale_requires_base_unit(self):
        s = self._scales()
        assert s.conforms(V.Interval(V.Num(1), V.Num(2), "mm"), "span")
        assert not s.conforms(V.Interval(V.Num(1), V.Num(2)), "span")
        assert not s.conforms(V.Interval(V.Num(1), V.Num(2), "kg"), "span")

    def test_structural_checks_fields_recursively(self):
        s = self._scales()
        good = V.Composite(
            "box", (("depth", V.Num(3)), ("tint", V.Scalar("hue", "red")))
        )
        bad = good.with_field("tint", V.Num(1))
        assert s.conforms(good, "box")
        assert not s.conforms(bad, "box")


class TestCanonicalOrder:
    def test_total_order_is_stable_across_kinds(self):
        vals = [
            V.Scalar("hue", "red"),
            V.Num(2),
            V.Interval(V.Num(0), V.Num(1)),
            V.Num(1),
            V.SymbolRef("allowed"),
        ]
        out = V.sorted_values(vals)
        assert out == [
            V.Num(1),
            V.Num(2),
            V.Scalar("hue", "red"),
            V.Interval(V.Num(0), V.Num(1)),
            V.SymbolRef("allowed"),
        ]
        assert V.sorted_values(reversed(vals)) == out

    def test_downward_closure_opens_composites(self):
        box = V.Composite(
            "box", (("depth", V.Num(3)), ("tint", V.Scalar("hue", "red")))
        )
        closed = V.downward_closure([box])
        assert V.Num(3) in closed
        assert V.Scalar("hue", "red") in closed
        assert box in closed
