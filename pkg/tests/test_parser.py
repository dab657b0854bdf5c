"""Model language: statements, values, tasks, corpora, and their errors."""

import math

import pytest

from stratakb import parser as PS
from stratakb import signature as G
from stratakb import syntax as S
from stratakb import values as V
from stratakb.errors import (
    BadArityError,
    DeltaWithoutUnknownError,
    EmptyOutputError,
    ModelSyntaxError,
    QuantifierRejectedError,
    ScaleMismatchError,
    SecondOrderInDeltaError,
    StratakbError,
    UnknownScaleError,
    UnknownSymbolError,
)

from conftest import NUMERIC_MODEL, STRUCT_MODEL


class TestScaleStatements:
    def test_dimensional_unit_and_integral(self):
        m = PS.parse_model(
            "scale hb dimensional unit hardness integral\nunknown x : hb\n"
        )
        sc = m.scales.get("hb")
        assert sc.unit == "hardness" and sc.integral

    def test_scalar_elements(self):
        m = PS.parse_model("scale hue scalar {red, blue}\nunknown x : hue\n")
        assert m.scales.get("hue").elements == ("red", "blue")

    def test_interval_of_requires_dimensional_base(self):
        with pytest.raises(UnknownScaleError):
            PS.parse_model(
                "scale hue scalar {red}\nscale band interval of hue\nunknown x : hue\n"
            )

    def test_structure_fields(self):
        m = PS.parse_model(STRUCT_MODEL)
        assert m.scales.get("box").fields == (("depth", "mm"), ("tint", "hue"))

    def test_builtin_scales_always_available(self):
        m = PS.parse_model("unknown x : number\nformula f: x = 1\n")
        assert m.scales.get("number") is not None
        assert m.scales.get("integer").integral


class TestModelStatements:
    def test_const_declaration(self):
        m = PS.parse_model("const lid = 7\nunknown x : number\n")
        assert m.const_value("lid") == V.Num(7)
        assert m.const_value("pi") == V.PI

    def test_relation_levels_and_order(self):
        m = PS.parse_model(
            "unknown x : number\n"
            "relation p (number)\n"
            "table p { (1) }\n"
            "relation q level 3 (term)\n"
            "table q { (@p) }\n"
        )
        assert m.order == 3
        assert m.signature.get("p").level == 2
        assert m.signature.get("q").level == 3

    def test_table_rows_parse_against_declared_scales(self):
        with pytest.raises(ScaleMismatchError):
            PS.parse_model(
                "scale hue scalar {red}\n"
                "unknown x : hue\n"
                "relation p (hue)\n"
                "table p { (3) }\n"
            )

    def test_numeric_model_shape(self):
        m = PS.parse_model(NUMERIC_MODEL)
        assert m.order == 2
        assert [nf.name for nf in m.formulas] == ["fits"]
        assert m.fact_table("allowed").kind == G.PREDICATE
        assert m.fact_table("bonus").kind == G.FUNCTIONAL

    def test_table_from_file(self, tmp_path):
        data = tmp_path / "p.tsv"
        data.write_text("# args\t->\tresult\n1\t->\t10\n2\t->\t20\n")
        text = (
            "unknown x : number\n"
            "relation f (number) -> number\n"
            'table f file "p.tsv"\n'
        )
        src = tmp_path / "m.lm"
        src.write_text(text)
        m = PS.parse_model_files([src])
        assert len(m.fact_table("f").rows) == 2
        assert G.lookup(m.fact_table("f"), [V.Num(2)]) == V.Num(20)

    def test_var_declarations(self):
        m = PS.parse_model(
            "unknown x : number\n"
            "relation p (number)\n"
            "table p { (1) }\n"
            "relation q (number)\n"
            "table q { (2) }\n"
            "var y : number\n"
            "var r order 2 in { @p, @q }\n"
            "formula f: r(x)\n"
        )
        assert m.variables["y"].order == 1
        assert m.variables["r"].values == (V.SymbolRef("p"), V.SymbolRef("q"))


class TestFormulaSyntax:
    def _model(self, formula: str):
        return PS.parse_model(NUMERIC_MODEL + f"formula extra: {formula}\n")

    def test_connective_precedence(self):
        m = self._model("width = 2 or width = 4 and allowed(width)")
        f = m.formula_named("extra").formula
        assert isinstance(f, S.Or)
        assert isinstance(f.parts[1], S.And)

    def test_arithmetic_left_association(self):
        m = self._model("width = width / 2 / 3")
        eq = m.formula_named("extra").formula
        rhs = eq.right
        assert isinstance(rhs, S.Arith) and rhs.op == "/"
        assert isinstance(rhs.left, S.Arith)
        assert rhs.right == S.Lit(V.Num(3))

    def test_exact_literal_division_folds(self):
        m = self._model("width = 8 / 2")
        assert m.formula_named("extra").formula.right == S.Lit(V.Num(4))

    def test_pi_resolves_to_builtin(self):
        m = self._model("width = pi")
        assert m.formula_named("extra").formula.right == S.ConstRef("pi")
        assert m.const_value("pi") == V.PI

    def test_quantifiers_rejected(self):
        with pytest.raises(QuantifierRejectedError):
            self._model("forall width = 2")

    def test_unknown_symbol_positioned(self):
        with pytest.raises(UnknownSymbolError) as exc:
            self._model("ghost(width)")
        assert "ghost" in str(exc.value)

    def test_application_arity_checked(self):
        with pytest.raises(BadArityError):
            self._model("bonus(1, 2) = 3")

    def test_interval_literal_in_term_position(self):
        m = self._model("width in [1, 5]")
        f = m.formula_named("extra").formula
        assert isinstance(f, S.Member)
        assert f.container == S.Lit(V.Interval(V.Num(1), V.Num(5)))


class TestValueParsing:
    def test_composite_literal_requires_every_field(self):
        m = PS.parse_model(STRUCT_MODEL)
        v = PS.parse_value_text("box { depth: 3, tint: red }", m, "box")
        assert v.get("tint") == V.Scalar("hue", "red")
        with pytest.raises(StratakbError):
            PS.parse_value_text("box { depth: 3 }", m, "box")

    def test_unlabelled_interval_adopts_expected_base_unit(self):
        m = PS.parse_model(
            "scale mm dimensional\n"
            "scale span interval of mm\n"
            "unknown x : mm\n"
        )
        v = PS.parse_value_text("[1, 2]", m, "span")
        assert v.unit == "mm"

    def test_trailing_text_rejected(self):
        m = PS.parse_model(NUMERIC_MODEL)
        with pytest.raises(StratakbError):
            PS.parse_value_text("3 oops", m, "mm")


class TestTaskParsing:
    def test_full_task(self, numeric_model):
        t = PS.parse_task(
            "task go {\n"
            "    given near: width = 2\n"
            "    criterion allowed(width)\n"
            "    domain width in {2, 4}\n"
            "    output width\n"
            "}\n",
            numeric_model,
        )
        assert t.name == "go"
        assert [nf.name for nf in t.delta] == ["near"]
        assert isinstance(t.criterion, S.BoolCriterion)
        key = next(iter(t.domains))
        assert str(key) == "width" and t.domains[key] == (V.Num(2), V.Num(4))
        assert t.outputs == [S.UnknownRef("width")]

    def test_minimize_criterion(self, numeric_model):
        t = PS.parse_task(
            "task low {\n    minimize width\n    output width\n}\n",
            numeric_model,
        )
        assert t.criterion == S.Extremal("minimize", S.UnknownRef("width"))

    def test_outputs_required(self, numeric_model):
        with pytest.raises(EmptyOutputError):
            PS.parse_task("task t {\n    given g: width = 2\n}\n", numeric_model)

    def test_given_must_mention_an_unknown(self, numeric_model):
        with pytest.raises(DeltaWithoutUnknownError):
            PS.parse_task(
                "task t {\n    given g: 1 = 1\n    output width\n}\n",
                numeric_model,
            )

    def test_given_must_stay_first_order(self, numeric_model):
        with pytest.raises(SecondOrderInDeltaError):
            PS.parse_task(
                "task t {\n    given g: allowed(width)\n    output width\n}\n",
                numeric_model,
            )


class TestCorpusParsing:
    def test_situations_with_universe_extras(self, numeric_model):
        sits = PS.parse_corpus(
            "situation good {\n"
            "    expect: adequate\n"
            "    width = 2\n"
            "    universe { 9 }\n"
            "}\n"
            "situation bad {\n"
            "    expect: violating\n"
            "    width = 3\n"
            "}\n",
            numeric_model,
        )
        assert [s.name for s in sits] == ["good", "bad"]
        assert sits[0].expected == "adequate"
        assert sits[0].system.values["width"] == V.Num(2)
        assert V.Num(9) in sits[0].system.universe

    def test_unknown_binding_name_rejected(self, numeric_model):
        with pytest.raises(StratakbError):
            PS.parse_corpus(
                "situation s {\n    expect: adequate\n    ghost = 2\n}\n",
                numeric_model,
            )


class TestPositions:
    def test_syntax_error_carries_line_and_column(self):
        with pytest.raises(ModelSyntaxError) as exc:
            PS.parse_model("unknown x : number\nformula broken: x = \n")
        assert str(exc.value).startswith("<model>:")
        assert exc.value.pos is not None and exc.value.pos.line >= 2

    def test_rational_literal_in_value_position(self):
        m = PS.parse_model("const half = 1 / 2\nunknown x : number\n")
        assert m.const_value("half") == V.Num(0.5)
        assert m.const_value("half").exact

    def test_pi_is_float_backed(self):
        assert float(V.PI.value) == math.pi
