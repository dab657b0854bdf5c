"""Evaluation, agreement, relevance, and the solution check."""

import pytest

from stratakb import parser as PS
from stratakb import semantics as E
from stratakb import signature as G
from stratakb import syntax as S
from stratakb import values as V
from stratakb.errors import NotRelevantError, UnboundVariableError

from conftest import NUMERIC_MODEL, STRUCT_MODEL


def _cand(*nums, values=None, tables=None, extra=()):
    universe = frozenset(V.Num(n) for n in nums) | frozenset(extra)
    return E.Candidate(universe, dict(values or {}), dict(tables or {}))


def _with_formula(base_text, line):
    return base_text + f"formula {line}\n"


class TestEvalTerm:
    def setup_method(self):
        self.m = PS.parse_model(NUMERIC_MODEL)

    def _eval(self, text, cand=None, counter=None):
        m = PS.parse_model(_with_formula(NUMERIC_MODEL, f"probe: {text} = 0"))
        t = m.formula_named("probe").formula.left
        return E.eval_term(t, m, cand, None, counter)

    def test_literal_const_unknown(self):
        assert self._eval("3") == V.Num(3)
        assert self._eval("pi") == V.PI
        assert self._eval("width") is V.UNDEFINED
        assert self._eval("width", _cand(2, values={"width": V.Num(2)})) == V.Num(2)

    def test_arithmetic_counts_one_step(self):
        c = E.StepCounter()
        assert self._eval("width + 1", _cand(2, values={"width": V.Num(2)}), c) == V.Num(3)
        assert (c.eval_steps, c.lookup_steps) == (1, 0)

    def test_undefined_operand_skips_the_step(self):
        c = E.StepCounter()
        assert self._eval("width + 1", None, c) is V.UNDEFINED
        assert c.total() == 0

    def test_division_by_zero_is_undefined(self):
        assert self._eval("width / 0", _cand(2, values={"width": V.Num(2)})) is V.UNDEFINED

    def test_functional_lookup_hit_and_miss(self):
        c = E.StepCounter()
        assert self._eval("bonus(2)", _cand(2), c) == V.Num(1)
        assert (c.eval_steps, c.lookup_steps) == (0, 1)
        c = E.StepCounter()
        assert self._eval("bonus(3)", _cand(2), c) is V.UNDEFINED
        assert (c.eval_steps, c.lookup_steps) == (0, 2)

    def test_predicate_symbol_has_no_term_value(self):
        # the grammar never puts a predicate in term position; a hand-built
        # application still evaluates defensively
        t = S.App("allowed", (S.Lit(V.Num(2)),))
        assert E.eval_term(t, self.m, _cand(2)) is V.UNDEFINED

    def test_field_projection(self):
        m = PS.parse_model(_with_formula(STRUCT_MODEL, "probe: depth.item = 0"))
        t = m.formula_named("probe").formula.left
        box = V.Composite(
            "box", (("depth", V.Num(7)), ("tint", V.Scalar("hue", "red")))
        )
        cand = E.Candidate(frozenset([box]), {"item": box}, {})
        assert E.eval_term(t, m, cand) == V.Num(7)
        assert E.eval_term(t, m, None) is V.UNDEFINED

    def test_free_variable_raises(self):
        m = PS.parse_model(
            NUMERIC_MODEL + "var y : mm\nformula probe: y = 0\n"
        )
        t = m.formula_named("probe").formula.left
        with pytest.raises(UnboundVariableError):
            E.eval_term(t, m, _cand(2))
        assert E.eval_term(t, m, _cand(2), {"y": V.Num(9)}) == V.Num(9)


class TestEvalFormula:
    def _eval(self, text, cand=None, counter=None, model_text=NUMERIC_MODEL):
        m = PS.parse_model(_with_formula(model_text, f"probe: {text}"))
        f = m.formula_named("probe").formula
        return E.eval_formula(f, m, cand, None, counter)

    def test_comparison_with_undefined_side_is_false(self):
        c = E.StepCounter()
        assert self._eval("width = 2", None, c) is False
        assert c.eval_steps == 1  # the comparison itself is still a step

    def test_closed_world_predicate(self):
        assert self._eval("allowed(2)", _cand(2)) is True
        assert self._eval("allowed(3)", _cand(2)) is False

    def test_membership(self):
        cand = _cand(2, values={"width": V.Num(2)})
        assert self._eval("width in [1, 5]", cand) is True
        assert self._eval("width in [3, 5]", cand) is False

    def test_connectives(self):
        cand = _cand(2, values={"width": V.Num(2)})
        assert self._eval("width = 2 and allowed(width)", cand) is True
        assert self._eval("width = 3 or width = 2", cand) is True
        assert self._eval("not width = 3", cand) is True
        assert self._eval("width = 3 implies allowed(3)", cand) is True

    def test_functional_miss_never_equals_itself(self):
        assert self._eval("bonus(5) = bonus(5)", _cand(2)) is False


class TestCases:
    def _cases(self):
        def eq(n):
            return S.Cmp("=", S.UnknownRef("width"), S.Lit(V.Num(n)))

        return S.Cases(
            (
                S.CaseBranch((eq(1),), S.FALSE),
                S.CaseBranch((eq(2),), S.TRUE),
                S.CaseBranch((eq(2),), S.FALSE),  # shadowed: first match wins
            )
        )

    def test_first_match_wins(self):
        m = PS.parse_model(NUMERIC_MODEL)
        cand = _cand(2, values={"width": V.Num(2)})
        assert E.eval_formula(self._cases(), m, cand) is True

    def test_guard_steps_charged_per_branch_until_match(self):
        m = PS.parse_model(NUMERIC_MODEL)
        c = E.StepCounter()
        cand = _cand(2, values={"width": V.Num(2)})
        E.eval_formula(self._cases(), m, cand, None, c)
        assert c.eval_steps == 2  # guard 1 fails, guard 2 matches, body is free

    def test_total_miss_returns_false_for_free(self):
        m = PS.parse_model(NUMERIC_MODEL)
        c = E.StepCounter()
        cand = _cand(9, values={"width": V.Num(9)})
        assert E.eval_formula(self._cases(), m, cand, None, c) is False
        assert c.eval_steps == 3  # one failed guard per branch, nothing else

    def test_parts_are_walked(self):
        m = PS.parse_model(NUMERIC_MODEL)
        f = self._cases()
        assert "width" in {str(p) for p in S.unknowns_of(f, m.signature)}
        assert S.node_count(f) > 3


class TestAgreement:
    def test_variable_free(self, numeric_model):
        ok, witness = E.in_agreement(
            numeric_model, _cand(2, values={"width": V.Num(2)}),
            numeric_model.formula_named("fits").formula,
        )
        assert ok and witness is None
        ok, witness = E.in_agreement(
            numeric_model, _cand(3, values={"width": V.Num(3)}),
            numeric_model.formula_named("fits").formula,
        )
        assert not ok and witness == {}

    def _quantified(self):
        return PS.parse_model(
            NUMERIC_MODEL + "var y : mm\nformula closed: allowed(y)\n"
        )

    def test_quantified_holds_over_conforming_universe(self):
        m = self._quantified()
        ok, witness = E.in_agreement(m, _cand(2, 4), m.formula_named("closed").formula)
        assert ok and witness is None

    def test_quantified_reports_first_falsifying_witness(self):
        m = self._quantified()
        ok, witness = E.in_agreement(m, _cand(2, 3), m.formula_named("closed").formula)
        assert not ok and witness == {"y": V.Num(3)}

    def test_vacuous_when_no_universe_value_conforms(self):
        m = PS.parse_model(
            NUMERIC_MODEL
            + "scale hue scalar {red}\nvar y : mm\nformula closed: allowed(y)\n"
        )
        cand = E.Candidate(frozenset([V.Scalar("hue", "red")]), {}, {})
        ok, witness = E.in_agreement(m, cand, m.formula_named("closed").formula)
        assert ok and witness is None

    def test_higher_order_range_is_the_declared_list(self):
        m = PS.parse_model(
            "unknown x : number\n"
            "relation p (number)\ntable p { (1) }\n"
            "relation q (number)\ntable q { (1) }\n"
            "var r order 2 in { @q, @p }\n"
            "formula f: r(x)\n"
        )
        rng = E.substitution_range(m, _cand(1), m.variables["r"])
        assert rng == [V.SymbolRef("p"), V.SymbolRef("q")]


class TestRelevance:
    def test_reasons(self, numeric_model):
        assert E.check_relevant(numeric_model, _cand()) == "the universe is empty"
        assert "has no value" in E.check_relevant(numeric_model, _cand(2))
        assert "outside the universe" in E.check_relevant(
            numeric_model, _cand(3, values={"width": V.Num(2)})
        )

    def test_scale_conformance_enforced(self):
        m = PS.parse_model(
            "scale teeth dimensional integral\nunknown n : teeth\n"
        )
        cand = _cand(2.5, values={"n": V.Num(2.5)})
        assert "does not fit scale" in E.check_relevant(m, cand)

    def test_invalid_universe_value_raises(self, numeric_model):
        cand = E.Candidate(frozenset([V.SymbolRef("allowed")]), {}, {})
        with pytest.raises(NotRelevantError):
            E.check_relevant(numeric_model, cand)

    def test_relation_unknown_needs_a_well_shaped_table(self):
        m = PS.parse_model(
            "unknown keep : predicate(1)\nformula some: keep(1)\n"
        )
        assert "has no table" in E.check_relevant(m, _cand(1))
        good = G.build_table("keep", G.PREDICATE, 1, [G.Row((V.Num(1),))])
        assert E.check_relevant(m, _cand(1, tables={"keep": good})) is None
        stray = G.build_table("keep", G.PREDICATE, 1, [G.Row((V.Num(9),))])
        assert "outside the universe" in E.check_relevant(
            m, _cand(1, tables={"keep": stray})
        )


class TestIsSolution:
    def test_solves(self, numeric_model):
        ok, failures = E.is_solution(
            numeric_model, _cand(2, values={"width": V.Num(2)})
        )
        assert ok and failures == []

    def test_failure_names_the_formula(self, numeric_model):
        ok, failures = E.is_solution(
            numeric_model, _cand(3, values={"width": V.Num(3)})
        )
        assert not ok
        assert [f.formula for f in failures] == ["fits"]
        assert "fits" in str(failures[0])

    def test_irrelevant_candidate_fails_without_formula(self, numeric_model):
        ok, failures = E.is_solution(numeric_model, _cand(2))
        assert not ok and failures[0].formula is None

    def test_formula_override(self, numeric_model):
        extra = PS.parse_model(
            _with_formula(NUMERIC_MODEL, "tight: width = 4")
        ).formula_named("tight")
        ok, failures = E.is_solution(
            numeric_model, _cand(2, values={"width": V.Num(2)}), formulas=[extra]
        )
        assert not ok and failures[0].formula == "tight"
