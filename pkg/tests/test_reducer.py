"""Order reduction, its reports, brute-force equivalence, and step costs."""

import pytest

from stratakb import parser as PS
from stratakb import printer as PR
from stratakb import reducer as R
from stratakb import semantics as E
from stratakb import solver as SV
from stratakb import syntax as S
from stratakb import values as V
from stratakb.errors import InputError, OrderTooLowError, SignatureMismatchError

from conftest import NUMERIC_MODEL, PICK_TASK


def _cand(*nums, values=None):
    return E.Candidate(
        frozenset(V.Num(n) for n in nums), dict(values or {}), {}
    )


class TestReduceOnce:
    def test_drops_the_top_level(self, numeric_model):
        red = R.reduce_once(numeric_model)
        assert numeric_model.order == 2 and red.order == 1
        assert red.fact_table("allowed") is None
        assert red.signature.get("allowed") is None

    def test_order_one_has_nothing_to_compile(self):
        m = PS.parse_model("unknown x : number\nformula f: x = 1\n")
        with pytest.raises(OrderTooLowError):
            R.reduce_once(m)

    def test_predicate_becomes_guarded_choice(self, numeric_model):
        red = R.reduce_once(numeric_model)
        f = red.formula_named("fits").formula
        assert isinstance(f, S.Cases)
        assert [b.guards for b in f.branches] == [
            (S.Cmp("=", S.UnknownRef("width"), S.Lit(V.Num(2))),),
            (S.Cmp("=", S.UnknownRef("width"), S.Lit(V.Num(4))),),
        ]
        assert all(b.body == S.TRUE for b in f.branches)

    def test_functional_rows_substitute_their_results(self):
        m = PS.parse_model(NUMERIC_MODEL + "formula paid: bonus(width) >= 3\n")
        f = R.reduce_once(m).formula_named("paid").formula
        assert isinstance(f, S.Cases)
        assert [b.body for b in f.branches] == [
            S.Cmp(">=", S.Lit(V.Num(1)), S.Lit(V.Num(3))),
            S.Cmp(">=", S.Lit(V.Num(3)), S.Lit(V.Num(3))),
        ]

    def test_same_verdicts_on_every_candidate(self, numeric_model):
        red = R.reduce_once(numeric_model)
        for n in (2, 3, 4, 5):
            cand = _cand(n, values={"width": V.Num(n)})
            a, _ = E.is_solution(numeric_model, cand)
            b, _ = E.is_solution(red, cand)
            assert a == b

    def test_untouched_statements_survive(self, numeric_model):
        red = R.reduce_once(numeric_model)
        assert red.unknown_scales == numeric_model.unknown_scales
        assert red.scales.get("mm") is not None


class TestHigherOrders:
    THIRD = (
        NUMERIC_MODEL
        + "relation blessed level 3 (term)\n"
        + "table blessed { (@allowed) }\n"
        + "formula meta: blessed(@allowed)\n"
    )

    def test_two_steps_down_to_first_order(self):
        m = PS.parse_model(self.THIRD)
        assert m.order == 3
        red, report = R.reduce_to_first_order(m)
        assert red.order == 1
        assert [(s.from_order, s.to_order) for s in report.steps] == [(3, 2), (2, 1)]
        assert report.steps[0].eliminated_symbols == ("blessed",)
        assert set(report.steps[1].eliminated_symbols) == {"allowed", "bonus"}

    def test_higher_order_variable_expands_by_conjunction(self):
        m = PS.parse_model(
            NUMERIC_MODEL
            + "var r order 2 in { @allowed }\n"
            + "formula every: r(width)\n"
        )
        red = R.reduce_once(m)
        assert red.variables == {}
        assert "every" in {nf.name for nf in red.formulas}
        # with a single admissible symbol the conjunction collapses to it
        assert isinstance(red.formula_named("every").formula, S.Cases)

    def test_reduced_text_reparses(self, numeric_model):
        red = R.reduce_once(numeric_model)
        again = PS.parse_model(PR.format_model(red))
        for n in (2, 3):
            cand = _cand(n, values={"width": V.Num(n)})
            assert E.is_solution(red, cand)[0] == E.is_solution(again, cand)[0]


class TestEquivalence:
    def test_model_and_reduction_agree(self, numeric_model):
        red = R.reduce_once(numeric_model)
        res = R.check_equivalence(numeric_model, red, pool=[V.Num(2), V.Num(3)])
        assert res.equivalent and res.counterexample is None
        assert res.candidates_checked > 0

    def test_counterexample_is_reported(self, numeric_model):
        other = PS.parse_model(NUMERIC_MODEL + "formula tight: width = 2\n")
        res = R.check_equivalence(numeric_model, other, pool=[V.Num(2), V.Num(4)])
        assert not res.equivalent
        assert res.verdict == "counterexample"
        assert res.counterexample is not None
        assert res.first_verdict is True and res.second_verdict is False

    def test_signature_mismatch_refused(self, numeric_model, struct_model):
        with pytest.raises(SignatureMismatchError):
            R.check_equivalence(numeric_model, struct_model)

    def test_empty_pool_refused(self, numeric_model):
        with pytest.raises(InputError):
            R.check_equivalence(numeric_model, R.reduce_once(numeric_model), pool=[])


class TestReports:
    def test_step_description_counts_nodes(self, numeric_model):
        red = R.reduce_once(numeric_model)
        step = R.describe_step(numeric_model, red)
        assert step.eliminated_symbols == ("allowed", "bonus")
        assert step.nodes_after > step.nodes_before
        assert step.per_formula[0][0] == "fits"
        d = step.to_dict()
        assert d["fromOrder"] == 2 and d["toOrder"] == 1

    def test_report_renders_every_step(self):
        m = PS.parse_model(TestHigherOrders.THIRD)
        _, report = R.reduce_to_first_order(m)
        text = report.render()
        assert "order 3 -> 2" in text and "order 2 -> 1" in text
        assert "blessed" in text


class TestStepCosts:
    def test_reduction_never_costs_more(self, numeric_model):
        red = R.reduce_once(numeric_model)
        task = PS.parse_task(PICK_TASK, numeric_model)
        report = R.step_cost_comparison(numeric_model, red, task)
        assert report.all_agree and report.never_costlier
        # table probes and guard scans pay the same per-slot price here
        assert report.source_total == report.reduced_total > 0
        d = report.to_dict()
        assert d["sourceTotal"] == report.source_total
        assert "never costlier" in report.render()

    def test_costs_split_eval_from_lookup(self, numeric_model):
        red = R.reduce_once(numeric_model)
        task = PS.parse_task(PICK_TASK, numeric_model)
        report = R.step_cost_comparison(numeric_model, red, task)
        d = report.to_dict()
        assert d["sourceLookup"] > 0 and d["sourceEval"] == 0
        assert d["reducedEval"] > 0 and d["reducedLookup"] == 0
