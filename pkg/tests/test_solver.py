"""Domain derivation, candidate search, and the exhaustive twin."""

import pytest

from stratakb import parser as PS
from stratakb import solver as SV
from stratakb import values as V
from stratakb.errors import InputError, UnboundedUnknownError

from conftest import NUMERIC_MODEL, PICK_TASK


def _task(model, text):
    return PS.parse_task(text, model)


def _slot(model, task, key):
    return SV.derive_domains(model, task).slot_map()[key]


def _outs(result):
    return [s.output_map() for s in result.solutions]


class TestDeriveDomains:
    def test_given_equality_pins_the_slot(self, numeric_model):
        t = _task(
            numeric_model,
            "task t {\n    given g: width = 2\n    domain width in {2, 4}\n"
            "    output width\n}\n",
        )
        slot = _slot(numeric_model, t, "width")
        assert slot.source == "pin"
        assert slot.values == [V.Num(2)]

    def test_contradictory_pins_empty_the_slot(self, numeric_model):
        t = _task(
            numeric_model,
            "task t {\n    given a: width = 2\n    given b: width = 3\n"
            "    output width\n}\n",
        )
        assert _slot(numeric_model, t, "width").values == []
        assert SV.solve(numeric_model, t).status == "no-solutions"

    def test_annotation_beats_derived_sources(self, numeric_model):
        t = _task(
            numeric_model,
            "task t {\n    domain width in {2}\n    output width\n}\n",
        )
        slot = _slot(numeric_model, t, "width")
        assert slot.source == "annotation" and slot.values == [V.Num(2)]

    def test_disjunct_equalities_enumerate(self):
        m = PS.parse_model(
            "unknown x : number\nformula pickone: x = 2 or x = 4\n"
        )
        t = _task(m, "task t {\n    output x\n}\n")
        slot = _slot(m, t, "x")
        assert slot.source == "equalities"
        assert slot.values == [V.Num(2), V.Num(4)]

    def test_defining_expression_becomes_a_hole(self, numeric_model):
        m = PS.parse_model(
            NUMERIC_MODEL + "unknown depth : mm\nformula link: depth = width + 1\n"
        )
        t = _task(m, "task t {\n    output depth\n}\n")
        slot = _slot(m, t, "depth")
        assert slot.source == "computed" and slot.is_hole

    def test_scalar_scale_enumerates_its_points(self, struct_model):
        t = _task(struct_model, "task t {\n    output tint.item\n}\n")
        slot = _slot(struct_model, t, "tint.item")
        assert slot.source == "scale elements"
        assert slot.values == [V.Scalar("hue", "blue"), V.Scalar("hue", "red")]

    def test_fact_table_columns_feed_the_slot(self, numeric_model):
        t = _task(numeric_model, PICK_TASK)
        slot = _slot(numeric_model, t, "width")
        assert slot.source == "fact tables"
        # cells of the tables used by formulas that mention the unknown;
        # 'bonus' appears in no formula so its cells stay out
        assert slot.values == [V.Num(2), V.Num(4)]

    def test_tables_in_formulas_mentioning_the_unknown_count(self):
        m = PS.parse_model(
            NUMERIC_MODEL + "formula paid: bonus(width) = bonus(width)\n"
        )
        t = _task(m, PICK_TASK)
        assert _slot(m, t, "width").values == [V.Num(n) for n in (1, 2, 3, 4)]

    def test_membership_interval_is_sampled(self):
        m = PS.parse_model("unknown x : number\nformula near: x in [1, 3]\n")
        t = _task(m, "task t {\n    output x\n}\n")
        slot = _slot(m, t, "x")
        assert slot.values == [V.Num(1), V.Num(2), V.Num(3)]

    def test_unconstrained_unknown_is_rejected(self):
        m = PS.parse_model("unknown x : number\n")
        t = _task(m, "task t {\n    output x\n}\n")
        with pytest.raises(UnboundedUnknownError):
            SV.derive_domains(m, t)

    def test_relation_unknown_requires_pinned_tables(self):
        m = PS.parse_model(
            "unknown keep : predicate(1)\nformula some: keep(1)\n"
        )
        t = _task(m, "task t {\n    output 1\n}\n")
        with pytest.raises(UnboundedUnknownError):
            SV.derive_domains(m, t)
        pinned = _task(
            m, "task t {\n    pin keep { (1) }\n    output 1\n}\n"
        )
        assert _slot(m, pinned, "keep").source == "pinned tables"
        assert SV.solve(m, pinned).status == "solutions-found"


class TestSolve:
    def test_agrees_with_brute_force(self, numeric_model):
        t = _task(numeric_model, PICK_TASK)
        fast = SV.solve(numeric_model, t)
        slow = SV.brute_force_solve(numeric_model, t)
        assert fast.status == slow.status == "solutions-found"
        assert _outs(fast) == _outs(slow)
        assert _outs(fast) == [{"width": V.Num(2)}, {"width": V.Num(4)}]

    def test_hole_completion_chains_through_unknowns(self):
        m = PS.parse_model(
            NUMERIC_MODEL + "unknown depth : mm\nformula link: depth = width + 1\n"
        )
        t = _task(m, "task t {\n    output width\n    output depth\n}\n")
        result = SV.solve(m, t)
        assert _outs(result) == [
            {"width": V.Num(2), "depth": V.Num(3)},
            {"width": V.Num(4), "depth": V.Num(5)},
        ]

    def test_undefined_hole_yields_no_candidate(self):
        m = PS.parse_model(
            NUMERIC_MODEL + "unknown depth : mm\nformula link: depth = bonus(width)\n"
        )
        t = _task(
            m,
            "task t {\n    given g: width = 3\n    output depth\n}\n",
        )
        result = SV.solve(m, t)
        assert result.status == "no-solutions"
        assert result.stats.candidates == 0

    def test_bool_criterion_filters(self, numeric_model):
        t = _task(
            numeric_model,
            "task t {\n    criterion width > 3\n    output width\n}\n",
        )
        assert _outs(SV.solve(numeric_model, t)) == [{"width": V.Num(4)}]

    def test_extremal_criteria(self, numeric_model):
        low = _task(numeric_model, "task t {\n    minimize width\n    output width\n}\n")
        high = _task(numeric_model, "task t {\n    maximize width\n    output width\n}\n")
        assert _outs(SV.solve(numeric_model, low)) == [{"width": V.Num(2)}]
        assert _outs(SV.solve(numeric_model, high)) == [{"width": V.Num(4)}]

    def test_candidate_budget_truncates(self, numeric_model):
        t = _task(numeric_model, PICK_TASK)
        result = SV.solve(numeric_model, t, SV.SolveConfig(max_candidates=1))
        assert result.status == "truncated" and result.truncated
        assert result.stats.truncated_reason is not None

    def test_zero_time_budget_truncates(self, numeric_model):
        t = _task(numeric_model, PICK_TASK)
        result = SV.solve(numeric_model, t, SV.SolveConfig(time_budget=0.0))
        assert result.truncated

    def test_deterministic_across_runs(self, numeric_model):
        t = _task(numeric_model, PICK_TASK)
        a, b = SV.solve(numeric_model, t), SV.solve(numeric_model, t)
        assert a.status == b.status and _outs(a) == _outs(b)
        assert a.stats.candidates == b.stats.candidates

    def test_parallel_workers_match_serial(self):
        m = PS.parse_model(
            NUMERIC_MODEL + "unknown depth : mm\nformula link: depth = width + 1\n"
        )
        t = _task(m, "task t {\n    output width\n    output depth\n}\n")
        serial = SV.solve(m, t, SV.SolveConfig(workers=1))
        parallel = SV.solve(m, t, SV.SolveConfig(workers=3))
        assert serial.status == parallel.status
        assert _outs(serial) == _outs(parallel)

    def test_worker_count_validated(self, numeric_model):
        t = _task(numeric_model, PICK_TASK)
        with pytest.raises(InputError):
            SV.solve(numeric_model, t, SV.SolveConfig(workers=0))

    def test_outputs_use_formatted_term_keys(self, struct_model):
        t = _task(
            struct_model,
            "task t {\n    given g: depth.item = 3\n"
            "    criterion tint.item = red\n    output tint.item\n}\n",
        )
        result = SV.solve(struct_model, t)
        assert result.status == "solutions-found"
        assert _outs(result) == [{"tint.item": V.Scalar("hue", "red")}]

    def test_pruning_matches_exhaustive_counts(self, numeric_model):
        t = _task(
            numeric_model,
            "task t {\n    criterion width = 2\n    output width\n}\n",
        )
        fast = SV.solve(numeric_model, t)
        slow = SV.brute_force_solve(numeric_model, t)
        assert _outs(fast) == _outs(slow)
        assert fast.stats.candidates <= slow.stats.candidates
