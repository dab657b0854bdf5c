"""Signature layer: levelled symbols, finite tables, lookup semantics."""

import pytest

from stratakb import semantics as E
from stratakb import signature as G
from stratakb import values as V
from stratakb.errors import (
    ArityMismatchError,
    BadArityError,
    DuplicateSymbolError,
    FunctionalConflictError,
    InvalidSignatureError,
)


def _sym(name, level, kind=G.PREDICATE, arity=1):
    return G.Symbol(name=name, level=level, kind=kind, arity=arity)


class TestSignature:
    def test_order_is_highest_populated_level(self):
        sig = G.build_signature(
            list(G.BUILTIN_CORE)
            + [
                _sym("width", 1, G.OBJECTIVE, None),
                _sym("allowed", 2),
                _sym("blessed", 3),
            ]
        )
        assert sig.order == 3
        assert [s.name for s in sig.level(2)] == ["allowed"]

    def test_duplicate_names_rejected_across_levels(self):
        with pytest.raises(DuplicateSymbolError):
            G.build_signature(
                list(G.BUILTIN_CORE) + [_sym("x", 1), _sym("x", 2)]
            )

    def test_empty_level_zero_rejected(self):
        from stratakb.errors import EmptyLevelZeroError

        with pytest.raises(EmptyLevelZeroError):
            G.build_signature([_sym("allowed", 2)])

    def test_lookup_by_name(self):
        sig = G.build_signature(list(G.BUILTIN_CORE) + [_sym("allowed", 2)])
        assert sig.get("allowed").level == 2
        assert sig.get("missing") is None


class TestBuildTable:
    def test_rows_are_canonically_sorted(self):
        t = G.build_table(
            "allowed", G.PREDICATE, 1, [G.Row((V.Num(4),)), G.Row((V.Num(2),))]
        )
        assert [r.args[0] for r in t.rows] == [V.Num(2), V.Num(4)]

    def test_insert_order_never_shows(self):
        rows = [G.Row((V.Num(i),)) for i in (3, 1, 2)]
        a = G.build_table("t", G.PREDICATE, 1, rows)
        b = G.build_table("t", G.PREDICATE, 1, list(reversed(rows)))
        assert a == b

    def test_duplicate_predicate_rows_deduplicated(self):
        t = G.build_table(
            "allowed", G.PREDICATE, 1, [G.Row((V.Num(2),))] * 3
        )
        assert len(t.rows) == 1

    def test_functional_conflict_rejected(self):
        with pytest.raises(FunctionalConflictError):
            G.build_table(
                "f",
                G.FUNCTIONAL,
                1,
                [
                    G.Row((V.Num(1),), V.Num(10)),
                    G.Row((V.Num(1),), V.Num(11)),
                ],
            )

    def test_functional_agreeing_duplicate_collapses(self):
        t = G.build_table(
            "f",
            G.FUNCTIONAL,
            1,
            [
                G.Row((V.Num(1),), V.Num(10)),
                G.Row((V.Num(1),), V.Num(10)),
            ],
        )
        assert len(t.rows) == 1

    def test_arity_mismatch_rejected(self):
        with pytest.raises(ArityMismatchError):
            G.build_table("f", G.PREDICATE, 2, [G.Row((V.Num(1),))])

    def test_result_shape_must_match_kind(self):
        with pytest.raises(ArityMismatchError):
            G.build_table("f", G.FUNCTIONAL, 1, [G.Row((V.Num(1),))])
        with pytest.raises(ArityMismatchError):
            G.build_table("p", G.PREDICATE, 1, [G.Row((V.Num(1),), V.Num(2))])


class TestMakeTable:
    def test_fact_tables_need_level_two_or_higher(self):
        with pytest.raises(InvalidSignatureError):
            G.make_table(_sym("u", 1), [])

    def test_objective_symbols_cannot_own_tables(self):
        with pytest.raises(BadArityError):
            G.make_table(_sym("u", 2, G.OBJECTIVE, None), [])


class TestLookup:
    def _functional(self):
        return G.build_table(
            "f",
            G.FUNCTIONAL,
            2,
            [
                G.Row((V.Num(1), V.Num(1)), V.Num(10)),
                G.Row((V.Num(1), V.Num(2)), V.Num(20)),
                G.Row((V.Num(2), V.Num(1)), V.Num(30)),
            ],
        )

    def test_hit_returns_result(self):
        assert G.lookup(self._functional(), [V.Num(1), V.Num(2)]) == V.Num(20)

    def test_functional_miss_is_undefined(self):
        assert G.lookup(self._functional(), [V.Num(9), V.Num(9)]) is V.UNDEFINED

    def test_predicate_miss_is_false_closed_world(self):
        t = G.build_table("p", G.PREDICATE, 1, [G.Row((V.Num(2),))])
        assert G.lookup(t, [V.Num(2)]) is True
        assert G.lookup(t, [V.Num(3)]) is False

    def test_tolerant_matching(self):
        t = self._functional()
        assert G.lookup(t, [V.Num(1.0 + 1e-12), V.Num(2.0)]) == V.Num(20)

    def test_wrong_arity_rejected(self):
        with pytest.raises(ArityMismatchError):
            G.lookup(self._functional(), [V.Num(1)])

    def test_scan_charges_one_step_per_position_compared(self):
        # rows sorted: (1,1) (1,2) (2,1).  Probing (2,1) compares the first
        # position of every row and the second position only where the first
        # matched: 1 + 1 + 2 = 4 steps.
        counter = E.StepCounter()
        G.lookup(self._functional(), [V.Num(2), V.Num(1)], counter=counter)
        assert counter.lookup_steps == 4

    def test_scan_stops_at_first_match(self):
        counter = E.StepCounter()
        G.lookup(self._functional(), [V.Num(1), V.Num(1)], counter=counter)
        assert counter.lookup_steps == 2

    def test_total_miss_scans_everything(self):
        counter = E.StepCounter()
        G.lookup(self._functional(), [V.Num(9), V.Num(9)], counter=counter)
        assert counter.lookup_steps == 3
