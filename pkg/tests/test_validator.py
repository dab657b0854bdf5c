"""Corpus checking and deterministic situation generation."""

import pytest

from stratakb import parser as PS
from stratakb import semantics as E
from stratakb import validator as VD
from stratakb import values as V
from stratakb.errors import (
    EmptyCorpusError,
    GenerationFailedError,
    NoFactsError,
)

from conftest import NUMERIC_MODEL


def _situation(name, expected, width, universe=()):
    values = {"width": V.Num(width)}
    uni = frozenset(V.Num(n) for n in (width, *universe))
    return E.Situation(name, E.Candidate(uni, values, {}), expected)


class TestCheckSituation:
    def test_verdicts_and_match(self, numeric_model):
        good = VD.check_situation(numeric_model, _situation("g", "adequate", 2))
        assert good.verdict == "consistent" and good.matches
        bad = VD.check_situation(numeric_model, _situation("b", "violating", 3))
        assert bad.verdict == "violation" and bad.matches
        assert any("fits" in r for r in bad.reasons)

    def test_mislabelled_situation_mismatches(self, numeric_model):
        r = VD.check_situation(numeric_model, _situation("m", "adequate", 3))
        assert not r.matches

    def test_out_of_domain_universe_counts_as_violation(self, numeric_model):
        cand = E.Candidate(
            frozenset([V.SymbolRef("allowed")]), {"width": V.Num(2)}, {}
        )
        r = VD.check_situation(
            numeric_model, E.Situation("odd", cand, "violating")
        )
        assert r.verdict == "violation" and r.matches


class TestValidateCorpus:
    def test_adequate_corpus(self, numeric_model):
        report = VD.validate_corpus(
            numeric_model,
            [_situation("g", "adequate", 2), _situation("b", "violating", 3)],
        )
        assert report.model_adequate and report.all_match
        text = report.render()
        assert "model adequate: yes" in text and "[ok]" in text

    def test_adequate_expectation_failing_refutes_the_model(self, numeric_model):
        report = VD.validate_corpus(
            numeric_model, [_situation("g", "adequate", 3)]
        )
        assert not report.model_adequate and not report.all_match
        assert "REFUTED" in report.render()

    def test_violating_expectation_passing_mismatches_only(self, numeric_model):
        # a situation the model accepts but the corpus calls violating is a
        # label mismatch, not a refutation
        report = VD.validate_corpus(
            numeric_model, [_situation("v", "violating", 2)]
        )
        assert report.model_adequate and not report.all_match

    def test_empty_corpus_refused(self, numeric_model):
        with pytest.raises(EmptyCorpusError):
            VD.validate_corpus(numeric_model, [])

    def test_reports_sorted_by_name(self, numeric_model):
        report = VD.validate_corpus(
            numeric_model,
            [_situation("zz", "adequate", 2), _situation("aa", "adequate", 4)],
        )
        assert [s.name for s in report.situations] == ["aa", "zz"]


class TestGenerateTests:
    def test_generated_corpus_validates_cleanly(self, numeric_model):
        situations, stats = VD.generate_tests(numeric_model, count=2, seed=7)
        assert stats.requested == 2
        assert stats.consistent >= 1 and stats.violating >= 1
        report = VD.validate_corpus(numeric_model, situations)
        assert report.model_adequate and report.all_match

    def test_deterministic_for_a_seed(self, numeric_model):
        a, _ = VD.generate_tests(numeric_model, count=3, seed=42)
        b, _ = VD.generate_tests(numeric_model, count=3, seed=42)
        assert a == b
        c, _ = VD.generate_tests(numeric_model, count=3, seed=43)
        assert [s.name for s in c] == [s.name for s in a]  # names are stable

    def test_mutants_are_verified_violations(self, numeric_model):
        situations, _ = VD.generate_tests(numeric_model, count=2, seed=0)
        for s in situations:
            r = VD.check_situation(numeric_model, s)
            assert r.matches, f"{s.name}: {r.reasons}"

    def test_no_facts_refused(self):
        m = PS.parse_model("unknown x : number\nformula f: x = 1\n")
        with pytest.raises(NoFactsError):
            VD.generate_tests(m, count=1, seed=0)

    def test_count_must_be_positive(self, numeric_model):
        with pytest.raises(GenerationFailedError):
            VD.generate_tests(numeric_model, count=0, seed=0)
