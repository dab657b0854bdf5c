"""Adequacy checking: confront a model with worked situations.

A knowledge model earns trust the falsifying way: every recorded real
situation must come out as a solution, and every recorded counter-case
must fail.  One adequate-labelled situation that is not a solution refutes
the model; violating-labelled situations guard the other direction — a
model so weak it accepts corrupted cases is worthless even if never
refuted.

generate_tests builds such a corpus from the model itself: it searches
the model's own finite domains for consistent situations, then corrupts
one bound value at a time, keeping only mutants the model verifiably
rejects.  Drafts whose corruption goes unnoticed are discarded and
counted, not silently kept.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from . import semantics as E
from . import solver as L
from . import syntax as S
from . import values as V
from .errors import (
    EmptyCorpusError,
    GenerationFailedError,
    NoFactsError,
    NotRelevantError,
    UnboundedUnknownError,
)
from .signature import OBJECTIVE


CONSISTENT = "consistent"
VIOLATION = "violation"


@dataclass(frozen=True)
class SituationReport:
    name: str
    expected: str  # 'adequate' | 'violating'
    verdict: str  # 'consistent' | 'violation'
    matches: bool
    reasons: Tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "expected": self.expected,
            "verdict": self.verdict,
            "matches": self.matches,
            "reasons": list(self.reasons),
        }


@dataclass(frozen=True)
class AdequacyReport:
    situations: Tuple[SituationReport, ...]
    model_adequate: bool

    @property
    def all_match(self) -> bool:
        return all(s.matches for s in self.situations)

    def to_dict(self) -> dict:
        return {
            "modelAdequate": self.model_adequate,
            "allMatch": self.all_match,
            "situations": [s.to_dict() for s in self.situations],
        }

    def render(self) -> str:
        lines = []
        for s in self.situations:
            mark = "ok" if s.matches else "MISMATCH"
            lines.append(
                f"{s.name}: expected {s.expected}, verdict {s.verdict} [{mark}]"
            )
            for r in s.reasons:
                lines.append(f"    {r}")
        lines.append(
            "model adequate: " + ("yes" if self.model_adequate else "REFUTED")
        )
        return "\n".join(lines)


def check_situation(
    model: S.LogicalModel,
    situation: E.Situation,
    tol: float = V.DEFAULT_TOLERANCE,
) -> SituationReport:
    """Judge one situation; an out-of-domain universe counts as a violation."""
    try:
        ok, failures = E.is_solution(model, situation.system, None, tol)
        reasons = tuple(str(f) for f in failures)
    except NotRelevantError as err:
        ok = False
        reasons = (str(err),)
    verdict = CONSISTENT if ok else VIOLATION
    matches = (situation.expected == "adequate") == (verdict == CONSISTENT)
    return SituationReport(
        name=situation.name,
        expected=situation.expected,
        verdict=verdict,
        matches=matches,
        reasons=reasons,
    )


def validate_corpus(
    model: S.LogicalModel,
    situations: List[E.Situation],
    tol: float = V.DEFAULT_TOLERANCE,
) -> AdequacyReport:
    """Check every situation; adequate-labelled failures refute the model."""
    if not situations:
        raise EmptyCorpusError("the situation corpus is empty")
    reports = sorted(
        (check_situation(model, s, tol) for s in situations),
        key=lambda r: r.name,
    )
    refuted = any(
        r.expected == "adequate" and r.verdict != CONSISTENT for r in reports
    )
    return AdequacyReport(situations=tuple(reports), model_adequate=not refuted)


# --- corpus generation -----------------------------------------------------

@dataclass(frozen=True)
class GenerationStats:
    requested: int
    consistent: int
    violating: int
    discarded: int

    def to_dict(self) -> dict:
        return {
            "requested": self.requested,
            "consistent": self.consistent,
            "violating": self.violating,
            "discarded": self.discarded,
        }


def _blank_task() -> S.TaskSpec:
    return S.TaskSpec(
        name="generated",
        delta=[],
        criterion=None,
        outputs=[],
        domains={},
        pins={},
    )


def _situation_from_candidate(
    model: S.LogicalModel, name: str, candidate: E.Candidate, expected: str
) -> E.Situation:
    bound = list(candidate.values.values())
    for tbl in candidate.tables.values():
        for row in tbl.rows:
            bound.extend(row.args)
            if row.result is not None:
                bound.append(row.result)
    closure = V.downward_closure(bound)
    extra = tuple(
        v
        for v in V.sorted_values(candidate.universe)
        if v not in closure
    )
    return E.Situation(
        name=name, system=candidate, expected=expected, extra=extra
    )


def _mutation_pool(
    model: S.LogicalModel, slot: L.Slot, candidate: E.Candidate
) -> List:
    pool: List = []
    if slot.values:
        pool.extend(slot.values)
    if slot.scale is not None:
        pool.extend(
            v
            for v in V.sorted_values(candidate.universe)
            if model.scales.conforms(v, slot.scale)
        )
    sc = model.scales.get(slot.scale) if slot.scale else None
    if isinstance(sc, V.ScalarScale):
        pool.extend(V.Scalar(slot.scale, e) for e in sc.elements)
    if isinstance(sc, V.DimensionalScale):
        pool.append(V.Num(V.Fraction(999999)))
    out: List = []
    for v in pool:
        if not any(V.values_equal(v, o) for o in out):
            out.append(v)
    return V.sorted_values(out)


def _leaf_slots(model: S.LogicalModel) -> List[L.Slot]:
    slots: List[L.Slot] = []
    for sym in sorted(model.signature.level(1), key=lambda s: s.name):
        if sym.kind != OBJECTIVE:
            continue
        scale_name = model.unknown_scales.get(sym.name)
        if scale_name is None:
            continue
        for path, leaf in L._leaf_paths(model.scales, sym.name, scale_name):
            slots.append(L.Slot(key=str(path), path=path, scale=leaf))
    return slots


def _read_leaf(candidate: E.Candidate, path: S.FieldPath):
    value = candidate.values.get(path.unknown, V.UNDEFINED)
    for fname in path.fields:
        if not isinstance(value, V.Composite):
            return V.UNDEFINED
        value = value.get(fname)
    return value


def _write_leaf(candidate: E.Candidate, path: S.FieldPath, new_value):
    def rebuild(value, fields):
        if not fields:
            return new_value
        if not isinstance(value, V.Composite):
            return value
        return value.with_field(fields[0], rebuild(value.get(fields[0]), fields[1:]))

    root = candidate.values.get(path.unknown, V.UNDEFINED)
    rebuilt = rebuild(root, list(path.fields))
    values = dict(candidate.values)
    values[path.unknown] = rebuilt
    pool = list(values.values())
    for tbl in candidate.tables.values():
        for row in tbl.rows:
            pool.extend(row.args)
            if row.result is not None:
                pool.append(row.result)
    pool.extend(candidate.universe)
    return E.Candidate(
        universe=frozenset(V.downward_closure(pool)),
        values=values,
        tables=dict(candidate.tables),
    )


def generate_tests(
    model: S.LogicalModel,
    count: int = 5,
    seed: int = 0,
    tol: float = V.DEFAULT_TOLERANCE,
):
    """Build (situations, stats): consistent cases and verified mutants.

    Deterministic for a given (model, count, seed).  Raises NoFacts when
    the model holds no fact rows to ground situations in, and
    GenerationFailed when not a single consistent situation is derivable.
    """
    if count < 1:
        raise GenerationFailedError("the requested situation count must be positive")
    has_facts = any(
        tbl.rows
        for system in model.facts.values()
        for tbl in system.tables.values()
    )
    if not has_facts:
        raise NoFactsError("the model holds no fact rows to build situations from")
    task = _blank_task()
    try:
        result = L.solve(
            model,
            task,
            L.SolveConfig(max_candidates=200_000, time_budget=30.0),
            tol,
        )
    except UnboundedUnknownError as err:
        raise GenerationFailedError(
            f"cannot bound the unknowns to search for situations: {err}"
        ) from None
    candidates = [sol.candidate for sol in result.solutions]
    if not candidates:
        raise GenerationFailedError(
            "the model admits no consistent situation over its derivable domains"
        )
    rng = random.Random(seed)
    picked: List[E.Candidate] = []
    order = list(range(len(candidates)))
    rng.shuffle(order)
    for idx in order[:count]:
        picked.append(candidates[idx])

    situations: List[E.Situation] = []
    discarded = 0
    violating = 0
    slots = _leaf_slots(model)
    for i, cand in enumerate(picked, start=1):
        situations.append(
            _situation_from_candidate(model, f"gen_ok_{i}", cand, "adequate")
        )
    for i, cand in enumerate(picked, start=1):
        slot_order = list(slots)
        rng.shuffle(slot_order)
        made = False
        for slot in slot_order:
            current = _read_leaf(cand, slot.path)
            if current is V.UNDEFINED:
                continue
            options = [
                v
                for v in _mutation_pool(model, slot, cand)
                if not V.values_equal(v, current)
            ]
            rng.shuffle(options)
            for option in options:
                mutant = _write_leaf(cand, slot.path, option)
                try:
                    ok, _ = E.is_solution(model, mutant, None, tol)
                except NotRelevantError:
                    ok = False
                if ok:
                    discarded += 1
                    continue
                violating += 1
                situations.append(
                    _situation_from_candidate(
                        model, f"gen_bad_{i}", mutant, "violating"
                    )
                )
                made = True
                break
            if made:
                break
        if not made:
            discarded += 1
    stats = GenerationStats(
        requested=count,
        consistent=len(situations) - violating,
        violating=violating,
        discarded=discarded,
    )
    return situations, stats
