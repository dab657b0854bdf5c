"""Pseudo-random model and task instances for property checks.

Instances are generated as source text and parsed, so every generated
case exercises the reader alongside whatever property it feeds.  All
generation is driven by an explicit seed: the same seed always yields
the same text, which keeps failures replayable by seed alone.

The shapes stay deliberately small — a handful of values, at most two
objective unknowns, a few single-digit fact tables — so that exhaustive
candidate enumeration over them stays cheap enough to serve as an oracle.
"""

from __future__ import annotations

import itertools
import random
from typing import List, Optional, Tuple

from . import parser
from . import syntax as S
from . import values as V


NUM_SCALE = "measure"
SCALAR_SCALE = "grade"
ELEMENTS = ("low", "high")


def _pool_literals(rng: random.Random) -> List[str]:
    """Up to four value spellings: small numbers and scalar elements."""
    nums = rng.sample(["1", "2", "3"], k=rng.randint(1, 2))
    elems = list(ELEMENTS[: rng.randint(1, 2)])
    return (nums + elems)[:4]


def pool_values(model: S.LogicalModel) -> List:
    """The ground value pool of a generated model, canonically ordered."""
    values: List = []
    sc = model.scales.get(SCALAR_SCALE)
    if isinstance(sc, V.ScalarScale):
        values.extend(V.Scalar(SCALAR_SCALE, e) for e in sc.elements)
    for system in model.facts.values():
        for tbl in system.tables.values():
            for row in tbl.rows:
                for cell in row.args + ((row.result,) if row.result is not None else ()):
                    if not isinstance(cell, V.SymbolRef):
                        values.append(cell)
    for n in ("1", "2", "3"):
        values.append(V.Num(V.Fraction(int(n))))
    deduped: List = []
    for v in V.sorted_values(set(values)):
        if not any(V.values_equal(v, d) for d in deduped):
            deduped.append(v)
    return deduped[:4]


def _spellings(scale: str) -> List[str]:
    return ["1", "2", "3"] if scale == NUM_SCALE else list(ELEMENTS)


def _gen_tables(rng: random.Random) -> Tuple[List[str], List[dict]]:
    """Declarations and row data for 1..3 level-2 fact relations."""
    lines: List[str] = []
    specs: List[dict] = []
    n_tables = rng.randint(1, 3)
    for i in range(n_tables):
        name = f"fact{i + 1}"
        arity = rng.randint(1, 2)
        kind = rng.choice(["functional", "predicate"])
        arg_scales = [rng.choice([NUM_SCALE, SCALAR_SCALE]) for _ in range(arity)]
        result_scale = rng.choice([NUM_SCALE, SCALAR_SCALE]) if kind == "functional" else None
        sig = "(" + ", ".join(arg_scales) + ")"
        if result_scale:
            sig += f" -> {result_scale}"
        lines.append(f"relation {name} {sig}")
        # rows over conforming spellings, unique argument tuples
        spell = _spellings
        all_tuples = list(itertools.product(*[spell(sc) for sc in arg_scales]))
        rng.shuffle(all_tuples)
        n_rows = rng.randint(0, min(5, len(all_tuples)))
        tuples = all_tuples[:n_rows]
        rows = []
        for t in tuples:
            if result_scale:
                rows.append(
                    "(" + ", ".join(t) + ") -> " + rng.choice(spell(result_scale))
                )
            else:
                rows.append("(" + ", ".join(t) + ")")
        body = "\n".join("  " + r for r in rows)
        lines.append(f"table {name} {{\n{body}\n}}" if rows else f"table {name} {{ }}")
        specs.append(
            {
                "name": name,
                "arity": arity,
                "kind": kind,
                "arg_scales": arg_scales,
                "result_scale": result_scale,
            }
        )
    return lines, specs


def _gen_term(rng: random.Random, unknowns: List[Tuple[str, str]], specs: List[dict], depth: int) -> Tuple[str, str]:
    """(text, scale-ish) of a random term."""
    choices = ["lit", "unknown"]
    funcs = [s for s in specs if s["kind"] == "functional"]
    if funcs and depth > 0:
        choices.append("app")
    if depth > 0:
        choices.append("arith")
    kind = rng.choice(choices)
    if kind == "lit":
        if rng.random() < 0.5:
            return rng.choice(["1", "2", "3"]), NUM_SCALE
        return rng.choice(list(ELEMENTS)), SCALAR_SCALE
    if kind == "unknown":
        name, scale = rng.choice(unknowns)
        return name, scale
    if kind == "app":
        spec = rng.choice(funcs)
        args = []
        for arg_scale in spec["arg_scales"]:
            text, _ = _gen_term(rng, unknowns, specs, depth - 1)
            args.append(text)
        return f"{spec['name']}(" + ", ".join(args) + ")", spec["result_scale"]
    left, _ = _gen_term(rng, unknowns, specs, 0)
    right = rng.choice(["1", "2"])
    op = rng.choice(["+", "-", "*"])
    return f"{left} {op} {right}", NUM_SCALE


def _gen_atom(rng: random.Random, unknowns, specs, var: Optional[dict]) -> str:
    roll = rng.random()
    preds = [s for s in specs if s["kind"] == "predicate"]
    if var is not None and rng.random() < 0.5:
        args = []
        for arg_scale in var["arg_scales"]:
            text, _ = _gen_term(rng, unknowns, specs, 0)
            args.append(text)
        call = f"{var['name']}(" + ", ".join(args) + ")"
        rhs, _ = _gen_term(rng, unknowns, specs, 0)
        return f"{call} = {rhs}"
    if preds and roll < 0.3:
        spec = rng.choice(preds)
        args = []
        for arg_scale in spec["arg_scales"]:
            text, _ = _gen_term(rng, unknowns, specs, 0)
            args.append(text)
        return f"{spec['name']}(" + ", ".join(args) + ")"
    left, scale = _gen_term(rng, unknowns, specs, rng.randint(0, 2))
    if scale == NUM_SCALE and rng.random() < 0.4:
        op = rng.choice(["<", "<=", ">", ">="])
        return f"{left} {op} {rng.choice(['1', '2', '3'])}"
    right, _ = _gen_term(rng, unknowns, specs, rng.randint(0, 1))
    return f"{left} = {right}"


def _gen_formula(rng: random.Random, unknowns, specs, var) -> str:
    shape = rng.random()
    a = _gen_atom(rng, unknowns, specs, var)
    if shape < 0.45:
        return a
    b = _gen_atom(rng, unknowns, specs, var)
    if shape < 0.6:
        return f"{a} and {b}"
    if shape < 0.75:
        return f"{a} or {b}"
    if shape < 0.85:
        return f"not ({a})"
    return f"{a} implies {b}"


def gen_model_text(seed: int) -> str:
    """Source text of a pseudo-random second-order model."""
    rng = random.Random(seed)
    lines: List[str] = [
        f"scale {NUM_SCALE} dimensional",
        f"scale {SCALAR_SCALE} scalar {{ " + ", ".join(ELEMENTS) + " }",
    ]
    n_unknowns = rng.randint(1, 2)
    unknowns: List[Tuple[str, str]] = []
    for i in range(n_unknowns):
        scale = rng.choice([NUM_SCALE, SCALAR_SCALE])
        name = f"u{i + 1}"
        unknowns.append((name, scale))
        lines.append(f"unknown {name} : {scale}")
    table_lines, specs = _gen_tables(rng)
    lines.extend(table_lines)

    # occasionally a variable ranging over same-shape functional symbols
    var = None
    funcs = [s for s in specs if s["kind"] == "functional"]
    groups: dict = {}
    for s in funcs:
        groups.setdefault((s["arity"], tuple(s["arg_scales"])), []).append(s)
    candidates = [g for g in groups.values() if len(g) >= 2]
    if candidates and rng.random() < 0.5:
        group = rng.choice(candidates)
        members = rng.sample(group, k=2)
        var = {
            "name": "q",
            "arity": members[0]["arity"],
            "arg_scales": members[0]["arg_scales"],
        }
        refs = ", ".join("@" + m["name"] for m in members)
        lines.append(f"var q order 2 in {{ {refs} }}")

    n_formulas = rng.randint(1, 4)
    used_var = False
    for i in range(n_formulas):
        body = _gen_formula(rng, unknowns, specs, var)
        if var is not None and var["name"] in body:
            used_var = True
        lines.append(f"formula phi{i + 1}: {body}")
    if var is not None and not used_var:
        # keep the declaration meaningful
        args = ", ".join(
            "1" if sc == NUM_SCALE else ELEMENTS[0] for sc in var["arg_scales"]
        )
        lines.append(f"formula phi{n_formulas + 1}: q({args}) = 1 or 1 = 1")
    return "\n".join(lines) + "\n"


def gen_model(seed: int) -> S.LogicalModel:
    return parser.parse_model(gen_model_text(seed), f"<gen:{seed}>")


def gen_task_text(model: S.LogicalModel, seed: int) -> str:
    """A task over a generated model with every slot explicitly bounded."""
    rng = random.Random(seed ^ 0x5EED)
    lines = ["task probe {"]
    unknowns = sorted(
        (sym.name for sym in model.signature.level(1)), key=str
    )
    outputs = []
    numeric: List[str] = []
    for name in unknowns:
        scale = model.unknown_scales.get(name)
        if scale == SCALAR_SCALE:
            spellings = list(ELEMENTS)
        else:
            spellings = ["1", "2", "3"]
            numeric.append(name)
        if rng.random() < 0.35:
            lines.append(f"  given {name} = {rng.choice(spellings)}")
        else:
            k = rng.randint(1, min(3, len(spellings)))
            vals = rng.sample(spellings, k=k)
            lines.append(f"  domain {name} in {{ " + ", ".join(vals) + " }")
        outputs.append(name)
    roll = rng.random()
    if roll < 0.2 and numeric:
        lines.append(f"  minimize {rng.choice(numeric)}")
    elif roll < 0.35 and numeric:
        lines.append(f"  maximize {rng.choice(numeric)}")
    elif roll < 0.5:
        name = rng.choice(unknowns)
        scale = model.unknown_scales.get(name)
        spell = (
            rng.choice(list(ELEMENTS))
            if scale == SCALAR_SCALE
            else rng.choice(["1", "2", "3"])
        )
        lines.append(f"  criterion {name} = {spell} or {spell} = {spell}")
    for out in outputs:
        lines.append(f"  output {out}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def gen_model_and_task(seed: int) -> Tuple[S.LogicalModel, S.TaskSpec]:
    model = gen_model(seed)
    task = parser.parse_task(gen_task_text(model, seed), model, f"<gen-task:{seed}>")
    return model, task
