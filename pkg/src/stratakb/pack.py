"""Bundled knowledge packs: a model, its fact tables, tasks and situations.

A pack is a directory holding a ``pack.manifest`` (JSON) next to the model
files it names.  The manifest carries a provenance entry for every fact
table, so each shipped data row can be traced to where it came from.  The
loader parses the whole bundle, cross-checks it, and hands back one object
with the model, the named tasks and the worked situation corpus.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Mapping, Tuple

from . import semantics as E
from . import syntax as S
from .errors import PackError, ZeroDiameterError
from .parser import parse_corpus_file, parse_model_files, parse_task_file

MANIFEST_NAME = "pack.manifest"


def packs_root() -> Path:
    """Directory holding the packs shipped with the library."""
    return Path(__file__).resolve().parent / "packs"


def shipped_packs() -> List[str]:
    """Names of the packs installed with the library, sorted."""
    root = packs_root()
    if not root.is_dir():
        return []
    return sorted(p.name for p in root.iterdir() if (p / MANIFEST_NAME).is_file())


@dataclass(frozen=True)
class KnowledgePack:
    """A parsed pack: model, named tasks, worked situations, provenance."""

    name: str
    root: Path
    manifest: Mapping[str, object]
    model: S.LogicalModel
    tasks: Mapping[str, S.TaskSpec]
    corpus: Tuple[E.Situation, ...] = field(default=())

    def task(self, name: str) -> S.TaskSpec:
        try:
            return self.tasks[name]
        except KeyError:
            known = ", ".join(sorted(self.tasks)) or "none"
            raise PackError(
                f"pack '{self.name}' has no task '{name}' (shipped tasks: {known})"
            ) from None

    def table_provenance(self, table_name: str) -> Mapping[str, object]:
        entry = self.manifest["tables"][table_name]  # type: ignore[index]
        return entry  # type: ignore[return-value]


def _resolve_pack_dir(spec) -> Path:
    """Accept a pack name, a pack directory, or a manifest file path."""
    p = Path(spec)
    if p.is_file() and p.name == MANIFEST_NAME:
        return p.parent
    if p.is_dir():
        if not (p / MANIFEST_NAME).is_file():
            raise PackError(f"'{p}' has no {MANIFEST_NAME}")
        return p
    candidate = packs_root() / str(spec)
    if (candidate / MANIFEST_NAME).is_file():
        return candidate
    known = ", ".join(shipped_packs()) or "none"
    raise PackError(f"no pack at '{spec}' (shipped packs: {known})")


def _require(manifest: Mapping[str, object], key: str, kind: type, where: str):
    value = manifest.get(key)
    if not isinstance(value, kind) or not value:
        raise PackError(f"{where}: manifest entry '{key}' must be a non-empty {kind.__name__}")
    return value


def load_pack(spec) -> KnowledgePack:
    """Parse and cross-check the pack at ``spec`` (a name, directory or manifest)."""
    root = _resolve_pack_dir(spec)
    manifest_path = root / MANIFEST_NAME
    try:
        manifest = json.loads(manifest_path.read_text())
    except json.JSONDecodeError as err:
        raise PackError(f"{manifest_path}: not valid JSON ({err})") from None
    if not isinstance(manifest, dict):
        raise PackError(f"{manifest_path}: manifest must be a JSON object")

    where = str(manifest_path)
    name = _require(manifest, "name", str, where)
    model_files = _require(manifest, "model", list, where)
    paths = []
    for rel in model_files:
        path = root / str(rel)
        if not path.is_file():
            raise PackError(f"{where}: model file '{rel}' not found")
        paths.append(path)
    model = parse_model_files(paths)

    declared = _require(manifest, "tables", dict, where)
    actual = {t.symbol for system in model.facts.values() for t in system.tables.values()}
    for tname in sorted(actual):
        entry = declared.get(tname)
        if not isinstance(entry, dict):
            raise PackError(f"{where}: fact table '{tname}' has no provenance entry")
        if not isinstance(entry.get("origin"), str) or not entry["origin"]:
            raise PackError(f"{where}: provenance for '{tname}' lacks an 'origin'")
    for tname in sorted(declared):
        if tname not in actual:
            raise PackError(f"{where}: provenance names unknown table '{tname}'")

    tasks: Dict[str, S.TaskSpec] = {}
    for tname, rel in sorted(dict(manifest.get("tasks", {})).items()):
        path = root / str(rel)
        if not path.is_file():
            raise PackError(f"{where}: task file '{rel}' not found")
        tasks[tname] = parse_task_file(path, model)

    corpus: Tuple[E.Situation, ...] = ()
    corpus_rel = manifest.get("corpus")
    if corpus_rel:
        corpus_path = root / str(corpus_rel)
        if not corpus_path.is_file():
            raise PackError(f"{where}: corpus file '{corpus_rel}' not found")
        corpus = tuple(parse_corpus_file(corpus_path, model))

    return KnowledgePack(
        name=name,
        root=root,
        manifest=manifest,
        model=model,
        tasks=tasks,
        corpus=corpus,
    )


def end_mill_feed(
    geometry_factor: float,
    material_factor: float,
    tool_factor: float,
    fluid_factor: float,
    cutting_speed: float,
    diameter: float,
) -> float:
    """Closed-form table feed for an end-mill cut, in mm per minute.

    Multiplies the four correction factors, scales by the spindle speed
    implied by the cutting speed (m/min) and the tool diameter (mm).
    Kept as a plain arithmetic mirror of the pack's feed constraint so
    results can be cross-checked without the engine.
    """
    if diameter == 0:
        raise ZeroDiameterError("the tool diameter cannot be zero")
    return (
        geometry_factor
        * material_factor
        * tool_factor
        * fluid_factor
        * 10000
        * cutting_speed
        / math.pi
        / diameter
    )
