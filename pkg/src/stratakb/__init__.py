"""Finite-model knowledge engine with levelled signatures.

A knowledge model here is a set of formulas over a signature whose
symbols are stratified into levels: level 0 holds ordinary constants and
operations, level 1 names the unknowns being sought, and higher levels
name finite fact relations.  The package parses such models from a small
text language, solves tasks over them by finite search, compiles
higher-level fact references down to first-order formulas, and validates
models against corpora of labelled worked situations.
"""

from .errors import DomainFailure, InputError, StratakbError
from .pack import KnowledgePack, end_mill_feed, load_pack, shipped_packs
from .parser import (
    parse_corpus_file,
    parse_model,
    parse_model_files,
    parse_task_file,
    parse_value_text,
)
from .printer import format_corpus, format_formula, format_model, format_task
from .reducer import (
    EquivalenceResult,
    ReductionReport,
    StepCostReport,
    check_equivalence,
    reduce_once,
    reduce_to_first_order,
    step_cost_comparison,
)
from .solver import (
    SolveConfig,
    TaskResult,
    brute_force_solve,
    derive_domains,
    solve,
)
from .validator import (
    AdequacyReport,
    check_situation,
    generate_tests,
    validate_corpus,
)
from .values import DEFAULT_TOLERANCE

__version__ = "0.1.0"

__all__ = [
    "AdequacyReport",
    "DEFAULT_TOLERANCE",
    "DomainFailure",
    "EquivalenceResult",
    "InputError",
    "KnowledgePack",
    "ReductionReport",
    "SolveConfig",
    "StepCostReport",
    "StratakbError",
    "TaskResult",
    "brute_force_solve",
    "check_equivalence",
    "check_situation",
    "derive_domains",
    "end_mill_feed",
    "format_corpus",
    "format_formula",
    "format_model",
    "format_task",
    "generate_tests",
    "load_pack",
    "parse_corpus_file",
    "parse_model",
    "parse_model_files",
    "parse_task_file",
    "parse_value_text",
    "reduce_once",
    "reduce_to_first_order",
    "shipped_packs",
    "solve",
    "step_cost_comparison",
    "validate_corpus",
    "__version__",
]
