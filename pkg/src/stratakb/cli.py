"""Command-line entry point binding the library for batch use.

Exit codes are stable: 0 for success, 1 when the domain answers no (a
task without solutions, a refuted corpus, a failed equivalence check, a
model already at order 1), 2 for unusable input (syntax errors, missing
files, unbounded unknowns, bad flags).

Text output is human-oriented and unversioned; the structured format is
tab-delimited, stable, and documented in docs/formats.md.  The optional
``--figures`` flag of the reporting commands renders charts as PNG files
next to that output.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path
from typing import Optional, Tuple

import click

from . import pack as P
from . import parser as PS
from . import printer as PR
from . import reducer as R
from . import solver as SV
from . import validator as VD
from . import values as V
from .errors import DomainFailure, InputError, OrderTooLowError, StratakbError

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_INPUT = 2

CONFIG_ENV = "STRATAKB_CONFIG"
_CONFIG_KEYS = ("max_candidates", "time_budget", "workers", "tolerance")


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _guarded(body) -> None:
    """Run a command body, mapping library errors onto the exit taxonomy."""
    try:
        code = body()
    except DomainFailure as err:
        _fail(EXIT_DOMAIN, str(err))
    except StratakbError as err:
        _fail(EXIT_INPUT, str(err))
    except OSError as err:
        _fail(EXIT_INPUT, str(err))
    sys.exit(code)


def _config_defaults() -> dict:
    path = os.environ.get(CONFIG_ENV)
    if not path:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as err:
        raise InputError(f"cannot read the config file {path}: {err}") from None
    except json.JSONDecodeError as err:
        raise InputError(f"the config file {path} is not valid JSON: {err}") from None
    if not isinstance(data, dict):
        raise InputError(f"the config file {path} must hold a JSON object")
    unknown = sorted(set(data) - set(_CONFIG_KEYS))
    if unknown:
        raise InputError(
            f"the config file {path} has unknown keys: {', '.join(unknown)}"
        )
    return data


def _pick(flag, config: dict, key: str, fallback):
    if flag is not None:
        return flag
    if key in config:
        return config[key]
    return fallback


def _load_model(spec: str) -> Tuple[object, Optional[P.KnowledgePack]]:
    """A model argument is a model file, a pack directory, or a pack name."""
    path = Path(spec)
    if path.is_dir() or path.name == P.MANIFEST_NAME or (
        not path.exists() and spec in P.shipped_packs()
    ):
        kp = P.load_pack(spec)
        return kp.model, kp
    if not path.is_file():
        raise InputError(f"no model file, pack directory, or shipped pack named '{spec}'")
    return PS.parse_model_files([str(path)]), None


def _load_task(spec: str, model, kp: Optional[P.KnowledgePack]):
    if kp is not None and spec in kp.tasks:
        return kp.tasks[spec]
    path = Path(spec)
    if path.is_file():
        return PS.parse_task_file(str(path), model)
    if kp is not None:
        known = ", ".join(sorted(kp.tasks)) or "(none)"
        raise InputError(
            f"'{spec}' is neither a task file nor one of the pack's tasks: {known}"
        )
    raise InputError(f"no task file named '{spec}'")


@click.group()
@click.version_option(package_name="stratakb", prog_name="stratakb")
def main() -> None:
    """Define, check, solve, and compile finite knowledge models."""


# --- check -----------------------------------------------------------------

@main.command()
@click.argument("model_spec", metavar="MODEL")
def check(model_spec: str) -> None:
    """Parse and validate MODEL, then print its signature summary."""

    def body() -> int:
        model, _ = _load_model(model_spec)
        click.echo(f"order: {model.order}")
        for level in range(model.order + 1):
            syms = model.signature.level(level)
            click.echo(f"level {level} symbols: {len(syms)}")
        click.echo(f"formulas: {len(model.formulas)}")
        return EXIT_OK

    _guarded(body)


# --- solve -----------------------------------------------------------------

def _render_solve_text(result: SV.TaskResult) -> None:
    if result.status == "no-solutions":
        click.echo("no solutions")
    else:
        click.echo(f"status: {result.status}")
        for i, sol in enumerate(result.solutions, start=1):
            click.echo(f"solution {i}:")
            for name, value in sol.outputs:
                click.echo(f"    {name} = {PR.format_value(value)}")
    s = result.stats
    line = f"searched {s.candidates} candidates ({s.pruned} pruned) in {s.elapsed:.3f}s"
    if s.truncated_reason:
        line += f"; truncated: {s.truncated_reason}"
    click.echo(line)


def _render_solve_structured(result: SV.TaskResult) -> None:
    click.echo(f"status\t{result.status}")
    if result.solutions:
        names = [name for name, _ in result.solutions[0].outputs]
        click.echo("outputs\t" + "\t".join(names))
        for sol in result.solutions:
            cells = [PR.format_value(value) for _, value in sol.outputs]
            click.echo("solution\t" + "\t".join(cells))
    click.echo(f"candidates\t{result.stats.candidates}")
    click.echo(f"pruned\t{result.stats.pruned}")
    if result.stats.truncated_reason:
        click.echo(f"truncated\t{result.stats.truncated_reason}")


@main.command()
@click.argument("model_spec", metavar="MODEL")
@click.argument("task_spec", metavar="TASK")
@click.option("--max-candidates", type=int, default=None, help="Search budget in candidates.")
@click.option("--time-budget", type=float, default=None, help="Search budget in seconds.")
@click.option("--workers", type=int, default=None, help="Parallel candidate checkers.")
@click.option("--tolerance", type=float, default=None, help="Numeric comparison tolerance.")
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["text", "structured"]),
    default="text",
    show_default=True,
    help="Output rendering.",
)
@click.option(
    "--figures",
    "figures_dir",
    type=click.Path(file_okay=False),
    default=None,
    help="Directory to render result charts into.",
)
def solve(
    model_spec: str,
    task_spec: str,
    max_candidates: Optional[int],
    time_budget: Optional[float],
    workers: Optional[int],
    tolerance: Optional[float],
    fmt: str,
    figures_dir: Optional[str],
) -> None:
    """Solve TASK over MODEL and print the solutions.

    TASK is a task file, or a task name when MODEL is a pack.
    """

    def body() -> int:
        config_file = _config_defaults()
        model, kp = _load_model(model_spec)
        task = _load_task(task_spec, model, kp)
        config = SV.SolveConfig(
            max_candidates=int(_pick(max_candidates, config_file, "max_candidates", 1_000_000)),
            time_budget=float(_pick(time_budget, config_file, "time_budget", 60.0)),
            workers=int(_pick(workers, config_file, "workers", 1)),
        )
        tol = float(_pick(tolerance, config_file, "tolerance", V.DEFAULT_TOLERANCE))
        result = SV.solve(model, task, config, tol)
        if fmt == "text":
            _render_solve_text(result)
        else:
            _render_solve_structured(result)
        if figures_dir is not None:
            from . import figures as F

            for path in F.render_solve(result, figures_dir):
                click.echo(f"figure: {path}", err=True)
        if result.status == "no-solutions":
            return EXIT_DOMAIN
        if result.status == "truncated" and not result.solutions:
            return EXIT_INPUT
        return EXIT_OK

    _guarded(body)


# --- reduce ----------------------------------------------------------------

@main.command()
@click.argument("model_spec", metavar="MODEL")
@click.option(
    "-o",
    "--out",
    "out_path",
    type=click.Path(dir_okay=False),
    required=True,
    help="File to write the order-1 model to.",
)
@click.option(
    "--report",
    "report_path",
    type=click.Path(dir_okay=False),
    default=None,
    help="File to write the reduction report to.",
)
@click.option(
    "--verify/--no-verify",
    default=False,
    show_default=True,
    help="Check source and result for solution-set equivalence.",
)
@click.option(
    "--figures",
    "figures_dir",
    type=click.Path(file_okay=False),
    default=None,
    help="Directory to render reduction charts into.",
)
def reduce(
    model_spec: str,
    out_path: str,
    report_path: Optional[str],
    verify: bool,
    figures_dir: Optional[str],
) -> None:
    """Compile MODEL down to order 1 and write the result."""

    def body() -> int:
        model, kp = _load_model(model_spec)
        if model.order < 2:
            raise OrderTooLowError(
                f"the model has order {model.order}; there is no level to compile away"
            )
        reduced, report = R.reduce_to_first_order(model)
        Path(out_path).write_text(PR.format_model(reduced), encoding="utf-8")
        click.echo(f"wrote: {out_path}")

        costs = []
        if kp is not None:
            for name in sorted(kp.tasks):
                costs.append(
                    R.step_cost_comparison(model, reduced, kp.tasks[name])
                )
        if report_path is not None:
            lines = [report.render()]
            if costs:
                lines.append("")
                lines.append("per-candidate step totals over identical candidates:")
                for c in costs:
                    lines.append(
                        f"  task {c.task}: source {c.source_total} steps, "
                        f"reduced {c.reduced_total} steps, "
                        f"never costlier: {'yes' if c.never_costlier else 'no'}"
                    )
            Path(report_path).write_text("\n".join(lines) + "\n", encoding="utf-8")
            click.echo(f"report: {report_path}")
        if figures_dir is not None:
            from . import figures as F

            for path in F.render_reduce(report, figures_dir, costs or None):
                click.echo(f"figure: {path}", err=True)
        if verify:
            outcome = R.check_equivalence(model, reduced)
            click.echo(
                f"equivalence: {outcome.verdict} "
                f"({outcome.candidates_checked} candidates checked)"
            )
            if not outcome.equivalent:
                return EXIT_DOMAIN
        return EXIT_OK

    _guarded(body)


# --- validate --------------------------------------------------------------

@main.command()
@click.argument("model_spec", metavar="MODEL")
@click.argument("corpus_path", metavar="[CORPUS]", required=False)
@click.option(
    "--figures",
    "figures_dir",
    type=click.Path(file_okay=False),
    default=None,
    help="Directory to render verdict charts into.",
)
def validate(
    model_spec: str, corpus_path: Optional[str], figures_dir: Optional[str]
) -> None:
    """Check MODEL against a corpus of labelled situations.

    CORPUS may be omitted when MODEL is a pack that ships one.
    """

    def body() -> int:
        model, kp = _load_model(model_spec)
        if corpus_path is not None:
            if not Path(corpus_path).is_file():
                raise InputError(f"no corpus file named '{corpus_path}'")
            situations = PS.parse_corpus_file(corpus_path, model)
        elif kp is not None and kp.corpus:
            situations = list(kp.corpus)
        else:
            raise InputError("no corpus file given and the model ships none")
        report = VD.validate_corpus(model, situations)
        click.echo(report.render())
        if figures_dir is not None:
            from . import figures as F

            for path in F.render_validate(report, figures_dir):
                click.echo(f"figure: {path}", err=True)
        return EXIT_OK if report.model_adequate else EXIT_DOMAIN

    _guarded(body)


# --- gen-tests -------------------------------------------------------------

@main.command(name="gen-tests")
@click.argument("model_spec", metavar="MODEL")
@click.option("--count", type=int, default=5, show_default=True, help="Consistent situations to derive.")
@click.option("--seed", type=int, default=0, show_default=True, help="Generation seed.")
@click.option(
    "-o",
    "--out",
    "out_path",
    type=click.Path(dir_okay=False),
    default=None,
    help="File to write the corpus to (default: standard output).",
)
def gen_tests(model_spec: str, count: int, seed: int, out_path: Optional[str]) -> None:
    """Derive a labelled situation corpus from MODEL's own facts."""

    def body() -> int:
        model, _ = _load_model(model_spec)
        situations, stats = VD.generate_tests(model, count=count, seed=seed)
        text = PR.format_corpus(situations)
        if out_path is None:
            click.echo(text, nl=False)
        else:
            Path(out_path).write_text(text, encoding="utf-8")
            click.echo(f"wrote: {out_path}")
        click.echo(
            f"derived {stats.consistent} consistent and {stats.violating} "
            f"violating situations ({stats.discarded} drafts discarded)",
            err=True,
        )
        return EXIT_OK

    _guarded(body)


# --- pack-path -------------------------------------------------------------

@main.command(name="pack-path")
@click.argument("name", metavar="PACK")
def pack_path(name: str) -> None:
    """Print the directory of the shipped pack PACK."""

    def body() -> int:
        kp = P.load_pack(name)
        click.echo(str(kp.root))
        return EXIT_OK

    _guarded(body)


if __name__ == "__main__":
    main()
