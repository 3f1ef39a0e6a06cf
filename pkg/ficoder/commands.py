"""
Command implementations behind the CLI.

Each ``run_*`` function takes a RunConfig and returns a CommandReport with
its exit code: 0 success, 1 verification failure, 2 usage or parse error,
3 search budget exhausted.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Callable, Dict, List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from .codec import (
    AffineMap,
    Fic,
    NotLinear,
    check_linear_map,
    export_code,
    fic_from_assignment,
    fic_from_matrix,
    is_perfect,
    partitioned_synthesize,
    render_linear_map,
    synthesize,
    verify_fic,
)
from .coloring import Coloring, code_size_bounds, exact_chromatic
from .confusion import ConfusionGraph, build_graph, export_dot
from .ecc import (
    DeltaFic,
    builtin_code,
    compare_singleton,
    concatenate,
    simulate_errors,
    verify_delta,
    verify_delta_linear,
)
from .exceptions import (
    BudgetExceededError,
    DimensionMismatchError,
    FicoderError,
    SearchTimeout,
    UsageError,
)
from .field import ceil_log, format_symbols, unrank
from .models import CommandReport, FicpInstance, lift_instance
from .models.linear import is_linear_instance
from .pipeline.artifacts import format_assignment, format_matrix, read_assignment, read_matrix
from .profiles.profile_loader import DEFAULT_PROFILE, ProfileConfig, load_profile_config
from .validator import load_instance_file, validate_instance_file

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_TIMEOUT = 3

COMMANDS = (
    "validate",
    "graph",
    "color",
    "synthesize",
    "bounds",
    "verify",
    "ecc-verify",
    "ecc-concat",
    "simulate",
)

# failures listed in a report; the count is always exact
MAX_LISTED = 20

CommandResult = Tuple[CommandReport, int]


class RunConfig(BaseModel):
    """Validated options of one CLI invocation."""

    model_config = ConfigDict(extra="forbid")

    command: Literal[
        "validate", "graph", "color", "synthesize", "bounds",
        "verify", "ecc-verify", "ecc-concat", "simulate",
    ]
    instance: Path
    n: int = 1
    budget: Optional[int] = None
    delta: Optional[int] = None
    outer: Optional[str] = None
    assignment: Optional[Path] = None
    matrix: Optional[Path] = None
    pattern: Optional[str] = None
    partition: Optional[List[int]] = None
    dot: Optional[Path] = None
    output: Optional[Path] = None
    profile: str = DEFAULT_PROFILE

    @field_validator("n")
    @classmethod
    def validate_n(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"block length must be >= 1, got {v}")
        return v

    @field_validator("budget")
    @classmethod
    def validate_budget(cls, v: Optional[int]) -> Optional[int]:
        if v is not None and v < 1:
            raise ValueError(f"budget must be positive, got {v}")
        return v

    @field_validator("delta")
    @classmethod
    def validate_delta(cls, v: Optional[int]) -> Optional[int]:
        if v is not None and v < 0:
            raise ValueError(f"delta must be non-negative, got {v}")
        return v

    @field_validator("partition")
    @classmethod
    def validate_partition(cls, v: Optional[List[int]]) -> Optional[List[int]]:
        if v is not None and (not v or any(m < 1 for m in v)):
            raise ValueError(f"partition parts must be positive, got {v}")
        return v

    @field_validator("pattern")
    @classmethod
    def validate_pattern(cls, v: Optional[str]) -> Optional[str]:
        if v is not None and not v.replace(" ", "").replace(",", "").isdigit():
            raise ValueError(f"error pattern must be a digit string, got {v!r}")
        return v

    def settings(self) -> ProfileConfig:
        """Profile settings with --budget applied to the search it bounds."""
        settings = load_profile_config(self.profile)
        if self.command == "simulate":
            return settings.with_overrides(simulation_budget=self.budget)
        return settings.with_overrides(node_budget=self.budget)


# =============================================================================
# Shared helpers
# =============================================================================

def _load(config: RunConfig, settings: ProfileConfig) -> FicpInstance:
    inst = load_instance_file(config.instance, settings)
    return lift_instance(inst, config.n) if config.n > 1 else inst


def _graph(inst: FicpInstance, settings: ProfileConfig) -> ConfusionGraph:
    return build_graph(
        inst,
        vertex_budget=settings.vertex_budget,
        workers=settings.worker_count,
        linearity_limit=settings.linearity_limit,
    )


def _chromatic(graph: ConfusionGraph, settings: ProfileConfig, initial: Optional[Coloring] = None):
    return exact_chromatic(
        graph,
        budget=settings.node_budget,
        clique_budget=settings.clique_budget,
        subspace_budget=settings.subspace_budget,
        initial=initial,
    )


def _read_matrix(config: RunConfig, inst: FicpInstance) -> np.ndarray:
    q, matrix = read_matrix(config.matrix)
    if q != inst.q:
        raise DimensionMismatchError(f"matrix is over F_{q}, instance over F_{inst.q}")
    return matrix


def _inner_code(config: RunConfig, inst: FicpInstance) -> Union[Fic, np.ndarray]:
    """The --matrix (as a matrix) or --assignment (as a Fic) input."""
    if config.matrix is not None:
        return _read_matrix(config, inst)
    if config.assignment is not None:
        return fic_from_assignment(inst, read_assignment(config.assignment))
    raise UsageError(f"{config.command} needs --assignment or --matrix")


def _load_code(config: RunConfig, inst: FicpInstance) -> Fic:
    inner = _inner_code(config, inst)
    return inner if isinstance(inner, Fic) else fic_from_matrix(inst, inner)


def _coloring_text(coloring: Coloring, q: int) -> str:
    """Colour classes in code-export form, class l sent as the word with label l."""
    length = ceil_log(coloring.num_colors, q)
    return format_assignment(
        [(members, unrank(l, length, q).symbols) for l, members in enumerate(coloring.classes())],
        q,
    )


def _describe_code(inst: FicpInstance, fic: Fic) -> Dict[str, object]:
    data: Dict[str, object] = {"codewords": fic.size}
    data.update(is_perfect(inst, fic).to_dict())
    form = check_linear_map(inst, fic)
    data["map"] = form.kind
    if not isinstance(form, NotLinear):
        offset = form.offset if isinstance(form, AffineMap) else None
        data["closed_form"] = render_linear_map(form.matrix, inst.n, inst.q, offset)
    return data


def _listed(items: List[Dict[str, object]]) -> List[Dict[str, object]]:
    return items[:MAX_LISTED]


def _optimal_length(inst: FicpInstance, settings: ProfileConfig) -> Optional[int]:
    try:
        return ceil_log(_chromatic(_graph(inst, settings), settings).chi, inst.q)
    except SearchTimeout:
        logger.warning("optimal length not certified within budget")
        return None


# =============================================================================
# Commands
# =============================================================================

def run_validate(config: RunConfig) -> CommandResult:
    report = validate_instance_file(config.instance, config.settings())
    out = CommandReport("validate", "pass" if report.success else "fail", validation=report)
    out.sections["summary"] = dict(report.summary)
    out.sections["issues"] = {
        "errors": [e.to_dict() for e in report.errors],
        "warnings": [w.to_dict() for w in report.warnings],
        "notes": [n.to_dict() for n in report.notes],
    }
    if report.success:
        return out, EXIT_OK
    unreadable = any(e.code.startswith("FIC0") for e in report.errors)
    return out, EXIT_USAGE if unreadable else EXIT_FAILED


def run_graph(config: RunConfig) -> CommandResult:
    settings = config.settings()
    inst = _load(config, settings)
    graph = _graph(inst, settings)
    regular, degree = graph.is_regular()

    out = CommandReport("graph", "ok")
    section = out.section("graph")
    section.update(
        vertices=graph.vcount,
        edges=graph.edge_count,
        regular=regular,
        degree=degree,
        cayley=graph.is_cayley,
    )
    if graph.is_cayley:
        section["connection_set"] = [
            format_symbols(unrank(s, inst.nk, inst.q).symbols, inst.q)
            for s in sorted(graph.cayley_set)
        ]
    out.artifacts["dot"] = export_dot(graph)
    return out, EXIT_OK


def run_color(config: RunConfig) -> CommandResult:
    settings = config.settings()
    inst = _load(config, settings)
    graph = _graph(inst, settings)
    try:
        result = _chromatic(graph, settings)
    except SearchTimeout as e:
        out = CommandReport("color", "timeout")
        out.section("coloring").update(lower=e.lower, upper=e.upper, nodes=e.nodes, certified=False)
        if e.best is not None:
            out.artifacts["output"] = _coloring_text(e.best, inst.q)
        return out, EXIT_TIMEOUT

    coloring = result.coloring
    out = CommandReport("color", "ok")
    out.section("coloring").update(
        chi=result.chi,
        lower=result.lower,
        certified=True,
        seed=result.seed,
        nodes=result.nodes,
        length=ceil_log(result.chi, inst.q),
    )
    out.artifacts["output"] = _coloring_text(coloring, inst.q)
    out.artifacts["dot"] = export_dot(graph, {v: str(c) for v, c in enumerate(coloring.color_of)})
    return out, EXIT_OK


def run_synthesize(config: RunConfig) -> CommandResult:
    settings = config.settings()

    if config.partition:
        if config.n > 1 and sum(config.partition) != config.n:
            raise UsageError(f"partition {config.partition} does not sum to n={config.n}")
        scalar = load_instance_file(config.instance, settings)
        code = partitioned_synthesize(
            scalar,
            config.partition,
            budget=settings.node_budget,
            vertex_budget=settings.vertex_budget,
        )
        inst, fic = code.fic.instance, code.fic
        out = CommandReport("synthesize", "ok")
        out.section("partition").update(
            parts=list(code.partition),
            part_lengths=[p.length for p in code.parts],
        )
        out.sections["code"] = _describe_code(inst, fic)
        out.artifacts["output"] = export_code(fic)
        return out, EXIT_OK

    inst = _load(config, settings)
    graph = _graph(inst, settings)
    seed = None
    if config.assignment is not None or config.matrix is not None:
        seed = _load_code(config, inst)

    exit_code = EXIT_OK
    try:
        result = _chromatic(graph, settings, Coloring.from_colors(seed.encoding) if seed else None)
        coloring, chi = result.coloring, result.chi
        status = {"chi": chi, "certified": True, "seed": result.seed}
    except SearchTimeout as e:
        if e.best is None:
            raise
        coloring, chi = e.best, None
        status = {"lower": e.lower, "upper": e.upper, "certified": False}
        exit_code = EXIT_TIMEOUT

    # a valid seed code of optimal size is kept with its own codewords
    if seed is not None and seed.valid and chi is not None and seed.size == chi:
        fic = seed
    else:
        fic = synthesize(inst, coloring, graph=graph)

    out = CommandReport("synthesize", "ok" if exit_code == EXIT_OK else "timeout")
    out.sections["coloring"] = status
    out.sections["code"] = _describe_code(inst, fic)
    out.artifacts["output"] = export_code(fic)
    return out, exit_code


def run_bounds(config: RunConfig) -> CommandResult:
    """Bounds never time out: unfinished searches widen the interval."""
    settings = config.settings()
    scalar = load_instance_file(config.instance, settings)
    graph = _graph(scalar, settings)
    try:
        chi: Optional[int] = _chromatic(graph, settings).chi
    except SearchTimeout as e:
        logger.warning("chromatic number not certified: %s", e)
        chi = None

    report = code_size_bounds(
        scalar,
        graph,
        n=config.n,
        clique_budget=settings.clique_budget,
        subspace_budget=settings.subspace_budget,
        chi=chi,
    )
    out = CommandReport("bounds", "ok")
    out.sections["bounds"] = report.to_dict()
    if chi is not None and config.n == 1:
        length = ceil_log(chi, scalar.q)
        out.section("code").update(chi=chi, length=length, mu=report.mu, perfect=length == report.mu)
    return out, EXIT_OK


def run_verify(config: RunConfig) -> CommandResult:
    settings = config.settings()
    inst = _load(config, settings)
    fic = _load_code(config, inst)
    report = verify_fic(inst, fic)

    out = CommandReport("verify", "pass" if report.passed else "fail")
    data = report.to_dict()
    data["failure_count"] = len(report.failures)
    data["failures"] = _listed(data["failures"])
    out.sections["verification"] = data
    if report.passed:
        out.sections["code"] = _describe_code(inst, fic)
    return out, EXIT_OK if report.passed else EXIT_FAILED


def run_ecc_verify(config: RunConfig) -> CommandResult:
    settings = config.settings()
    inst = _load(config, settings)
    fic = _load_code(config, inst)
    delta = 1 if config.delta is None else config.delta

    report = verify_delta(inst, fic, delta)
    out = CommandReport("ecc-verify", "pass" if report.passed else "fail")
    out.sections["ecc"] = report.to_dict()
    if config.matrix is not None and is_linear_instance(inst, settings.linearity_limit):
        weights = verify_delta_linear(inst, _read_matrix(config, inst), delta)
        out.sections["weight_check"] = weights.to_dict()
    return out, EXIT_OK if report.passed else EXIT_FAILED


def run_ecc_concat(config: RunConfig) -> CommandResult:
    settings = config.settings()
    inst = _load(config, settings)
    delta = 1 if config.delta is None else config.delta
    outer = builtin_code(config.outer or "repetition", q=inst.q, delta=delta)

    l_opt: Optional[int] = None
    if config.assignment is None and config.matrix is None:
        graph = _graph(inst, settings)
        result = _chromatic(graph, settings)
        inner: Union[Fic, np.ndarray] = synthesize(inst, result.coloring, graph=graph)
        l_opt = ceil_log(result.chi, inst.q)
    else:
        inner = _inner_code(config, inst)
        l_opt = _optimal_length(inst, settings)

    dfic = concatenate(inst, inner, outer)
    check = verify_delta(inst, dfic, dfic.delta)

    out = CommandReport("ecc-concat", "pass" if check.passed else "fail")
    out.section("concatenation").update(
        outer=str(outer),
        inner_length=dfic.inner_length,
        length=dfic.length,
        delta=dfic.delta,
        provenance=dfic.provenance,
    )
    out.sections["ecc"] = check.to_dict()
    if l_opt is not None:
        out.sections["singleton"] = compare_singleton(dfic.length, l_opt, dfic.delta, check.passed).to_dict()

    passed = check.passed
    try:
        simulation = simulate_errors(
            inst, dfic, budget=settings.simulation_budget, workers=settings.worker_count
        )
        out.sections["simulation"] = simulation.to_dict()
        passed = passed and simulation.passed
    except BudgetExceededError as e:
        out.section("simulation").update(skipped=str(e))

    if dfic.matrix is not None:
        out.artifacts["output"] = format_matrix(dfic.matrix, inst.q)
    else:
        out.artifacts["output"] = export_code(dfic.fic)
    out.status = "pass" if passed else "fail"
    return out, EXIT_OK if passed else EXIT_FAILED


def run_simulate(config: RunConfig) -> CommandResult:
    settings = config.settings()
    inst = _load(config, settings)
    code: Union[Fic, DeltaFic]
    if config.outer is not None:
        outer = builtin_code(config.outer, q=inst.q, delta=1 if config.delta is None else config.delta)
        code = concatenate(inst, _inner_code(config, inst), outer)
        delta = code.delta if config.delta is None else config.delta
    else:
        code = _load_code(config, inst)
        delta = 1 if config.delta is None else config.delta

    report = simulate_errors(
        inst,
        code,
        delta=delta,
        pattern=config.pattern,
        budget=settings.simulation_budget,
        workers=settings.worker_count,
    )
    out = CommandReport("simulate", "pass" if report.passed else "fail")
    data = report.to_dict()
    data["delta"] = delta if config.pattern is None else None
    data["failures"] = _listed(data["failures"])
    out.sections["simulation"] = data
    return out, EXIT_OK if report.passed else EXIT_FAILED


_RUNNERS: Dict[str, Callable[[RunConfig], CommandResult]] = {
    "validate": run_validate,
    "graph": run_graph,
    "color": run_color,
    "synthesize": run_synthesize,
    "bounds": run_bounds,
    "verify": run_verify,
    "ecc-verify": run_ecc_verify,
    "ecc-concat": run_ecc_concat,
    "simulate": run_simulate,
}


def _error_report(command: str, status: str, error: Exception, **extra) -> CommandReport:
    out = CommandReport(command, status)
    out.section("error").update(type=type(error).__name__, message=str(error), **extra)
    return out


def run_command(config: RunConfig) -> CommandResult:
    """Run one command, mapping library errors to exit codes."""
    runner = _RUNNERS[config.command]
    try:
        return runner(config)
    except SearchTimeout as e:
        return _error_report(config.command, "timeout", e, lower=e.lower, upper=e.upper), EXIT_TIMEOUT
    except BudgetExceededError as e:
        return _error_report(config.command, "timeout", e), EXIT_TIMEOUT
    except FicoderError as e:
        logger.debug("%s failed", config.command, exc_info=True)
        return _error_report(config.command, "error", e), EXIT_USAGE
