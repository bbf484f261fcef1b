"""Командная строка tri_lab.

Результаты печатаются в stdout (канонический JSON или таблица), журнал и
ошибки - в stderr. Ошибки имеют вид ``error: <ключ>: <сообщение>``.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from collections.abc import Callable, Sequence
from typing import Any, NoReturn

from tabulate import tabulate

from .const import (
    DEFAULT_BUDGET,
    DEFAULT_RESTARTS,
    DEFAULT_WORKERS,
    ENV_WORKERS,
    EXIT_OK,
    EXIT_REFUTED,
    EXIT_USAGE,
    GRAPH_FORMAT_ADJ,
    GRAPH_FORMAT_JSON,
    INITIALIZER_CONSTRUCTION,
    INITIALIZER_FILE,
    INITIALIZERS,
    OBJECTIVE_K32_SURPLUS,
    OBJECTIVE_MIN_TRIANGLES,
    PART_PAIRS,
)
from .constructions import (
    Construction51Params,
    ExtremalRegularParams,
    PlaneOrder,
    construction_5_1,
    extremal_regular,
    glue,
    projective_plane_bipartite,
    random_graph,
)
from .detection import (
    K3sWitness,
    extract_k32_via_dtilde,
    find_k3s,
    verify_k3s,
    verify_kss,
    witness_from_dict,
)
from .exceptions import BoundViolationError, InvalidParameterError, MalformedInstanceError, TriLabError
from .finder import find_with_fallback
from .graph import TripartiteGraph, complete_tripartite, degree_profile, part_bipartite, triangle_count
from .reproduce import ReproduceSettings, results_payload, results_table, run_all
from .search import SearchConfig, probe_k32_free_surplus, probe_min_triangles
from .serialization import (
    canonical_dumps,
    dumps_adjacency,
    dumps_graph,
    read_graph,
    read_json,
    read_witness,
    write_graph,
    write_json,
)
from .structure import (
    C6CloseInstance,
    ConditionCheck,
    check_partial_degree_hypothesis,
    extract_c6,
    validate_c6_close,
)
from .translations import render_exception_message, report_label

_LOGGER = logging.getLogger(__name__)

_LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"
_OBJECTIVES = {"min-triangles": OBJECTIVE_MIN_TRIANGLES, "k32-surplus": OBJECTIVE_K32_SURPLUS}
_FORMATS = {"json": GRAPH_FORMAT_JSON, "adj": GRAPH_FORMAT_ADJ}


class _ArgumentParser(argparse.ArgumentParser):
    """Парсер, превращающий ошибки разбора в ключевое исключение."""

    def error(self, message: str) -> NoReturn:
        raise InvalidParameterError("arguments", message)


def _default_workers() -> int:
    raw = os.environ.get(ENV_WORKERS)
    if raw is None:
        return DEFAULT_WORKERS
    try:
        return int(raw)
    except ValueError as e:
        raise InvalidParameterError(ENV_WORKERS, f"expected an integer, got {raw!r}") from e


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _checks_table(checks: Sequence[ConditionCheck]) -> str:
    rows = [
        (check.name, report_label("passed" if check.passed else "failed"), str(check.slack), check.witness or "")
        for check in checks
    ]
    return tabulate(rows, headers=["condition", "result", "slack", "witness"], tablefmt="simple")


def _graph_summary(graph: TripartiteGraph) -> str:
    profile = degree_profile(graph)
    rows = [
        ("n", graph.n),
        ("edges", graph.edge_count()),
        ("min degree", profile.min_degree),
        ("min out-degree", profile.min_out_degree),
        ("triangles", triangle_count(graph)),
    ]
    return tabulate(rows, tablefmt="simple")


def _plane_graph(q: int) -> TripartiteGraph:
    """Инцидентность PG(2, q) как ребра V_1 × V_2."""
    order = PlaneOrder(q)
    plane = projective_plane_bipartite(order)
    relations = {pair: [0] * plane.n for pair in PART_PAIRS}
    relations[(1, 2)] = list(plane.rows)
    return TripartiteGraph(plane.n, relations, {"construction": "plane", "params": {"q": q}})


def _cmd_construct(args: argparse.Namespace) -> int:
    kind = args.kind
    if kind == "k3n":
        graph = complete_tripartite(_require(args, "n"))
    elif kind == "plane":
        graph = _plane_graph(_require(args, "q"))
    elif kind == "c51":
        graph = construction_5_1(Construction51Params(_require(args, "n"), _require(args, "t")))
    elif kind == "extremal":
        graph = extremal_regular(ExtremalRegularParams(_require(args, "n"), _require(args, "t")))
    elif kind == "glue":
        graph = glue(read_graph(_require(args, "first")), read_graph(_require(args, "second")))
    else:
        graph = random_graph(_require(args, "n"), _require(args, "min_degree"), _require(args, "seed"))

    fmt = _FORMATS[args.format]
    if args.output:
        write_graph(graph, args.output, fmt)
        _emit(_graph_summary(graph))
    else:
        _emit(dumps_adjacency(graph) if fmt == GRAPH_FORMAT_ADJ else dumps_graph(graph))
    return EXIT_OK


def _require(args: argparse.Namespace, name: str) -> Any:
    value = getattr(args, name)
    if value is None:
        raise InvalidParameterError(name, f"required for construct {args.kind}")
    return value


def _cmd_detect(args: argparse.Namespace) -> int:
    graph = read_graph(args.graph)
    witness = find_k3s(graph, args.s)
    _emit(canonical_dumps(witness.to_dict()) if witness else report_label("absent"))
    return EXIT_OK


def _cmd_find(args: argparse.Namespace) -> int:
    graph = read_graph(args.graph)
    witness, trace = find_with_fallback(graph, args.s, args.t)
    if args.trace:
        _emit(
            canonical_dumps(
                {"witness": witness.to_dict() if witness else None, "trace": trace.to_dict()}
            )
        )
    else:
        _emit(canonical_dumps(witness.to_dict()) if witness else report_label("absent"))
    return EXIT_OK


def _cmd_extract(args: argparse.Namespace) -> int:
    graph = read_graph(args.graph)
    result = extract_c6(graph, args.epsilon)
    if args.table and result.partition is not None:
        _emit(_checks_table(result.partition.hypotheses + result.partition.diagnostics))
    else:
        _emit(canonical_dumps(result.to_dict()))
    return EXIT_OK


def _cmd_extract_k32(args: argparse.Namespace) -> int:
    graph = read_graph(args.graph)
    _emit(canonical_dumps(extract_k32_via_dtilde(graph, args.k).to_dict()))
    return EXIT_OK


def _cmd_validate_c6close(args: argparse.Namespace) -> int:
    graph = read_graph(args.graph)
    data = read_json(args.instance, MalformedInstanceError)
    instance = C6CloseInstance.from_dict(data, graph.n, args.c, args.d)
    report = validate_c6_close(graph, instance)
    _emit(_checks_table(report.checks) if args.table else canonical_dumps(report.to_dict()))
    return EXIT_REFUTED if report.alarm else EXIT_OK


def _cmd_validate_partial_degree(args: argparse.Namespace) -> int:
    graph = read_graph(args.graph)
    report = check_partial_degree_hypothesis(graph, args.c)
    _emit(_checks_table(report.checks) if args.table else canonical_dumps(report.to_dict()))
    return EXIT_OK


def _cmd_probe(args: argparse.Namespace) -> int:
    config = SearchConfig(
        n=args.n,
        t=args.t,
        objective=_OBJECTIVES[args.objective],
        budget=args.budget,
        restarts=args.restarts,
        seed=args.seed,
        initializer=INITIALIZER_FILE if args.initial else args.initializer,
        initial_path=args.initial,
        workers=args.workers,
    )
    probe = probe_min_triangles if config.objective == OBJECTIVE_MIN_TRIANGLES else probe_k32_free_surplus
    try:
        report = probe(config)
    except BoundViolationError as err:
        sys.stderr.write(f"error: {err.translation_key}: {err}\n")
        return EXIT_REFUTED

    if args.output:
        write_graph(report.best_graph, args.output)
    if args.report:
        write_json(report.to_dict(), args.report)
    _emit(tabulate(report.table_rows(), tablefmt="simple"))
    return EXIT_OK


def _claim_holds(graph: TripartiteGraph, data: dict[str, Any]) -> bool:
    if "triangles" in data:
        return triangle_count(graph) == data["triangles"]
    return degree_profile(graph).min_degree >= data["min_degree"]


def _cmd_verify_witness(args: argparse.Namespace) -> int:
    graph = read_graph(args.graph)
    data = read_witness(args.witness, graph.n)
    if "type" not in data:
        verified = _claim_holds(graph, data)
    elif isinstance(witness := witness_from_dict(data), K3sWitness):
        verified = verify_k3s(graph, witness)
    else:
        first, second = witness.pair or (1, 2)
        verified = verify_kss(part_bipartite(graph, first, second), witness)
    _emit(report_label("passed" if verified else "failed"))
    return EXIT_OK if verified else EXIT_REFUTED


def _cmd_reproduce(args: argparse.Namespace) -> int:
    settings = ReproduceSettings(seed=args.seed, quick=args.quick)
    results = run_all(settings)
    _emit(results_table(results))
    payload = results_payload(results, settings)
    if args.output:
        write_json(payload, args.output)
    return EXIT_OK if payload["passed"] else EXIT_REFUTED


def build_parser() -> argparse.ArgumentParser:
    """Парсер всех подкоманд."""
    parser = _ArgumentParser(prog="tri_lab", description="Balanced tripartite graph toolkit")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v INFO, -vv DEBUG")
    commands = parser.add_subparsers(dest="command", required=True)

    construct = commands.add_parser("construct", help="build a graph family")
    construct.add_argument("kind", choices=["k3n", "plane", "c51", "glue", "extremal", "random"])
    construct.add_argument("--n", type=int)
    construct.add_argument("--t", type=int)
    construct.add_argument("--q", type=int)
    construct.add_argument("--min-degree", type=int, dest="min_degree")
    construct.add_argument("--seed", type=int)
    construct.add_argument("--first", help="left graph for glue")
    construct.add_argument("--second", help="right graph for glue")
    construct.add_argument("-o", "--output")
    construct.add_argument("--format", choices=sorted(_FORMATS), default="json")
    construct.set_defaults(handler=_cmd_construct)

    detect = commands.add_parser("detect", help="exact K_3(s) detection")
    detect.add_argument("graph")
    detect.add_argument("--s", type=int, required=True)
    detect.set_defaults(handler=_cmd_detect)

    find = commands.add_parser("find", help="constructive K_3(s) finder with fallback")
    find.add_argument("graph")
    find.add_argument("--s", type=int, required=True)
    find.add_argument("--t", type=int)
    find.add_argument("--trace", action="store_true")
    find.set_defaults(handler=_cmd_find)

    extract = commands.add_parser("extract", help="C6 blow-up partition")
    extract.add_argument("graph")
    extract.add_argument("--epsilon", required=True)
    extract.add_argument("--table", action="store_true")
    extract.set_defaults(handler=_cmd_extract)

    extract_k32 = commands.add_parser("extract-k32", help="K_3(2) from high-triangle edge neighbourhoods")
    extract_k32.add_argument("graph")
    extract_k32.add_argument("--k", required=True)
    extract_k32.set_defaults(handler=_cmd_extract_k32)

    c6close = commands.add_parser("validate-c6close", help="check C6-close hypotheses")
    c6close.add_argument("graph")
    c6close.add_argument("--instance", required=True)
    c6close.add_argument("--c", required=True)
    c6close.add_argument("--d", type=int, required=True)
    c6close.add_argument("--table", action="store_true")
    c6close.set_defaults(handler=_cmd_validate_c6close)

    partial = commands.add_parser("validate-partial-degree", help="check linear partial degree hypotheses")
    partial.add_argument("graph")
    partial.add_argument("--c", required=True)
    partial.add_argument("--table", action="store_true")
    partial.set_defaults(handler=_cmd_validate_partial_degree)

    probe = commands.add_parser("probe", help="local search probes")
    probe.add_argument("objective", choices=sorted(_OBJECTIVES))
    probe.add_argument("--n", type=int, required=True)
    probe.add_argument("--t", type=int, required=True)
    probe.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    probe.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
    probe.add_argument("--seed", type=int, required=True)
    probe.add_argument("--initializer", choices=INITIALIZERS, default=INITIALIZER_CONSTRUCTION)
    probe.add_argument("--initial", help="start graph file")
    probe.add_argument("--workers", type=int, default=None)
    probe.add_argument("-o", "--output", help="best graph file")
    probe.add_argument("--report", help="JSON report file")
    probe.set_defaults(handler=_cmd_probe)

    verify = commands.add_parser("verify-witness", help="check a witness or claim file")
    verify.add_argument("graph")
    verify.add_argument("witness")
    verify.set_defaults(handler=_cmd_verify_witness)

    reproduce = commands.add_parser("reproduce", help="run the acceptance suite")
    reproduce.add_argument("--seed", type=int, required=True)
    reproduce.add_argument("--output", help="JSON results file")
    reproduce.add_argument("--quick", action="store_true", help="smaller samples and budgets")
    reproduce.set_defaults(handler=_cmd_reproduce)
    return parser


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format=_LOG_FORMAT, stream=sys.stderr, force=True)


def run(argv: Sequence[str] | None = None) -> int:
    """Точка входа: разбор аргументов, выполнение подкоманды, код выхода."""
    try:
        args = build_parser().parse_args(argv)
        _configure_logging(args.verbose)
        if getattr(args, "workers", 0) is None:
            args.workers = _default_workers()
        handler: Callable[[argparse.Namespace], int] = args.handler
        return handler(args)
    except TriLabError as err:
        sys.stderr.write(f"error: {err.translation_key}: {err}\n")
        return EXIT_USAGE
    except Exception as err:  # noqa: BLE001
        _LOGGER.exception("Непредвиденная ошибка")
        message = render_exception_message("internal_error", {"reason": repr(err)})
        sys.stderr.write(f"error: internal_error: {message}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
