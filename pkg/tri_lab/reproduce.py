"""Набор воспроизводимых проверок: таблица результатов и JSON для CI."""
from __future__ import annotations

import logging
import time
from collections.abc import Callable
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Any

import numpy as np
from tabulate import tabulate

from .const import OBJECTIVE_MIN_TRIANGLES
from .constructions import (
    Construction51Params,
    ExtremalRegularParams,
    PlaneOrder,
    c6_blowup,
    construction_5_1,
    extremal_regular,
    glue,
    projective_plane_bipartite,
    random_graph,
)
from .detection import find_k3s, find_kss, kst_bound, verify_k3s, verify_kss
from .exceptions import BoundViolationError
from .finder import OUTCOME_FOUND, find_with_fallback
from .graph import (
    BipartiteGraph,
    TripartiteGraph,
    Vertex,
    degree_profile,
    triangle_count,
    triangles_through_edge,
    tripartite_complement,
)
from .search import SearchConfig, probe_min_triangles
from .structure import extract_c6, refine_ab
from .translations import report_label

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class CriterionResult:
    """Результат одной проверки."""

    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def to_dict(self) -> dict[str, Any]:
        return {
            "number": self.number,
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class ReproduceSettings:
    """Объемы проверок; quick уменьшает выборки и бюджеты поиска."""

    seed: int = 0
    quick: bool = False

    def scale(self, full: int, quick: int) -> int:
        return quick if self.quick else full


class _SentinelWatch:
    """Счетчик срабатываний оценки снизу во всех запусках поиска."""

    def __init__(self) -> None:
        self.runs = 0
        self.alarms: list[str] = []

    def probe(self, config: SearchConfig) -> int | None:
        self.runs += 1
        try:
            return probe_min_triangles(config).best_value
        except BoundViolationError as err:
            self.alarms.append(str(err))
            return None


def _octahedron_by_pairs(graph: TripartiteGraph) -> bool:
    """Перебор всех троек пар (по одной паре из каждой доли)."""
    pairs = list(combinations(range(graph.n), 2))
    for p1, p2, p3 in product(pairs, repeat=3):
        if all(
            graph.has_edge(Vertex(i, a), Vertex(j, b))
            for (i, side_i), (j, side_j) in (((1, p1), (2, p2)), ((1, p1), (3, p3)), ((2, p2), (3, p3)))
            for a in side_i
            for b in side_j
        ):
            return True
    return False


def _criterion_extremal_equality(settings: ReproduceSettings, watch: _SentinelWatch) -> tuple[bool, str]:
    graph = extremal_regular(ExtremalRegularParams(4, 2))
    profile = degree_profile(graph)
    triangles = triangle_count(graph)
    budget = settings.scale(100_000, 2_000)
    restarts = settings.scale(10, 2)
    best = watch.probe(
        SearchConfig(4, 2, OBJECTIVE_MIN_TRIANGLES, budget, restarts, settings.seed)
    )
    passed = (
        triangles == 16
        and profile.min_degree == 6
        and max(max(row) for row in profile.degree.values()) == 6
        and best is not None
        and best >= 16
    )
    return passed, f"T={triangles}, search best={best} over {restarts}x{budget} moves"


def _criterion_formula_sweep(settings: ReproduceSettings, watch: _SentinelWatch) -> tuple[bool, str]:
    checked = 0
    for n in (4, 6, 8, 10, 12):
        for t in range(n // 2, n + 1):
            graph = extremal_regular(ExtremalRegularParams(n, t))
            degrees = {d for row in degree_profile(graph).degree.values() for d in row}
            if degrees != {n + t} or triangle_count(graph) != n * n * (3 * t - n) // 2:
                return False, f"mismatch at n={n}, t={t}"
            checked += 1
    return True, f"{checked} (n, t) pairs"


def _criterion_c51(settings: ReproduceSettings, watch: _SentinelWatch) -> tuple[bool, str]:
    details = []
    for n, t in ((13, 2), (31, 4), (36, 5)):
        graph = construction_5_1(Construction51Params(n, t))
        delta = degree_profile(graph).min_degree
        free = find_k3s(graph, 2) is None
        details.append(f"({n},{t}): delta={delta}, free={free}")
        if delta != n + t or not free:
            return False, "; ".join(details)
    return True, "; ".join(details)


def _criterion_glue(settings: ReproduceSettings, watch: _SentinelWatch) -> tuple[bool, str]:
    base = construction_5_1(Construction51Params(13, 2))
    glued = glue(base, base)
    delta = degree_profile(glued).min_degree
    additive = triangle_count(glued) == 2 * triangle_count(base)
    free = find_k3s(glued, 2) is None
    passed = glued.n == 26 and delta == 28 and additive and free
    return passed, f"n={glued.n}, delta={delta}, additive={additive}, free={free}"


def _criterion_planes(settings: ReproduceSettings, watch: _SentinelWatch) -> tuple[bool, str]:
    for q in (2, 3, 4, 5):
        order = PlaneOrder(q)
        plane = projective_plane_bipartite(order)
        regular = all(plane.left_degree(u) == q + 1 for u in range(plane.m)) and all(
            plane.right_degree(v) == q + 1 for v in range(plane.n)
        )
        overlap = max(
            (plane.rows[a] & plane.rows[b]).bit_count() for a, b in combinations(range(plane.m), 2)
        )
        if not regular or plane.edge_count() != order.n * (q + 1) or overlap > 1:
            return False, f"q={q} fails"
    return True, "q in {2, 3, 4, 5}"


def _criterion_oracle(settings: ReproduceSettings, watch: _SentinelWatch) -> tuple[bool, str]:
    rng = np.random.default_rng(settings.seed)
    samples = settings.scale(200, 20)
    disagreements = 0
    for _ in range(samples):
        n = int(rng.integers(3, 8))
        graph = random_graph(n, int(rng.integers(0, 2 * n + 1)), int(rng.integers(2**63)))
        witness = find_k3s(graph, 2)
        if witness is not None and not verify_k3s(graph, witness):
            disagreements += 1
        elif (witness is not None) != _octahedron_by_pairs(graph):
            disagreements += 1
    return disagreements == 0, f"{disagreements} disagreements in {samples} graphs"


def _random_bipartite(rng: np.random.Generator, m: int, n: int, density: float) -> BipartiteGraph:
    matrix = rng.random((m, n)) < density
    return BipartiteGraph(
        m, n, [sum(1 << int(v) for v in np.flatnonzero(matrix[u])) for u in range(m)]
    )


def _criterion_kst(settings: ReproduceSettings, watch: _SentinelWatch) -> tuple[bool, str]:
    rng = np.random.default_rng(settings.seed + 1)
    samples = settings.scale(200, 20)
    dense = violations = 0
    for _ in range(samples):
        m, n = int(rng.integers(1, 31)), int(rng.integers(1, 31))
        graph = _random_bipartite(rng, m, n, float(rng.random()))
        if graph.edge_count() <= kst_bound(m, n, 2):
            continue
        dense += 1
        witness = find_kss(graph, 2)
        if witness is None or not verify_kss(graph, witness):
            violations += 1
    return violations == 0, f"{violations} violations, {dense} graphs above the bound"


def _criterion_finder(settings: ReproduceSettings, watch: _SentinelWatch) -> tuple[bool, str]:
    n = 200
    floor = n + 2 * int(np.ceil(n ** (5 / 6)))
    runs = settings.scale(20, 2)
    verified = constructive = 0
    for seed in range(1, runs + 1):
        graph = random_graph(n, floor, seed)
        witness, trace = find_with_fallback(graph, 2)
        if witness is not None and verify_k3s(graph, witness):
            verified += 1
        if trace.outcome == OUTCOME_FOUND:
            constructive += 1
    return verified == runs, f"verified {verified}/{runs}, constructive {constructive}/{runs}"


def _criterion_c6(settings: ReproduceSettings, watch: _SentinelWatch) -> tuple[bool, str]:
    checked = 0
    for m in (5, 10, 20):
        for u in (0, 3):
            graph = c6_blowup(m, u)
            result = extract_c6(graph, 0)
            if result.partition is None:
                return False, f"m={m}, u={u}: {result.status}"
            ranges = graph.meta["ranges"]
            for i in range(1, 7):
                planted = set(range(*ranges[f"W{i}"]))
                if set(result.partition.w[i]) ^ planted:
                    return False, f"m={m}, u={u}: W{i} differs"
            if not result.partition.passed:
                return False, f"m={m}, u={u}: diagnostics failed"
            checked += 1
    return True, f"{checked} planted instances"


def _criterion_refine(settings: ReproduceSettings, watch: _SentinelWatch) -> tuple[bool, str]:
    rng = np.random.default_rng(settings.seed + 2)
    samples = settings.scale(200, 20)
    violations = 0
    for _ in range(samples):
        m, n = int(rng.integers(1, 31)), int(rng.integers(1, 31))
        lam = Fraction(int(rng.integers(0, 11)), 100)
        allowed = int(lam * n)
        rows = []
        for _ in range(m):
            missing = rng.choice(n, size=int(rng.integers(0, allowed + 1)), replace=False)
            rows.append((1 << n) - 1 - sum(1 << int(v) for v in missing))
        graph = BipartiteGraph(m, n, rows)
        kept = refine_ab(graph, lam)
        mask = sum(1 << b for b in kept)
        if len(kept) < (1 - 5 * lam) * n:
            violations += 1
        elif any((row & mask).bit_count() < (1 - 2 * lam) * len(kept) for row in rows):
            violations += 1
    return violations == 0, f"{violations} violations in {samples} instances"


def _criterion_identities(settings: ReproduceSettings, watch: _SentinelWatch) -> tuple[bool, str]:
    rng = np.random.default_rng(settings.seed + 3)
    samples = settings.scale(100, 10)
    for _ in range(samples):
        n = int(rng.integers(1, 9))
        graph = random_graph(n, int(rng.integers(0, 2 * n + 1)), int(rng.integers(2**63)))
        total = 0
        for i, u, j, v in graph.edges():
            total += triangles_through_edge(graph, Vertex(i, u), Vertex(j, v))
        complement = tripartite_complement(graph)
        if total != 3 * triangle_count(graph):
            return False, "edge triangle sum differs from 3T"
        if any(complement.degree(v) != 2 * n - graph.degree(v) for v in graph.vertices()):
            return False, "complement degree identity fails"
    return True, f"{samples} graphs"


def _criterion_sentinel(settings: ReproduceSettings, watch: _SentinelWatch) -> tuple[bool, str]:
    for n, t in ((4, 1), (6, 3), (5, 2)):
        watch.probe(
            SearchConfig(
                n, t, OBJECTIVE_MIN_TRIANGLES, settings.scale(20_000, 1_000), 2, settings.seed,
                initializer="random",
            )
        )
    return not watch.alarms, f"{watch.runs} search runs, {len(watch.alarms)} alarms"


Criterion = Callable[[ReproduceSettings, _SentinelWatch], tuple[bool, str]]

CRITERIA: tuple[tuple[str, Criterion], ...] = (
    ("extremal equality f(4,2)=16", _criterion_extremal_equality),
    ("regular construction formula sweep", _criterion_formula_sweep),
    ("disjoint-block construction certificates", _criterion_c51),
    ("gluing", _criterion_glue),
    ("projective plane blocks", _criterion_planes),
    ("detector oracle equivalence", _criterion_oracle),
    ("KST consistency", _criterion_kst),
    ("finder pipeline", _criterion_finder),
    ("C6 extraction recovery", _criterion_c6),
    ("refine_ab postconditions", _criterion_refine),
    ("global identities", _criterion_identities),
    ("bound sentinel", _criterion_sentinel),
)


def run_all(settings: ReproduceSettings) -> list[CriterionResult]:
    """Запуск всех проверок по порядку."""
    watch = _SentinelWatch()
    results = []
    for number, (name, criterion) in enumerate(CRITERIA, start=1):
        started = time.perf_counter()
        passed, detail = criterion(settings, watch)
        elapsed = time.perf_counter() - started
        _LOGGER.info("Проверка %d (%s): %s за %.1f с", number, name, passed, elapsed)
        results.append(CriterionResult(number, name, passed, detail, elapsed))
    return results


def results_table(results: list[CriterionResult], language: str = "en") -> str:
    """Таблица результатов фиксированной ширины."""
    rows = [
        (
            result.number,
            result.name,
            report_label("passed" if result.passed else "failed", language),
            result.detail,
        )
        for result in results
    ]
    return tabulate(rows, headers=["#", "criterion", "result", "detail"], tablefmt="simple")


def results_payload(results: list[CriterionResult], settings: ReproduceSettings) -> dict[str, Any]:
    return {
        "seed": settings.seed,
        "quick": settings.quick,
        "passed": all(result.passed for result in results),
        "criteria": [result.to_dict() for result in results],
    }

