"""Конструктивный поиск K_3(s) при δ(G) ≥ n + t.

Процедура повторяет доказательство существования: выбор T_1 с
максимальной суммой исходящих степеней, двойной подсчет треугольников
через пары xy (x ∈ T_1, y ∈ T_x), выбор z_1..z_s по усреднению и поиск
K_{s,s} в двудольном графе ребер 𝒯(z_1..z_s).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, comb
from typing import Any

from .const import FINDER_EXACT_PAIR_LIMIT, FINDER_SWAP_ROUNDS, PARTS
from .detection import K3sWitness, find_k3s, kss_in_rows, verify_k3s
from .exceptions import DegreeFloorError, TriLabError
from .graph import (
    TripartiteGraph,
    Vertex,
    degree_profile,
    full_mask,
    iter_bits,
    next_part,
    prev_part,
    triangles_through_edge,
)
from .validators import check_positive_int, check_range

_LOGGER = logging.getLogger(__name__)

OUTCOME_FOUND = "found"
OUTCOME_ABSENT = "absent"
OUTCOME_PRECONDITION_FAILED = "precondition_failed"


def surplus_constant(s: int) -> float:
    """C = 2(s−1)^{1/(s+1)}."""
    return 2 * (s - 1) ** (1 / (s + 1))


def surplus_exponent(s: int) -> float:
    return 1 - 1 / (s * (s + 1))


def default_t(n: int, s: int) -> int:
    """t = ⌈C·n^{1−1/(s(s+1))}⌉."""
    return ceil(surplus_constant(s) * n ** surplus_exponent(s))


def k3s_degree_threshold(n: int, s: int) -> float:
    """Порог минимальной степени n + C·n^{1−1/(s(s+1))}, гарантирующий K_3(s)."""
    return n + surplus_constant(s) * n ** surplus_exponent(s)


@dataclass(frozen=True)
class FinderParams:
    """Параметры конструктивного поиска."""

    s: int
    t: int

    def __post_init__(self) -> None:
        check_positive_int("s", self.s)
        check_range("s", self.s, 2)
        check_positive_int("t", self.t)

    @classmethod
    def for_graph(cls, n: int, s: int, t: int | None = None) -> FinderParams:
        """Параметры для графа с долей n; t по умолчанию из оценки."""
        params = cls(s, default_t(n, s) if t is None else t)
        check_range("t", params.t, 1, n)
        return params


@dataclass
class FinderTrace:
    """След выполнения; все значения пересчитываются по графу."""

    s: int
    t: int
    part: int | None = None
    t1: list[int] = field(default_factory=list)
    pair_triangle_sum: int | None = None
    z: list[int] = field(default_factory=list)
    selected_count: int | None = None
    average: Fraction | None = None
    average_met: bool | None = None
    exact_selection: bool | None = None
    degree_threshold_met: bool | None = None
    outcome: str = OUTCOME_ABSENT
    fallback: str | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "s": self.s,
            "t": self.t,
            "part": self.part,
            "t1": list(self.t1),
            "pair_triangle_sum": self.pair_triangle_sum,
            "z": list(self.z),
            "selected_count": self.selected_count,
            "average": None if self.average is None else str(self.average),
            "average_met": self.average_met,
            "exact_selection": self.exact_selection,
            "degree_threshold_met": self.degree_threshold_met,
            "outcome": self.outcome,
            "fallback": self.fallback,
        }


def select_t1(graph: TripartiteGraph, t: int) -> tuple[int, list[int]]:
    """Доля и t вершин с максимальной суммой исходящих степеней.

    Внутри доли берутся t вершин с наибольшей d^+ (при равенстве - меньший
    индекс); из долей выбирается лучшая, при равенстве - с меньшим номером.

    Returns:
        Кортеж (доля, отсортированные индексы)
    """
    check_range("t", t, 1, graph.n)
    best: tuple[int, int, list[int]] | None = None
    for part in PARTS:
        outs = [row.bit_count() for row in graph.rows(part, next_part(part))]
        order = sorted(range(graph.n), key=lambda u: (-outs[u], u))[:t]
        total = sum(outs[u] for u in order)
        if best is None or total > best[1]:
            best = (part, total, order)
    assert best is not None
    return best[0], sorted(best[2])


def _first_bits(mask: int, count: int) -> int:
    result = 0
    for index in iter_bits(mask):
        if count == 0:
            break
        result |= 1 << index
        count -= 1
    return result


def _select_pair_exact(masks: dict[int, int]) -> tuple[list[int], int]:
    """Точный максимум |𝒯(z_1, z_2)| по всем парам; при равенстве - лексикографически первая."""
    counts = {z: mask.bit_count() for z, mask in masks.items()}
    candidates = sorted(masks)
    best_pair: list[int] = candidates[:2]
    best = -1
    for pos, a in enumerate(candidates):
        if counts[a] <= best:
            continue
        mask_a = masks[a]
        for b in candidates[pos + 1:]:
            if counts[b] <= best:
                continue
            score = (mask_a & masks[b]).bit_count()
            if score > best:
                best = score
                best_pair = [a, b]
    return best_pair, max(best, 0)


def _select_greedy(masks: dict[int, int], n: int, s: int) -> tuple[list[int], int]:
    """Жадный выбор z с последующими локальными заменами."""
    pool = list(range(n))

    def score(chosen: list[int]) -> int:
        common = -1
        for z in chosen:
            common &= masks.get(z, 0)
        return common.bit_count()

    chosen: list[int] = []
    common = -1
    for _ in range(s):
        best_z = max(
            (z for z in pool if z not in chosen),
            key=lambda z: ((common & masks.get(z, 0)).bit_count(), -z),
        )
        chosen.append(best_z)
        common &= masks.get(best_z, 0)

    current = score(chosen)
    for _ in range(FINDER_SWAP_ROUNDS):
        improved = False
        for pos in range(s):
            for z in pool:
                if z in chosen:
                    continue
                trial = [*chosen[:pos], z, *chosen[pos + 1:]]
                value = score(trial)
                if value > current:
                    chosen, current, improved = trial, value, True
        if not improved:
            break
    return sorted(chosen), current


def find_k3s_constructive(
    graph: TripartiteGraph, params: FinderParams
) -> tuple[K3sWitness | None, FinderTrace]:
    """Конструктивная процедура поиска K_3(s).

    Raises:
        DegreeFloorError: Если δ(G) < n + t (с указанием вершины)
        ParameterOutOfRangeError: Если t > n
    """
    n, s, t = graph.n, params.s, params.t
    check_range("t", t, 1, n)
    trace = FinderTrace(s=s, t=t)

    profile = degree_profile(graph)
    if profile.min_degree < n + t:
        v = profile.argmin_degree()
        raise DegreeFloorError(str(v), profile.min_degree, n + t)
    trace.degree_threshold_met = profile.min_degree >= k3s_degree_threshold(n, s)

    part, t1 = select_t1(graph, t)
    back = prev_part(part)
    z_part = next_part(part)
    trace.part, trace.t1 = part, t1

    rows_back = graph.rows(part, back)
    rows_z = graph.rows(part, z_part)
    rows_back_z = graph.rows(back, z_part)
    t_x = [_first_bits(rows_back[x], t) for x in t1]

    pair_sum = 0
    binomial_sum = 0
    for x, tx in zip(t1, t_x):
        for y in iter_bits(tx):
            triangles = (rows_z[x] & rows_back_z[y]).bit_count()
            pair_sum += triangles
            binomial_sum += comb(triangles, s)
    trace.pair_triangle_sum = pair_sum
    trace.average = Fraction(binomial_sum, comb(n, s))

    # Бит x_pos·n + y маски z: ребро xy из 𝒯(z)
    rows_z_part = graph.rows(z_part, part)
    rows_z_back = graph.rows(z_part, back)
    position = {x: pos for pos, x in enumerate(t1)}
    masks: dict[int, int] = {}
    for z in range(n):
        mask = 0
        for x in iter_bits(rows_z_part[z]):
            pos = position.get(x)
            if pos is not None:
                mask |= (rows_z_back[z] & t_x[pos]) << (pos * n)
        if mask:
            masks[z] = mask

    if s == 2 and n <= FINDER_EXACT_PAIR_LIMIT and len(masks) >= 2:
        z_chosen, selected = _select_pair_exact(masks)
        trace.exact_selection = True
    else:
        z_chosen, selected = _select_greedy(masks, n, s)
        trace.exact_selection = False
    trace.z = z_chosen
    trace.selected_count = selected
    trace.average_met = selected >= trace.average
    _LOGGER.debug(
        "Выбраны z=%s: |𝒯|=%d, среднее %s, ΣT(xy)=%d",
        z_chosen, selected, trace.average, pair_sum,
    )

    common = -1
    for z in z_chosen:
        common &= masks.get(z, 0)
    block = full_mask(n)
    kss_rows = [(common >> (pos * n)) & block for pos in range(t)]
    found = kss_in_rows(kss_rows, s) if len(z_chosen) == s else None
    if found is None:
        trace.outcome = OUTCOME_ABSENT
        return None, trace

    witness = K3sWitness.from_parts(
        {part: [t1[pos] for pos in found[0]], back: found[1], z_part: z_chosen}
    )
    if not verify_k3s(graph, witness):
        _LOGGER.error("Сертификат конструктивного поиска не прошел проверку: %s", witness)
        trace.outcome = OUTCOME_ABSENT
        return None, trace
    trace.outcome = OUTCOME_FOUND
    _LOGGER.info("K_3(%d) найден конструктивно (t=%d, доля %d)", s, t, part)
    return witness, trace


def find_with_fallback(
    graph: TripartiteGraph, s: int, t: int | None = None
) -> tuple[K3sWitness | None, FinderTrace]:
    """Конструктивный поиск с откатом на точный детектор.

    Если предусловия не выполнены или процедура ничего не нашла, ответ дает
    find_k3s; в следе отмечается источник.
    """
    try:
        params = FinderParams.for_graph(graph.n, s, t)
        witness, trace = find_k3s_constructive(graph, params)
    except TriLabError as err:
        _LOGGER.warning("Предусловие конструктивного поиска не выполнено: %s", err)
        trace = FinderTrace(s=s, t=t if t is not None else default_t(graph.n, s))
        trace.outcome = OUTCOME_PRECONDITION_FAILED
        witness = None
    if witness is not None:
        return witness, trace

    if s > graph.n:
        trace.fallback = OUTCOME_ABSENT
        return None, trace
    _LOGGER.warning("Откат на точный детектор K_3(%d)", s)
    witness = find_k3s(graph, s)
    trace.fallback = OUTCOME_FOUND if witness is not None else OUTCOME_ABSENT
    return witness, trace


def recompute_pair_triangle_sum(graph: TripartiteGraph, trace: FinderTrace) -> int:
    """Пересчет ΣT(xy) по следу (x ∈ T_1, y - первые t вершин N^-(x))."""
    if trace.part is None:
        return 0
    part = trace.part
    total = 0
    for x in trace.t1:
        vertex = Vertex(part, x)
        for y in graph.neighbors(vertex, prev_part(part))[: trace.t]:
            total += triangles_through_edge(graph, vertex, Vertex(prev_part(part), y))
    return total
