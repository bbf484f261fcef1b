"""Поиск K_{s,s} и K_3(s), множества D̃ и извлечение K_3(2) через D̃."""
from __future__ import annotations

import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import isqrt
from typing import Any, Final, Literal

from .const import PARTS, WITNESS_TYPE_K3S, WITNESS_TYPE_KSS
from .exceptions import InvalidParameterError, MalformedWitnessError
from .graph import (
    AdjacencyView,
    BipartiteGraph,
    TripartiteGraph,
    Vertex,
    iter_bits,
    next_part,
    prev_part,
    third_part,
)
from .validators import check_positive_int, check_range, to_fraction

_LOGGER = logging.getLogger(__name__)

Direction = Literal["+", "-"]
DIRECTIONS: Final[tuple[Direction, Direction]] = ("+", "-")

STATUS_FOUND: Final = "found"
STATUS_HYPOTHESIS_NOT_MET: Final = "hypothesis_not_met"
STATUS_NOT_APPLICABLE: Final = "not_applicable"
STATUS_EXTRACTION_FAILED: Final = "extraction_failed"


@dataclass(frozen=True)
class KssWitness:
    """K_{s,s}: s вершин левой и s вершин правой доли, все пары смежны."""

    left: tuple[int, ...]
    right: tuple[int, ...]
    pair: tuple[int, int] | None = None

    @property
    def s(self) -> int:
        return len(self.left)

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "type": WITNESS_TYPE_KSS,
            "left": list(self.left),
            "right": list(self.right),
        }
        if self.pair is not None:
            data["pair"] = list(self.pair)
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> KssWitness:
        pair = data.get("pair")
        return cls(
            tuple(data["left"]),
            tuple(data["right"]),
            (pair[0], pair[1]) if pair else None,
        )


@dataclass(frozen=True)
class K3sWitness:
    """K_3(s): по s вершин из каждой доли, все 3s² междолевых пар смежны."""

    parts: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]

    @property
    def s(self) -> int:
        return len(self.parts[0])

    def in_part(self, part: int) -> tuple[int, ...]:
        return self.parts[part - 1]

    def vertices(self) -> list[Vertex]:
        return [Vertex(part, index) for part in PARTS for index in self.in_part(part)]

    def to_dict(self) -> dict[str, Any]:
        return {
            "type": WITNESS_TYPE_K3S,
            "s": self.s,
            "parts": [list(indices) for indices in self.parts],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> K3sWitness:
        first, second, third = (tuple(sorted(indices)) for indices in data["parts"])
        return cls((first, second, third))

    @classmethod
    def from_parts(cls, by_part: dict[int, Sequence[int]]) -> K3sWitness:
        return cls(
            (
                tuple(sorted(by_part[1])),
                tuple(sorted(by_part[2])),
                tuple(sorted(by_part[3])),
            )
        )


@dataclass(frozen=True)
class DTildeSet:
    """D̃^±_{G,α}(v): соседи w в направлении ± с T(vw) ≥ αn."""

    center: Vertex
    direction: Direction
    alpha: Fraction
    members: tuple[int, ...]

    @property
    def part(self) -> int:
        """Доля, в которой лежат элементы множества."""
        if self.direction == "+":
            return next_part(self.center.part)
        return prev_part(self.center.part)

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class DTildeExtraction:
    """Результат извлечения K_3(2) через большие множества D̃."""

    status: str
    k: Fraction
    threshold: int
    witness: K3sWitness | None = None
    part: int | None = None
    direction: Direction | None = None
    best_pair_common: int | None = None
    attempts: tuple[dict[str, Any], ...] = field(default_factory=tuple)

    def to_dict(self) -> dict[str, Any]:
        return {
            "status": self.status,
            "k": str(self.k),
            "threshold": self.threshold,
            "witness": self.witness.to_dict() if self.witness else None,
            "part": self.part,
            "direction": self.direction,
            "best_pair_common": self.best_pair_common,
            "attempts": list(self.attempts),
        }


def kst_bound(m: int, n: int, s: int) -> float:
    """Оценка Кёвари-Шош-Турана для z(m, n; s, s).

    Граф на (m, n) с большим числом ребер обязательно содержит K_{s,s}.
    """
    if s < 2:
        raise InvalidParameterError("s", "must be at least 2")
    check_positive_int("m", m)
    check_positive_int("n", n)
    return float((s - 1) ** (1 / s) * m * n ** (1 - 1 / s) + (s - 1) * n)


def _lowest(mask: int, count: int) -> tuple[int, ...]:
    result = []
    for index in iter_bits(mask):
        result.append(index)
        if len(result) == count:
            break
    return tuple(result)


def kss_in_rows(rows: Sequence[int], s: int) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """Первая в лексикографическом порядке K_{s,s} с левой стороной из rows."""
    candidates = [u for u, row in enumerate(rows) if row.bit_count() >= s]
    if len(candidates) < s:
        return None
    if s == 1:
        u = candidates[0]
        return (u,), _lowest(rows[u], 1)
    if s == 2:
        for a, b in combinations(candidates, 2):
            common = rows[a] & rows[b]
            if common.bit_count() >= 2:
                return (a, b), _lowest(common, 2)
        return None

    def extend(start: int, chosen: list[int], common: int) -> tuple[int, ...] | None:
        if len(chosen) == s:
            return tuple(chosen)
        for pos in range(start, len(candidates) - (s - len(chosen)) + 1):
            u = candidates[pos]
            narrowed = common & rows[u]
            if narrowed.bit_count() < s:
                continue
            found = extend(pos + 1, [*chosen, u], narrowed)
            if found is not None:
                return found
        return None

    left = extend(0, [], -1)
    if left is None:
        return None
    common = -1
    for u in left:
        common &= rows[u]
    return left, _lowest(common, s)


def find_kss(graph: BipartiteGraph, s: int) -> KssWitness | None:
    """Точный поиск K_{s,s} в двудольном графе.

    Перебор ведется по s-подмножествам меньшей стороны с отсечением по
    размеру общей окрестности.
    """
    check_positive_int("s", s)
    if graph.m <= graph.n:
        found = kss_in_rows(graph.rows, s)
        if found is None:
            return None
        return KssWitness(found[0], found[1])
    found = kss_in_rows(graph.columns, s)
    if found is None:
        return None
    return KssWitness(found[1], found[0])


def verify_kss(graph: BipartiteGraph, witness: KssWitness) -> bool:
    """Независимая проверка всех s² ребер сертификата."""
    if len(witness.left) != len(witness.right) or not witness.left:
        return False
    if len(set(witness.left)) != len(witness.left) or len(set(witness.right)) != len(witness.right):
        return False
    if any(not 0 <= u < graph.m for u in witness.left):
        return False
    if any(not 0 <= v < graph.n for v in witness.right):
        return False
    return all(graph.has_edge(u, v) for u in witness.left for v in witness.right)


def verify_k3s(graph: TripartiteGraph, witness: K3sWitness) -> bool:
    """Независимая проверка всех 3s² ребер K_3(s)."""
    s = witness.s
    for part in PARTS:
        indices = witness.in_part(part)
        if len(indices) != s or len(set(indices)) != s or s == 0:
            return False
        if any(not 0 <= index < graph.n for index in indices):
            return False
    for i, j in ((1, 2), (1, 3), (2, 3)):
        for u in witness.in_part(i):
            for v in witness.in_part(j):
                if not graph.has_edge(Vertex(i, u), Vertex(j, v)):
                    return False
    return True


def _subsets_with_common(
    graph: TripartiteGraph, part: int, s: int
) -> Iterator[tuple[tuple[int, ...], int, int]]:
    """s-подмножества доли part с общими окрестностями в двух других долях."""
    j, k = (other for other in PARTS if other != part)
    rows_j = graph.rows(part, j)
    rows_k = graph.rows(part, k)
    candidates = [
        u for u in range(graph.n)
        if rows_j[u].bit_count() >= s and rows_k[u].bit_count() >= s
    ]

    def extend(
        start: int, chosen: tuple[int, ...], common_j: int, common_k: int
    ) -> Iterator[tuple[tuple[int, ...], int, int]]:
        if len(chosen) == s:
            yield chosen, common_j, common_k
            return
        for pos in range(start, len(candidates) - (s - len(chosen)) + 1):
            u = candidates[pos]
            next_j = common_j & rows_j[u]
            if next_j.bit_count() < s:
                continue
            next_k = common_k & rows_k[u]
            if next_k.bit_count() < s:
                continue
            yield from extend(pos + 1, (*chosen, u), next_j, next_k)

    yield from extend(0, (), -1, -1)


def find_k3s(graph: TripartiteGraph, s: int) -> K3sWitness | None:
    """Точный поиск K_3(s).

    Перебираются s-подмножества P доли с наименьшей суммой степеней; для
    каждого строится двудольный граф на общих окрестностях (C_j, C_k) и в
    нем ищется K_{s,s}. Возвращается первый сертификат в порядке перебора.
    """
    check_positive_int("s", s)
    check_range("s", s, 1, graph.n)
    part = min(
        PARTS,
        key=lambda p: sum(graph.degree(Vertex(p, u)) for u in range(graph.n)),
    )
    j, k = (other for other in PARTS if other != part)
    rows_jk = graph.rows(j, k)
    checked = 0
    for chosen, common_j, common_k in _subsets_with_common(graph, part, s):
        checked += 1
        left = list(iter_bits(common_j))
        rows = [rows_jk[v] & common_k for v in left]
        found = kss_in_rows(rows, s)
        if found is None:
            continue
        witness = K3sWitness.from_parts(
            {part: chosen, j: [left[pos] for pos in found[0]], k: found[1]}
        )
        _LOGGER.debug(
            "K_3(%d) найден после %d подмножеств доли %d", s, checked, part
        )
        return witness
    _LOGGER.debug("K_3(%d) отсутствует (проверено подмножеств: %d)", s, checked)
    return None


def k32_through_edge(graph: AdjacencyView, x: Vertex, y: Vertex) -> K3sWitness | None:
    """K_3(2), содержащая ребро xy (или None).

    Используется для инкрементальной проверки после добавления ребра.
    """
    if x.part == y.part or not graph.has_edge(x, y):
        return None
    k = third_part(x.part, y.part)
    z_common = graph.row(x, k) & graph.row(y, k)
    if z_common.bit_count() < 2:
        return None
    x_row_j = graph.row(x, y.part)
    for x2 in iter_bits(graph.row(y, x.part)):
        if x2 == x.index:
            continue
        other = Vertex(x.part, x2)
        z_pair = z_common & graph.row(other, k)
        if z_pair.bit_count() < 2:
            continue
        y_candidates = x_row_j & graph.row(other, y.part) & ~(1 << y.index)
        for y2 in iter_bits(y_candidates):
            z_final = z_pair & graph.row(Vertex(y.part, y2), k)
            if z_final.bit_count() >= 2:
                return K3sWitness.from_parts(
                    {x.part: (x.index, x2), y.part: (y.index, y2), k: _lowest(z_final, 2)}
                )
    return None


def _check_alpha(alpha: Any) -> Fraction:
    value = to_fraction("alpha", alpha)
    if not 0 < value <= 1:
        raise InvalidParameterError("alpha", "must lie in (0, 1]")
    return value


def _d_tilde_members(
    graph: TripartiteGraph, v: Vertex, direction: Direction, alpha: Fraction
) -> tuple[int, ...]:
    target = next_part(v.part) if direction == "+" else prev_part(v.part)
    k = third_part(v.part, target)
    base = graph.row(v, k)
    rows = graph.rows(target, k)
    bound = alpha * graph.n
    return tuple(
        w for w in iter_bits(graph.row(v, target))
        if (base & rows[w]).bit_count() >= bound
    )


def d_tilde(graph: TripartiteGraph, v: Vertex, direction: Direction, alpha: Any) -> DTildeSet:
    """Точное множество D̃^±_{G,α}(v)."""
    graph.validate_vertex(v)
    if direction not in DIRECTIONS:
        raise InvalidParameterError("direction", "must be '+' or '-'")
    value = _check_alpha(alpha)
    return DTildeSet(v, direction, value, _d_tilde_members(graph, v, direction, value))


def ceil_sqrt(x: Fraction) -> int:
    """Наименьшее целое m ≥ 0 с m² ≥ x."""
    if x <= 0:
        return 0
    target = -(-x.numerator // x.denominator)
    return isqrt(target - 1) + 1


def _pair_score(
    graph: TripartiteGraph,
    w1: Vertex,
    w2: Vertex,
    members: dict[int, tuple[int, ...]],
    target: int,
    third: int,
) -> tuple[int, list[int]]:
    """|N_H(w1) ∩ N_H(w2)| без построения H и общие элементы W(w1) ∩ W(w2)."""
    shared = sorted(set(members[w1.index]) & set(members[w2.index]))
    base = graph.row(w1, third) & graph.row(w2, third)
    rows = graph.rows(target, third)
    return sum((rows[v1] & base).bit_count() for v1 in shared), shared


def extract_k32_via_dtilde(graph: TripartiteGraph, k: Any) -> DTildeExtraction:
    """Конструктивное извлечение K_3(2) из множества вершин с большими D̃.

    Для каждой доли и направления собирается W_i = {w : |D̃_{G,2/k}(w)| ≥ k²√n},
    при |W_i| ≥ k²√n выбирается пара (w, w') с наибольшим числом общих
    соседей во вспомогательном графе и в их общей окрестности ищется K_{2,2}.

    Args:
        graph: Трёхдольный граф
        k: Рациональный параметр k > 1

    Returns:
        Результат со статусом found, hypothesis_not_met, not_applicable
        или extraction_failed
    """
    value = to_fraction("k", k)
    if value <= 1:
        raise InvalidParameterError("k", "must be greater than 1")
    n = graph.n
    alpha = Fraction(2) / value
    size = ceil_sqrt(value**4 * n)
    pair_bound = 2 * value * value * n

    if size > n:
        _LOGGER.info("Гипотеза D̃ неприменима: k²√n=%d при n=%d", size, n)
        return DTildeExtraction(STATUS_NOT_APPLICABLE, value, size)

    attempts: list[dict[str, Any]] = []
    status = STATUS_HYPOTHESIS_NOT_MET
    best_overall: int | None = None
    for part in PARTS:
        for direction in DIRECTIONS:
            target = next_part(part) if direction == "+" else prev_part(part)
            third = third_part(part, target)
            members: dict[int, tuple[int, ...]] = {}
            for index in range(n):
                found = _d_tilde_members(graph, Vertex(part, index), direction, alpha)
                if len(found) >= size:
                    members[index] = found[:size]
            attempt: dict[str, Any] = {
                "part": part, "direction": direction, "large": len(members),
            }
            attempts.append(attempt)
            if len(members) < size:
                continue

            status = STATUS_EXTRACTION_FAILED
            chosen = sorted(members)[:size]
            best: tuple[int, int, int, list[int]] | None = None
            for a, b in combinations(chosen, 2):
                score, shared = _pair_score(
                    graph, Vertex(part, a), Vertex(part, b), members, target, third
                )
                if best is None or score > best[0]:
                    best = (score, a, b, shared)
            assert best is not None
            score, a, b, shared = best
            attempt["best_pair_common"] = score
            best_overall = score if best_overall is None else max(best_overall, score)
            if score <= pair_bound:
                _LOGGER.warning(
                    "Лучшая пара (%d, %d) в доле %d%s дает %d ≤ 2k²n",
                    a, b, part, direction, score,
                )
                continue

            base = graph.row(Vertex(part, a), third) & graph.row(Vertex(part, b), third)
            rows = graph.rows(target, third)
            kss = find_kss(BipartiteGraph(len(shared), n, [rows[v] & base for v in shared]), 2)
            if kss is None:
                continue
            witness = K3sWitness.from_parts(
                {
                    part: (a, b),
                    target: [shared[pos] for pos in kss.left],
                    third: kss.right,
                }
            )
            _LOGGER.info("K_3(2) извлечен через D̃: доля %d, направление %s", part, direction)
            return DTildeExtraction(
                STATUS_FOUND, value, size, witness, part, direction, score, tuple(attempts)
            )

    return DTildeExtraction(
        status, value, size, best_pair_common=best_overall, attempts=tuple(attempts)
    )


def witness_from_dict(data: dict[str, Any]) -> K3sWitness | KssWitness:
    """Сертификат из разобранного JSON."""
    if data.get("type") == WITNESS_TYPE_K3S:
        return K3sWitness.from_dict(data)
    if data.get("type") == WITNESS_TYPE_KSS:
        return KssWitness.from_dict(data)
    raise MalformedWitnessError(f"unknown witness type {data.get('type')!r}")
