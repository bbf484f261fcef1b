"""Трёхдольные и двудольные графы на битовых строках смежности.

Каждая вершина (доля, индекс) хранит для каждой чужой доли одну битовую
маску соседей (Python int). Общие соседи двух вершин считаются как
``(a & b).bit_count()``.
"""
from __future__ import annotations

import logging
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from types import MappingProxyType
from typing import Any, NamedTuple, Protocol

from .const import PART_PAIRS, PARTS
from .exceptions import (
    InvalidParameterError,
    NotAnEdgeError,
    SamePartError,
    VertexOutOfRangeError,
)

_LOGGER = logging.getLogger(__name__)

Rows = tuple[int, ...]


class AdjacencyView(Protocol):
    """Граф, дающий маски соседей: неизменяемый или рабочий граф поиска."""

    @property
    def n(self) -> int: ...

    def row(self, v: Vertex, part: int) -> int: ...

    def has_edge(self, x: Vertex, y: Vertex) -> bool: ...


class Vertex(NamedTuple):
    """Вершина трёхдольного графа: доля 1..3 и индекс внутри доли."""

    part: int
    index: int

    def __str__(self) -> str:
        return f"({self.part},{self.index})"


def next_part(part: int) -> int:
    """Следующая доля в циклическом порядке 1 -> 2 -> 3 -> 1."""
    return part % 3 + 1


def prev_part(part: int) -> int:
    """Предыдущая доля в циклическом порядке."""
    return (part + 1) % 3 + 1


def third_part(first: int, second: int) -> int:
    """Доля, отличная от двух данных."""
    return 6 - first - second


def iter_bits(mask: int) -> Iterator[int]:
    """Индексы установленных битов по возрастанию."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices: Iterable[int]) -> int:
    """Битовая маска множества индексов."""
    mask = 0
    for index in indices:
        mask |= 1 << index
    return mask


def full_mask(size: int) -> int:
    """Маска из size единиц."""
    return (1 << size) - 1


def transpose(rows: Sequence[int], width: int) -> Rows:
    """Транспонирование отношения, заданного строками-масками.

    Args:
        rows: Строки отношения, rows[u] - маска соседей u в правой доле
        width: Размер правой доли

    Returns:
        Строки обратного отношения длины width
    """
    columns = [0] * width
    for u, row in enumerate(rows):
        bit = 1 << u
        for v in iter_bits(row):
            columns[v] |= bit
    return tuple(columns)


class TripartiteGraph:
    """Сбалансированный трёхдольный граф G_3(n).

    Для каждой упорядоченной пары долей (i, j) хранится кортеж из n масок:
    rows[(i, j)][u] - соседи вершины (i, u) в доле V_j. Отношения (i, j) и
    (j, i) строятся из одного источника и всегда согласованы. Граф неизменяем;
    необязательный блок ``meta`` описывает происхождение и не участвует в
    сравнении.
    """

    __slots__ = ("_n", "_rows", "_meta")

    def __init__(
        self,
        n: int,
        relations: Mapping[tuple[int, int], Sequence[int]],
        meta: Mapping[str, Any] | None = None,
    ) -> None:
        """Инициализация графа по трем отношениям.

        Args:
            n: Размер каждой доли
            relations: Строки для пар (1, 2), (1, 3), (2, 3)
            meta: Описание конструкции (необязательно)
        """
        if n < 1:
            raise InvalidParameterError("n", "part size must be positive")
        limit = full_mask(n)
        rows: dict[tuple[int, int], Rows] = {}
        for i, j in PART_PAIRS:
            relation = tuple(relations.get((i, j), (0,) * n))
            if len(relation) != n:
                raise InvalidParameterError(f"relation {i}{j}", f"expected {n} rows")
            if any(row < 0 or row & ~limit for row in relation):
                raise InvalidParameterError(f"relation {i}{j}", "row mask exceeds part size")
            rows[(i, j)] = relation
            rows[(j, i)] = transpose(relation, n)
        self._n = n
        self._rows = rows
        self._meta: Mapping[str, Any] = MappingProxyType(dict(meta or {}))

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int, int, int]],
        meta: Mapping[str, Any] | None = None,
    ) -> TripartiteGraph:
        """Построение графа по списку ребер (i, u, j, v) с i < j."""
        relations = {pair: [0] * n for pair in PART_PAIRS}
        for i, u, j, v in edges:
            if i > j:
                i, u, j, v = j, v, i, u
            relations[(i, j)][u] |= 1 << v
        return cls(n, relations, meta)

    @property
    def n(self) -> int:
        """Размер доли."""
        return self._n

    @property
    def meta(self) -> Mapping[str, Any]:
        """Метаданные конструкции."""
        return self._meta

    def with_meta(self, meta: Mapping[str, Any] | None) -> TripartiteGraph:
        """Тот же граф с другими метаданными."""
        return TripartiteGraph(self._n, self.relations(), meta)

    def relations(self) -> dict[tuple[int, int], Rows]:
        """Три канонических отношения (i < j)."""
        return {pair: self._rows[pair] for pair in PART_PAIRS}

    def rows(self, source: int, target: int) -> Rows:
        """Строки отношения между долями source и target."""
        return self._rows[(source, target)]

    def validate_vertex(self, v: Vertex) -> None:
        """Проверка, что вершина принадлежит графу (по доле и индексу)."""
        if v.part not in PARTS or not 0 <= v.index < self._n:
            raise VertexOutOfRangeError(str(v), self._n)

    def row(self, v: Vertex, part: int) -> int:
        """Маска соседей вершины v в доле part (0 для собственной доли)."""
        if part == v.part:
            return 0
        return self._rows[(v.part, part)][v.index]

    def has_edge(self, x: Vertex, y: Vertex) -> bool:
        """Смежность двух вершин."""
        if x.part == y.part:
            return False
        return bool(self._rows[(x.part, y.part)][x.index] >> y.index & 1)

    def neighbors(self, v: Vertex, part: int) -> list[int]:
        """Индексы соседей v в доле part."""
        self.validate_vertex(v)
        return list(iter_bits(self.row(v, part)))

    def degree(self, v: Vertex) -> int:
        """Полная степень d(v)."""
        return self.out_degree(v) + self.in_degree(v)

    def out_degree(self, v: Vertex) -> int:
        """d^+(v): соседи в следующей доле."""
        return self._rows[(v.part, next_part(v.part))][v.index].bit_count()

    def in_degree(self, v: Vertex) -> int:
        """d^-(v): соседи в предыдущей доле."""
        return self._rows[(v.part, prev_part(v.part))][v.index].bit_count()

    def vertices(self) -> Iterator[Vertex]:
        """Все вершины в порядке (доля, индекс)."""
        for part in PARTS:
            for index in range(self._n):
                yield Vertex(part, index)

    def edges(self) -> Iterator[tuple[int, int, int, int]]:
        """Ребра (i, u, j, v) с i < j в лексикографическом порядке."""
        for i, j in PART_PAIRS:
            for u, row in enumerate(self._rows[(i, j)]):
                for v in iter_bits(row):
                    yield (i, u, j, v)

    def edge_count(self) -> int:
        """Число ребер e(G)."""
        return sum(row.bit_count() for pair in PART_PAIRS for row in self._rows[pair])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TripartiteGraph):
            return NotImplemented
        return self._n == other._n and all(
            self._rows[pair] == other._rows[pair] for pair in PART_PAIRS
        )

    def __hash__(self) -> int:
        return hash((self._n, tuple(self._rows[pair] for pair in PART_PAIRS)))

    def __repr__(self) -> str:
        return f"TripartiteGraph(n={self._n}, edges={self.edge_count()})"


class BipartiteGraph:
    """Двудольный граф (U, V; E) со строками-масками.

    ``left_labels`` и ``right_labels`` (если заданы) отображают индексы
    долей обратно в вершины родительского трёхдольного графа.
    """

    __slots__ = ("m", "n", "rows", "columns", "left_labels", "right_labels")

    def __init__(
        self,
        m: int,
        n: int,
        rows: Sequence[int],
        left_labels: Sequence[Vertex] | None = None,
        right_labels: Sequence[Vertex] | None = None,
    ) -> None:
        if m < 0 or n < 0:
            raise InvalidParameterError("size", "part sizes must be non-negative")
        if len(rows) != m:
            raise InvalidParameterError("rows", f"expected {m} rows")
        limit = full_mask(n)
        if any(row < 0 or row & ~limit for row in rows):
            raise InvalidParameterError("rows", "row mask exceeds part size")
        self.m = m
        self.n = n
        self.rows: Rows = tuple(rows)
        self.columns: Rows = transpose(self.rows, n)
        self.left_labels: tuple[Vertex, ...] | None = (
            tuple(left_labels) if left_labels is not None else None
        )
        self.right_labels: tuple[Vertex, ...] | None = (
            tuple(right_labels) if right_labels is not None else None
        )

    @classmethod
    def from_edges(cls, m: int, n: int, edges: Iterable[tuple[int, int]]) -> BipartiteGraph:
        """Построение по списку пар (u, v)."""
        rows = [0] * m
        for u, v in edges:
            rows[u] |= 1 << v
        return cls(m, n, rows)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def left_degree(self, u: int) -> int:
        return self.rows[u].bit_count()

    def right_degree(self, v: int) -> int:
        return self.columns[v].bit_count()

    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.rows)

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, row in enumerate(self.rows):
            for v in iter_bits(row):
                yield (u, v)

    def __repr__(self) -> str:
        return f"BipartiteGraph(m={self.m}, n={self.n}, edges={self.edge_count()})"


@dataclass(frozen=True)
class DegreeProfile:
    """Степени всех вершин и агрегаты δ, δ^+, δ^- и минимальная частичная степень.

    Словари индексируются долей; значения - кортежи по индексам вершин.
    """

    degree: Mapping[int, tuple[int, ...]]
    out_degree: Mapping[int, tuple[int, ...]]
    in_degree: Mapping[int, tuple[int, ...]]
    min_degree: int
    min_out_degree: int
    min_in_degree: int
    min_partial_degree: int

    def of(self, v: Vertex) -> int:
        """d(v)."""
        return self.degree[v.part][v.index]

    def argmin_degree(self) -> Vertex:
        """Первая вершина (по доле, затем индексу) с d(v) = δ(G)."""
        for part in PARTS:
            for index, value in enumerate(self.degree[part]):
                if value == self.min_degree:
                    return Vertex(part, index)
        raise AssertionError("empty profile")

    def argmin_out_degree(self) -> Vertex:
        """Первая вершина с d^+(v) = δ^+(G)."""
        for part in PARTS:
            for index, value in enumerate(self.out_degree[part]):
                if value == self.min_out_degree:
                    return Vertex(part, index)
        raise AssertionError("empty profile")


def complete_tripartite(n: int) -> TripartiteGraph:
    """K_3(n): все пары из разных долей смежны."""
    if n < 1:
        raise InvalidParameterError("n", "part size must be positive")
    row = full_mask(n)
    return TripartiteGraph(
        n,
        {pair: (row,) * n for pair in PART_PAIRS},
        {"construction": "k3n", "params": {"n": n}},
    )


def empty_tripartite(n: int) -> TripartiteGraph:
    """Граф G_3(n) без ребер."""
    return TripartiteGraph(n, {pair: (0,) * n for pair in PART_PAIRS})


def degree_profile(graph: TripartiteGraph) -> DegreeProfile:
    """Профиль степеней графа."""
    n = graph.n
    out_degree: dict[int, tuple[int, ...]] = {}
    in_degree: dict[int, tuple[int, ...]] = {}
    degree: dict[int, tuple[int, ...]] = {}
    for part in PARTS:
        outs = tuple(row.bit_count() for row in graph.rows(part, next_part(part)))
        ins = tuple(row.bit_count() for row in graph.rows(part, prev_part(part)))
        out_degree[part] = outs
        in_degree[part] = ins
        degree[part] = tuple(a + b for a, b in zip(outs, ins))
    min_out = min(min(values) for values in out_degree.values())
    min_in = min(min(values) for values in in_degree.values())
    return DegreeProfile(
        degree=MappingProxyType(degree),
        out_degree=MappingProxyType(out_degree),
        in_degree=MappingProxyType(in_degree),
        min_degree=min(min(values) for values in degree.values()),
        min_out_degree=min_out,
        min_in_degree=min_in,
        min_partial_degree=min(min_out, min_in) if n else 0,
    )


def partial_degree(graph: TripartiteGraph, v: Vertex, part: int) -> int:
    """d(v, V_part) для доли, не содержащей v."""
    graph.validate_vertex(v)
    if part == v.part or part not in PARTS:
        raise SamePartError(str(v), f"V_{part}")
    return graph.row(v, part).bit_count()


def edge_count(graph: TripartiteGraph) -> int:
    """e(G)."""
    return graph.edge_count()


def triangle_count(graph: TripartiteGraph) -> int:
    """T(G): число треугольников с вершиной в каждой доле.

    Перебираются ребра самой разреженной пары долей, для каждого ребра
    считается пересечение окрестностей в третьей доле.
    """
    i, j = min(
        PART_PAIRS,
        key=lambda pair: sum(row.bit_count() for row in graph.rows(*pair)),
    )
    k = third_part(i, j)
    rows_ij = graph.rows(i, j)
    rows_ik = graph.rows(i, k)
    rows_jk = graph.rows(j, k)
    total = 0
    for u, row in enumerate(rows_ij):
        left = rows_ik[u]
        if not left:
            continue
        for v in iter_bits(row):
            total += (left & rows_jk[v]).bit_count()
    return total


def triangles_through_edge(graph: TripartiteGraph, x: Vertex, y: Vertex) -> int:
    """T_G(xy) = |N(x) ∩ N(y)| в третьей доле."""
    graph.validate_vertex(x)
    graph.validate_vertex(y)
    if x.part == y.part:
        raise SamePartError(str(x), str(y))
    if not graph.has_edge(x, y):
        raise NotAnEdgeError(str(x), str(y))
    k = third_part(x.part, y.part)
    return (graph.row(x, k) & graph.row(y, k)).bit_count()


def tripartite_complement(graph: TripartiteGraph) -> TripartiteGraph:
    """Трёхдольное дополнение K_3(n) - G с теми же долями."""
    row = full_mask(graph.n)
    return TripartiteGraph(
        graph.n,
        {pair: tuple(row ^ r for r in graph.rows(*pair)) for pair in PART_PAIRS},
    )


def complement_triangle_bound(graph: TripartiteGraph) -> int:
    """Нижняя оценка n^3 - n·e(Ḡ): каждое ребро дополнения убивает не больше n треугольников."""
    n = graph.n
    missing = 3 * n * n - graph.edge_count()
    return n**3 - n * missing


def _single_part(vertices: Sequence[Vertex], name: str) -> int | None:
    parts = {v.part for v in vertices}
    if len(parts) > 1:
        raise InvalidParameterError(name, "vertices span several parts")
    return parts.pop() if parts else None


def induced_bipartite(
    graph: TripartiteGraph,
    left: Iterable[Vertex],
    right: Iterable[Vertex],
) -> BipartiteGraph:
    """G[A, B]: индуцированный двудольный подграф на множествах из двух разных долей.

    Вершины каждой стороны упорядочиваются по индексу; метки сохраняют
    соответствие с вершинами родителя.
    """
    a = sorted(set(left))
    b = sorted(set(right))
    for v in (*a, *b):
        graph.validate_vertex(v)
    part_a = _single_part(a, "A")
    part_b = _single_part(b, "B")
    if part_a is not None and part_a == part_b:
        raise SamePartError("A", "B")
    if part_a is None or part_b is None:
        return BipartiteGraph(len(a), len(b), [0] * len(a), a, b)

    position = {v.index: pos for pos, v in enumerate(b)}
    b_mask = mask_of(position)
    rows = []
    for v in a:
        row = 0
        for index in iter_bits(graph.row(v, part_b) & b_mask):
            row |= 1 << position[index]
        rows.append(row)
    return BipartiteGraph(len(a), len(b), rows, a, b)


def part_bipartite(graph: TripartiteGraph, first: int, second: int) -> BipartiteGraph:
    """G[V_first, V_second] целиком."""
    if first == second:
        raise SamePartError(f"V_{first}", f"V_{second}")
    n = graph.n
    return BipartiteGraph(
        n,
        n,
        graph.rows(first, second),
        [Vertex(first, i) for i in range(n)],
        [Vertex(second, i) for i in range(n)],
    )
