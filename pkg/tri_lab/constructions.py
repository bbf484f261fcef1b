"""Экстремальные конструкции трёхдольных графов.

Все конструкторы - чистые функции параметров (и seed); результат несет
блок ``meta`` с названием конструкции, параметрами и диапазонами вершин.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

import galois
import numpy as np

from .const import MAX_PLANE_ORDER, PART_PAIRS, PARTS
from .exceptions import (
    InfeasibleConfigError,
    InvalidParameterError,
    NotPrimePowerError,
    PartSizeMismatchError,
)
from .graph import (
    BipartiteGraph,
    TripartiteGraph,
    full_mask,
    next_part,
    tripartite_complement,
)
from .validators import check_positive_int, check_range

if TYPE_CHECKING:
    from .structure import C6CloseInstance

_LOGGER = logging.getLogger(__name__)

Range = tuple[int, int]


def is_prime_power(q: int) -> bool:
    """Является ли q степенью простого числа."""
    return q >= 2 and bool(galois.is_prime_power(q))


@dataclass(frozen=True)
class PlaneOrder:
    """Порядок q проективной плоскости PG(2, q)."""

    q: int

    def __post_init__(self) -> None:
        check_positive_int("q", self.q)
        if not is_prime_power(self.q):
            raise NotPrimePowerError(self.q)
        check_range("q", self.q, 2, MAX_PLANE_ORDER)

    @property
    def n(self) -> int:
        """Число точек (и прямых): q² + q + 1."""
        return self.q * self.q + self.q + 1


@dataclass(frozen=True)
class Construction51Params:
    """Параметры конструкции с дизъюнктными t-блоками: n ≥ 5t и n ≥ t² + 2t."""

    n: int
    t: int

    def __post_init__(self) -> None:
        check_positive_int("n", self.n)
        check_positive_int("t", self.t)
        if self.n < 5 * self.t:
            raise InvalidParameterError("n", f"requires n >= 5t = {5 * self.t}")
        if self.n < self.t * self.t + 2 * self.t:
            raise InvalidParameterError(
                "n", f"requires n >= t^2 + 2t = {self.t * self.t + 2 * self.t}"
            )


@dataclass(frozen=True)
class ExtremalRegularParams:
    """Параметры (n+t)-регулярного графа с минимумом треугольников: n четно, n/2 ≤ t ≤ n."""

    n: int
    t: int

    def __post_init__(self) -> None:
        check_positive_int("n", self.n)
        if self.n % 2:
            raise InvalidParameterError("n", "must be even")
        check_positive_int("t", self.t)
        check_range("t", self.t, self.n // 2, self.n)


def projective_plane_bipartite(order: PlaneOrder) -> BipartiteGraph:
    """Граф инцидентности точек и прямых PG(2, q).

    Точки и прямые - нормированные представители одномерных подпространств
    GF(q)³ (последняя ненулевая координата равна 1); точка лежит на прямой,
    если их скалярное произведение равно нулю. Граф (q+1)-регулярен и не
    содержит K_{2,2}.
    """
    q = order.q
    field = galois.GF(q)
    representatives = (
        [(a, b, 1) for a in range(q) for b in range(q)]
        + [(a, 1, 0) for a in range(q)]
        + [(1, 0, 0)]
    )
    vectors = field(np.array(representatives, dtype=int))
    incidence = np.asarray(vectors @ vectors.T) == 0
    rows = [
        sum(1 << int(line) for line in np.flatnonzero(incidence[point]))
        for point in range(order.n)
    ]
    _LOGGER.debug("PG(2, %d): %d точек, %d инциденций", q, order.n, int(incidence.sum()))
    return BipartiteGraph(order.n, order.n, rows)


def _block(start: int, end: int) -> int:
    return full_mask(end - start) << start


def c51_vertex_ranges(params: Construction51Params) -> dict[str, Range]:
    """Именованные полуинтервалы индексов вершин конструкции.

    V_1 = A1 ⊎ Bbar2 ⊎ Bbar3, V_2 = A2 ⊎ B2, V_3 = A3 ⊎ B3.
    """
    n, t = params.n, params.t
    return {
        "A1": (0, n - 2 * t),
        "Bbar2": (n - 2 * t, n - t),
        "Bbar3": (n - t, n),
        "A2": (0, n - 2 * t),
        "B2": (n - 2 * t, n),
        "A3": (0, n - 2 * t),
        "B3": (n - 2 * t, n),
    }


def construction_5_1(params: Construction51Params) -> TripartiteGraph:
    """K_3(2)-свободный граф с δ(G) = n + t.

    A1 полностью соединено с A2 и A3; Bbar_j соединено со всей V_j; B_j
    соединено со всей V_{5-j}. Вершины Bbar2 получают попарно
    непересекающиеся t-блоки A3, вершины Bbar3 - t-блоки A2.
    """
    n, t = params.n, params.t
    ranges = c51_vertex_ranges(params)
    a_mask = _block(*ranges["A1"])
    b_mask = _block(n - 2 * t, n)
    every = full_mask(n)

    rows_12 = [0] * n
    rows_13 = [0] * n
    rows_23 = [0] * n
    for u in range(*ranges["A1"]):
        rows_12[u] = a_mask
        rows_13[u] = a_mask
    for offset, u in enumerate(range(*ranges["Bbar2"])):
        rows_12[u] = every
        rows_13[u] = _block(offset * t, (offset + 1) * t)
    for offset, u in enumerate(range(*ranges["Bbar3"])):
        rows_13[u] = every
        rows_12[u] = _block(offset * t, (offset + 1) * t)
    for u in range(n):
        # B3 видит всю V_2, B2 видит всю V_3
        rows_23[u] = every if u >= n - 2 * t else b_mask

    graph = TripartiteGraph(
        n,
        {(1, 2): rows_12, (1, 3): rows_13, (2, 3): rows_23},
        {
            "construction": "c51",
            "params": {"n": n, "t": t},
            "ranges": {name: list(bounds) for name, bounds in ranges.items()},
        },
    )
    _LOGGER.info("Построена конструкция c51: n=%d, t=%d, e=%d", n, t, graph.edge_count())
    return graph


def glue(first: TripartiteGraph, second: TripartiteGraph) -> TripartiteGraph:
    """Склейка G ⊙ H: доли V_i ⊎ V'_i и все ребра V_i × V'_{i+1}.

    Индексы [0, n) - вершины G, [n, 2n) - вершины H. Каждая вершина
    получает ровно n новых соседей, новые ребра не лежат в треугольниках.

    Raises:
        PartSizeMismatchError: Если размеры долей различаются
    """
    if first.n != second.n:
        raise PartSizeMismatchError(first.n, second.n)
    n = first.n
    low = full_mask(n)
    high = low << n
    relations: dict[tuple[int, int], list[int]] = {}
    for i, j in PART_PAIRS:
        rows: list[int] = []
        for row in first.rows(i, j):
            rows.append(row | (high if next_part(i) == j else 0))
        for row in second.rows(i, j):
            rows.append(row << n | (low if next_part(j) == i else 0))
        relations[(i, j)] = rows
    graph = TripartiteGraph(
        2 * n,
        relations,
        {
            "construction": "glue",
            "params": {"n": n},
            "left": dict(first.meta),
            "right": dict(second.meta),
        },
    )
    _LOGGER.info("Склейка двух графов с n=%d: новая доля %d", n, 2 * n)
    return graph


def extremal_regular(params: ExtremalRegularParams) -> TripartiteGraph:
    """(n+t)-регулярный граф с n²(3t−n)/2 треугольниками.

    Половины долей A_i = [0, n/2), B_i = [n/2, n). H[A_{i+1}, B_i] -
    (n−t)-регулярный циркулянт; результат - трёхдольное дополнение H.
    """
    n, t = params.n, params.t
    half = n // 2
    width = n - t

    def circulant_row(a: int) -> int:
        row = 0
        for shift in range(width):
            row |= 1 << (half + (a + shift) % half)
        return row

    removed: dict[tuple[int, int], list[int]] = {pair: [0] * n for pair in PART_PAIRS}
    for i in PARTS:
        j = next_part(i)
        # A_j против B_i
        for a in range(half):
            row = circulant_row(a)
            for b in range(half, n):
                if not row >> b & 1:
                    continue
                if j < i:
                    removed[(j, i)][a] |= 1 << b
                else:
                    removed[(i, j)][b] |= 1 << a
    h_graph = TripartiteGraph(n, removed)
    graph = tripartite_complement(h_graph).with_meta(
        {"construction": "extremal", "params": {"n": n, "t": t}}
    )
    _LOGGER.info("Построен экстремальный (n+t)-регулярный граф: n=%d, t=%d", n, t)
    return graph


def random_graph(n: int, target_min_degree: int, seed: int) -> TripartiteGraph:
    """Случайный G_3(n) с δ(G) ≥ target_min_degree.

    Из K_3(n) в случайном порядке удаляются ребра, если обе концевые
    вершины сохраняют степень не меньше порога. Результат полностью
    определяется seed.

    Raises:
        InfeasibleConfigError: Если порог больше 2n
    """
    check_positive_int("n", n)
    if target_min_degree < 0 or target_min_degree > 2 * n:
        raise InfeasibleConfigError(
            f"degree floor {target_min_degree} is outside [0, {2 * n}]"
        )
    rng = np.random.default_rng(seed)
    every = full_mask(n)
    rows = {pair: [every] * n for pair in PART_PAIRS}
    degree = {part: [2 * n] * n for part in PARTS}
    square = n * n
    for code in rng.permutation(3 * square):
        pair = PART_PAIRS[int(code) // square]
        u, v = divmod(int(code) % square, n)
        i, j = pair
        if degree[i][u] > target_min_degree and degree[j][v] > target_min_degree:
            rows[pair][u] &= ~(1 << v)
            degree[i][u] -= 1
            degree[j][v] -= 1
    graph = TripartiteGraph(
        n,
        rows,
        {
            "construction": "random",
            "params": {"n": n, "floor": target_min_degree, "seed": seed},
        },
    )
    _LOGGER.debug(
        "Случайный граф n=%d, floor=%d, seed=%d: e=%d",
        n, target_min_degree, seed, graph.edge_count(),
    )
    return graph


def c6_block_part(i: int) -> int:
    """Доля блока W_i (или X_i) в раздутии C6: W_j, W_{j+3} ⊆ V_j."""
    return (i - 1) % 3 + 1


def _cyclic(i: int) -> int:
    return (i - 1) % 6 + 1


def _wire(
    relations: dict[tuple[int, int], list[int]],
    first: tuple[int, Range],
    second: tuple[int, Range],
) -> None:
    (part_a, (start_a, end_a)), (part_b, (start_b, end_b)) = first, second
    if part_a > part_b:
        part_a, start_a, end_a, part_b, start_b, end_b = (
            part_b, start_b, end_b, part_a, start_a, end_a,
        )
    mask = _block(start_b, end_b)
    rows = relations[(part_a, part_b)]
    for u in range(start_a, end_a):
        rows[u] |= mask


def _block_ranges(prefix: str, size: int, offset: int) -> dict[str, Range]:
    ranges: dict[str, Range] = {}
    for i in range(1, 7):
        start = offset + (0 if i <= 3 else size)
        ranges[f"{prefix}{i}"] = (start, start + size)
    return ranges


def c6_blowup(m: int, u: int = 0) -> TripartiteGraph:
    """Раздутие C6 с блоками W_1..W_6 размера m и блоками U_1..U_3 размера u.

    W_i полностью соединен с W_{i±1}; U_j полностью соединен с W_{j+1} и
    W_{j+4}. Доля n = 2m + u; W_j занимает [0, m), W_{j+3} - [m, 2m),
    U_j - [2m, 2m+u) доли V_j. Граф не содержит треугольников.
    """
    check_positive_int("m", m)
    check_range("u", u, 0)
    n = 2 * m + u
    relations: dict[tuple[int, int], list[int]] = {pair: [0] * n for pair in PART_PAIRS}
    ranges = _block_ranges("W", m, 0)
    for i in range(1, 7):
        j = _cyclic(i + 1)
        _wire(relations, (c6_block_part(i), ranges[f"W{i}"]), (c6_block_part(j), ranges[f"W{j}"]))
    if u:
        for part in PARTS:
            ranges[f"U{part}"] = (2 * m, n)
            for target in (part + 1, part + 4):
                block = ranges[f"W{_cyclic(target)}"]
                _wire(relations, (part, (2 * m, n)), (c6_block_part(_cyclic(target)), block))
    return TripartiteGraph(
        n,
        relations,
        {
            "construction": "c6_blowup",
            "params": {"m": m, "u": u},
            "ranges": {name: list(bounds) for name, bounds in ranges.items()},
        },
    )


def double_c6_instance(
    m: int, x: int, c: Any, d: int
) -> tuple[TripartiteGraph, C6CloseInstance]:
    """Два вложенных раздутия C6 с блоками W (размер m) и X (размер x).

    W_i соединен с W_{i±1}, X_{i−1} и X_{i−4}; X_i соединен с X_{i±1},
    W_{i+1} и W_{i+4}. Возвращает граф и соответствующий экземпляр
    C6-close с параметрами c и d.
    """
    from .structure import C6CloseInstance

    check_positive_int("m", m)
    check_range("x", x, 0)
    n = 2 * m + 2 * x
    relations: dict[tuple[int, int], list[int]] = {pair: [0] * n for pair in PART_PAIRS}
    w_ranges = _block_ranges("W", m, 0)
    x_ranges = _block_ranges("X", x, 2 * m)

    def place(name: str, i: int) -> tuple[int, Range]:
        ranges = w_ranges if name == "W" else x_ranges
        return c6_block_part(i), ranges[f"{name}{i}"]

    for i in range(1, 7):
        _wire(relations, place("W", i), place("W", _cyclic(i + 1)))
        if x:
            _wire(relations, place("X", i), place("X", _cyclic(i + 1)))
            _wire(relations, place("W", i), place("X", _cyclic(i - 1)))
            _wire(relations, place("W", i), place("X", _cyclic(i - 4)))

    graph = TripartiteGraph(
        n,
        relations,
        {
            "construction": "double_c6",
            "params": {"m": m, "x": x},
            "ranges": {
                name: list(bounds) for name, bounds in {**w_ranges, **x_ranges}.items()
            },
        },
    )
    instance = C6CloseInstance.from_ranges(
        {**w_ranges, **(x_ranges if x else {})}, c=c, d=d
    )
    return graph, instance
