"""Локальный поиск при ограничении на минимальную степень.

Две цели: минимум треугольников при δ(G) ≥ n + t и максимум δ(G) − n
среди графов без K_3(2). Поиск - отжиг с геометрическим охлаждением,
ходы - переключение ребра и обмен (uv → uw). Рестарты независимы и
получают потоки случайных чисел из SeedSequence; результат не зависит
от числа воркеров.
"""
from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Final

import numpy as np

from .const import (
    ANNEALING_CALIBRATION_MOVES,
    ANNEALING_FINAL_RATIO,
    ANNEALING_TARGET_ACCEPTANCE,
    DEFAULT_BUDGET,
    DEFAULT_RESTARTS,
    DEFAULT_WORKERS,
    FEASIBILITY_SAMPLE_RATE,
    FULL_RECHECK_PERIOD,
    INITIALIZER_CONSTRUCTION,
    INITIALIZER_FILE,
    INITIALIZER_GLUE,
    INITIALIZER_RANDOM,
    INITIALIZERS,
    OBJECTIVE_K32_SURPLUS,
    OBJECTIVE_MIN_TRIANGLES,
    OBJECTIVES,
    PART_PAIRS,
    PARTS,
    RECOUNT_CHECKPOINTS,
    SWAP_MOVE_PROBABILITY,
)
from .constructions import (
    Construction51Params,
    ExtremalRegularParams,
    construction_5_1,
    extremal_regular,
    glue,
    random_graph,
)
from .detection import find_k3s, k32_through_edge
from .exceptions import (
    BookkeepingError,
    BoundViolationError,
    DegreeFloorError,
    InfeasibleConfigError,
    InvalidParameterError,
    TriLabError,
)
from .graph import (
    TripartiteGraph,
    Vertex,
    complete_tripartite,
    degree_profile,
    full_mask,
    third_part,
    triangle_count,
)
from .validators import check_positive_int, check_range

_LOGGER = logging.getLogger(__name__)

_ORDERED_PAIRS = tuple((i, j) for i in PARTS for j in PARTS if i != j)


def triangle_floor(n: int, t: int) -> int:
    """Доказанная нижняя оценка f(n, t): max{t³, ⌈n²(3t−n)/2⌉, 4 при t = 1, n ≥ 4}."""
    floor = max(t**3, -(-(n * n * (3 * t - n)) // 2))
    if t == 1 and n >= 4:
        floor = max(floor, 4)
    return floor


@dataclass(frozen=True)
class SearchConfig:
    """Конфигурация поиска; workers не влияет на результат и не попадает в отчет."""

    n: int
    t: int
    objective: str = OBJECTIVE_MIN_TRIANGLES
    budget: int = DEFAULT_BUDGET
    restarts: int = DEFAULT_RESTARTS
    seed: int = 0
    initializer: str = INITIALIZER_CONSTRUCTION
    initial_path: str | None = None
    workers: int = DEFAULT_WORKERS

    def __post_init__(self) -> None:
        check_positive_int("n", self.n)
        check_positive_int("t", self.t)
        if self.objective not in OBJECTIVES:
            raise InvalidParameterError("objective", f"expected one of {', '.join(OBJECTIVES)}")
        if self.initializer not in INITIALIZERS:
            raise InvalidParameterError("initializer", f"expected one of {', '.join(INITIALIZERS)}")
        check_range("budget", self.budget, 0)
        check_positive_int("restarts", self.restarts)
        check_positive_int("workers", self.workers)
        check_range("seed", self.seed, 0, 2**64 - 1)
        if self.objective == OBJECTIVE_MIN_TRIANGLES:
            check_range("t", self.t, 1, self.n)
        if self.initializer == INITIALIZER_FILE and not self.initial_path:
            raise InvalidParameterError("initial_path", "required for the file initializer")

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "t": self.t,
            "objective": self.objective,
            "budget": self.budget,
            "restarts": self.restarts,
            "seed": self.seed,
            "initializer": self.initializer,
            "initial_path": self.initial_path,
        }


@dataclass
class MoveStats:
    """Счетчики ходов."""

    proposed: int = 0
    accepted: int = 0
    toggles: int = 0
    swaps: int = 0
    rejected_floor: int = 0
    rejected_k32: int = 0
    rejected_metropolis: int = 0
    feasibility_checks: int = 0
    recounts: int = 0
    full_checks: int = 0

    def merge(self, other: MoveStats) -> None:
        for name in self.__dataclass_fields__:
            setattr(self, name, getattr(self, name) + getattr(other, name))

    def to_dict(self) -> dict[str, int]:
        return {name: getattr(self, name) for name in self.__dataclass_fields__}


@dataclass
class RestartResult:
    """Итог одного рестарта (передается между процессами)."""

    index: int
    best_value: int
    best_score: int
    initial_value: int
    initial_temperature: float
    relations: dict[tuple[int, int], tuple[int, ...]]
    stats: MoveStats
    start: str = INITIALIZER_CONSTRUCTION

    def summary(self) -> dict[str, Any]:
        return {
            "index": self.index,
            "best_value": self.best_value,
            "initial_value": self.initial_value,
            "initial_temperature": self.initial_temperature,
            "start": self.start,
        }


@dataclass
class SearchReport:
    """Отчет поиска; wall_time сериализуется только по запросу."""

    config: SearchConfig
    best_value: int
    bound_floor: int | None
    best_restart: int
    best_graph: TripartiteGraph
    moves: MoveStats
    restarts: list[dict[str, Any]]
    min_degree: int
    triangles: int
    k32_free: bool | None = None
    wall_time: float = 0.0

    def to_dict(self, include_timing: bool = False) -> dict[str, Any]:
        data: dict[str, Any] = {
            "config": self.config.to_dict(),
            "objective": self.config.objective,
            "best_value": self.best_value,
            "bound_floor": self.bound_floor,
            "best_restart": self.best_restart,
            "moves": self.moves.to_dict(),
            "restarts": list(self.restarts),
            "min_degree": self.min_degree,
            "triangles": self.triangles,
            "k32_free": self.k32_free,
        }
        if include_timing:
            data["wall_time"] = self.wall_time
        return data

    def table_rows(self) -> list[tuple[str, Any]]:
        """Строки для табличного вывода."""
        rows: list[tuple[str, Any]] = [
            ("objective", self.config.objective),
            ("n", self.config.n),
            ("t", self.config.t),
            ("best value", self.best_value),
            ("bound floor", self.bound_floor if self.bound_floor is not None else "-"),
            ("min degree", self.min_degree),
            ("triangles", self.triangles),
            ("best restart", self.best_restart),
            ("accepted / proposed", f"{self.moves.accepted} / {self.moves.proposed}"),
        ]
        if self.k32_free is not None:
            rows.append(("K_3(2)-free", self.k32_free))
        return rows


class WorkingGraph:
    """Изменяемая копия графа со степенями для локального поиска.

    Гистограмма степеней дает δ(G) и число минимальных вершин без
    просмотра всех 3n вершин на каждом ходе.
    """

    __slots__ = ("n", "_rows", "degrees", "_histogram", "_low")

    def __init__(self, graph: TripartiteGraph) -> None:
        self.n = graph.n
        self._rows: dict[tuple[int, int], list[int]] = {
            pair: list(graph.rows(*pair)) for pair in _ORDERED_PAIRS
        }
        self.degrees: dict[int, list[int]] = {
            part: [graph.degree(Vertex(part, u)) for u in range(graph.n)] for part in PARTS
        }
        self._histogram = [0] * (2 * graph.n + 1)
        for values in self.degrees.values():
            for value in values:
                self._histogram[value] += 1
        self._low = min(min(values) for values in self.degrees.values())

    def row(self, v: Vertex, part: int) -> int:
        if part == v.part:
            return 0
        return self._rows[(v.part, part)][v.index]

    def has_edge(self, x: Vertex, y: Vertex) -> bool:
        return x.part != y.part and bool(self._rows[(x.part, y.part)][x.index] >> y.index & 1)

    def common(self, x: Vertex, y: Vertex) -> int:
        """|N(x) ∩ N(y)| в третьей доле."""
        k = third_part(x.part, y.part)
        return (self.row(x, k) & self.row(y, k)).bit_count()

    def _shift_degree(self, v: Vertex, step: int) -> None:
        values = self.degrees[v.part]
        old = values[v.index]
        values[v.index] = old + step
        self._histogram[old] -= 1
        self._histogram[old + step] += 1
        if old + step < self._low:
            self._low = old + step
        while not self._histogram[self._low]:
            self._low += 1

    def add(self, x: Vertex, y: Vertex) -> None:
        self._rows[(x.part, y.part)][x.index] |= 1 << y.index
        self._rows[(y.part, x.part)][y.index] |= 1 << x.index
        self._shift_degree(x, 1)
        self._shift_degree(y, 1)

    def remove(self, x: Vertex, y: Vertex) -> None:
        self._rows[(x.part, y.part)][x.index] &= ~(1 << y.index)
        self._rows[(y.part, x.part)][y.index] &= ~(1 << x.index)
        self._shift_degree(x, -1)
        self._shift_degree(y, -1)

    def degree(self, v: Vertex) -> int:
        return self.degrees[v.part][v.index]

    def min_degree(self) -> int:
        return self._low

    def min_degree_count(self) -> tuple[int, int]:
        """δ(G) и число вершин, на которых он достигается."""
        return self._low, self._histogram[self._low]

    def snapshot(self) -> dict[tuple[int, int], tuple[int, ...]]:
        return {pair: tuple(self._rows[pair]) for pair in PART_PAIRS}

    def to_graph(self) -> TripartiteGraph:
        return TripartiteGraph(self.n, self.snapshot())


def _nth_bit(mask: int, rank: int) -> int:
    """Индекс установленного бита с номером rank (по возрастанию)."""
    for _ in range(rank):
        mask &= mask - 1
    return (mask & -mask).bit_length() - 1


@dataclass(frozen=True)
class _Move:
    kind: str
    x: Vertex
    y: Vertex
    w: Vertex | None = None


class _Annealer:
    """Один рестарт отжига над собственной копией графа."""

    def __init__(
        self,
        config: SearchConfig,
        graph: TripartiteGraph,
        rng: np.random.Generator,
        index: int,
    ) -> None:
        self.config = config
        self.rng = rng
        self.index = index
        self.start = graph.meta.get("start", INITIALIZER_CONSTRUCTION)
        self.work = WorkingGraph(graph)
        self.full = full_mask(graph.n)
        self.stats = MoveStats()
        self.minimize = config.objective == OBJECTIVE_MIN_TRIANGLES
        self.degree_floor = config.n + config.t if self.minimize else 0
        self.floor = triangle_floor(config.n, config.t) if self.minimize else 0
        self.triangles = triangle_count(graph)
        self.cost = self._cost()

    def _score(self) -> int:
        low, count = self.work.min_degree_count()
        return low * (3 * self.work.n + 1) - count

    def _cost(self) -> int:
        return self.triangles if self.minimize else -self._score()

    def _value(self) -> int:
        return self.triangles if self.minimize else self.work.min_degree() - self.work.n

    def _random_vertex_pair(self) -> tuple[Vertex, Vertex]:
        i, j = PART_PAIRS[int(self.rng.integers(3))]
        if self.rng.random() < 0.5:
            i, j = j, i
        n = self.work.n
        return Vertex(i, int(self.rng.integers(n))), Vertex(j, int(self.rng.integers(n)))

    def _propose(self) -> _Move | None:
        x, y = self._random_vertex_pair()
        if self.rng.random() >= SWAP_MOVE_PROBABILITY:
            return _Move("remove" if self.work.has_edge(x, y) else "add", x, y)
        row = self.work.row(x, y.part)
        missing = ~row & self.full
        present, absent = row.bit_count(), missing.bit_count()
        if not present or not absent:
            return None
        old = _nth_bit(row, int(self.rng.integers(present)))
        new = _nth_bit(missing, int(self.rng.integers(absent)))
        return _Move("swap", x, Vertex(y.part, old), Vertex(y.part, new))

    def _triangle_delta(self, move: _Move) -> int:
        if move.kind == "add":
            return self.work.common(move.x, move.y)
        if move.kind == "remove":
            return -self.work.common(move.x, move.y)
        assert move.w is not None
        return self.work.common(move.x, move.w) - self.work.common(move.x, move.y)

    def _respects_floor(self, move: _Move) -> bool:
        if move.kind == "add":
            return True
        floor = self.degree_floor
        if move.kind == "remove":
            return self.work.degree(move.x) > floor and self.work.degree(move.y) > floor
        return self.work.degree(move.y) > floor

    def _apply(self, move: _Move) -> None:
        if move.kind == "add":
            self.work.add(move.x, move.y)
        elif move.kind == "remove":
            self.work.remove(move.x, move.y)
        else:
            assert move.w is not None
            self.work.remove(move.x, move.y)
            self.work.add(move.x, move.w)

    def _revert(self, move: _Move) -> None:
        if move.kind == "add":
            self.work.remove(move.x, move.y)
        elif move.kind == "remove":
            self.work.add(move.x, move.y)
        else:
            assert move.w is not None
            self.work.remove(move.x, move.w)
            self.work.add(move.x, move.y)

    def _trial_delta(self, move: _Move) -> int | None:
        """Изменение стоимости хода или None, если ход недопустим."""
        if self.minimize:
            if not self._respects_floor(move):
                return None
            return self._triangle_delta(move)
        self._apply(move)
        delta = -self._score() - self.cost
        self._revert(move)
        return delta

    def calibrate(self) -> float:
        """Начальная температура: средний подъем принимается с вероятностью 1/2."""
        uphill: list[int] = []
        for _ in range(ANNEALING_CALIBRATION_MOVES):
            move = self._propose()
            if move is None:
                continue
            delta = self._trial_delta(move)
            if delta is not None and delta > 0:
                uphill.append(delta)
        if not uphill:
            return 1.0
        return float(np.mean(uphill)) / -math.log(ANNEALING_TARGET_ACCEPTANCE)

    def _check_feasibility(self) -> None:
        self.stats.feasibility_checks += 1
        low = self.work.min_degree()
        if low < self.degree_floor:
            for part in PARTS:
                for index, value in enumerate(self.work.degrees[part]):
                    if value == low:
                        raise DegreeFloorError(str(Vertex(part, index)), low, self.degree_floor)

    def _recount(self) -> None:
        self.stats.recounts += 1
        actual = triangle_count(self.work.to_graph())
        if actual != self.triangles:
            raise BookkeepingError("triangle count", actual, self.triangles)

    def _full_k32_check(self) -> None:
        self.stats.full_checks += 1
        witness = find_k3s(self.work.to_graph(), 2)
        if witness is not None:
            raise BookkeepingError("K_3(2) count", 1, 0)

    def run(self) -> RestartResult:
        config = self.config
        initial_value = self._value()
        temperature0 = self.calibrate()
        budget = config.budget
        feasibility_period = max(1, round(1 / FEASIBILITY_SAMPLE_RATE))
        recount_period = max(1, budget // RECOUNT_CHECKPOINTS)
        best_cost = self.cost
        best_value = self._value()
        best_relations = self.work.snapshot()

        for step in range(budget):
            temperature = temperature0 * ANNEALING_FINAL_RATIO ** (step / max(budget - 1, 1))
            move = self._propose()
            if move is None:
                continue
            self.stats.proposed += 1
            if move.kind == "swap":
                self.stats.swaps += 1
            else:
                self.stats.toggles += 1

            if self.minimize:
                if not self._respects_floor(move):
                    self.stats.rejected_floor += 1
                    continue
                delta = self._triangle_delta(move)
                if delta > 0 and self.rng.random() >= math.exp(-delta / temperature):
                    self.stats.rejected_metropolis += 1
                    continue
                self._apply(move)
                self.triangles += delta
                self.cost = self.triangles
                if self.triangles < self.floor:
                    _LOGGER.error(
                        "🚨 T=%d ниже доказанной оценки %d (n=%d, t=%d)",
                        self.triangles, self.floor, config.n, config.t,
                    )
                    raise BoundViolationError(config.n, config.t, self.triangles, self.floor)
            else:
                self._apply(move)
                if move.kind != "remove":
                    added = move.w if move.kind == "swap" else move.y
                    assert added is not None
                    if k32_through_edge(self.work, move.x, added) is not None:
                        self._revert(move)
                        self.stats.rejected_k32 += 1
                        continue
                delta = -self._score() - self.cost
                if delta > 0 and self.rng.random() >= math.exp(-delta / temperature):
                    self._revert(move)
                    self.stats.rejected_metropolis += 1
                    continue
                self.cost += delta
                self.triangles += self._triangle_delta(move)

            self.stats.accepted += 1
            if self.minimize and step % feasibility_period == 0:
                self._check_feasibility()
            if step % recount_period == 0:
                self._recount()
            if not self.minimize and self.stats.accepted % FULL_RECHECK_PERIOD == 0:
                self._full_k32_check()
            if self.cost < best_cost:
                best_cost = self.cost
                best_value = self._value()
                best_relations = self.work.snapshot()

        if self.minimize:
            self._check_feasibility()
        else:
            self._full_k32_check()
        self._recount()
        return RestartResult(
            index=self.index,
            best_value=best_value,
            best_score=-best_cost,
            initial_value=initial_value,
            initial_temperature=temperature0,
            relations=best_relations,
            stats=self.stats,
            start=self.start,
        )


def _repair_k32(graph: TripartiteGraph) -> TripartiteGraph:
    """Удаление ребер найденных K_3(2), пока граф их содержит."""
    work = WorkingGraph(graph)
    while True:
        witness = find_k3s(work.to_graph(), 2)
        if witness is None:
            return work.to_graph().with_meta(graph.meta)
        x = Vertex(1, witness.in_part(1)[0])
        y = Vertex(2, witness.in_part(2)[0])
        work.remove(x, y)


START_C51: Final = "c51"
START_GLUE: Final = "glue"
START_EXTREMAL: Final = "extremal"
START_COMPLETE: Final = "complete"


def _c51_or_none(n: int, t: int) -> TripartiteGraph | None:
    try:
        return construction_5_1(Construction51Params(n, t))
    except TriLabError:
        return None


def initial_graph(config: SearchConfig, restart_seed: int) -> TripartiteGraph:
    """Начальный граф рестарта; meta["start"] называет источник.

    Raises:
        InfeasibleConfigError: Если начальный граф не удовлетворяет ограничениям
    """
    n, t = config.n, config.t
    minimize = config.objective == OBJECTIVE_MIN_TRIANGLES
    if config.initializer == INITIALIZER_FILE:
        from .serialization import read_graph

        assert config.initial_path is not None
        graph = read_graph(config.initial_path)
        if graph.n != n:
            raise InfeasibleConfigError(f"initial graph has part size {graph.n}, expected {n}")
        start = INITIALIZER_FILE
    elif config.initializer == INITIALIZER_RANDOM:
        graph = random_graph(n, n + t if minimize else 0, restart_seed)
        start = INITIALIZER_RANDOM
    elif config.initializer == INITIALIZER_GLUE:
        glued = _glued_start(n, t, minimize)
        if glued is None:
            raise InfeasibleConfigError(f"no glued start for n={n}, t={t}")
        graph, start = glued, START_GLUE
    elif minimize:
        if n % 2 == 0 and 2 * t >= n:
            graph, start = extremal_regular(ExtremalRegularParams(n, t)), START_EXTREMAL
        else:
            graph, start = complete_tripartite(n), START_COMPLETE
    elif (c51 := _c51_or_none(n, t)) is not None:
        graph, start = c51, START_C51
    elif (glued := _glued_start(n, t, minimize)) is not None:
        graph, start = glued, START_GLUE
    else:
        graph, start = complete_tripartite(n), START_COMPLETE

    if minimize:
        profile = degree_profile(graph)
        if profile.min_degree < n + t:
            raise InfeasibleConfigError(
                f"initial graph has minimum degree {profile.min_degree} < n + t = {n + t}"
            )
    elif find_k3s(graph, 2) is not None:
        _LOGGER.info("Начальный граф содержит K_3(2): удаляем ребра")
        graph = _repair_k32(graph)
    _LOGGER.debug("Старт рестарта: %s (n=%d, t=%d)", start, n, t)
    return graph.with_meta({**graph.meta, "start": start})


def _glued_start(n: int, t: int, minimize: bool) -> TripartiteGraph | None:
    """G ⊙ G для G с долей n/2: δ(G ⊙ G) = δ(G) + n/2."""
    if n % 2:
        return None
    half_n = n // 2
    if not minimize:
        half = _c51_or_none(half_n, t)
    elif half_n % 2 == 0 and half_n <= 2 * t <= 2 * half_n:
        half = extremal_regular(ExtremalRegularParams(half_n, t))
    else:
        half = None
    return glue(half, half) if half is not None else None


def _run_restart(config: SearchConfig, index: int, seed_sequence: np.random.SeedSequence) -> RestartResult:
    restart_seed = int(seed_sequence.generate_state(1, dtype=np.uint64)[0])
    graph = initial_graph(config, restart_seed)
    annealer = _Annealer(config, graph, np.random.default_rng(seed_sequence), index)
    _LOGGER.debug("Рестарт %d: старт со значением %d", index, annealer._value())
    result = annealer.run()
    _LOGGER.debug("Рестарт %d: лучшее значение %d", index, result.best_value)
    return result


def _run(config: SearchConfig) -> SearchReport:
    started = time.perf_counter()
    children = np.random.SeedSequence(config.seed).spawn(config.restarts)
    if config.workers > 1 and config.restarts > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as executor:
            results = list(
                executor.map(_run_restart, [config] * config.restarts, range(config.restarts), children)
            )
    else:
        results = [_run_restart(config, index, child) for index, child in enumerate(children)]

    best = min(results, key=lambda result: (-result.best_score, result.index))
    moves = MoveStats()
    for result in results:
        moves.merge(result.stats)

    graph = TripartiteGraph(
        config.n,
        best.relations,
        {"construction": "search", "config": config.to_dict(), "restart": best.index, "start": best.start},
    )
    profile = degree_profile(graph)
    minimize = config.objective == OBJECTIVE_MIN_TRIANGLES
    report = SearchReport(
        config=config,
        best_value=best.best_value,
        bound_floor=triangle_floor(config.n, config.t) if config.t <= config.n else None,
        best_restart=best.index,
        best_graph=graph,
        moves=moves,
        restarts=[result.summary() for result in results],
        min_degree=profile.min_degree,
        triangles=triangle_count(graph),
        k32_free=None if minimize else find_k3s(graph, 2) is None,
        wall_time=time.perf_counter() - started,
    )
    _LOGGER.info(
        "Поиск %s (n=%d, t=%d): лучшее значение %d в рестарте %d",
        config.objective, config.n, config.t, report.best_value, report.best_restart,
    )
    return report


def probe_min_triangles(config: SearchConfig) -> SearchReport:
    """Минимизация T(G) при δ(G) ≥ n + t."""
    if config.objective != OBJECTIVE_MIN_TRIANGLES:
        raise InvalidParameterError("objective", f"expected {OBJECTIVE_MIN_TRIANGLES}")
    return _run(config)


def probe_k32_free_surplus(config: SearchConfig) -> SearchReport:
    """Максимизация δ(G) − n среди графов без K_3(2)."""
    if config.objective != OBJECTIVE_K32_SURPLUS:
        raise InvalidParameterError("objective", f"expected {OBJECTIVE_K32_SURPLUS}")
    return _run(config)
