"""Структурные алгоритмы: разбиение по раздутию C6, уточнение B и проверки гипотез.

Проверки возвращают для каждого условия наихудший запас (slack): для
условия lhs ≥ rhs это min(lhs − rhs), для lhs ≤ rhs - min(rhs − lhs).
Условие выполнено, если запас неотрицателен.
"""
from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Final

from .detection import K3sWitness, find_k3s
from .exceptions import (
    HypothesisViolationError,
    InvalidParameterError,
    MalformedInstanceError,
)
from .graph import (
    BipartiteGraph,
    TripartiteGraph,
    Vertex,
    degree_profile,
    iter_bits,
    mask_of,
    next_part,
    third_part,
)
from .validators import check_range, to_fraction, validate_instance_data

_LOGGER = logging.getLogger(__name__)

PATH_LENGTH: Final = 12
PARTIAL_DEGREE_MIN_C: Final = 58

STATUS_PARTITION: Final = "partition"
STATUS_K32: Final = "k32"
STATUS_PATH_BLOCKED: Final = "path_blocked"


def block_part(i: int) -> int:
    """Доля множества W_i / X_i: W_j, W_{j+3} ⊆ V_j."""
    return (i - 1) % 3 + 1


def _cyclic6(i: int) -> int:
    return (i - 1) % 6 + 1


def _cyclic3(j: int) -> int:
    return (j - 1) % 3 + 1


@dataclass(frozen=True)
class ConditionCheck:
    """Результат проверки одного условия."""

    name: str
    passed: bool
    slack: Fraction
    witness: str | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "slack": float(self.slack),
            "witness": self.witness,
        }


class _SlackTracker:
    """Накопление наихудшего запаса по условию."""

    def __init__(self, name: str) -> None:
        self.name = name
        self.slack: Fraction | None = None
        self.witness: str | None = None

    def at_least(self, lhs: Fraction | int, rhs: Fraction | int, witness: str) -> None:
        self._update(Fraction(lhs) - Fraction(rhs), witness)

    def at_most(self, lhs: Fraction | int, rhs: Fraction | int, witness: str) -> None:
        self._update(Fraction(rhs) - Fraction(lhs), witness)

    def _update(self, slack: Fraction, witness: str) -> None:
        if self.slack is None or slack < self.slack:
            self.slack = slack
            self.witness = witness

    def result(self) -> ConditionCheck:
        slack = Fraction(0) if self.slack is None else self.slack
        passed = slack >= 0
        return ConditionCheck(self.name, passed, slack, None if passed else self.witness)


@dataclass(frozen=True)
class C6Partition:
    """Разбиение V(G) на W_1..W_6 и U_1..U_3 с диагностикой свойств."""

    w: Mapping[int, tuple[int, ...]]
    u: Mapping[int, tuple[int, ...]]
    epsilon: Fraction
    beta: Fraction
    path: tuple[Vertex, ...]
    diagnostics: tuple[ConditionCheck, ...]
    hypotheses: tuple[ConditionCheck, ...]

    def members(self, name: str) -> tuple[int, ...]:
        """Индексы множества по имени вида 'W3' или 'U1'."""
        index = int(name[1:])
        return self.w[index] if name[0] == "W" else self.u[index]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.diagnostics)

    def to_dict(self) -> dict[str, Any]:
        return {
            "W": {str(i): list(self.w[i]) for i in range(1, 7)},
            "U": {str(j): list(self.u[j]) for j in range(1, 4)},
            "epsilon": str(self.epsilon),
            "beta": str(self.beta),
            "path": [list(v) for v in self.path],
            "diagnostics": [check.to_dict() for check in self.diagnostics],
            "hypotheses": [check.to_dict() for check in self.hypotheses],
        }


@dataclass(frozen=True)
class C6Extraction:
    """Исход extract_c6: разбиение, K_3(2) или блокировка пути."""

    status: str
    partition: C6Partition | None = None
    witness: K3sWitness | None = None
    hypotheses: tuple[ConditionCheck, ...] = ()
    reason: str | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "status": self.status,
            "partition": self.partition.to_dict() if self.partition else None,
            "witness": self.witness.to_dict() if self.witness else None,
            "hypotheses": [check.to_dict() for check in self.hypotheses],
            "reason": self.reason,
        }


def _lemma_hypotheses(graph: TripartiteGraph, epsilon: Fraction) -> tuple[ConditionCheck, ...]:
    """δ(G) ≥ n, δ⁺(G) ≥ 2εn и T(uv) ≤ (ε/30)²n для всех ребер."""
    n = graph.n
    profile = degree_profile(graph)
    min_degree = _SlackTracker("min_degree")
    min_degree.at_least(profile.min_degree, n, str(profile.argmin_degree()))
    out_degree = _SlackTracker("min_out_degree")
    out_degree.at_least(profile.min_out_degree, 2 * epsilon * n, str(profile.argmin_out_degree()))

    codegree = _SlackTracker("max_edge_triangles")
    bound = (epsilon / 30) ** 2 * n
    worst = 0
    worst_edge = "none"
    for i, j in ((1, 2), (1, 3), (2, 3)):
        k = third_part(i, j)
        rows_ik = graph.rows(i, k)
        rows_jk = graph.rows(j, k)
        for u, row in enumerate(graph.rows(i, j)):
            for v in iter_bits(row):
                value = (rows_ik[u] & rows_jk[v]).bit_count()
                if value > worst:
                    worst = value
                    worst_edge = f"{Vertex(i, u)}{Vertex(j, v)}"
    codegree.at_most(worst, bound, worst_edge)
    return min_degree.result(), out_degree.result(), codegree.result()


def _extend_path(graph: TripartiteGraph, start: Vertex) -> list[Vertex] | None:
    path = [start]
    for _ in range(PATH_LENGTH):
        current = path[-1]
        target = next_part(current.part)
        candidates = list(iter_bits(graph.row(current, target)))
        if not candidates:
            return None
        outs = [graph.out_degree(Vertex(target, w)) for w in candidates]
        best = max(range(len(candidates)), key=lambda pos: (outs[pos], -candidates[pos]))
        path.append(Vertex(target, candidates[best]))
    return path


def _partition_diagnostics(
    graph: TripartiteGraph,
    w_sets: Mapping[int, tuple[int, ...]],
    u_sets: Mapping[int, tuple[int, ...]],
    epsilon: Fraction,
    min_out: int,
) -> tuple[ConditionCheck, ...]:
    n = graph.n
    tolerance = epsilon * n
    masks: dict[str, tuple[int, int]] = {}
    for i in range(1, 7):
        masks[f"W{i}"] = (block_part(i), mask_of(w_sets[i]))
    for j in range(1, 4):
        masks[f"U{j}"] = (j, mask_of(u_sets[j]))

    membership = _SlackTracker("a_part_membership")
    covered: dict[int, int] = {part: 0 for part in (1, 2, 3)}
    overlap = 0
    for part, mask in masks.values():
        overlap |= covered[part] & mask
        covered[part] |= mask
    membership.at_least(0, overlap.bit_count(), "overlapping sets")
    missing = sum((~covered[part] & ((1 << n) - 1)).bit_count() for part in covered)
    membership.at_least(0, missing, "uncovered vertices")

    sizes = _SlackTracker("b_set_sizes")
    adjacency = _SlackTracker("c_adjacency")
    degrees = _SlackTracker("d_degrees")
    for i in range(1, 7):
        size = len(w_sets[i])
        sizes.at_least(size, min_out - tolerance, f"W{i}")
        sizes.at_most(size, min_out + tolerance, f"W{i}")
        near = {f"W{_cyclic6(i - 1)}", f"W{_cyclic6(i + 1)}", f"U{_cyclic3(i - 1)}"}
        part = block_part(i)
        for index in w_sets[i]:
            vertex = Vertex(part, index)
            label = f"{vertex} in W{i}"
            for name, (set_part, mask) in masks.items():
                common = (graph.row(vertex, set_part) & mask).bit_count()
                if name in near:
                    adjacency.at_least(common, mask.bit_count() - tolerance, f"{label} vs {name}")
                else:
                    adjacency.at_most(common, tolerance, f"{label} vs {name}")
            degrees.at_most(graph.out_degree(vertex), min_out + tolerance, label)
            degrees.at_least(graph.in_degree(vertex), n - min_out - tolerance, label)
    return membership.result(), sizes.result(), adjacency.result(), degrees.result()


def extract_c6(graph: TripartiteGraph, epsilon: Any) -> C6Extraction:
    """Извлечение разбиения по раздутию C6.

    a_0 - вершина с минимальной d^+ (меньший индекс при равенстве); путь
    a_0..a_12 продолжается соседом с максимальной d^+; A_i = N^+(a_{i−1}),
    W_i = (A_i ∩ A_{i+6}) \\ A_{i+3}. Множества перенумеровываются так,
    чтобы W_j, W_{j+3} ⊆ V_j; U_j - остаток доли V_j.

    Args:
        graph: Трёхдольный граф
        epsilon: Допуск ε ∈ [0, 1)

    Returns:
        Разбиение с диагностикой свойств, K_3(2) или блокировка пути
    """
    eps = to_fraction("epsilon", epsilon)
    if not 0 <= eps < 1:
        raise InvalidParameterError("epsilon", "must lie in [0, 1)")
    n = graph.n
    hypotheses = _lemma_hypotheses(graph, eps)
    for check in hypotheses:
        if not check.passed:
            _LOGGER.warning("Гипотеза %s не выполнена (запас %s)", check.name, check.slack)

    profile = degree_profile(graph)
    start = profile.argmin_out_degree()
    path = _extend_path(graph, start)
    if path is None:
        _LOGGER.warning("Путь из %s не продолжается: пустая исходящая окрестность", start)
        return C6Extraction(
            STATUS_PATH_BLOCKED, hypotheses=hypotheses, reason="empty out-neighbourhood"
        )

    a_sets = {
        i: graph.row(path[i - 1], next_part(path[i - 1].part)) for i in range(1, PATH_LENGTH + 1)
    }
    offset = start.part
    w_sets: dict[int, tuple[int, ...]] = {}
    for i in range(1, 7):
        raw = (a_sets[i] & a_sets[i + 6]) & ~a_sets[i + 3]
        w_sets[_cyclic6(i + offset)] = tuple(iter_bits(raw))

    for j in range(1, 4):
        if len(w_sets[j]) + len(w_sets[j + 3]) > n:
            _LOGGER.info("|W_%d| + |W_%d| > n: ищем K_3(2)", j, j + 3)
            witness = find_k3s(graph, 2)
            if witness is not None:
                return C6Extraction(STATUS_K32, witness=witness, hypotheses=hypotheses)

    u_sets: dict[int, tuple[int, ...]] = {}
    for j in range(1, 4):
        taken = set(w_sets[j]) | set(w_sets[j + 3])
        u_sets[j] = tuple(index for index in range(n) if index not in taken)

    diagnostics = _partition_diagnostics(graph, w_sets, u_sets, eps, profile.min_out_degree)
    partition = C6Partition(
        w=w_sets,
        u=u_sets,
        epsilon=eps,
        beta=Fraction(profile.min_out_degree, n),
        path=tuple(path),
        diagnostics=diagnostics,
        hypotheses=hypotheses,
    )
    _LOGGER.info(
        "Разбиение C6: |W|=%s, свойства %s",
        [len(w_sets[i]) for i in range(1, 7)],
        "выполнены" if partition.passed else "нарушены",
    )
    return C6Extraction(STATUS_PARTITION, partition=partition, hypotheses=hypotheses)


def refine_ab(graph: BipartiteGraph, lam: Any) -> list[int]:
    """B' = {b : d(b) ≥ 4|A|/5} при условии d(a) ≥ (1−λ)|B| для всех a.

    Гарантируется |B'| ≥ (1−5λ)|B| и d(a, B') ≥ (1−2λ)|B'|.

    Raises:
        HypothesisViolationError: Если некоторая a ∈ A имеет малую степень
    """
    value = to_fraction("lambda", lam)
    check_range("lambda", value, Fraction(0), Fraction(1, 10))
    floor = (1 - value) * graph.n
    for a in range(graph.m):
        degree = graph.left_degree(a)
        if degree < floor:
            raise HypothesisViolationError("d(a) >= (1 - lambda)|B|", f"a={a} (degree {degree})")
    return [b for b in range(graph.n) if 5 * graph.right_degree(b) >= 4 * graph.m]


@dataclass(frozen=True)
class C6CloseInstance:
    """Два набора W_1..W_6, X_1..X_6 (индексы в доле block_part(i)) и параметры c, d."""

    w: Mapping[int, tuple[int, ...]]
    x: Mapping[int, tuple[int, ...]]
    c: Fraction
    d: int

    def __post_init__(self) -> None:
        if self.c <= 1:
            raise InvalidParameterError("c", "must be greater than 1")
        if self.d < 0:
            raise InvalidParameterError("d", "must be non-negative")
        for j in range(1, 4):
            seen: set[int] = set()
            for name, members in (
                (f"W{j}", self.w[j]), (f"W{j + 3}", self.w[j + 3]),
                (f"X{j}", self.x[j]), (f"X{j + 3}", self.x[j + 3]),
            ):
                if len(set(members)) != len(members) or seen & set(members):
                    raise MalformedInstanceError(f"{name} overlaps another set of part {j}")
                seen |= set(members)

    @classmethod
    def from_sets(
        cls, sets: Mapping[str, Iterable[int]], c: Any, d: int
    ) -> C6CloseInstance:
        """Экземпляр из словаря 'W1'..'W6', 'X1'..'X6' (X необязательны)."""
        return cls(
            w={i: tuple(sorted(sets[f"W{i}"])) for i in range(1, 7)},
            x={i: tuple(sorted(sets.get(f"X{i}", ()))) for i in range(1, 7)},
            c=to_fraction("c", c),
            d=d,
        )

    @classmethod
    def from_ranges(
        cls, ranges: Mapping[str, tuple[int, int]], c: Any, d: int
    ) -> C6CloseInstance:
        return cls.from_sets({name: range(*bounds) for name, bounds in ranges.items()}, c, d)

    @classmethod
    def from_dict(cls, data: Any, n: int, c: Any, d: int) -> C6CloseInstance:
        """Экземпляр из JSON с проверкой формы."""
        return cls.from_sets(validate_instance_data(data, n), c, d)

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {f"W{i}": list(self.w[i]) for i in range(1, 7)}
        data.update({f"X{i}": list(self.x[i]) for i in range(1, 7)})
        return data


@dataclass(frozen=True)
class ValidationReport:
    """Отчет проверки гипотез."""

    checks: tuple[ConditionCheck, ...]
    witness: K3sWitness | None = None
    alarm: bool = False
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def all_passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def check(self, name: str) -> ConditionCheck:
        for item in self.checks:
            if item.name == name:
                return item
        raise KeyError(name)

    def to_dict(self) -> dict[str, Any]:
        return {
            "all_passed": self.all_passed,
            "checks": [check.to_dict() for check in self.checks],
            "witness": self.witness.to_dict() if self.witness else None,
            "alarm": self.alarm,
            "notes": list(self.notes),
        }


def _sqrt_condition(name: str, surplus: int, coefficient_sq: Fraction, n: int) -> ConditionCheck:
    """surplus ≥ coefficient·√n, проверяется как surplus² ≥ coefficient²·n."""
    passed = surplus >= 0 and surplus * surplus >= coefficient_sq * n
    slack = Fraction(surplus * surplus) - coefficient_sq * n if surplus >= 0 else Fraction(surplus)
    return ConditionCheck(name, passed, slack, None if passed else f"delta - n = {surplus}")


def _set_degree_checks(
    graph: TripartiteGraph,
    sources: Mapping[int, tuple[int, ...]],
    source_name: str,
    targets: Sequence[tuple[str, Mapping[int, tuple[int, ...]], int]],
    tolerance: Fraction,
) -> ConditionCheck:
    tracker = _SlackTracker(f"{source_name.lower()}_degrees")
    for i in range(1, 7):
        part = block_part(i)
        for target_name, target_sets, shift in targets:
            j = _cyclic6(i + shift)
            members = target_sets[j]
            mask = mask_of(members)
            target_part = block_part(j)
            for index in sources[i]:
                vertex = Vertex(part, index)
                common = (graph.row(vertex, target_part) & mask).bit_count()
                tracker.at_least(
                    common,
                    len(members) - tolerance,
                    f"{vertex} in {source_name}{i} vs {target_name}{j}",
                )
    return tracker.result()


def c6_close_checks(graph: TripartiteGraph, instance: C6CloseInstance) -> tuple[ConditionCheck, ...]:
    """Проверка всех гипотез леммы о двух близких раздутиях C6."""
    n = graph.n
    c, d = instance.c, instance.d
    tolerance = Fraction(n) / c
    profile = degree_profile(graph)
    min_out = profile.min_out_degree

    c_range = _SlackTracker("c_range")
    c_range.at_most(c**6, n, "c^6 > n")

    out_vs_d = _SlackTracker("out_degree_vs_d")
    out_vs_d.at_least(min_out, d, str(profile.argmin_out_degree()))
    out_sum = _SlackTracker("out_degree_sum")
    out_sum.at_least(3 * min_out + 2 * d, n + 26 * tolerance, "3 delta+ + 2d")

    w_sizes = _SlackTracker("w_sizes")
    x_sizes = _SlackTracker("x_sizes")
    for i in range(1, 7):
        w_sizes.at_least(len(instance.w[i]), min_out - tolerance, f"W{i}")
        w_sizes.at_most(len(instance.w[i]), min_out + tolerance, f"W{i}")
        x_sizes.at_least(len(instance.x[i]), d - tolerance, f"X{i}")
        x_sizes.at_most(len(instance.x[i]), d + tolerance, f"X{i}")

    w_degrees = _set_degree_checks(
        graph, instance.w, "W",
        (("W", instance.w, -1), ("W", instance.w, 1), ("X", instance.x, -1), ("X", instance.x, -4)),
        tolerance,
    )
    x_degrees = _set_degree_checks(
        graph, instance.x, "X",
        (("X", instance.x, -1), ("X", instance.x, 1), ("W", instance.w, 1), ("W", instance.w, 4)),
        tolerance,
    )
    return (
        c_range.result(),
        _sqrt_condition("min_degree", profile.min_degree - n, 784 * c**4, n),
        out_vs_d.result(),
        out_sum.result(),
        w_sizes.result(),
        x_sizes.result(),
        w_degrees,
        x_degrees,
    )


def conclude_c6_close(graph: TripartiteGraph, checks: tuple[ConditionCheck, ...]) -> ValidationReport:
    """Итог проверки: при выполнении всех условий вызывается детектор K_3(2).

    Если все гипотезы выполнены, а K_3(2) не найден, выставляется alarm.
    """
    if not all(check.passed for check in checks):
        failed = [check.name for check in checks if not check.passed]
        _LOGGER.info("Нарушены условия: %s", ", ".join(failed))
        return ValidationReport(checks)
    witness = find_k3s(graph, 2)
    if witness is None:
        _LOGGER.error("🚨 Все гипотезы выполнены, но K_3(2) не найден")
        return ValidationReport(checks, alarm=True, notes=("hypotheses hold but no K_3(2) was found",))
    return ValidationReport(checks, witness=witness, notes=("hypotheses hold; K_3(2) exhibited",))


def validate_c6_close(graph: TripartiteGraph, instance: C6CloseInstance) -> ValidationReport:
    """Проверка гипотез леммы о двух раздутиях C6 с вызовом детектора."""
    for i in range(1, 7):
        for members in (instance.w[i], instance.x[i]):
            if any(not 0 <= index < graph.n for index in members):
                raise MalformedInstanceError(f"set {i} has an index outside [0, {graph.n})")
    return conclude_c6_close(graph, c6_close_checks(graph, instance))


def check_partial_degree_hypothesis(graph: TripartiteGraph, c: Any) -> ValidationReport:
    """Гипотезы теоремы о линейной частичной степени.

    δ(G) ≥ n + 30⁵c⁴√n и min d(v, V_j) ≥ (1/5 + 7/c)n при c ≥ 58.
    """
    value = to_fraction("c", c)
    check_range("c", value, PARTIAL_DEGREE_MIN_C)
    n = graph.n
    profile = degree_profile(graph)
    partial = _SlackTracker("min_partial_degree")
    partial.at_least(
        profile.min_partial_degree,
        (Fraction(1, 5) + 7 / value) * n,
        f"min partial degree {profile.min_partial_degree}",
    )
    checks = (
        _sqrt_condition("min_degree", profile.min_degree - n, Fraction(30**10) * value**8, n),
        partial.result(),
    )
    return ValidationReport(checks)
