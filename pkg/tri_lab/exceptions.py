"""Исключения tri_lab с поддержкой переводов."""
from __future__ import annotations

from .const import DOMAIN


class TriLabError(Exception):
    """Базовое исключение tri_lab."""

    def __init__(
        self,
        translation_key: str,
        translation_placeholders: dict[str, str] | None = None,
    ) -> None:
        """Initialize error.

        Args:
            translation_key: Ключ сообщения в каталоге переводов
            translation_placeholders: Плейсхолдеры для сообщения
        """
        super().__init__(translation_key)
        self.translation_domain = DOMAIN
        self.translation_key = translation_key
        self.translation_placeholders = translation_placeholders or {}

    def __str__(self) -> str:
        from .translations import render_exception_message

        return render_exception_message(self.translation_key, self.translation_placeholders)


class InvalidParameterError(TriLabError):
    """Недопустимое значение параметра."""

    def __init__(self, name: str, reason: str) -> None:
        """Initialize with parameter name.

        Args:
            name: Имя параметра
            reason: Почему значение не подходит
        """
        super().__init__(
            translation_key="invalid_parameter",
            translation_placeholders={"name": name, "reason": reason},
        )


class ParameterOutOfRangeError(TriLabError):
    """Значение вне допустимого диапазона."""

    def __init__(
        self,
        field: str,
        value: str,
        min_value: str,
        max_value: str,
    ) -> None:
        """Initialize with range information.

        Args:
            field: Название параметра
            value: Текущее значение
            min_value: Минимальное допустимое значение
            max_value: Максимальное допустимое значение
        """
        super().__init__(
            translation_key="value_out_of_range",
            translation_placeholders={
                "field": field,
                "value": value,
                "min": min_value,
                "max": max_value,
            },
        )


class NotPrimePowerError(TriLabError):
    """Порядок плоскости не является степенью простого."""

    def __init__(self, q: int) -> None:
        super().__init__(
            translation_key="not_prime_power",
            translation_placeholders={"q": str(q)},
        )


class VertexOutOfRangeError(TriLabError):
    """Вершина не принадлежит графу."""

    def __init__(self, vertex: str, n: int) -> None:
        super().__init__(
            translation_key="vertex_out_of_range",
            translation_placeholders={"vertex": vertex, "n": str(n)},
        )


class SamePartError(TriLabError):
    """Вершины или множества лежат в одной доле."""

    def __init__(self, first: str, second: str) -> None:
        super().__init__(
            translation_key="same_part",
            translation_placeholders={"first": first, "second": second},
        )


class NotAnEdgeError(TriLabError):
    """Пара вершин не является ребром."""

    def __init__(self, first: str, second: str) -> None:
        super().__init__(
            translation_key="not_an_edge",
            translation_placeholders={"first": first, "second": second},
        )


class MalformedGraphError(TriLabError):
    """Некорректный файл графа."""

    def __init__(self, reason: str) -> None:
        super().__init__(
            translation_key="malformed_graph",
            translation_placeholders={"reason": reason},
        )


class MalformedWitnessError(TriLabError):
    """Некорректный файл сертификата."""

    def __init__(self, reason: str) -> None:
        super().__init__(
            translation_key="malformed_witness",
            translation_placeholders={"reason": reason},
        )


class MalformedInstanceError(TriLabError):
    """Некорректный экземпляр C6-close."""

    def __init__(self, reason: str) -> None:
        super().__init__(
            translation_key="malformed_instance",
            translation_placeholders={"reason": reason},
        )


class PartSizeMismatchError(TriLabError):
    """Размеры долей склеиваемых графов различаются."""

    def __init__(self, first: int, second: int) -> None:
        super().__init__(
            translation_key="part_size_mismatch",
            translation_placeholders={"first": str(first), "second": str(second)},
        )


class DegreeFloorError(TriLabError):
    """Нарушено условие на минимальную степень."""

    def __init__(self, vertex: str, degree: int, required: int) -> None:
        """Initialize with the deficient vertex.

        Args:
            vertex: Вершина с недостаточной степенью
            degree: Ее степень
            required: Требуемая нижняя граница
        """
        super().__init__(
            translation_key="degree_floor_violated",
            translation_placeholders={
                "vertex": vertex,
                "degree": str(degree),
                "required": str(required),
            },
        )


class HypothesisViolationError(TriLabError):
    """Не выполнено условие, необходимое для гарантии операции."""

    def __init__(self, condition: str, witness: str) -> None:
        super().__init__(
            translation_key="hypothesis_violated",
            translation_placeholders={"condition": condition, "witness": witness},
        )


class InfeasibleConfigError(TriLabError):
    """Конфигурация поиска невыполнима."""

    def __init__(self, reason: str) -> None:
        super().__init__(
            translation_key="infeasible_config",
            translation_placeholders={"reason": reason},
        )


class BoundViolationError(TriLabError):
    """Найден граф ниже доказанной нижней оценки: противоречие с теорией."""

    def __init__(self, n: int, t: int, triangles: int, floor: int) -> None:
        super().__init__(
            translation_key="bound_violated",
            translation_placeholders={
                "n": str(n),
                "t": str(t),
                "triangles": str(triangles),
                "floor": str(floor),
            },
        )


class BookkeepingError(TriLabError):
    """Инкрементальный счетчик разошелся с полным пересчетом."""

    def __init__(self, quantity: str, expected: int, actual: int) -> None:
        super().__init__(
            translation_key="bookkeeping_mismatch",
            translation_placeholders={
                "quantity": quantity,
                "expected": str(expected),
                "actual": str(actual),
            },
        )
