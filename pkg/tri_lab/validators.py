"""Валидаторы входных данных и параметров tri_lab."""
from __future__ import annotations

import logging
from fractions import Fraction
from typing import Any

import voluptuous as vol

from .const import GRAPH_FORMAT_JSON, PARTS, WITNESS_TYPE_K3S, WITNESS_TYPE_KSS
from .exceptions import (
    InvalidParameterError,
    MalformedGraphError,
    MalformedInstanceError,
    MalformedWitnessError,
    ParameterOutOfRangeError,
)

_LOGGER = logging.getLogger(__name__)


def _strict_int(value: Any) -> int:
    """Целое число, но не bool."""
    if isinstance(value, bool) or not isinstance(value, int):
        raise vol.Invalid("expected an integer")
    return value


def _ordered_edge(edge: list[int]) -> list[int]:
    if edge[0] > edge[2]:
        raise vol.Invalid("edge must list the lower part first")
    return edge


_INDEX_LIST = [vol.All(_strict_int, vol.Range(min=0))]

GRAPH_SCHEMA = vol.Schema(
    {
        vol.Required("format"): GRAPH_FORMAT_JSON,
        vol.Required("n"): vol.All(_strict_int, vol.Range(min=1)),
        vol.Required("edges"): [vol.All([_strict_int], vol.Length(min=4, max=4), _ordered_edge)],
        vol.Optional("meta"): dict,
    }
)

K3S_WITNESS_SCHEMA = vol.Schema(
    {
        vol.Required("type"): WITNESS_TYPE_K3S,
        vol.Required("s"): vol.All(_strict_int, vol.Range(min=1)),
        vol.Required("parts"): vol.All([_INDEX_LIST], vol.Length(min=3, max=3)),
    }
)

KSS_WITNESS_SCHEMA = vol.Schema(
    {
        vol.Required("type"): WITNESS_TYPE_KSS,
        vol.Required("left"): _INDEX_LIST,
        vol.Required("right"): _INDEX_LIST,
        vol.Optional("pair"): vol.All([vol.In(PARTS)], vol.Length(min=2, max=2)),
    }
)

CLAIM_SCHEMA = vol.Schema(
    vol.Any(
        {vol.Required("triangles"): vol.All(_strict_int, vol.Range(min=0))},
        {vol.Required("min_degree"): vol.All(_strict_int, vol.Range(min=0))},
    )
)

_SET_KEYS = [f"W{i}" for i in range(1, 7)] + [f"X{i}" for i in range(1, 7)]

C6_CLOSE_SCHEMA = vol.Schema(
    {
        **{vol.Required(key): _INDEX_LIST for key in _SET_KEYS[:6]},
        **{vol.Optional(key, default=list): _INDEX_LIST for key in _SET_KEYS[6:]},
    }
)


def _schema_errors(schema: vol.Schema, data: Any) -> tuple[Any, list[str]]:
    try:
        return schema(data), []
    except vol.MultipleInvalid as e:
        return None, [str(error) for error in e.errors]


def validate_graph_data(
    data: Any, raise_on_error: bool = False
) -> tuple[bool, list[str]]:
    """Валидация JSON графа формата tri-v1.

    Args:
        data: Разобранный JSON
        raise_on_error: Выбрасывать исключение при первой ошибке

    Returns:
        Кортеж (is_valid, list_of_errors)

    Raises:
        MalformedGraphError: При ошибке (если raise_on_error=True)
    """
    if not isinstance(data, dict):
        if raise_on_error:
            raise MalformedGraphError("top level must be an object")
        return False, ["Graph must be a JSON object"]

    _, errors = _schema_errors(GRAPH_SCHEMA, data)
    if errors:
        if raise_on_error:
            raise MalformedGraphError(errors[0])
        return False, errors

    n = data["n"]
    seen: set[tuple[int, int, int, int]] = set()
    for edge in data["edges"]:
        i, u, j, v = edge
        problem: str | None = None
        if i not in PARTS or j not in PARTS:
            problem = f"edge {edge} names a part outside 1..3"
        elif i == j:
            problem = f"edge {edge} lies within part {i}"
        elif not (0 <= u < n and 0 <= v < n):
            problem = f"edge {edge} has an index outside [0, {n})"
        else:
            key = (i, u, j, v)
            if key in seen:
                problem = f"edge {edge} is duplicated"
            seen.add(key)
        if problem is not None:
            if raise_on_error:
                raise MalformedGraphError(problem)
            errors.append(problem)

    return len(errors) == 0, errors


def validate_witness_data(
    data: Any, n: int | None = None, raise_on_error: bool = False
) -> tuple[bool, list[str]]:
    """Валидация JSON сертификата (k3s, kss или утверждения о графе).

    Проверяется только форма и диапазоны индексов; наличие ребер проверяет
    verify-witness.
    """
    errors: list[str] = []
    if not isinstance(data, dict):
        errors.append("Witness must be a JSON object")
    elif data.get("type") == WITNESS_TYPE_K3S:
        _, errors = _schema_errors(K3S_WITNESS_SCHEMA, data)
        if not errors:
            for part in data["parts"]:
                if len(part) != data["s"]:
                    errors.append(f"part {part} does not have exactly s={data['s']} vertices")
                elif len(set(part)) != len(part):
                    errors.append(f"part {part} repeats a vertex")
    elif data.get("type") == WITNESS_TYPE_KSS:
        _, errors = _schema_errors(KSS_WITNESS_SCHEMA, data)
        if not errors:
            if len(data["left"]) != len(data["right"]):
                errors.append("left and right sides differ in size")
            for side in ("left", "right"):
                if len(set(data[side])) != len(data[side]):
                    errors.append(f"{side} repeats a vertex")
            pair = data.get("pair")
            if pair is not None and pair[0] == pair[1]:
                errors.append("pair must name two distinct parts")
    else:
        _, errors = _schema_errors(CLAIM_SCHEMA, data)

    if not errors and n is not None and isinstance(data, dict):
        indices: list[int] = []
        if data.get("type") == WITNESS_TYPE_K3S:
            indices = [index for part in data["parts"] for index in part]
        elif data.get("type") == WITNESS_TYPE_KSS:
            indices = [*data["left"], *data["right"]]
        if any(index >= n for index in indices):
            errors.append(f"witness index outside [0, {n})")

    if errors and raise_on_error:
        raise MalformedWitnessError(errors[0])
    return len(errors) == 0, errors


def validate_instance_data(data: Any, n: int) -> dict[str, list[int]]:
    """Проверка формы экземпляра C6-close; возвращает нормализованные множества.

    Raises:
        MalformedInstanceError: Если форма или индексы некорректны
    """
    if not isinstance(data, dict):
        raise MalformedInstanceError("instance must be a JSON object")
    normalized, errors = _schema_errors(C6_CLOSE_SCHEMA, data)
    if errors:
        raise MalformedInstanceError(errors[0])
    for key, indices in normalized.items():
        if any(index >= n for index in indices):
            raise MalformedInstanceError(f"{key} has an index outside [0, {n})")
    return dict(normalized)


def check_range(
    field: str,
    value: int | Fraction | float,
    min_value: int | Fraction | float | None = None,
    max_value: int | Fraction | float | None = None,
) -> None:
    """Проверка попадания значения в замкнутый диапазон.

    Raises:
        ParameterOutOfRangeError: Если значение вне диапазона
    """
    if (min_value is not None and value < min_value) or (
        max_value is not None and value > max_value
    ):
        raise ParameterOutOfRangeError(
            field,
            str(value),
            "-inf" if min_value is None else str(min_value),
            "inf" if max_value is None else str(max_value),
        )


def check_positive_int(field: str, value: Any) -> int:
    """Проверка целого положительного параметра."""
    if isinstance(value, bool) or not isinstance(value, int):
        raise InvalidParameterError(field, f"expected an integer, got {type(value).__name__}")
    check_range(field, value, 1)
    return value


def to_fraction(field: str, value: Any) -> Fraction:
    """Преобразование числа или строки вида '1/10' в Fraction."""
    if isinstance(value, bool):
        raise InvalidParameterError(field, "expected a rational number")
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise InvalidParameterError(field, f"expected a rational number ({e})") from e
