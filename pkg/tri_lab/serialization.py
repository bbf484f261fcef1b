"""Чтение и запись графов, сертификатов и отчетов.

Канонический JSON: ключи отсортированы, ребра упорядочены, без пробелов,
с завершающим переводом строки. Одинаковые объекты дают одинаковые байты.
"""
from __future__ import annotations

import json
import logging
from collections.abc import Callable, Mapping
from pathlib import Path
from typing import Any

from .const import GRAPH_FORMAT_ADJ, GRAPH_FORMAT_JSON, PART_PAIRS
from .exceptions import MalformedGraphError, MalformedWitnessError, TriLabError
from .graph import TripartiteGraph
from .validators import validate_graph_data, validate_witness_data

_LOGGER = logging.getLogger(__name__)


def canonical_dumps(data: Any) -> str:
    """Канонический JSON."""
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


def graph_to_dict(graph: TripartiteGraph) -> dict[str, Any]:
    """Граф в словарь формата tri-v1."""
    data: dict[str, Any] = {
        "format": GRAPH_FORMAT_JSON,
        "n": graph.n,
        "edges": [list(edge) for edge in graph.edges()],
    }
    if graph.meta:
        data["meta"] = _plain(graph.meta)
    return data


def _plain(value: Any) -> Any:
    if isinstance(value, Mapping):
        return {str(key): _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    return value


def graph_from_dict(data: Any) -> TripartiteGraph:
    """Граф из словаря формата tri-v1 (с проверкой).

    Raises:
        MalformedGraphError: Если данные не проходят валидацию
    """
    validate_graph_data(data, raise_on_error=True)
    return TripartiteGraph.from_edges(
        data["n"],
        (tuple(edge) for edge in data["edges"]),
        data.get("meta"),
    )


def dumps_graph(graph: TripartiteGraph) -> str:
    return canonical_dumps(graph_to_dict(graph))


def dumps_adjacency(graph: TripartiteGraph) -> str:
    """Текстовый формат tri-adj-v1: заголовок и три блока n×n (пары 12, 13, 23)."""
    n = graph.n
    lines = [f"{GRAPH_FORMAT_ADJ} {n}"]
    for pair in PART_PAIRS:
        for row in graph.rows(*pair):
            lines.append("".join("1" if row >> v & 1 else "0" for v in range(n)))
    return "\n".join(lines) + "\n"


def loads_adjacency(text: str) -> TripartiteGraph:
    """Разбор формата tri-adj-v1.

    Raises:
        MalformedGraphError: При неверном заголовке, размере блока или символе
    """
    lines = [line.strip() for line in text.strip().splitlines()]
    if not lines:
        raise MalformedGraphError("empty adjacency file")
    header = lines[0].split()
    if len(header) != 2 or header[0] != GRAPH_FORMAT_ADJ or not header[1].isdigit():
        raise MalformedGraphError(f"bad header {lines[0]!r}")
    n = int(header[1])
    if n < 1:
        raise MalformedGraphError("part size must be positive")
    body = lines[1:]
    if len(body) != 3 * n:
        raise MalformedGraphError(f"expected {3 * n} rows, got {len(body)}")
    relations: dict[tuple[int, int], list[int]] = {}
    for block, pair in enumerate(PART_PAIRS):
        rows = []
        for offset, line in enumerate(body[block * n:(block + 1) * n]):
            if len(line) != n or set(line) - {"0", "1"}:
                raise MalformedGraphError(
                    f"row {offset} of block {pair[0]}{pair[1]} must be {n} characters of 0/1"
                )
            rows.append(sum(1 << v for v, char in enumerate(line) if char == "1"))
        relations[pair] = rows
    return TripartiteGraph(n, relations)


def loads_graph(text: str) -> TripartiteGraph:
    """Разбор графа с автоопределением формата."""
    stripped = text.lstrip()
    if stripped.startswith(GRAPH_FORMAT_ADJ):
        return loads_adjacency(stripped)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedGraphError(f"invalid JSON ({e.msg})") from e
    return graph_from_dict(data)


def read_graph(path: str | Path) -> TripartiteGraph:
    """Чтение графа из файла."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise MalformedGraphError(f"cannot read {path}: {e.strerror}") from e
    except UnicodeDecodeError as e:
        raise MalformedGraphError(f"invalid UTF-8 in {path}") from e
    graph = loads_graph(text)
    _LOGGER.debug("Прочитан граф %s: n=%d, e=%d", path, graph.n, graph.edge_count())
    return graph


def write_graph(graph: TripartiteGraph, path: str | Path, fmt: str = GRAPH_FORMAT_JSON) -> None:
    """Запись графа в файл в выбранном формате."""
    text = dumps_adjacency(graph) if fmt == GRAPH_FORMAT_ADJ else dumps_graph(graph)
    Path(path).write_text(text, encoding="utf-8")
    _LOGGER.debug("Граф записан в %s (%s)", path, fmt)


def read_json(
    path: str | Path, error: Callable[[str], TriLabError] = MalformedWitnessError
) -> Any:
    """Чтение произвольного JSON файла с ключевой ошибкой."""
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise error(f"cannot read {path}: {e.strerror}") from e
    except UnicodeDecodeError as e:
        raise error(f"invalid UTF-8 in {path}") from e
    except json.JSONDecodeError as e:
        raise error(f"invalid JSON ({e.msg})") from e


def read_witness(path: str | Path, n: int | None = None) -> dict[str, Any]:
    """Чтение и проверка формы сертификата."""
    data = read_json(path)
    validate_witness_data(data, n, raise_on_error=True)
    return dict(data)


def write_json(data: Any, path: str | Path) -> None:
    Path(path).write_text(canonical_dumps(data), encoding="utf-8")
