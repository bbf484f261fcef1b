"""Константы для tri_lab."""
from __future__ import annotations

from typing import Final

DOMAIN: Final = "tri_lab"

# Форматы файлов
GRAPH_FORMAT_JSON: Final = "tri-v1"
GRAPH_FORMAT_ADJ: Final = "tri-adj-v1"
WITNESS_TYPE_K3S: Final = "k3s"
WITNESS_TYPE_KSS: Final = "kss"

# Доли графа нумеруются 1..3, индекс следующей доли берется циклически
PARTS: Final[tuple[int, int, int]] = (1, 2, 3)
PART_PAIRS: Final[tuple[tuple[int, int], ...]] = ((1, 2), (1, 3), (2, 3))

# Переменная окружения с числом воркеров по умолчанию
ENV_WORKERS: Final = "TRI_LAB_WORKERS"
DEFAULT_WORKERS: Final = 1

# Проективная плоскость PG(2, q)
MAX_PLANE_ORDER: Final = 13

# Конструктивный поиск K_3(s): точный перебор пар z только до этого n
FINDER_EXACT_PAIR_LIMIT: Final = 2000
FINDER_SWAP_ROUNDS: Final = 3

# Отжиг
ANNEALING_CALIBRATION_MOVES: Final = 1000
ANNEALING_TARGET_ACCEPTANCE: Final = 0.5
ANNEALING_FINAL_RATIO: Final = 1e-3
SWAP_MOVE_PROBABILITY: Final = 0.5
FEASIBILITY_SAMPLE_RATE: Final = 0.01
RECOUNT_CHECKPOINTS: Final = 100
FULL_RECHECK_PERIOD: Final = 10_000

# Параметры поиска по умолчанию
DEFAULT_BUDGET: Final = 10_000
DEFAULT_RESTARTS: Final = 1

OBJECTIVE_MIN_TRIANGLES: Final = "minimize-triangles"
OBJECTIVE_K32_SURPLUS: Final = "maximize-surplus-k32-free"
OBJECTIVES: Final[tuple[str, ...]] = (OBJECTIVE_MIN_TRIANGLES, OBJECTIVE_K32_SURPLUS)

INITIALIZER_CONSTRUCTION: Final = "construction"
INITIALIZER_RANDOM: Final = "random"
INITIALIZER_FILE: Final = "file"
# Склейка двух конструкций с долей n/2
INITIALIZER_GLUE: Final = "glue"
INITIALIZERS: Final[tuple[str, ...]] = (
    INITIALIZER_CONSTRUCTION,
    INITIALIZER_GLUE,
    INITIALIZER_RANDOM,
    INITIALIZER_FILE,
)

# Коды выхода CLI
EXIT_OK: Final = 0
EXIT_REFUTED: Final = 1
EXIT_USAGE: Final = 2
