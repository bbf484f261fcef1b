"""Утилиты для работы с переводами сообщений tri_lab."""
from __future__ import annotations

import json
import logging
from functools import lru_cache
from pathlib import Path
from typing import Any

_LOGGER = logging.getLogger(__name__)

DEFAULT_LANGUAGE = "en"
_TRANSLATIONS_DIR = Path(__file__).parent / "translations"


@lru_cache(maxsize=None)
def load_translations(language: str = DEFAULT_LANGUAGE) -> dict[str, Any]:
    """Загрузка каталога переводов с кэшированием.

    Args:
        language: Язык каталога (например, 'en', 'ru')

    Returns:
        Содержимое JSON каталога; пустой словарь, если файл не удалось прочитать
    """
    translations_file = _TRANSLATIONS_DIR / f"{language}.json"

    # Если файл не найден, используем английский как fallback
    if not translations_file.exists():
        translations_file = _TRANSLATIONS_DIR / f"{DEFAULT_LANGUAGE}.json"

    try:
        with open(translations_file, "r", encoding="utf-8") as f:
            data: dict[str, Any] = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        _LOGGER.error("Не удалось загрузить переводы %s: %s", translations_file, e)
        return {}

    _LOGGER.debug("Загружен каталог переводов %s", translations_file.name)
    return data


def render_exception_message(
    translation_key: str,
    placeholders: dict[str, str],
    language: str = DEFAULT_LANGUAGE,
) -> str:
    """Формирование текста ошибки по ключу.

    Args:
        translation_key: Ключ ошибки (exceptions.<key>.message)
        placeholders: Значения плейсхолдеров
        language: Язык сообщения

    Returns:
        Текст сообщения; сам ключ, если шаблон не найден
    """
    template = (
        load_translations(language)
        .get("exceptions", {})
        .get(translation_key, {})
        .get("message")
    )
    if template is None:
        return translation_key
    try:
        return str(template).format(**placeholders)
    except (KeyError, IndexError):
        _LOGGER.warning("Не хватает плейсхолдеров для %s: %s", translation_key, placeholders)
        return str(template)


def report_label(key: str, language: str = DEFAULT_LANGUAGE) -> str:
    """Короткая подпись для таблиц отчетов (pass/FAIL/absent)."""
    return str(load_translations(language).get("report", {}).get(key, key))
