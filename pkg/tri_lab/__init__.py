"""Инструменты для сбалансированных трёхдольных графов с условием на минимальную степень."""
from __future__ import annotations

from .const import DOMAIN

__version__ = "1.0.0"

__all__ = ["DOMAIN", "__version__"]
