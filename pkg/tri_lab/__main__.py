"""Запуск: python -m tri_lab."""
from .cli import main

main()
