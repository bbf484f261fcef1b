"""Модульные тесты небольших вспомогательных функций."""
