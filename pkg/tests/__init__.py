"""Тесты tri_lab."""
