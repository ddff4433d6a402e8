"""Logging and result output helpers."""
