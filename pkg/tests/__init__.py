"""Exciton network tests."""
