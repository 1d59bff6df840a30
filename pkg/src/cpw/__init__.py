"""Supercurrent distribution in a thin superconducting strip and the field it produces at the disc."""
