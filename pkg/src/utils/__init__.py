"""Utility package for filesystem helpers shared by the pipeline stages."""

__all__ = [
    "fs",
]
