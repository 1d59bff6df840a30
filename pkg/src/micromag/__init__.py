"""Finite-difference micromagnetic engine: fields, LLG integration, relaxation and diagnostics."""
