"""Excitation protocols driving the engine, and extraction of the gyrotropic mode from the response."""
