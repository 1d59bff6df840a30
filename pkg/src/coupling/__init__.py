"""Photon-vortex coupling strength, strong-coupling criterion, and material comparisons."""
