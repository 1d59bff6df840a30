"""Standalone matplotlib scripts that redraw a figure from the CSV written beside them."""

from string import Template

_HEADER = """#!/usr/bin/env python3
# Regenerates $title from $csv; needs only numpy and matplotlib.
from pathlib import Path

import matplotlib.pyplot as plt
import numpy as np

here = Path(__file__).resolve().parent
data = np.genfromtxt(here / "$csv", delimiter=",", names=True, dtype=None, encoding="utf-8")
"""

_TRANSMISSION = """
fields = np.unique(data["b_dc_T"])
freqs = np.unique(data["f_hz"])
values = data["transmission"].reshape(fields.size, freqs.size)

fig, ax = plt.subplots(figsize=(6, 4.5))
mesh = ax.pcolormesh(fields * 1e3, (freqs - freqs.mean()) * 1e-6, values.T, shading="auto", cmap="viridis")
fig.colorbar(mesh, ax=ax, label="|T|")
ax.set_xlabel("B_dc (mT)")
ax.set_ylabel("f - f_cpw (MHz)")
fig.tight_layout()
fig.savefig(here / "$image", dpi=200)
"""

_COUPLING_MAP = """
fig, ax = plt.subplots(figsize=(6, 4.5))
for radius in np.unique(data["r_m"]):
    rows = data[data["r_m"] == radius]
    order = np.argsort(rows["w_m"])
    ax.plot(rows["w_m"][order] * 1e6, rows["strong_ratio"][order], "o-", label=f"r = {radius * 1e9:.0f} nm")
ax.axhline(1.0, color="grey", linestyle="--")
ax.set_xscale("log")
ax.set_yscale("log")
ax.set_xlabel("w (um)")
ax.set_ylabel("4g / (2 pi delta f_G)")
ax.legend()
fig.tight_layout()
fig.savefig(here / "$image", dpi=200)
"""

_SPECTRUM = """
fig, ax = plt.subplots(figsize=(6, 4))
ax.semilogy(data["freq_Hz"] * 1e-9, data["power"])
ax.set_xlabel("f (GHz)")
ax.set_ylabel("power (arb.)")
fig.tight_layout()
fig.savefig(here / "$image", dpi=200)
"""

_RABI = """
fig, ax = plt.subplots(figsize=(6, 4))
ax.plot(data["t_s"] * 1e9, data["photon"], label="photon")
ax.plot(data["t_s"] * 1e9, data["vortex"], label="vortex")
ax.set_xlabel("t (ns)")
ax.set_ylabel("population")
ax.legend()
fig.tight_layout()
fig.savefig(here / "$image", dpi=200)
"""

_FIELD_SWEEP = """
fig, ax = plt.subplots(figsize=(6, 4))
for polarity in np.unique(data["polarity"]):
    rows = data[data["polarity"] == polarity]
    ax.plot(rows["b_dc_T"] * 1e3, rows["f_G_Hz"] * 1e-9, "o-", label=f"P = {polarity:+d}")
ax.set_xlabel("B_dc (mT)")
ax.set_ylabel("f_G (GHz)")
ax.legend()
fig.tight_layout()
fig.savefig(here / "$image", dpi=200)
"""


def _script(body: str, csv: str, title: str) -> str:
    image = csv.rsplit(".", 1)[0] + ".png"
    return Template(_HEADER + body).substitute(csv=csv, title=title, image=image)


def transmission_script(csv: str) -> str:
    """Heatmap of |T| over (B_dc, f)."""
    return _script(_TRANSMISSION, csv, "the transmission map")


def coupling_map_script(csv: str) -> str:
    """strong_ratio against constriction width, one curve per disc radius."""
    return _script(_COUPLING_MAP, csv, "the strong-coupling map")


def spectrum_script(csv: str) -> str:
    return _script(_SPECTRUM, csv, "the gyrotropic spectrum")


def rabi_script(csv: str) -> str:
    return _script(_RABI, csv, "the vacuum Rabi populations")


def field_sweep_script(csv: str) -> str:
    return _script(_FIELD_SWEEP, csv, "f_G against the bias field")
