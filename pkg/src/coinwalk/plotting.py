"""Render dispersion tables to image files.

The dispersion CLI emits CSV only; this module (and the bundled
``scripts/plot_dispersion.py``) turns such a table into the usual
wave-number / quasi-energy picture: shaded continuous bands and the edge
curve drawn over them, with open gaps at the jump wave numbers.
"""

from __future__ import annotations

import math

import numpy as np

from . import io as cwio
from .planar import DispersionTable


def _segments(ks, thetas):
    """Split the edge curve at absent points and wrap-around jumps."""
    segs = []
    cur_k, cur_t = [], []
    prev = None
    for k, t in zip(ks, thetas):
        if t is None or (prev is not None and abs(t - prev) > 1.5):
            if cur_k:
                segs.append((cur_k, cur_t))
            cur_k, cur_t = [], []
            prev = None
        if t is not None:
            cur_k.append(k)
            cur_t.append(t)
            prev = t
    if cur_k:
        segs.append((cur_k, cur_t))
    return segs


def plot_dispersion_rows(rows: list[dict], out_path, title: str | None = None) -> None:
    """Draw band regions and the edge curve from dispersion rows.

    ``rows`` use the dispersion CSV column names; see
    :func:`coinwalk.io.read_dispersion_rows`.
    """
    import matplotlib.pyplot as plt

    ks = [r["k"] for r in rows]
    fig, ax = plt.subplots(figsize=(7.0, 4.4))
    for lo_key, hi_key in (("band_lo1", "band_hi1"), ("band_lo2", "band_hi2")):
        ax.fill_between(ks, [r[lo_key] for r in rows], [r[hi_key] for r in rows],
                        color="#4878cf", alpha=0.55, linewidth=0)
    for seg_k, seg_t in _segments(ks, [r["theta_0"] for r in rows]):
        ax.plot(seg_k, seg_t, color="#d1022f", linewidth=2.0)
    ax.set_xlim(0, 2 * math.pi)
    ax.set_ylim(0, 2 * math.pi)
    ticks = np.linspace(0, 2 * math.pi, 5)
    labels = ["0", r"$\pi/2$", r"$\pi$", r"$3\pi/2$", r"$2\pi$"]
    ax.set_xticks(ticks, labels)
    ax.set_yticks(ticks, labels)
    ax.set_xlabel("wave number $k$")
    ax.set_ylabel(r"quasi-energy $\theta$")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def plot_dispersion(table: DispersionTable, out_path, title: str | None = None) -> None:
    plot_dispersion_rows(cwio.dispersion_records(table), out_path, title=title)


def plot_dispersion_csv(csv_path, out_path, title: str | None = None) -> None:
    plot_dispersion_rows(cwio.read_dispersion_rows(csv_path), out_path, title=title)
