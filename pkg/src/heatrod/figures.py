"""Figure rendering for simulation and estimation outputs.

Everything renders through the Agg backend straight to files; no display
is required.  Figures accompany the delimited outputs, they are not a
substitute for them.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .fdsolver import SENSITIVITY, Field

__all__ = [
    "save_field_figure",
    "save_fit_figure",
    "save_probe_figure",
]

_DPI = 150


def _axis_label(kind: str) -> str:
    if kind == SENSITIVITY:
        return "sensitivity dU/d(alpha2)  [C per m^2/s]"
    return "temperature  [C]"


def save_probe_figure(path: Path | str, times, series, kind: str,
                      title: str) -> None:
    """Line plot of one or more probe histories.

    ``series`` is a sequence of (label, values) pairs sharing ``times``.
    """
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    for label, values in series:
        ax.plot(times, values, lw=1.4, label=label)
    ax.set_xlabel("time  [s]")
    ax.set_ylabel(_axis_label(kind))
    ax.set_title(title)
    ax.grid(True, alpha=0.35)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def save_field_figure(path: Path | str, field: Field, title: str) -> None:
    """Space-time heat map of a lattice field (time horizontal)."""
    g = field.grid
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    img = ax.imshow(
        field.values,
        origin="lower",
        aspect="auto",
        extent=(0.0, g.t_final, 0.0, g.length),
        cmap="inferno",
    )
    fig.colorbar(img, ax=ax, label=_axis_label(field.kind))
    ax.set_xlabel("time  [s]")
    ax.set_ylabel("position  [m]")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def save_fit_figure(path: Path | str, m_times, m_values, curve_times,
                    curve_values, alpha2_hat: float) -> None:
    """Measurements against the fitted forward curve."""
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    ax.plot(curve_times, np.asarray(curve_values), lw=1.4,
            label=f"fit, alpha2 = {alpha2_hat:.4g} m^2/s")
    ax.plot(m_times, m_values, "o", ms=5, color="#c43d3d", label="measurements")
    ax.set_xlabel("time  [s]")
    ax.set_ylabel("temperature  [C]")
    ax.set_title("probe record and fitted model")
    ax.grid(True, alpha=0.35)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
