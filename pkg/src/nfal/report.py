"""Matplotlib rendering of analysis products to image files.

These figures accompany the CSV artifacts: dB maps of ambiguity grids with
region overlays (aliasing-free boundary, resolution box, non-contributive
zone, array and source markers) and spectrum maps with predicted band-edge
lines. Rendering is deterministic: fixed styles, no timestamps in metadata.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .ambiguity import DB_FLOOR, ScalarFieldGrid
from .geometry import ArrayGeometry
from .masks import RegionMask
from .spectrum import SpectrumEstimate

_SAVE_KW = {"dpi": 130, "metadata": {"Software": None}}


def _imshow_extent(region):
    return (region.xmin, region.xmax, region.ymin, region.ymax)


def _overlay_mask(ax, mask: RegionMask, color: str, label: str, linestyle="-"):
    for i, line in enumerate(mask.boundary):
        ax.plot(
            line[:, 0],
            line[:, 1],
            color=color,
            lw=1.4,
            linestyle=linestyle,
            label=label if i == 0 else None,
        )


def af_figure(
    grid: ScalarFieldGrid,
    path: Path,
    array: ArrayGeometry | None = None,
    afr_mask: RegionMask | None = None,
    resolution_mask: RegionMask | None = None,
    ncz_mask: RegionMask | None = None,
    floor: float = DB_FLOOR,
    title: str | None = None,
) -> None:
    """dB magnitude map with optional region overlays."""
    fig, ax = plt.subplots(figsize=(6.4, 5.2))
    im = ax.imshow(
        grid.db(floor),
        origin="lower",
        extent=_imshow_extent(grid.region),
        aspect="auto",
        cmap="viridis",
        vmin=floor,
        vmax=0.0,
    )
    fig.colorbar(im, ax=ax, label="|AF| (dB, peak-normalized)")
    if afr_mask is not None:
        _overlay_mask(ax, afr_mask, "yellow", "aliasing-free boundary")
    if resolution_mask is not None:
        _overlay_mask(ax, resolution_mask, "magenta", "resolution cell")
    if ncz_mask is not None:
        _overlay_mask(ax, ncz_mask, "0.8", "non-contributive zone", linestyle="--")
    if array is not None:
        inside = grid.region.contains(array.elements)
        pts = array.elements[inside]
        if len(pts):
            ax.plot(pts[:, 0], pts[:, 1], ".", color="black", ms=2, label="antennas")
    if grid.source is not None:
        ax.plot(*grid.source, "r*", ms=10, label="source")
    ax.set_xlabel("x (wavelengths)")
    ax.set_ylabel("y (wavelengths)")
    if title:
        ax.set_title(title)
    if ax.get_legend_handles_labels()[0]:
        ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def mask_figure(
    mask: RegionMask,
    path: Path,
    array: ArrayGeometry | None = None,
    source=None,
    title: str | None = None,
    value_label: str = "inside",
) -> None:
    """Boolean mask image with its boundary polylines."""
    fig, ax = plt.subplots(figsize=(6.0, 5.0))
    ax.imshow(
        mask.bits.astype(float),
        origin="lower",
        extent=_imshow_extent(mask.region),
        aspect="auto",
        cmap="cividis",
        vmin=0.0,
        vmax=1.0,
    )
    _overlay_mask(ax, mask, "yellow", value_label + " boundary")
    if array is not None:
        inside = mask.region.contains(array.elements)
        pts = array.elements[inside]
        if len(pts):
            ax.plot(pts[:, 0], pts[:, 1], ".", color="white", ms=2)
    if source is not None:
        ax.plot(*np.asarray(source, float), "r*", ms=10)
    ax.set_xlabel("x (wavelengths)")
    ax.set_ylabel("y (wavelengths)")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def spectrum_figure(
    est: SpectrumEstimate,
    path: Path,
    band_lines: dict[str, tuple[float, float]] | None = None,
    floor: float = -40.0,
    title: str | None = None,
) -> None:
    """Spectrum dB map; dashed lines mark predicted band edges per axis."""
    mag = est.magnitudes
    with np.errstate(divide="ignore"):
        db = 20.0 * np.log10(np.where(mag > 0, mag / mag.max(), np.nan))
    db = np.nan_to_num(np.maximum(db, floor), nan=floor)
    fig, ax = plt.subplots(figsize=(6.0, 5.2))
    im = ax.imshow(
        db,
        origin="lower",
        extent=_imshow_extent(est.wavevector_region),
        aspect="auto",
        cmap="magma",
        vmin=floor,
        vmax=0.0,
    )
    fig.colorbar(im, ax=ax, label="|spectrum| (dB)")
    if band_lines:
        if est.axes[0] in band_lines:
            for v in band_lines[est.axes[0]]:
                ax.axvline(v, color="cyan", lw=1.0, linestyle="--")
        if est.axes[1] in band_lines:
            for v in band_lines[est.axes[1]]:
                ax.axhline(v, color="lime", lw=1.0, linestyle="--")
    ax.set_xlabel(est.axes[0] + " (rad per wavelength)")
    ax.set_ylabel(est.axes[1])
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def sweep_figure(path: Path, values, series: dict[str, list[float]], xlabel: str, title=None) -> None:
    """Line plots of sweep metrics against the swept parameter."""
    fig, axes = plt.subplots(1, len(series), figsize=(4.2 * len(series), 3.4))
    if len(series) == 1:
        axes = [axes]
    for ax, (name, ys) in zip(axes, series.items()):
        ax.plot(values, ys, "o-")
        ax.set_xlabel(xlabel)
        ax.set_ylabel(name)
        ax.grid(True, alpha=0.3)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)
