"""Artifact export: canonical CSV, 16-bit grayscale images, manifests.

CSV bytes are canonical (fixed float format, 9 significant digits, LF line
endings) so content hashes are reproducible across runs and platforms.
Header comment lines carry region and shape metadata.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np
from PIL import Image

from .ambiguity import DB_FLOOR, ScalarFieldGrid
from .masks import RegionMask
from .spectrum import SpectrumEstimate

FLOAT_FMT = "{:.9g}"


def _fmt(value: float) -> str:
    if np.isnan(value):
        return "nan"
    out = FLOAT_FMT.format(float(value))
    return "0" if out in ("-0", "-0.0") else out


def _rows_to_csv(header_lines: list[str], columns: list[str], rows) -> bytes:
    lines = [f"# {h}" for h in header_lines]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return ("\n".join(lines) + "\n").encode()


def _region_header(region, shape) -> list[str]:
    return [
        f"region xmin={_fmt(region.xmin)} xmax={_fmt(region.xmax)} "
        f"ymin={_fmt(region.ymin)} ymax={_fmt(region.ymax)}",
        f"shape nx={shape[0]} ny={shape[1]} (values at cell centers)",
    ]


def grid_to_csv(grid: ScalarFieldGrid, path: Path, floor: float = DB_FLOOR) -> None:
    """Write one row per cell: x, y, re, im, magnitude, peak-normalized dB."""
    xs, ys = grid.region.cell_centers(grid.shape)
    mag = grid.magnitude()
    db = grid.db(floor)
    rows = []
    for iy, y in enumerate(ys):
        for ix, x in enumerate(xs):
            v = grid.values[iy, ix]
            rows.append((x, y, v.real, v.imag, mag[iy, ix], db[iy, ix]))
    header = _region_header(grid.region, grid.shape) + [
        "columns: x,y in wavelengths; db normalized to grid peak, "
        f"floor {_fmt(floor)} dB",
    ]
    Path(path).write_bytes(_rows_to_csv(header, ["x", "y", "re", "im", "abs", "db"], rows))


def grid_to_png16(grid: ScalarFieldGrid, path: Path, floor: float = DB_FLOOR) -> None:
    """16-bit grayscale of the dB map; the floor maps to 0, the peak to 65535.

    Rendered with the y axis increasing upward (row 0 is the top of the
    image, the region's ymax edge).
    """
    db = grid.db(floor)
    scaled = np.round((db - floor) / (-floor) * 65535.0).astype(np.uint16)
    Image.fromarray(scaled[::-1, :]).save(path)


def png16_colormap_note(path: Path, floor: float = DB_FLOOR) -> None:
    rows = [(0.0, floor), (65535.0, 0.0)]
    Path(path).write_bytes(
        _rows_to_csv(
            ["linear map from 16-bit gray level to peak-normalized dB"],
            ["gray", "db"],
            rows,
        )
    )


def mask_to_csv(mask: RegionMask, path: Path) -> None:
    """Write one row per cell: indices, center coordinates, mask bit."""
    xs, ys = mask.cell_centers()
    rows = []
    for iy, y in enumerate(ys):
        for ix, x in enumerate(xs):
            rows.append((ix, iy, x, y, int(mask.bits[iy, ix])))
    header = _region_header(mask.region, mask.shape)
    Path(path).write_bytes(
        _rows_to_csv(header, ["ix", "iy", "x", "y", "bit"], rows)
    )


def polylines_to_csv(polylines, path: Path, label: str = "boundary") -> None:
    """Polyline vertices as (curve index, x, y) rows."""
    rows = []
    for ci, line in enumerate(polylines):
        for x, y in line:
            rows.append((ci, x, y))
    Path(path).write_bytes(
        _rows_to_csv([f"{label} polylines in wavelengths"], ["curve", "x", "y"], rows)
    )


def spectrum_to_csv(est: SpectrumEstimate, path: Path) -> None:
    """Spectrum magnitudes per wavevector cell, plus the support box header."""
    k1, k2 = est.k1_centers(), est.k2_centers()
    rows = []
    for i2, v2 in enumerate(k2):
        for i1, v1 in enumerate(k1):
            rows.append((v1, v2, est.magnitudes[i2, i1]))
    box = "; ".join(
        f"{ax}: [{_fmt(lo)}, {_fmt(hi)}]" for ax, (lo, hi) in est.support_box.items()
    )
    header = _region_header(est.wavevector_region, est.shape) + [
        f"axes {est.axes[0]},{est.axes[1]} in rad per wavelength"
        + (" (equalized amplitudes)" if est.equalized else ""),
        f"support tail fraction {_fmt(est.support_threshold)}; support box {box}",
    ]
    Path(path).write_bytes(
        _rows_to_csv(header, [est.axes[0], est.axes[1], "abs"], rows)
    )


def spectrum_to_png16(est: SpectrumEstimate, path: Path, floor: float = -40.0) -> None:
    mag = est.magnitudes
    peak = mag.max()
    with np.errstate(divide="ignore"):
        db = 20.0 * np.log10(np.where(mag > 0, mag / peak, np.nan))
    db = np.nan_to_num(np.maximum(db, floor), nan=floor)
    scaled = np.round((db - floor) / (-floor) * 65535.0).astype(np.uint16)
    Image.fromarray(scaled[::-1, :]).save(path)


def sha256_of(path: Path) -> str:
    h = hashlib.sha256()
    h.update(Path(path).read_bytes())
    return h.hexdigest()


def write_manifest(path: Path, scenario_name: str, artifacts: list[Path]) -> dict:
    """Manifest of artifact hashes, keyed by path relative to the manifest."""
    base = Path(path).parent
    entries = []
    for art in sorted(artifacts, key=lambda p: str(p)):
        art = Path(art)
        entries.append(
            {
                "path": art.relative_to(base).as_posix(),
                "sha256": sha256_of(art),
                "bytes": art.stat().st_size,
            }
        )
    manifest = {"scenario": scenario_name, "artifacts": entries}
    Path(path).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return manifest
