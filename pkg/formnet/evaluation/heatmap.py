"""
16-bit grayscale heatmaps (binary PGM, magic P5, maxval 65535) with a JSON scale sidecar.
"""

import logging
from pathlib import Path
from typing import Optional, Tuple

import numpy as np
from PIL import Image

from formnet.errors import FormatError, InvalidInputError
from formnet.jsonio import read_model, write_model
from formnet.surfaces import SurfaceGrid

from .config import HEATMAP_MAXVAL, HEATMAP_SCALE_SUFFIX
from .models import HeatmapScale

logger = logging.getLogger(__name__)


def scale_path(path: Path) -> Path:
    path = Path(path)
    return path.with_name(path.name + HEATMAP_SCALE_SUFFIX)


def emit_heatmap(grid: SurfaceGrid, path: Path, label: Optional[str] = None) -> Tuple[Path, Path]:
    """Linear map grid-min → 0, grid-max → 65535; a constant grid maps to all zeros."""
    values = grid.values
    if not np.all(np.isfinite(values)):
        raise InvalidInputError("Heatmap grid must be finite")
    lo, hi = float(values.min()), float(values.max())
    if hi > lo:
        q = np.rint((values - lo) / (hi - lo) * HEATMAP_MAXVAL)
    else:
        q = np.zeros_like(values)
    image = Image.fromarray(np.clip(q, 0, HEATMAP_MAXVAL).astype(np.uint16))
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    image.save(path, format="PPM")
    sidecar = write_model(HeatmapScale(min_nm=lo, max_nm=hi, maxval=HEATMAP_MAXVAL, label=label), scale_path(path))
    logger.debug("Wrote heatmap %s (min %.3f nm, max %.3f nm)", path, lo, hi)
    return path, sidecar


def read_heatmap(path: Path) -> SurfaceGrid:
    """Reconstruct the grid (nm) from the image and its sidecar, within (max − min) / 65535."""
    scale = read_model(scale_path(path), HeatmapScale)
    try:
        with Image.open(path) as image:
            q = np.asarray(image, dtype=np.float64)
    except OSError as e:
        raise FormatError(f"Cannot read heatmap {path}: {e}") from e
    return SurfaceGrid(values=scale.min_nm + q / scale.maxval * (scale.max_nm - scale.min_nm))
