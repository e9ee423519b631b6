"""
Grid containers shared by zernike, optics and calibration.

Pixel (col i, row) of an M×M grid has its center at
x = (2i + 1 − M) / M, y = (2·row + 1 − M) / M; a pixel is in the disc when x² + y² ≤ 1.
"""

from functools import lru_cache
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from .errors import InvalidShapeError

MIN_GRID_SIZE = 8


@lru_cache(maxsize=32)
def _coordinates(M: int) -> Tuple[np.ndarray, np.ndarray]:
    c = (2.0 * np.arange(M, dtype=np.float64) + 1.0 - M) / M
    x, y = np.meshgrid(c, c, indexing="xy")
    x.setflags(write=False)
    y.setflags(write=False)
    return x, y


def pixel_coordinates(M: int) -> Tuple[np.ndarray, np.ndarray]:
    """Return (x, y) pixel-center coordinates, each M×M, indexed [row][col]."""
    if M < MIN_GRID_SIZE:
        raise InvalidShapeError(f"Grid size M={M} is below the minimum {MIN_GRID_SIZE}")
    return _coordinates(M)


def disc_mask(M: int) -> np.ndarray:
    x, y = pixel_coordinates(M)
    return x * x + y * y <= 1.0


def circle_mask(M: int, center: Tuple[float, float], radius: float) -> np.ndarray:
    """Pixels whose centers fall inside the given circle (unit-disc coordinates)."""
    x, y = pixel_coordinates(M)
    cx, cy = center
    return (x - cx) ** 2 + (y - cy) ** 2 <= radius * radius


class SurfaceGrid(BaseModel):
    """M×M height map in nm on the unit disc (design, specimen or difference topography)."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    values: np.ndarray

    @field_validator("values")
    @classmethod
    def _check_values(cls, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=np.float64)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise InvalidShapeError(f"SurfaceGrid needs a square 2D array, got shape {v.shape}")
        if v.shape[0] < MIN_GRID_SIZE:
            raise InvalidShapeError(f"Grid size M={v.shape[0]} is below the minimum {MIN_GRID_SIZE}")
        if not np.all(np.isfinite(v)):
            raise ValueError("SurfaceGrid values must be finite")
        return v

    @property
    def M(self) -> int:
        return int(self.values.shape[0])

    @classmethod
    def zeros(cls, M: int) -> "SurfaceGrid":
        return cls(values=np.zeros((M, M), dtype=np.float64))

    def __add__(self, other: "SurfaceGrid") -> "SurfaceGrid":
        if other.M != self.M:
            raise InvalidShapeError(f"Grid size mismatch: {self.M} vs {other.M}")
        return SurfaceGrid(values=self.values + other.values)

    def __sub__(self, other: "SurfaceGrid") -> "SurfaceGrid":
        if other.M != self.M:
            raise InvalidShapeError(f"Grid size mismatch: {self.M} vs {other.M}")
        return SurfaceGrid(values=self.values - other.values)

    def scaled(self, factor: float) -> "SurfaceGrid":
        return SurfaceGrid(values=self.values * factor)

    def in_disc(self) -> np.ndarray:
        """1D array of the in-disc pixel values."""
        return self.values[disc_mask(self.M)]

    def rms_in_disc(self) -> float:
        v = self.in_disc()
        return float(np.sqrt(np.mean(v * v))) if v.size else 0.0


class OPLField(BaseModel):
    """K×M×M optical path length (difference) images in nm, channel-major, with per-channel valid masks."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    values: np.ndarray
    mask: np.ndarray

    @field_validator("values")
    @classmethod
    def _check_values(cls, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=np.float64)
        if v.ndim != 3 or v.shape[1] != v.shape[2]:
            raise InvalidShapeError(f"OPLField needs a K×M×M array, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("OPLField values must be finite")
        return v

    @field_validator("mask")
    @classmethod
    def _check_mask(cls, m: np.ndarray) -> np.ndarray:
        return np.asarray(m, dtype=bool)

    @model_validator(mode="after")
    def _check_shapes(self) -> "OPLField":
        if self.mask.shape != self.values.shape:
            raise InvalidShapeError(f"Mask shape {self.mask.shape} does not match values {self.values.shape}")
        return self

    @property
    def K(self) -> int:
        return int(self.values.shape[0])

    @property
    def M(self) -> int:
        return int(self.values.shape[1])

    def channel(self, k: int) -> np.ndarray:
        return self.values[k]
